"""Correlated work of formation for diagonal quantum states.

Energies are in units of kT (beta*E), works in kT, logs are natural.
"""

from ._corrtherm import (
    CapExceeded,
    ConstraintViolation,
    Error,
    InternalError,
    InvalidInput,
    EnsembleRecord,
    WorkBudget,
    QubitOptimum,
    SweepRecord,
    analytic_cwork,
    can_transform,
    correlation_scaling,
    cwork,
    cwork_ensemble,
    dyadic_grid,
    free_energy_difference,
    min_work,
    quasi_thermal_interval,
    renyi_divergence,
    rstar_ladder,
    rstar_spacing_stats,
    run_cli,
    sweep_n,
    sweep_p,
    ensemble_experiment,
    work_budget_single,
)

__all__ = [name for name in dir() if not name.startswith("_")]
