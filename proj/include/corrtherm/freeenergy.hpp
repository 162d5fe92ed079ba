#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corrtherm/spectrum.hpp"

namespace corrtherm {

// All values in units of kT.
struct WorkBudget {
    double formation = 0.0;
    double extraction = 0.0;
    double irreversible = 0.0;
    double delta_f = 0.0;
};

struct CorrelationReport {
    double mutual_information = 0.0;
    double per_copy = 0.0;
    double dissipated_work = 0.0;
    bool bound_satisfied = true;
};

// Order of the divergence; use kInf for the max-divergence.
// Inputs are log masses of the same level groups. Within each group both
// distributions are uniform, so group degeneracies cancel. Returns kInf when
// the state leaves the reference support and alpha >= 1.
double renyi_divergence_log(std::span<const double> log_probs, std::span<const double> log_ref,
                            double alpha);

double renyi_divergence(const DiagonalState& state, const LocalSystem& sys, double alpha);

// occupations: total probability of each spectrum level.
double renyi_divergence(std::span<const double> occupations, const GibbsWeights& reference,
                        double alpha);

double free_energy_difference(const DiagonalState& state, const LocalSystem& sys);

WorkBudget work_budget_single(const DiagonalState& state, const LocalSystem& sys);

// Entropy of a level distribution spread uniformly inside each level.
double level_entropy(std::span<const double> occupations, const SpectrumN& spec);

// Single-site marginal of a level distribution.
std::vector<double> level_marginal(std::span<const double> occupations, const SpectrumN& spec,
                                   const LocalSystem& sys);

CorrelationReport mutual_information(std::span<const double> occupations, const SpectrumN& spec,
                                     const LocalSystem& sys, const DiagonalState& local);

double average_work(std::span<const double> occupations, const SpectrumN& spec,
                    const LocalSystem& sys, const DiagonalState& local);

}  // namespace corrtherm
