#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrtherm/lpsolver.hpp"

namespace corrtherm {

struct Member {
    LocalSystem system;
    DiagonalState state;
};

struct Ensemble {
    std::vector<Member> members;
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return members.size(); }
    void validate() const;
    // log of the product of member dimensions.
    double log_dimension() const;
};

struct ClassDecomposition {
    std::vector<Member> classes;
    std::vector<std::size_t> counts;
    std::vector<std::size_t> member_class;
    double match_tol = 1e-12;
};

inline constexpr double kClassMatchTol = 1e-12;
inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 20;

bool same_member(const Member& a, const Member& b, double tol = kClassMatchTol);

ClassDecomposition decompose(const Ensemble& ens, double match_tol = kClassMatchTol);

// Reads CORRTHERM_DIM_CAP, falling back to kDefaultDimCap.
std::size_t dim_cap_from_env();

// Columns are tuples of class energy levels; each class is uniform inside
// every level of its own spectrum. Rows: one per (class, local level).
struct JointConstraints {
    ConstraintSystem system;
    ClassDecomposition classes;
    std::vector<SpectrumN> class_spectra;
    std::vector<std::vector<std::size_t>> column_levels;
};

JointConstraints build_joint_constraints(const Ensemble& ens, std::size_t dim_cap = kDefaultDimCap);

struct EnsembleWork {
    LpSolution solution;
    WorkBudget works;
};

EnsembleWork cwork_ensemble(const Ensemble& ens, LpMode mode = LpMode::Float,
                            std::size_t dim_cap = kDefaultDimCap);

struct SigmaState {
    std::vector<std::int64_t> counts;
    double energy = 0.0;
    double log_multiplicity = 0.0;
    std::vector<double> marginal;
    double formation = 0.0;
    // n * dF of the marginal.
    double delta_f = 0.0;
};

std::vector<SigmaState> sigma_d_states(const LocalSystem& sys, const DiagonalState& local, std::size_t n);
std::vector<SigmaState> sigma_d_states(const Ensemble& identical, const DiagonalState& local);

struct Atom {
    LocalSystem system;
    DiagonalState state;
    double weight = 1.0;
};

// Qubits with levels {0, gap}: p uniform on [p_lo, p_hi], gap uniform on [gap_lo, gap_hi].
struct QubitBox {
    double p_lo = 0.0;
    double p_hi = 1.0;
    double gap_lo = 0.0;
    double gap_hi = 1.0;
};

enum class SpecKind { PointMass, FiniteDiscrete, ProductUniformBox };

struct DistributionSpec {
    SpecKind kind = SpecKind::PointMass;
    std::vector<Atom> atoms;
    QubitBox box;

    void validate() const;
    static DistributionSpec point_mass(LocalSystem sys, DiagonalState state);
    static DistributionSpec discrete(std::vector<Atom> atoms);
    static DistributionSpec uniform_box(QubitBox box);
};

Ensemble sample_ensemble(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

double mean_delta_f(const DistributionSpec& spec);

enum class EnsembleMode { Exact, ClassGrouped };

struct EnsembleRecord {
    std::size_t n = 0;
    EnsembleMode mode = EnsembleMode::ClassGrouped;
    double work_per_copy = 0.0;
    double mean_delta_f = 0.0;
    double gap = 0.0;
    // Class-grouped values bound the joint optimum from above.
    bool upper_bound = false;
    std::size_t class_count = 0;
};

// Sum of per-class correlated works, in kT.
double class_grouped_work(const ClassDecomposition& classes);

EnsembleRecord ensemble_experiment(const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                                   EnsembleMode mode, std::size_t dim_cap = kDefaultDimCap);

}  // namespace corrtherm
