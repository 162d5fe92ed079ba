#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "corrtherm/freeenergy.hpp"
#include "corrtherm/spectrum.hpp"

namespace corrtherm {

enum class LpMode { Float, ExactRational };
enum class LpStatus { Optimal, Infeasible };

// Constraints  sum_j A[d, j] q_j = p_d  with  A[d, j] = coeff[d, j] * exp(log_column_weight[j]).
// coeff holds the conditional fractions in [0, 1]; the column weight is the
// Gibbs mass of column j.
struct ConstraintSystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> coeff;
    std::vector<double> log_column_weight;
    std::vector<double> rhs;
    std::vector<double> column_energies;
    // Rows sharing a group id form one probability vector; empty means one group.
    std::vector<std::size_t> row_group;

    double entry(std::size_t d, std::size_t j) const;
    void validate() const;
};

// Exact optimum written as rationals ("num/den").
struct ExactCertificate {
    std::string value;
    std::string support_mass;
    std::vector<std::string> q;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> q;
    std::vector<double> log_q;
    std::vector<double> occupations;
    double value = 0.0;
    double log_value = 0.0;
    double log_support_mass = 0.0;
    std::size_t intermediate_count = 0;
    std::vector<std::size_t> basis;
    double residual = 0.0;
    std::optional<ExactCertificate> exact;

    bool optimal() const { return status == LpStatus::Optimal; }
};

ConstraintSystem build_constraints(const DiagonalState& local, const LocalSystem& sys, std::size_t n,
                                   std::size_t cap = kDefaultSpectrumCap);

LpSolution min_infnorm(const ConstraintSystem& cs, LpMode mode = LpMode::Float);

struct CworkResult {
    LpSolution solution;
    WorkBudget works;
    std::vector<double> occupations;
    SpectrumN spectrum;
};

// Raises InvalidInput when the LP is infeasible.
WorkBudget budget_from_solution(const LpSolution& sol, double delta_f);

CworkResult cwork_lp(const DiagonalState& local, const LocalSystem& sys, std::size_t n,
                     LpMode mode = LpMode::Float, std::size_t cap = kDefaultSpectrumCap);

}  // namespace corrtherm
