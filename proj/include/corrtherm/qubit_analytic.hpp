#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "corrtherm/freeenergy.hpp"

namespace corrtherm {

enum class Side { Below, Above, Thermal };

// Optimal N-copy qubit state: levels m in [u_lo, u_hi] carry q = gamma, level
// m_star carries q = s * gamma, everything else is empty.
struct QubitOptimum {
    Side side = Side::Thermal;
    std::int64_t u_lo = 0;
    std::int64_t u_hi = -1;
    std::optional<std::int64_t> m_star;
    double s = 1.0;
    double q_value = 1.0;
    double log_q_value = 0.0;
    // Restricted partition function Z_S^N / q_value, as a log.
    double log_gamma = 0.0;
    WorkBudget works;
    std::size_t segment = 0;
    double mix = 1.0;

    bool u_empty() const { return u_lo > u_hi; }
};

// Rung r <= N keeps levels [0, r]; rung r >= N keeps [r - N, N].
struct RStarLadder {
    std::vector<double> p_values;
    std::vector<double> log_partial_sums;
    std::size_t n = 0;
    double beta_e0 = 0.0;

    std::size_t size() const { return p_values.size(); }
    std::pair<std::int64_t, std::int64_t> support(std::size_t r) const;
    double p_thermal() const;
    double log_z_single() const;
    // log of the normalized Gibbs mass kept by rung r.
    double log_mass(std::size_t r) const { return log_partial_sums[r] - double(n) * log_z_single(); }
};

RStarLadder rstar_ladder(std::size_t n, double beta_e0);

QubitOptimum analytic_cwork(double p, std::size_t n, double beta_e0);
QubitOptimum analytic_cwork(double p, const RStarLadder& ladder);

// Total probability of each level m = 0..N in the optimal joint state.
std::vector<double> qubit_occupations(const QubitOptimum& opt, const RStarLadder& ladder);

// N S(rho) - S(joint), from D_1(joint || Gibbs) - N dF(rho) in log form.
double qubit_mutual_information(const QubitOptimum& opt, const RStarLadder& ladder, double p);

std::pair<double, double> quasi_thermal_interval(std::size_t n, double beta_e0);

// (p_beta - G_N) / (1 - G_N) and p_beta / (1 - G_0) with G_m the N-copy level weights.
std::pair<double, double> quasi_thermal_closed_form(std::size_t n, double beta_e0);

struct SpacingStats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    std::vector<double> values;
};

// n * (p*_{r+1} - p*_r) over consecutive rungs whose shared support boundary
// sits at least tail_cut * sqrt(n) levels into the tail it borders.
SpacingStats rstar_spacing_stats(std::size_t n, double beta_e0, double tail_cut);

}  // namespace corrtherm
