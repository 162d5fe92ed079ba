#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace corrtherm {

struct SweepRecord {
    std::size_t n = 0;
    double p = 0.0;
    double work_per_copy = 0.0;
    double extraction_per_copy = 0.0;
    double delta_f = 0.0;
    double gap = 0.0;
    double mutual_info = 0.0;
    double single_copy_formation = 0.0;
    // work_per_copy / single_copy_formation, 1/n where the single-copy work vanishes.
    double ratio = 0.0;
};

inline constexpr std::size_t kMaxAnalyticCopies = 100000;

// Qubit records; threads > 1 evaluates points concurrently, order is kept.
std::vector<SweepRecord> sweep_p(std::size_t n, double beta_e0, std::span<const double> p_grid,
                                 unsigned threads = 1);

std::vector<SweepRecord> sweep_n(double p, double beta_e0, std::span<const std::size_t> n_list,
                                 unsigned threads = 1);

struct CorrelationPoint {
    std::size_t n = 0;
    double mutual_info = 0.0;
};

std::vector<CorrelationPoint> correlation_scaling(double p, double beta_e0,
                                                  std::span<const std::size_t> n_list);

// sup over records with n >= 2 of gap * n / ln n.
double rate_statistic(std::span<const SweepRecord> records);

std::vector<std::size_t> dyadic_grid(unsigned lo_exp, unsigned hi_exp);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

}  // namespace corrtherm
