#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace corrtherm {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs);

// log C(n, k) via log-gamma; -inf outside 0 <= k <= n.
double log_choose(std::int64_t n, std::int64_t k);

// log of n! / prod(k_i!).
double log_multinomial(std::span<const std::int64_t> counts);

// x log x with the 0 log 0 = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double shannon_entropy(std::span<const double> probs);

}  // namespace corrtherm
