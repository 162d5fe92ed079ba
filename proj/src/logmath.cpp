#include "corrtherm/logmath.hpp"

#include <algorithm>

namespace corrtherm {

double log_sum_exp(std::span<const double> xs) {
    double hi = kNegInf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    if (hi == kInf) return kInf;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

double log_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n || n < 0) return kNegInf;
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

double log_multinomial(std::span<const std::int64_t> counts) {
    std::int64_t total = 0;
    double acc = 0.0;
    for (auto c : counts) {
        if (c < 0) return kNegInf;
        total += c;
        acc -= std::lgamma(double(c) + 1.0);
    }
    return acc + std::lgamma(double(total) + 1.0);
}

double shannon_entropy(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs) s -= xlogx(p);
    return s;
}

}  // namespace corrtherm
