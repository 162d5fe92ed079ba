#include "corrtherm/rational.hpp"

#include <cmath>
#include <limits>

#include "corrtherm/errors.hpp"

namespace corrtherm {

mpq_class snap_rational(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw InvalidInput("cannot snap a non-finite value to a rational");
    if (max_den < 1) throw InvalidInput("denominator bound must be positive");
    const bool neg = x < 0.0;
    const long double target = neg ? -(long double)x : (long double)x;
    const long double whole = std::floor(target);
    long double frac = target - whole;

    // Continued fraction of the fractional part, convergents p/q.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    long double r = frac;
    std::int64_t best_p = 0, best_q = 1;
    for (int iter = 0; iter < 64; ++iter) {
        long double a_ld = std::floor(r);
        if (a_ld > 1e18L) break;
        auto a = static_cast<std::int64_t>(a_ld);
        std::int64_t p2 = a * p1 + p0;
        std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) {
            std::int64_t k = (max_den - q0) / q1;
            std::int64_t sp = p0 + k * p1, sq = q0 + k * q1;
            long double e_semi = std::abs(frac - (long double)sp / (long double)sq);
            long double e_conv = std::abs(frac - (long double)p1 / (long double)q1);
            if (k > 0 && e_semi < e_conv) {
                best_p = sp;
                best_q = sq;
            } else {
                best_p = p1;
                best_q = q1;
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        best_p = p1;
        best_q = q1;
        long double rem = r - a_ld;
        if (rem <= std::numeric_limits<long double>::epsilon() * 4) break;
        r = 1.0L / rem;
    }
    mpq_class out(mpz_class(static_cast<signed long>(best_p)), mpz_class(static_cast<signed long>(best_q)));
    mpz_class w;
    mpz_set_d(w.get_mpz_t(), static_cast<double>(whole));
    out += w;
    out.canonicalize();
    if (neg) out = -out;
    return out;
}

mpq_class to_rational(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw InvalidInput("cannot convert a non-finite value to a rational");
    if (x == 0.0) return mpq_class(0);
    mpq_class exact(x);
    mpq_class snapped = snap_rational(x, max_den);
    if (abs(snapped - exact) <= mpq_class(1e-14 * std::abs(x))) return snapped;
    return exact;
}

double log_of(const mpq_class& x) {
    if (sgn(x) <= 0) throw InvalidInput("log of a nonpositive rational");
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
    return std::log(mn) - std::log(md) + double(en - ed) * std::log(2.0);
}

}  // namespace corrtherm
