#pragma once

#include <gmpxx.h>

#include <cstdint>

namespace corrtherm {

// Best rational approximation of x with denominator at most max_den.
mpq_class snap_rational(double x, std::int64_t max_den);

// The rational with denominator <= max_den lying within 1e-14 * |x| of x,
// otherwise the exact binary value of x.
mpq_class to_rational(double x, std::int64_t max_den);

// Natural log of a positive rational without overflowing doubles.
double log_of(const mpq_class& x);

}  // namespace corrtherm
