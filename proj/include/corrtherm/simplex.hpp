#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "corrtherm/errors.hpp"

namespace corrtherm::detail {

struct SimplexTolerances {
    double pivot = 1e-11;
    double cost = 1e-11;
    double tie = 1e-12;
};

template <class S>
struct HomogeneousResult {
    std::vector<S> v;
    S t{};
    std::vector<std::size_t> basic_columns;
    std::size_t iterations = 0;
};

template <class S>
inline constexpr bool kFloating = std::is_floating_point_v<S>;

template <class S>
int sign_of(const S& x, double tol) {
    if constexpr (kFloating<S>) {
        return x > tol ? 1 : (x < -tol ? -1 : 0);
    } else {
        return sgn(x);
    }
}

template <class S>
S abs_of(const S& x) {
    if constexpr (kFloating<S>) {
        return std::abs(x);
    } else {
        return S(abs(x));
    }
}

// Solves  max t  s.t.  sum_j C[i][j] v_j - rhs_i t = 0,  0 <= v_j <= upper_j,  t >= 0
// by a bounded-variable primal simplex started from v = 0, t = 0 with one
// artificial variable per row fixed to [0, 0]. Entering and leaving choices
// follow Bland's smallest-index rule; artificials rank before all structural
// columns so redundant rows keep theirs in the basis.
template <class S>
HomogeneousResult<S> solve_homogeneous(const std::vector<S>& coeff, const std::vector<S>& rhs,
                                       const std::vector<S>& upper, std::size_t rows,
                                       std::size_t cols, const SimplexTolerances& tol = {}) {
    const std::size_t nv = cols + 1;
    const std::size_t t_idx = cols;
    const std::size_t none = static_cast<std::size_t>(-1);

    std::vector<std::vector<S>> tab(rows, std::vector<S>(nv));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) tab[i][j] = coeff[i * cols + j];
        tab[i][t_idx] = -rhs[i];
    }
    std::vector<S> cost(nv, S(0));
    cost[t_idx] = S(1);

    // basis[i] < nv: structural column; basis[i] >= nv: artificial of row basis[i] - nv.
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) basis[i] = nv + i;
    std::vector<S> xb(rows, S(0));
    std::vector<char> is_basic(nv, 0), at_upper(nv, 0);

    auto rank_of = [&](std::size_t var) { return var >= nv ? var - nv : rows + var; };
    auto upper_of = [&](std::size_t var, bool& finite) -> S {
        finite = true;
        if (var >= nv) return S(0);
        if (var == t_idx) {
            finite = false;
            return S(0);
        }
        return upper[var];
    };

    HomogeneousResult<S> res;
    const std::size_t max_iter = 200000 + 50 * (rows + nv) * (rows + nv);
    for (;;) {
        if (++res.iterations > max_iter) throw InternalError("simplex iteration limit reached");

        std::size_t enter = none;
        for (std::size_t j = 0; j < nv; ++j) {
            if (is_basic[j]) continue;
            if (j != t_idx && sign_of(upper[j], 0.0) <= 0) continue;
            int sc = sign_of(cost[j], tol.cost);
            if ((!at_upper[j] && sc > 0) || (at_upper[j] && sc < 0)) {
                enter = j;
                break;
            }
        }
        if (enter == none) break;

        const bool increasing = !at_upper[enter];
        bool has_theta = enter != t_idx;
        S theta = has_theta ? upper[enter] : S(0);
        std::size_t leave_row = none;
        std::size_t best_rank = rank_of(enter);

        for (std::size_t i = 0; i < rows; ++i) {
            const S& a = tab[i][enter];
            if (sign_of(a, tol.pivot) == 0) continue;
            S rate = increasing ? S(-a) : S(a);
            bool finite = true;
            S hi = upper_of(basis[i], finite);
            S lim;
            if (sign_of(rate, 0.0) < 0) {
                lim = xb[i] / S(-rate);
            } else {
                if (!finite) continue;
                lim = (hi - xb[i]) / rate;
            }
            if (sign_of(lim, 0.0) < 0) lim = S(0);
            bool take = false;
            if (!has_theta) {
                take = true;
            } else {
                S diff = lim - theta;
                if constexpr (kFloating<S>) {
                    double band = tol.tie * std::max(std::abs(lim), std::abs(theta));
                    if (diff < -band) take = true;
                    else if (diff <= band && rank_of(basis[i]) < best_rank) take = true;
                } else {
                    int sd = sgn(diff);
                    if (sd < 0) take = true;
                    else if (sd == 0 && rank_of(basis[i]) < best_rank) take = true;
                }
            }
            if (take) {
                has_theta = true;
                theta = lim;
                leave_row = i;
                best_rank = rank_of(basis[i]);
            }
        }
        if (!has_theta) throw InternalError("simplex found an unbounded direction");

        for (std::size_t i = 0; i < rows; ++i) {
            if (increasing) xb[i] -= tab[i][enter] * theta;
            else xb[i] += tab[i][enter] * theta;
        }
        S enter_value = at_upper[enter] ? upper[enter] : S(0);
        if (increasing) enter_value += theta;
        else enter_value -= theta;

        if (leave_row == none) {
            at_upper[enter] = !at_upper[enter];
            continue;
        }

        const std::size_t leaving = basis[leave_row];
        if (leaving < nv) {
            S rate = increasing ? S(-tab[leave_row][enter]) : S(tab[leave_row][enter]);
            is_basic[leaving] = 0;
            at_upper[leaving] = sign_of(rate, 0.0) > 0 ? 1 : 0;
        }

        const S pivot = tab[leave_row][enter];
        for (auto& x : tab[leave_row]) x /= pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leave_row) continue;
            const S f = tab[i][enter];
            if (sign_of(f, 0.0) == 0) continue;
            for (std::size_t j = 0; j < nv; ++j) tab[i][j] -= f * tab[leave_row][j];
        }
        {
            const S f = cost[enter];
            for (std::size_t j = 0; j < nv; ++j) cost[j] -= f * tab[leave_row][j];
        }
        basis[leave_row] = enter;
        is_basic[enter] = 1;
        xb[leave_row] = enter_value;
    }

    if constexpr (kFloating<S>) {
        // Recompute basic values from the original columns to shed drift.
        std::vector<std::vector<double>> bm(rows, std::vector<double>(rows, 0.0));
        std::vector<double> b(rows, 0.0);
        for (std::size_t k = 0; k < rows; ++k) {
            const std::size_t var = basis[k];
            for (std::size_t i = 0; i < rows; ++i) {
                if (var >= nv) bm[i][k] = (var - nv == i) ? 1.0 : 0.0;
                else if (var == t_idx) bm[i][k] = -rhs[i];
                else bm[i][k] = coeff[i * cols + var];
            }
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (!is_basic[j] && at_upper[j]) {
                for (std::size_t i = 0; i < rows; ++i) b[i] -= coeff[i * cols + j] * upper[j];
            }
        }
        bool singular = false;
        std::vector<std::size_t> perm(rows);
        for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
        for (std::size_t c = 0; c < rows && !singular; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < rows; ++r) {
                if (std::abs(bm[r][c]) > std::abs(bm[piv][c])) piv = r;
            }
            if (std::abs(bm[piv][c]) < 1e-300) {
                singular = true;
                break;
            }
            std::swap(bm[piv], bm[c]);
            std::swap(b[piv], b[c]);
            for (std::size_t r = c + 1; r < rows; ++r) {
                double f = bm[r][c] / bm[c][c];
                if (f == 0.0) continue;
                for (std::size_t k = c; k < rows; ++k) bm[r][k] -= f * bm[c][k];
                b[r] -= f * b[c];
            }
        }
        if (!singular) {
            std::vector<double> x(rows, 0.0);
            for (std::size_t c = rows; c-- > 0;) {
                double acc = b[c];
                for (std::size_t k = c + 1; k < rows; ++k) acc -= bm[c][k] * x[k];
                x[c] = acc / bm[c][c];
            }
            xb = x;
        }
    }

    res.v.assign(cols, S(0));
    for (std::size_t j = 0; j < cols; ++j) {
        if (!is_basic[j] && at_upper[j]) res.v[j] = upper[j];
    }
    res.t = S(0);
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t var = basis[i];
        if (var >= nv) continue;
        S val = xb[i];
        if constexpr (kFloating<S>) {
            if (val < 0.0) val = 0.0;
            if (var != t_idx && val > upper[var]) val = upper[var];
        }
        if (var == t_idx) {
            res.t = val;
        } else {
            res.v[var] = val;
            res.basic_columns.push_back(var);
        }
    }
    std::sort(res.basic_columns.begin(), res.basic_columns.end());
    return res;
}

}  // namespace corrtherm::detail
