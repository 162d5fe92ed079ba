#include "corrtherm/qubit_analytic.hpp"

#include <algorithm>
#include <cmath>

#include "corrtherm/errors.hpp"
#include "corrtherm/logmath.hpp"

namespace corrtherm {

namespace {

void check_args(std::size_t n, double beta_e0) {
    if (n < 1) throw InvalidInput("number of copies must be at least 1");
    if (!std::isfinite(beta_e0) || beta_e0 < 0.0) {
        throw InvalidInput("qubit gap beta*E0 must be finite and nonnegative");
    }
}

double log_level_weight(std::size_t n, std::int64_t m, double b) {
    return log_choose(std::int64_t(n), m) - double(m) * b;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> RStarLadder::support(std::size_t r) const {
    const auto nn = std::int64_t(n);
    const auto rr = std::int64_t(r);
    if (rr <= nn) return {0, rr};
    return {rr - nn, nn};
}

double RStarLadder::p_thermal() const { return 1.0 / (1.0 + std::exp(beta_e0)); }

double RStarLadder::log_z_single() const { return std::log1p(std::exp(-beta_e0)); }

RStarLadder rstar_ladder(std::size_t n, double beta_e0) {
    check_args(n, beta_e0);
    const auto nn = std::int64_t(n);
    std::vector<double> lw(n + 1);
    for (std::int64_t m = 0; m <= nn; ++m) lw[m] = log_level_weight(n, m, beta_e0);

    // Running log sums of w_m and m * w_m from each end.
    std::vector<double> pre(n + 1), pre_m(n + 1), suf(n + 1), suf_m(n + 1);
    double a = kNegInf, am = kNegInf;
    for (std::int64_t m = 0; m <= nn; ++m) {
        a = log_add_exp(a, lw[m]);
        if (m > 0) am = log_add_exp(am, lw[m] + std::log(double(m)));
        pre[m] = a;
        pre_m[m] = am;
    }
    a = kNegInf;
    am = kNegInf;
    for (std::int64_t m = nn; m >= 0; --m) {
        a = log_add_exp(a, lw[m]);
        if (m > 0) am = log_add_exp(am, lw[m] + std::log(double(m)));
        suf[m] = a;
        suf_m[m] = am;
    }

    // Offsets from p_beta summed from the dropped levels: every term is
    // positive once the cut lies past the thermal mean, so rungs near p_beta
    // keep their ordering instead of cancelling to rounding noise.
    const double pb = 1.0 / (1.0 + std::exp(beta_e0));
    const double center = double(n) * pb;
    std::vector<double> drop_hi(n + 2, kNegInf), drop_lo(n + 1, kNegInf);
    for (std::int64_t m = nn; m >= 0; --m) {
        double t = double(m) - center;
        drop_hi[m] = t > 0.0 ? log_add_exp(drop_hi[m + 1], lw[m] + std::log(t)) : drop_hi[m + 1];
    }
    for (std::int64_t m = 0; m <= nn; ++m) {
        double t = center - double(m);
        double prev = m > 0 ? drop_lo[m - 1] : kNegInf;
        drop_lo[m] = t > 0.0 ? log_add_exp(prev, lw[m] + std::log(t)) : prev;
    }

    RStarLadder lad;
    lad.n = n;
    lad.beta_e0 = beta_e0;
    lad.p_values.resize(2 * n + 1);
    lad.log_partial_sums.resize(2 * n + 1);
    const double inv_n = 1.0 / double(n);
    for (std::int64_t r = 0; r <= 2 * nn; ++r) {
        double lz, lzm;
        if (r <= nn) {
            lz = pre[r];
            lzm = pre_m[r];
        } else {
            lz = suf[r - nn];
            lzm = suf_m[r - nn];
        }
        lad.log_partial_sums[r] = lz;
        if (r < nn && double(r + 1) > center) {
            lad.p_values[r] = pb - std::exp(drop_hi[r + 1] - lz) * inv_n;
        } else if (r > nn && double(r - nn - 1) < center) {
            lad.p_values[r] = pb + std::exp(drop_lo[r - nn - 1] - lz) * inv_n;
        } else {
            lad.p_values[r] = lzm == kNegInf ? 0.0 : std::exp(lzm - lz) * inv_n;
        }
    }
    lad.p_values[0] = 0.0;
    lad.p_values[n] = lad.p_thermal();
    lad.p_values[2 * n] = 1.0;
    lad.log_partial_sums[n] = double(n) * lad.log_z_single();
    return lad;
}

QubitOptimum analytic_cwork(double p, std::size_t n, double beta_e0) {
    return analytic_cwork(p, rstar_ladder(n, beta_e0));
}

QubitOptimum analytic_cwork(double p, const RStarLadder& lad) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("excited probability p must lie in [0, 1]");
    const auto nn = std::int64_t(lad.n);
    const auto& pv = lad.p_values;
    auto it = std::upper_bound(pv.begin(), pv.end(), p);
    std::int64_t r = std::int64_t(it - pv.begin()) - 1;
    r = std::clamp<std::int64_t>(r, 0, 2 * nn);

    QubitOptimum opt;
    opt.segment = std::size_t(r);
    const double lzs = lad.log_z_single();

    if (p == pv[r] || r == 2 * nn) {
        opt.mix = 1.0;
        opt.s = 1.0;
        if (r < nn) {
            opt.side = Side::Below;
            opt.m_star = r;
            opt.u_lo = 0;
            opt.u_hi = r - 1;
        } else if (r == nn) {
            opt.side = Side::Thermal;
            opt.u_lo = 0;
            opt.u_hi = nn;
        } else {
            opt.side = Side::Above;
            opt.m_star = r - nn;
            opt.u_lo = r - nn + 1;
            opt.u_hi = nn;
        }
        opt.log_q_value = -lad.log_mass(std::size_t(r));
        opt.works.extraction = opt.log_q_value;
    } else {
        const double x = (pv[r + 1] - p) / (pv[r + 1] - pv[r]);
        opt.mix = x;
        const double a = std::log(x) - lad.log_mass(std::size_t(r));
        const double b = std::log1p(-x) - lad.log_mass(std::size_t(r + 1));
        opt.log_q_value = log_add_exp(a, b);
        if (r < nn) {
            opt.side = Side::Below;
            opt.u_lo = 0;
            opt.u_hi = r;
            opt.m_star = r + 1;
            opt.s = std::exp(b - opt.log_q_value);
            opt.works.extraction = -lad.log_mass(std::size_t(r + 1));
        } else {
            opt.side = Side::Above;
            opt.u_lo = r + 1 - nn;
            opt.u_hi = nn;
            opt.m_star = r - nn;
            opt.s = std::exp(a - opt.log_q_value);
            opt.works.extraction = -lad.log_mass(std::size_t(r));
        }
    }
    opt.q_value = std::exp(opt.log_q_value);
    opt.log_gamma = double(nn) * lzs - opt.log_q_value;
    opt.works.formation = opt.log_q_value;
    opt.works.irreversible = opt.works.formation - opt.works.extraction;
    const auto sys = LocalSystem::qubit(lad.beta_e0);
    opt.works.delta_f = double(nn) * free_energy_difference(DiagonalState::qubit(p), sys);
    return opt;
}

std::vector<double> qubit_occupations(const QubitOptimum& opt, const RStarLadder& lad) {
    const auto nn = std::int64_t(lad.n);
    const double shift = double(nn) * lad.log_z_single();
    std::vector<double> occ(lad.n + 1, 0.0);
    for (std::int64_t m = 0; m <= nn; ++m) {
        double lq = kNegInf;
        if (m >= opt.u_lo && m <= opt.u_hi) lq = opt.log_q_value;
        else if (opt.m_star && *opt.m_star == m) lq = opt.log_q_value + std::log(opt.s);
        if (lq == kNegInf) continue;
        occ[m] = std::exp(log_level_weight(lad.n, m, lad.beta_e0) - shift + lq);
    }
    return occ;
}

double qubit_mutual_information(const QubitOptimum& opt, const RStarLadder& lad, double p) {
    // D_1(joint || Gibbs) = sum_m P_m log q_m; only m_star departs from log gamma.
    double d1 = opt.log_q_value;
    if (opt.m_star && opt.s < 1.0) {
        const double shift = double(lad.n) * lad.log_z_single();
        const double lp_star =
            log_level_weight(lad.n, *opt.m_star, lad.beta_e0) - shift + opt.log_q_value + std::log(opt.s);
        d1 += std::exp(lp_star) * std::log(opt.s);
    }
    const auto sys = LocalSystem::qubit(lad.beta_e0);
    return d1 - double(lad.n) * free_energy_difference(DiagonalState::qubit(p), sys);
}

std::pair<double, double> quasi_thermal_interval(std::size_t n, double beta_e0) {
    const auto lad = rstar_ladder(n, beta_e0);
    return {lad.p_values[n - 1], lad.p_values[n + 1]};
}

std::pair<double, double> quasi_thermal_closed_form(std::size_t n, double beta_e0) {
    check_args(n, beta_e0);
    const double lz = double(n) * std::log1p(std::exp(-beta_e0));
    const double g0 = std::exp(-lz);
    const double gn = std::exp(-double(n) * beta_e0 - lz);
    const double pb = 1.0 / (1.0 + std::exp(beta_e0));
    return {(pb - gn) / (1.0 - gn), pb / (1.0 - g0)};
}

SpacingStats rstar_spacing_stats(std::size_t n, double beta_e0, double tail_cut) {
    if (!(tail_cut >= 0.0)) throw InvalidInput("tail cut must be nonnegative");
    const auto lad = rstar_ladder(n, beta_e0);
    const double center = double(n) * lad.p_thermal();
    const double cut = tail_cut * std::sqrt(double(n));
    SpacingStats st;
    for (std::size_t r = 0; r + 1 < lad.size(); ++r) {
        bool keep;
        if (r < n) {
            // Rungs r, r+1 share [0, r]; its edge r borders the lower tail.
            keep = center - double(r) >= cut;
        } else {
            // Rungs r, r+1 share [r+1-N, N]; its edge borders the upper tail.
            keep = double(r + 1 - n) - center >= cut;
        }
        if (keep) st.values.push_back(double(n) * (lad.p_values[r + 1] - lad.p_values[r]));
    }
    if (st.values.empty()) throw InvalidInput("no rung spacing survives the tail cut");
    auto sorted = st.values;
    std::sort(sorted.begin(), sorted.end());
    st.min = sorted.front();
    st.max = sorted.back();
    const std::size_t k = sorted.size();
    st.median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
    return st;
}

}  // namespace corrtherm
