#include "corrtherm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "corrtherm/errors.hpp"
#include "corrtherm/logmath.hpp"

namespace corrtherm {

namespace {

struct LocalLevel {
    double energy;
    double log_mult;
};

// Distinct local energies with their multiplicities (exact equality).
std::vector<LocalLevel> distinct_levels(const LocalSystem& sys) {
    std::vector<LocalLevel> out;
    for (double e : sys.levels) {
        if (!out.empty() && out.back().energy == e) {
            out.back().log_mult = log_add_exp(out.back().log_mult, 0.0);
        } else {
            out.push_back({e, 0.0});
        }
    }
    return out;
}

[[noreturn]] void throw_cap(std::size_t cap, std::size_t n) {
    std::ostringstream os;
    os << "spectrum of " << n << " copies exceeds the cap of " << cap << " distinct levels";
    throw CapExceeded(os.str());
}

SpectrumN binomial_spectrum(const LocalSystem& sys, std::size_t n, double tol, std::size_t cap) {
    if (n + 1 > cap) throw_cap(cap, n);
    SpectrumN spec;
    spec.n_copies = n;
    spec.coalesce_tol = tol;
    spec.quantum = sys.quantum;
    spec.entries.reserve(n + 1);
    const double e0 = sys.levels[0];
    const double e1 = sys.levels[1];
    for (std::size_t m = 0; m <= n; ++m) {
        double energy = double(n - m) * e0 + double(m) * e1;
        spec.entries.push_back({energy, log_choose(std::int64_t(n), std::int64_t(m))});
    }
    return spec;
}

SpectrumN lattice_spectrum(const LocalSystem& sys, std::size_t n, double tol, std::size_t cap) {
    const double q = *sys.quantum;
    std::vector<std::pair<std::int64_t, double>> local;
    for (const auto& lv : distinct_levels(sys)) {
        local.emplace_back(std::llround(lv.energy / q), lv.log_mult);
    }
    std::vector<std::pair<std::int64_t, double>> cur{{0, 0.0}}, next;
    for (std::size_t step = 0; step < n; ++step) {
        next.clear();
        next.reserve(cur.size() * local.size());
        for (const auto& [k, lg] : cur) {
            for (const auto& [kd, lm] : local) next.emplace_back(k + kd, lg + lm);
        }
        std::sort(next.begin(), next.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        cur.clear();
        for (const auto& e : next) {
            if (!cur.empty() && cur.back().first == e.first) {
                cur.back().second = log_add_exp(cur.back().second, e.second);
            } else {
                cur.push_back(e);
            }
        }
        if (cur.size() > cap) throw_cap(cap, n);
    }
    SpectrumN spec;
    spec.n_copies = n;
    spec.coalesce_tol = tol;
    spec.quantum = q;
    spec.entries.reserve(cur.size());
    for (const auto& [k, lg] : cur) spec.entries.push_back({double(k) * q, lg});
    return spec;
}

SpectrumN generic_spectrum(const LocalSystem& sys, std::size_t n, double tol, std::size_t cap) {
    const auto local = distinct_levels(sys);
    std::vector<SpectrumEntry> cur{{0.0, 0.0}}, next;
    for (std::size_t step = 0; step < n; ++step) {
        next.clear();
        next.reserve(cur.size() * local.size());
        for (const auto& e : cur) {
            for (const auto& lv : local) {
                next.push_back({e.energy + lv.energy, e.log_degeneracy + lv.log_mult});
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const auto& a, const auto& b) { return a.energy < b.energy; });
        cur.clear();
        double anchor = 0.0;
        for (const auto& e : next) {
            if (!cur.empty() && e.energy - anchor <= tol) {
                cur.back().log_degeneracy = log_add_exp(cur.back().log_degeneracy, e.log_degeneracy);
            } else {
                cur.push_back(e);
                anchor = e.energy;
            }
        }
        if (cur.size() > cap) throw_cap(cap, n);
    }
    SpectrumN spec;
    spec.n_copies = n;
    spec.coalesce_tol = tol;
    spec.entries = std::move(cur);
    return spec;
}

}  // namespace

void LocalSystem::validate() const {
    if (levels.empty()) throw InvalidInput("local system needs at least one level (D >= 1)");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i])) throw InvalidInput("energy levels must be finite");
        if (i > 0 && levels[i] < levels[i - 1]) {
            throw InvalidInput("energy levels must be sorted in nondecreasing order");
        }
    }
    if (quantum) {
        if (!(*quantum > 0.0) || !std::isfinite(*quantum)) {
            throw InvalidInput("lattice quantum must be a positive finite number");
        }
        for (double e : levels) {
            double r = e / *quantum;
            if (std::abs(r - std::round(r)) > 1e-9) {
                throw InvalidInput("every level must be an integer multiple of the quantum");
            }
        }
    }
}

double LocalSystem::log_partition() const {
    std::vector<double> neg(levels.size());
    std::transform(levels.begin(), levels.end(), neg.begin(), [](double e) { return -e; });
    return log_sum_exp(neg);
}

std::vector<double> LocalSystem::gibbs_probs() const {
    const double lz = log_partition();
    std::vector<double> out(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) out[i] = std::exp(-levels[i] - lz);
    return out;
}

LocalSystem LocalSystem::qubit(double beta_e0) {
    LocalSystem sys;
    sys.levels = {0.0, beta_e0};
    if (beta_e0 > 0.0) sys.quantum = beta_e0;
    return sys;
}

void DiagonalState::validate(const LocalSystem& sys) const {
    if (probs.size() != sys.dim()) {
        throw InvalidInput("state length must match the number of energy levels");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p)) throw InvalidInput("probabilities must be finite");
        if (p < 0.0) throw InvalidInput("probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("probabilities must sum to 1");
}

DiagonalState DiagonalState::qubit(double p) { return DiagonalState{{1.0 - p, p}}; }

DiagonalState DiagonalState::thermal(const LocalSystem& sys) { return DiagonalState{sys.gibbs_probs()}; }

std::pair<LocalSystem, DiagonalState> canonicalize(const LocalSystem& sys, const DiagonalState& state) {
    if (state.probs.size() != sys.levels.size()) {
        throw InvalidInput("state length must match the number of energy levels");
    }
    std::vector<std::size_t> idx(sys.levels.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return sys.levels[a] < sys.levels[b]; });
    LocalSystem out_sys;
    out_sys.quantum = sys.quantum;
    DiagonalState out_state;
    for (auto i : idx) {
        out_sys.levels.push_back(sys.levels[i]);
        out_state.probs.push_back(state.probs[i]);
    }
    return {out_sys, out_state};
}

double SpectrumN::match_tol() const {
    if (quantum) return 0.25 * *quantum;
    double scale = 0.0;
    for (const auto& e : entries) scale = std::max(scale, std::abs(e.energy));
    return std::max(coalesce_tol, 1e-12 * scale);
}

std::optional<std::size_t> SpectrumN::find(double energy) const {
    const double tol = match_tol();
    auto it = std::lower_bound(entries.begin(), entries.end(), energy - tol,
                               [](const SpectrumEntry& e, double v) { return e.energy < v; });
    if (it == entries.end() || std::abs(it->energy - energy) > tol) return std::nullopt;
    return std::size_t(it - entries.begin());
}

SpectrumN SpectrumN::vacuum(std::optional<double> quantum) {
    SpectrumN spec;
    spec.entries = {{0.0, 0.0}};
    spec.quantum = quantum;
    return spec;
}

double default_coalesce_tol(const LocalSystem& sys, std::size_t n) {
    double scale = 0.0;
    for (double e : sys.levels) scale = std::max(scale, std::abs(e));
    return 1e-9 * double(n) * scale;
}

SpectrumN build_spectrum(const LocalSystem& sys, std::size_t n, std::optional<double> coalesce_tol,
                         std::size_t cap) {
    sys.validate();
    if (n < 1) throw InvalidInput("number of copies must be at least 1");
    const double tol = coalesce_tol.value_or(default_coalesce_tol(sys, n));
    if (!(tol >= 0.0)) throw InvalidInput("coalesce tolerance must be nonnegative");
    if (sys.quantum) {
        if (sys.dim() == 2 && sys.levels[0] != sys.levels[1]) return binomial_spectrum(sys, n, tol, cap);
        return lattice_spectrum(sys, n, tol, cap);
    }
    return generic_spectrum(sys, n, tol, cap);
}

GibbsWeights gibbs_weights(const SpectrumN& spec, const LocalSystem& sys) {
    GibbsWeights w;
    w.log_z = sys.log_partition();
    const double shift = double(spec.n_copies) * w.log_z;
    w.log_weight.reserve(spec.size());
    for (const auto& e : spec.entries) w.log_weight.push_back(e.log_degeneracy - e.energy - shift);
    return w;
}

double degeneracy_shifted(const SpectrumN& prev, double energy, double local_energy) {
    auto idx = prev.find(energy - local_energy);
    return idx ? prev.entries[*idx].log_degeneracy : kNegInf;
}

std::vector<double> conditional_coefficients(const SpectrumN& spec, const SpectrumN& prev,
                                             const LocalSystem& sys) {
    const std::size_t d_count = sys.dim();
    const std::size_t m_count = spec.size();
    std::vector<double> c(d_count * m_count, 0.0);
    for (std::size_t j = 0; j < m_count; ++j) {
        const auto& e = spec.entries[j];
        for (std::size_t d = 0; d < d_count; ++d) {
            double lg = degeneracy_shifted(prev, e.energy, sys.levels[d]);
            if (lg != kNegInf) c[d * m_count + j] = std::exp(lg - e.log_degeneracy);
        }
    }
    return c;
}

SpectrumN predecessor_spectrum(const LocalSystem& sys, const SpectrumN& spec, std::size_t cap) {
    if (spec.n_copies <= 1) {
        auto vac = SpectrumN::vacuum(spec.quantum);
        vac.coalesce_tol = spec.coalesce_tol;
        return vac;
    }
    return build_spectrum(sys, spec.n_copies - 1, spec.coalesce_tol, cap);
}

}  // namespace corrtherm
