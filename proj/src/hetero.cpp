#include "corrtherm/hetero.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>

#include "corrtherm/errors.hpp"
#include "corrtherm/logmath.hpp"
#include "corrtherm/qubit_analytic.hpp"

namespace corrtherm {

namespace {

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

Member qubit_member(double p, double gap) {
    return Member{LocalSystem::qubit(gap), DiagonalState::qubit(p)};
}

template <class F>
double average_over(F&& f, double a, double b) {
    if (b <= a) return f(a);
    return boost::math::quadrature::gauss<double, 64>::integrate(f, a, b) / (b - a);
}

}  // namespace

void Ensemble::validate() const {
    if (members.empty()) throw InvalidInput("ensemble must have at least one member");
    for (const auto& m : members) {
        m.system.validate();
        m.state.validate(m.system);
    }
}

double Ensemble::log_dimension() const {
    double acc = 0.0;
    for (const auto& m : members) acc += std::log(double(m.system.dim()));
    return acc;
}

bool same_member(const Member& a, const Member& b, double tol) {
    if (a.system.dim() != b.system.dim()) return false;
    for (std::size_t i = 0; i < a.system.dim(); ++i) {
        if (std::abs(a.system.levels[i] - b.system.levels[i]) > tol) return false;
        if (std::abs(a.state.probs[i] - b.state.probs[i]) > tol) return false;
    }
    return true;
}

ClassDecomposition decompose(const Ensemble& ens, double match_tol) {
    ClassDecomposition dec;
    dec.match_tol = match_tol;
    dec.member_class.reserve(ens.size());
    for (const auto& m : ens.members) {
        std::size_t k = 0;
        while (k < dec.classes.size() && !same_member(dec.classes[k], m, match_tol)) ++k;
        if (k == dec.classes.size()) {
            dec.classes.push_back(m);
            dec.counts.push_back(0);
        }
        ++dec.counts[k];
        dec.member_class.push_back(k);
    }
    return dec;
}

std::size_t dim_cap_from_env() {
    const char* raw = std::getenv("CORRTHERM_DIM_CAP");
    if (!raw || !*raw) return kDefaultDimCap;
    char* end = nullptr;
    unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) {
        throw InvalidInput("CORRTHERM_DIM_CAP must be a positive integer");
    }
    return std::size_t(v);
}

JointConstraints build_joint_constraints(const Ensemble& ens, std::size_t dim_cap) {
    ens.validate();
    const double log_dim = ens.log_dimension();
    if (log_dim > std::log(double(dim_cap)) + 1e-9) {
        std::ostringstream os;
        os << "joint dimension " << std::exp(log_dim) << " exceeds the cap of " << dim_cap;
        throw CapExceeded(os.str());
    }
    JointConstraints jc;
    jc.classes = decompose(ens);
    const std::size_t nc = jc.classes.classes.size();

    std::vector<std::vector<double>> coeff(nc), logw(nc);
    for (std::size_t j = 0; j < nc; ++j) {
        const auto& sys = jc.classes.classes[j].system;
        auto spec = build_spectrum(sys, jc.classes.counts[j]);
        const auto prev = predecessor_spectrum(sys, spec);
        coeff[j] = conditional_coefficients(spec, prev, sys);
        logw[j] = gibbs_weights(spec, sys).log_weight;
        jc.class_spectra.push_back(std::move(spec));
    }

    struct Column {
        double energy;
        double log_weight;
        std::vector<std::size_t> levels;
    };
    std::vector<Column> columns;
    std::vector<std::size_t> idx(nc, 0);
    for (;;) {
        Column col{0.0, 0.0, idx};
        for (std::size_t j = 0; j < nc; ++j) {
            col.energy += jc.class_spectra[j].entries[idx[j]].energy;
            col.log_weight += logw[j][idx[j]];
        }
        columns.push_back(std::move(col));
        std::size_t j = 0;
        while (j < nc && ++idx[j] == jc.class_spectra[j].size()) idx[j++] = 0;
        if (j == nc) break;
    }
    std::stable_sort(columns.begin(), columns.end(), [](const Column& a, const Column& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.levels < b.levels;
    });

    auto& cs = jc.system;
    cs.cols = columns.size();
    std::vector<std::size_t> offset(nc, 0);
    for (std::size_t j = 0; j < nc; ++j) {
        offset[j] = cs.rows;
        cs.rows += jc.classes.classes[j].system.dim();
    }
    cs.coeff.assign(cs.rows * cs.cols, 0.0);
    for (std::size_t j = 0; j < nc; ++j) {
        const auto& cls = jc.classes.classes[j];
        const std::size_t mj = jc.class_spectra[j].size();
        for (std::size_t d = 0; d < cls.system.dim(); ++d) {
            cs.rhs.push_back(cls.state.probs[d]);
            cs.row_group.push_back(j);
            for (std::size_t c = 0; c < cs.cols; ++c) {
                cs.coeff[(offset[j] + d) * cs.cols + c] = coeff[j][d * mj + columns[c].levels[j]];
            }
        }
    }
    for (auto& col : columns) {
        cs.column_energies.push_back(col.energy);
        cs.log_column_weight.push_back(col.log_weight);
        jc.column_levels.push_back(std::move(col.levels));
    }
    return jc;
}

EnsembleWork cwork_ensemble(const Ensemble& ens, LpMode mode, std::size_t dim_cap) {
    const auto jc = build_joint_constraints(ens, dim_cap);
    EnsembleWork out;
    out.solution = min_infnorm(jc.system, mode);
    double delta_f = 0.0;
    for (const auto& m : ens.members) delta_f += free_energy_difference(m.state, m.system);
    out.works = budget_from_solution(out.solution, delta_f);
    return out;
}

std::vector<SigmaState> sigma_d_states(const LocalSystem& sys, const DiagonalState& local, std::size_t n) {
    sys.validate();
    local.validate(sys);
    if (n < 1) throw InvalidInput("number of copies must be at least 1");
    const std::size_t dim = sys.dim();
    const double lz = sys.log_partition();
    std::vector<std::int64_t> floors(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        floors[i] = std::int64_t(std::floor(local.probs[i] * double(n) + 1e-9));
    }
    std::vector<SigmaState> out;
    for (std::size_t d = 0; d < dim; ++d) {
        SigmaState s;
        s.counts = floors;
        std::int64_t others = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i != d) others += floors[i];
        }
        s.counts[d] = std::int64_t(n) - others;
        for (std::size_t i = 0; i < dim; ++i) {
            s.energy += double(s.counts[i]) * sys.levels[i];
            s.marginal.push_back(double(s.counts[i]) / double(n));
        }
        s.log_multiplicity = log_multinomial(s.counts);
        s.formation = s.energy + double(n) * lz - s.log_multiplicity;
        s.delta_f = double(n) * free_energy_difference(DiagonalState{s.marginal}, sys);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SigmaState> sigma_d_states(const Ensemble& identical, const DiagonalState& local) {
    identical.validate();
    for (const auto& m : identical.members) {
        if (!same_member(m, identical.members.front())) {
            throw InvalidInput("sigma_d states need identical ensemble members");
        }
    }
    return sigma_d_states(identical.members.front().system, local, identical.size());
}

void DistributionSpec::validate() const {
    if (kind == SpecKind::ProductUniformBox) {
        if (!(box.p_lo >= 0.0 && box.p_lo <= box.p_hi && box.p_hi <= 1.0)) {
            throw InvalidInput("box bounds on p must satisfy 0 <= p_lo <= p_hi <= 1");
        }
        if (!(box.gap_lo >= 0.0 && box.gap_lo <= box.gap_hi && std::isfinite(box.gap_hi))) {
            throw InvalidInput("box bounds on the gap must be finite with 0 <= gap_lo <= gap_hi");
        }
        return;
    }
    if (atoms.empty()) throw InvalidInput("distribution needs at least one atom");
    if (kind == SpecKind::PointMass && atoms.size() != 1) {
        throw InvalidInput("point-mass distribution has exactly one atom");
    }
    double total = 0.0;
    for (const auto& a : atoms) {
        a.system.validate();
        a.state.validate(a.system);
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
            throw InvalidInput("atom weights must be nonnegative");
        }
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("atom weights must sum to 1");
}

DistributionSpec DistributionSpec::point_mass(LocalSystem sys, DiagonalState state) {
    DistributionSpec s;
    s.kind = SpecKind::PointMass;
    s.atoms.push_back({std::move(sys), std::move(state), 1.0});
    return s;
}

DistributionSpec DistributionSpec::discrete(std::vector<Atom> atoms) {
    DistributionSpec s;
    s.kind = SpecKind::FiniteDiscrete;
    s.atoms = std::move(atoms);
    return s;
}

DistributionSpec DistributionSpec::uniform_box(QubitBox box) {
    DistributionSpec s;
    s.kind = SpecKind::ProductUniformBox;
    s.box = box;
    return s;
}

Ensemble sample_ensemble(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw InvalidInput("ensemble size must be at least 1");
    Ensemble ens;
    ens.seed = seed;
    ens.members.reserve(n);
    std::mt19937_64 rng(seed);
    switch (spec.kind) {
        case SpecKind::PointMass:
            for (std::size_t i = 0; i < n; ++i) {
                ens.members.push_back({spec.atoms[0].system, spec.atoms[0].state});
            }
            break;
        case SpecKind::FiniteDiscrete: {
            std::vector<double> cum;
            double acc = 0.0;
            for (const auto& a : spec.atoms) cum.push_back(acc += a.weight);
            for (std::size_t i = 0; i < n; ++i) {
                double u = uniform01(rng) * acc;
                auto k = std::size_t(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
                k = std::min(k, spec.atoms.size() - 1);
                ens.members.push_back({spec.atoms[k].system, spec.atoms[k].state});
            }
            break;
        }
        case SpecKind::ProductUniformBox:
            for (std::size_t i = 0; i < n; ++i) {
                double p = spec.box.p_lo + uniform01(rng) * (spec.box.p_hi - spec.box.p_lo);
                double g = spec.box.gap_lo + uniform01(rng) * (spec.box.gap_hi - spec.box.gap_lo);
                ens.members.push_back(qubit_member(p, g));
            }
            break;
    }
    return ens;
}

double mean_delta_f(const DistributionSpec& spec) {
    spec.validate();
    if (spec.kind != SpecKind::ProductUniformBox) {
        double acc = 0.0;
        for (const auto& a : spec.atoms) acc += a.weight * free_energy_difference(a.state, a.system);
        return acc;
    }
    const auto& b = spec.box;
    auto inner = [&](double gap) {
        const auto sys = LocalSystem::qubit(gap);
        return average_over(
            [&](double p) { return free_energy_difference(DiagonalState::qubit(p), sys); }, b.p_lo, b.p_hi);
    };
    return average_over(inner, b.gap_lo, b.gap_hi);
}

double class_grouped_work(const ClassDecomposition& dec) {
    double total = 0.0;
    for (std::size_t j = 0; j < dec.classes.size(); ++j) {
        const auto& cls = dec.classes[j];
        const std::size_t nj = dec.counts[j];
        if (nj == 0) continue;
        if (cls.system.dim() == 2) {
            const double gap = cls.system.levels[1] - cls.system.levels[0];
            total += analytic_cwork(cls.state.probs[1], nj, gap).works.formation;
        } else {
            total += cwork_lp(cls.state, cls.system, nj).works.formation;
        }
    }
    return total;
}

EnsembleRecord ensemble_experiment(const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                                   EnsembleMode mode, std::size_t dim_cap) {
    spec.validate();
    if (mode == EnsembleMode::ClassGrouped && spec.kind == SpecKind::ProductUniformBox) {
        throw InvalidInput("class-grouped mode requires a point-mass or finite-discrete distribution");
    }
    const auto ens = sample_ensemble(spec, n, seed);
    EnsembleRecord rec;
    rec.n = n;
    rec.mode = mode;
    rec.mean_delta_f = mean_delta_f(spec);
    if (mode == EnsembleMode::Exact) {
        const auto w = cwork_ensemble(ens, LpMode::Float, dim_cap);
        rec.work_per_copy = w.works.formation / double(n);
        rec.class_count = decompose(ens).classes.size();
    } else {
        const auto dec = decompose(ens);
        rec.work_per_copy = class_grouped_work(dec) / double(n);
        rec.upper_bound = true;
        rec.class_count = dec.classes.size();
    }
    rec.gap = rec.work_per_copy - rec.mean_delta_f;
    return rec;
}

}  // namespace corrtherm
