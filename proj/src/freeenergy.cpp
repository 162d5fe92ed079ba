#include "corrtherm/freeenergy.hpp"

#include <algorithm>
#include <cmath>

#include "corrtherm/errors.hpp"
#include "corrtherm/logmath.hpp"

namespace corrtherm {

double renyi_divergence_log(std::span<const double> log_probs, std::span<const double> log_ref,
                            double alpha) {
    if (log_probs.size() != log_ref.size()) {
        throw InvalidInput("state and reference must cover the same levels");
    }
    if (!(alpha >= 0.0)) throw InvalidInput("Renyi order must be nonnegative");
    const std::size_t n = log_probs.size();

    if (alpha == 0.0) {
        std::vector<double> mass;
        for (std::size_t i = 0; i < n; ++i) {
            if (log_probs[i] != kNegInf) mass.push_back(log_ref[i]);
        }
        return -log_sum_exp(mass);
    }

    bool outside = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (log_probs[i] != kNegInf && log_ref[i] == kNegInf) outside = true;
    }
    if (outside && alpha >= 1.0) return kInf;

    if (std::isinf(alpha)) {
        double best = kNegInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (log_probs[i] != kNegInf) best = std::max(best, log_probs[i] - log_ref[i]);
        }
        return best;
    }

    if (alpha == 1.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (log_probs[i] != kNegInf) acc += std::exp(log_probs[i]) * (log_probs[i] - log_ref[i]);
        }
        return acc;
    }

    std::vector<double> terms;
    for (std::size_t i = 0; i < n; ++i) {
        if (log_probs[i] != kNegInf && log_ref[i] != kNegInf) {
            terms.push_back(alpha * log_probs[i] + (1.0 - alpha) * log_ref[i]);
        }
    }
    return log_sum_exp(terms) / (alpha - 1.0);
}

namespace {

std::vector<double> logs_of(std::span<const double> xs) {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(),
                   [](double x) { return x > 0.0 ? std::log(x) : kNegInf; });
    return out;
}

std::vector<double> local_log_gibbs(const LocalSystem& sys) {
    const double lz = sys.log_partition();
    std::vector<double> out(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i) out[i] = -sys.levels[i] - lz;
    return out;
}

}  // namespace

double renyi_divergence(const DiagonalState& state, const LocalSystem& sys, double alpha) {
    state.validate(sys);
    return renyi_divergence_log(logs_of(state.probs), local_log_gibbs(sys), alpha);
}

double renyi_divergence(std::span<const double> occupations, const GibbsWeights& reference,
                        double alpha) {
    return renyi_divergence_log(logs_of(occupations), reference.log_weight, alpha);
}

double free_energy_difference(const DiagonalState& state, const LocalSystem& sys) {
    state.validate(sys);
    double mean_e = 0.0;
    for (std::size_t i = 0; i < sys.dim(); ++i) mean_e += state.probs[i] * sys.levels[i];
    return mean_e - shannon_entropy(state.probs) + sys.log_partition();
}

WorkBudget work_budget_single(const DiagonalState& state, const LocalSystem& sys) {
    state.validate(sys);
    const auto lp = logs_of(state.probs);
    const auto lg = local_log_gibbs(sys);
    WorkBudget w;
    w.formation = renyi_divergence_log(lp, lg, kInf);
    w.extraction = renyi_divergence_log(lp, lg, 0.0);
    w.irreversible = w.formation - w.extraction;
    w.delta_f = free_energy_difference(state, sys);
    return w;
}

double level_entropy(std::span<const double> occupations, const SpectrumN& spec) {
    if (occupations.size() != spec.size()) {
        throw InvalidInput("occupations must cover every spectrum level");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (occupations[i] > 0.0) {
            s += occupations[i] * (spec.entries[i].log_degeneracy - std::log(occupations[i]));
        }
    }
    return s;
}

std::vector<double> level_marginal(std::span<const double> occupations, const SpectrumN& spec,
                                   const LocalSystem& sys) {
    if (occupations.size() != spec.size()) {
        throw InvalidInput("occupations must cover every spectrum level");
    }
    const auto prev = predecessor_spectrum(sys, spec);
    const auto c = conditional_coefficients(spec, prev, sys);
    const std::size_t m = spec.size();
    std::vector<double> marg(sys.dim(), 0.0);
    for (std::size_t d = 0; d < sys.dim(); ++d) {
        for (std::size_t j = 0; j < m; ++j) marg[d] += c[d * m + j] * occupations[j];
    }
    return marg;
}

CorrelationReport mutual_information(std::span<const double> occupations, const SpectrumN& spec,
                                     const LocalSystem& sys, const DiagonalState& local) {
    local.validate(sys);
    const auto marg = level_marginal(occupations, spec, sys);
    for (std::size_t d = 0; d < sys.dim(); ++d) {
        if (std::abs(marg[d] - local.probs[d]) > 1e-9) {
            throw ConstraintViolation("joint distribution does not reproduce the local marginal");
        }
    }
    const double n = double(spec.n_copies);
    CorrelationReport r;
    r.mutual_information = n * shannon_entropy(local.probs) - level_entropy(occupations, spec);
    r.per_copy = r.mutual_information / n;
    const auto w = work_budget_single(local, sys);
    r.dissipated_work = w.formation - w.delta_f;
    r.bound_satisfied = r.per_copy <= r.dissipated_work + 1e-12;
    return r;
}

double average_work(std::span<const double> occupations, const SpectrumN& spec,
                    const LocalSystem& sys, const DiagonalState& local) {
    const auto r = mutual_information(occupations, spec, sys, local);
    return double(spec.n_copies) * free_energy_difference(local, sys) + r.mutual_information;
}

}  // namespace corrtherm
