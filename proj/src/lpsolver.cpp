#include "corrtherm/lpsolver.hpp"

#include <algorithm>
#include <cmath>

#include "corrtherm/errors.hpp"
#include "corrtherm/logmath.hpp"
#include "corrtherm/rational.hpp"
#include "corrtherm/simplex.hpp"

namespace corrtherm {

namespace {

constexpr std::int64_t kMaxDen = 1000000;
constexpr double kSupportTol = 1e-12;
constexpr double kIntermediateTol = 1e-9;
constexpr double kResidualTol = 1e-9;

std::size_t group_of(const ConstraintSystem& cs, std::size_t d) {
    return cs.row_group.empty() ? 0 : cs.row_group[d];
}

std::size_t group_count(const ConstraintSystem& cs) {
    std::size_t g = 1;
    for (auto x : cs.row_group) g = std::max(g, x + 1);
    return g;
}

bool rhs_is_distribution(const ConstraintSystem& cs) {
    std::vector<double> total(group_count(cs), 0.0);
    for (std::size_t d = 0; d < cs.rows; ++d) {
        double x = cs.rhs[d];
        if (!std::isfinite(x) || x < 0.0) return false;
        total[group_of(cs, d)] += x;
    }
    for (double t : total) {
        if (std::abs(t - 1.0) > 1e-9) return false;
    }
    return true;
}

void finish(const ConstraintSystem& cs, LpSolution& sol) {
    std::vector<double> support;
    for (std::size_t j = 0; j < cs.cols; ++j) {
        if (sol.occupations[j] > 0.0) support.push_back(cs.log_column_weight[j]);
    }
    sol.log_support_mass = log_sum_exp(support);
    double worst = 0.0;
    for (std::size_t d = 0; d < cs.rows; ++d) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cs.cols; ++j) acc += cs.coeff[d * cs.cols + j] * sol.occupations[j];
        worst = std::max(worst, std::abs(acc - cs.rhs[d]));
    }
    sol.residual = worst;
    sol.status = worst <= kResidualTol ? LpStatus::Optimal : LpStatus::Infeasible;
}

LpSolution solve_float(const ConstraintSystem& cs) {
    LpSolution sol;
    double top = kNegInf;
    for (double lw : cs.log_column_weight) top = std::max(top, lw);
    std::vector<double> upper(cs.cols);
    for (std::size_t j = 0; j < cs.cols; ++j) upper[j] = std::exp(cs.log_column_weight[j] - top);

    auto res = detail::solve_homogeneous<double>(cs.coeff, cs.rhs, upper, cs.rows, cs.cols);
    if (!(res.t > 0.0)) return sol;

    // Q = 1 / (t * max weight); u_j = v_j / upper_j is q_j / Q.
    sol.log_value = -std::log(res.t) - top;
    sol.value = std::exp(sol.log_value);
    sol.q.assign(cs.cols, 0.0);
    sol.log_q.assign(cs.cols, kNegInf);
    sol.occupations.assign(cs.cols, 0.0);
    for (std::size_t j = 0; j < cs.cols; ++j) {
        if (upper[j] <= 0.0) continue;
        double u = res.v[j] / upper[j];
        if (u <= kSupportTol) continue;
        sol.log_q[j] = std::log(u) + sol.log_value;
        sol.q[j] = std::exp(sol.log_q[j]);
        sol.occupations[j] = res.v[j] / res.t;
        if (u > kIntermediateTol && u < 1.0 - kIntermediateTol) ++sol.intermediate_count;
    }
    sol.basis = res.basic_columns;
    finish(cs, sol);
    return sol;
}

LpSolution solve_exact(const ConstraintSystem& cs) {
    LpSolution sol;
    std::vector<mpq_class> coeff(cs.coeff.size()), rhs(cs.rows), upper(cs.cols);
    for (std::size_t k = 0; k < cs.coeff.size(); ++k) coeff[k] = to_rational(cs.coeff[k], kMaxDen);
    for (std::size_t j = 0; j < cs.cols; ++j) {
        upper[j] = to_rational(std::exp(cs.log_column_weight[j]), kMaxDen);
    }
    // Convert p, then repair each group's sum on its largest entry.
    const std::size_t groups = group_count(cs);
    std::vector<mpq_class> total(groups, mpq_class(0));
    std::vector<std::size_t> largest(groups, cs.rows);
    for (std::size_t d = 0; d < cs.rows; ++d) {
        const std::size_t g = group_of(cs, d);
        rhs[d] = to_rational(cs.rhs[d], kMaxDen);
        total[g] += rhs[d];
        if (largest[g] == cs.rows || cs.rhs[d] > cs.rhs[largest[g]]) largest[g] = d;
    }
    for (std::size_t g = 0; g < groups; ++g) {
        if (largest[g] == cs.rows) continue;
        rhs[largest[g]] += mpq_class(1) - total[g];
        if (sgn(rhs[largest[g]]) < 0) return sol;
    }

    auto res = detail::solve_homogeneous<mpq_class>(coeff, rhs, upper, cs.rows, cs.cols);
    if (sgn(res.t) <= 0) return sol;

    const mpq_class value = mpq_class(1) / res.t;
    mpq_class mass(0);
    ExactCertificate cert;
    cert.value = value.get_str();
    sol.log_value = log_of(value);
    sol.value = value.get_d();
    sol.q.assign(cs.cols, 0.0);
    sol.log_q.assign(cs.cols, kNegInf);
    sol.occupations.assign(cs.cols, 0.0);
    cert.q.assign(cs.cols, "0");
    for (std::size_t j = 0; j < cs.cols; ++j) {
        if (sgn(res.v[j]) <= 0) continue;
        mpq_class qj = res.v[j] / (upper[j] * res.t);
        mpq_class pj = res.v[j] / res.t;
        cert.q[j] = qj.get_str();
        sol.q[j] = qj.get_d();
        sol.log_q[j] = log_of(qj);
        sol.occupations[j] = pj.get_d();
        mass += upper[j];
        if (res.v[j] < upper[j]) ++sol.intermediate_count;
    }
    cert.support_mass = mass.get_str();
    sol.basis = res.basic_columns;
    finish(cs, sol);
    sol.log_support_mass = log_of(mass);
    sol.exact = std::move(cert);
    return sol;
}

}  // namespace

double ConstraintSystem::entry(std::size_t d, std::size_t j) const {
    return coeff[d * cols + j] * std::exp(log_column_weight[j]);
}

void ConstraintSystem::validate() const {
    if (coeff.size() != rows * cols || log_column_weight.size() != cols || rhs.size() != rows ||
        column_energies.size() != cols || (!row_group.empty() && row_group.size() != rows)) {
        throw InvalidInput("constraint system arrays have inconsistent sizes");
    }
    for (double c : coeff) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("constraint entries must be nonnegative");
    }
}

ConstraintSystem build_constraints(const DiagonalState& local, const LocalSystem& sys, std::size_t n,
                                   std::size_t cap) {
    local.validate(sys);
    const auto spec = build_spectrum(sys, n, std::nullopt, cap);
    const auto prev = predecessor_spectrum(sys, spec, cap);
    const auto gw = gibbs_weights(spec, sys);
    ConstraintSystem cs;
    cs.rows = sys.dim();
    cs.cols = spec.size();
    cs.coeff = conditional_coefficients(spec, prev, sys);
    cs.log_column_weight = gw.log_weight;
    cs.rhs = local.probs;
    cs.column_energies.reserve(spec.size());
    for (const auto& e : spec.entries) cs.column_energies.push_back(e.energy);
    return cs;
}

LpSolution min_infnorm(const ConstraintSystem& cs, LpMode mode) {
    cs.validate();
    if (!rhs_is_distribution(cs)) return LpSolution{};
    return mode == LpMode::Float ? solve_float(cs) : solve_exact(cs);
}

WorkBudget budget_from_solution(const LpSolution& sol, double delta_f) {
    if (!sol.optimal()) throw InvalidInput("no joint state reproduces the requested marginals (LP infeasible)");
    WorkBudget w;
    w.formation = sol.log_value;
    w.extraction = -sol.log_support_mass;
    w.irreversible = w.formation - w.extraction;
    w.delta_f = delta_f;
    return w;
}

CworkResult cwork_lp(const DiagonalState& local, const LocalSystem& sys, std::size_t n, LpMode mode,
                     std::size_t cap) {
    CworkResult out;
    const auto cs = build_constraints(local, sys, n, cap);
    out.solution = min_infnorm(cs, mode);
    out.works = budget_from_solution(out.solution, double(n) * free_energy_difference(local, sys));
    out.occupations = out.solution.occupations;
    out.spectrum = build_spectrum(sys, n, std::nullopt, cap);
    return out;
}

}  // namespace corrtherm
