#include "corrtherm/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrtherm/errors.hpp"
#include "corrtherm/logmath.hpp"

namespace corrtherm {

namespace {

constexpr double kTieRel = 1e-12;
constexpr double kSlack = 1e-12;

}  // namespace

double MajorizationCurve::y_at(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= vertices.back().x) return vertices.back().y;
    auto it = std::lower_bound(vertices.begin(), vertices.end(), x,
                               [](const CurvePoint& v, double val) { return v.x < val; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.x == lo.x) return hi.y;
    return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

std::vector<std::size_t> beta_order(const DiagonalState& state, const LocalSystem& sys) {
    state.validate(sys);
    const std::size_t d = sys.dim();
    std::vector<double> key(d);
    for (std::size_t i = 0; i < d; ++i) {
        key[i] = state.probs[i] > 0.0 ? std::log(state.probs[i]) + sys.levels[i] : kNegInf;
    }
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    auto same = [&](double a, double b) {
        if (a == b) return true;
        if (a == kNegInf || b == kNegInf) return false;
        // Compare ratios p e^E relative to their size.
        return std::abs(std::expm1(a - b)) <= kTieRel;
    };
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (same(key[a], key[b])) return sys.levels[a] < sys.levels[b];
        return key[a] > key[b];
    });
    return idx;
}

MajorizationCurve curve(const DiagonalState& state, const LocalSystem& sys, double w) {
    MajorizationCurve c;
    c.w = w;
    c.beta_order = beta_order(state, sys);
    c.vertices.push_back({0.0, 0.0});
    double x = 0.0, y = 0.0;
    const double scale = std::exp(-w);
    for (auto i : c.beta_order) {
        x += scale * std::exp(-sys.levels[i]);
        y += state.probs[i];
        c.vertices.push_back({x, std::min(y, 1.0)});
    }
    return c;
}

bool can_transform(const DiagonalState& src, const DiagonalState& dst, const LocalSystem& sys_src,
                   const LocalSystem& sys_dst, double w) {
    const auto a = curve(src, sys_src, w);
    const auto b = curve(dst, sys_dst, 0.0);
    auto check = [&](double x) { return a.y_at(x) + kSlack >= b.y_at(x); };
    for (const auto& v : a.vertices) {
        if (!check(v.x)) return false;
    }
    for (const auto& v : b.vertices) {
        if (!check(v.x)) return false;
    }
    return true;
}

double min_work(const DiagonalState& src, const DiagonalState& dst, const LocalSystem& sys_src,
                const LocalSystem& sys_dst, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("bisection tolerance must be positive");
    auto span_of = [](const LocalSystem& s) {
        double top = *std::max_element(s.levels.begin(), s.levels.end());
        return std::abs(top) + std::abs(s.log_partition()) + std::log(double(s.dim()));
    };
    double reach = std::max({span_of(sys_src), span_of(sys_dst), 1.0});
    double lo = -reach, hi = reach;
    auto feasible = [&](double w) { return can_transform(src, dst, sys_src, sys_dst, w); };
    for (int k = 0; k < 64 && !feasible(hi); ++k) hi = hi * 2.0 + 1.0;
    for (int k = 0; k < 64 && feasible(lo); ++k) lo = lo * 2.0 - 1.0;
    if (!feasible(hi) || feasible(lo)) throw InternalError("could not bracket the minimal work");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid)) hi = mid;
        else lo = mid;
    }
    if (!feasible(hi + tol) || feasible(lo - tol)) {
        throw InternalError("transformation feasibility is not monotone in the work");
    }
    return hi;
}

double min_work(const DiagonalState& src, const DiagonalState& dst, const LocalSystem& sys, double tol) {
    return min_work(src, dst, sys, sys, tol);
}

std::pair<LocalSystem, DiagonalState> joint_as_local(std::span<const double> occupations,
                                                     const SpectrumN& spec, std::size_t max_states) {
    if (occupations.size() != spec.size()) {
        throw InvalidInput("occupations must cover every spectrum level");
    }
    LocalSystem sys;
    DiagonalState st;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double g = std::round(std::exp(spec.entries[i].log_degeneracy));
        if (double(sys.levels.size()) + g > double(max_states)) {
            throw CapExceeded("joint state has too many microstates to expand");
        }
        for (std::size_t k = 0; k < std::size_t(g); ++k) {
            sys.levels.push_back(spec.entries[i].energy);
            st.probs.push_back(occupations[i] / g);
        }
    }
    double total = 0.0;
    for (double x : st.probs) total += x;
    if (!(total > 0.0)) throw InvalidInput("occupations must carry positive total probability");
    for (double& x : st.probs) x /= total;
    return {sys, st};
}

}  // namespace corrtherm
