#include <doctest.h>

#include <cmath>
#include <random>

#include "corrtherm/errors.hpp"
#include "corrtherm/freeenergy.hpp"
#include "corrtherm/logmath.hpp"
#include "oracles.hpp"

using namespace corrtherm;

namespace {
const double kAlphas[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, kInf};
const double kLn2 = std::log(2.0);
}  // namespace

TEST_CASE("divergence of the thermal state vanishes") {
    LocalSystem sys{{0.0, 0.4, 1.7}, std::nullopt};
    auto tau = DiagonalState::thermal(sys);
    for (double a : {0.0, 0.5, 1.0, 2.0, kInf}) CHECK(std::abs(renyi_divergence(tau, sys, a)) < 1e-14);
}

TEST_CASE("qubit ln2 gap, ground state and p = 1/2") {
    auto sys = LocalSystem::qubit(kLn2);
    auto ground = DiagonalState::qubit(0.0);
    for (double a : {0.0, 1.0, kInf}) CHECK(renyi_divergence(ground, sys, a) == doctest::Approx(std::log(1.5)));
    auto half = DiagonalState::qubit(0.5);
    CHECK(std::abs(renyi_divergence(half, sys, 0.0)) < 1e-15);
    CHECK(renyi_divergence(half, sys, kInf) == doctest::Approx(std::log(1.5)));
}

TEST_CASE("single-copy work budgets") {
    auto sys = LocalSystem::qubit(kLn2);
    auto th = work_budget_single(DiagonalState::thermal(sys), sys);
    CHECK(std::abs(th.formation) < 1e-14);
    CHECK(std::abs(th.extraction) < 1e-14);
    CHECK(std::abs(th.delta_f) < 1e-14);
    CHECK(std::abs(th.irreversible) < 1e-14);

    auto excited = work_budget_single(DiagonalState::qubit(1.0), sys);
    CHECK(excited.formation == doctest::Approx(std::log(3.0)));
    CHECK(excited.extraction == doctest::Approx(std::log(3.0)));

    auto half = work_budget_single(DiagonalState::qubit(0.5), sys);
    CHECK(half.formation == doctest::Approx(std::log(1.5)));
    CHECK(std::abs(half.extraction) < 1e-15);
    CHECK(half.delta_f == doctest::Approx(std::log(1.5) - 0.5 * kLn2));
    CHECK(half.delta_f == doctest::Approx(0.0589).epsilon(1e-3));
}

TEST_CASE("mutual information of the N=2, p=3/4 optimum at beta -> 0") {
    auto sys = LocalSystem::qubit(1e-15);
    auto spec = build_spectrum(sys, 2);
    auto local = DiagonalState::qubit(0.75);
    std::vector<double> occ{0.0, 0.5, 0.5};
    auto rep = mutual_information(occ, spec, sys, local);
    const double expected = 2 * oracle::entropy({0.25, 0.75}) - oracle::entropy({0.25, 0.25, 0.5});
    CHECK(rep.mutual_information == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rep.mutual_information == doctest::Approx(0.0849).epsilon(2e-3));
    CHECK(rep.per_copy == doctest::Approx(0.0425).epsilon(2e-3));
    CHECK(rep.dissipated_work == doctest::Approx(std::log(1.5) - (kLn2 - oracle::entropy({0.25, 0.75}))));
    CHECK(rep.dissipated_work == doctest::Approx(0.2747).epsilon(1e-3));
    CHECK(rep.bound_satisfied);

    const double avg = average_work(occ, spec, sys, local);
    CHECK(avg == doctest::Approx(2 * (kLn2 - oracle::entropy({0.25, 0.75})) + expected).epsilon(1e-12));
    CHECK(avg == doctest::Approx(0.3465).epsilon(1e-3));
}

TEST_CASE("product distributions carry no correlations") {
    LocalSystem sys{{0.0, 0.8, 2.1}, std::nullopt};
    DiagonalState rho{{0.5, 0.3, 0.2}};
    const int n = 3;
    auto spec = build_spectrum(sys, n);
    // Level occupations of rho^{(x)3}: sum over tuples of prod p.
    std::vector<double> occ(spec.size(), 0.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double e = sys.levels[a] + sys.levels[b] + sys.levels[c];
                occ[*spec.find(e)] += rho.probs[a] * rho.probs[b] * rho.probs[c];
            }
    auto rep = mutual_information(occ, spec, sys, rho);
    CHECK(std::abs(rep.mutual_information) < 1e-12);
    CHECK(average_work(occ, spec, sys, rho) == doctest::Approx(n * free_energy_difference(rho, sys)));

    auto tau = DiagonalState::thermal(sys);
    auto w = gibbs_weights(spec, sys);
    std::vector<double> gocc;
    for (double lw : w.log_weight) gocc.push_back(std::exp(lw));
    CHECK(std::abs(average_work(gocc, spec, sys, tau)) < 1e-12);
}

TEST_CASE("thermal marginal: I equals the joint free energy") {
    auto sys = LocalSystem::qubit(1e-15);
    auto spec = build_spectrum(sys, 2);
    auto gibbs = gibbs_weights(spec, sys);
    // Levels m=0 and m=2 only: marginal stays 1/2.
    std::vector<double> occ{0.5, 0.0, 0.5};
    auto tau = DiagonalState::thermal(sys);
    auto rep = mutual_information(occ, spec, sys, tau);
    CHECK(rep.mutual_information == doctest::Approx(renyi_divergence(occ, gibbs, 1.0)).epsilon(1e-12));
}

TEST_CASE("marginal mismatch is rejected") {
    auto sys = LocalSystem::qubit(1.0);
    auto spec = build_spectrum(sys, 2);
    std::vector<double> occ{1.0, 0.0, 0.0};
    CHECK_THROWS_AS(mutual_information(occ, spec, sys, DiagonalState::qubit(0.3)), ConstraintViolation);
}

TEST_CASE("property: monotone in alpha, constant on restricted thermal states, budget ordering") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> energy(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 4;
        LocalSystem sys;
        for (int i = 0; i < d; ++i) sys.levels.push_back(energy(rng));
        std::sort(sys.levels.begin(), sys.levels.end());
        DiagonalState rho{oracle::random_probs(rng, d)};
        if (trial % 3 == 0) {
            // Drop the top level to exercise partial support.
            rho.probs[0] += rho.probs[d - 1];
            rho.probs[d - 1] = 0.0;
        }
        double prev = -kInf;
        for (double a : kAlphas) {
            double v = renyi_divergence(rho, sys, a);
            CHECK(v >= prev - 1e-10);
            prev = v;
        }
        auto w = work_budget_single(rho, sys);
        CHECK(w.extraction <= w.delta_f + 1e-12);
        CHECK(w.delta_f <= w.formation + 1e-12);
        CHECK(w.irreversible >= -1e-12);

        // Gibbs state restricted to a random nonempty subset.
        auto g = sys.gibbs_probs();
        std::vector<double> r(d, 0.0);
        double mass = 0.0;
        for (int i = 0; i < d; ++i) {
            if (i == 0 || (rng() & 1)) {
                r[i] = g[i];
                mass += g[i];
            }
        }
        for (auto& x : r) x /= mass;
        DiagonalState restricted{r};
        restricted.probs[0] = 1.0;
        for (int i = 1; i < d; ++i) restricted.probs[0] -= r[i];
        double lo = kInf, hi = -kInf;
        for (double a : kAlphas) {
            double v = renyi_divergence(restricted, sys, a);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo <= 1e-10);
        CHECK(lo == doctest::Approx(-std::log(mass)).epsilon(1e-10));
    }
}

TEST_CASE("support outside the reference") {
    std::vector<double> lp{std::log(0.5), std::log(0.5)};
    std::vector<double> lr{0.0, kNegInf};
    CHECK(renyi_divergence_log(lp, lr, 1.0) == kInf);
    CHECK(renyi_divergence_log(lp, lr, kInf) == kInf);
    CHECK(renyi_divergence_log(lp, lr, 2.0) == kInf);
    CHECK(std::isfinite(renyi_divergence_log(lp, lr, 0.5)));
    CHECK_THROWS_AS(renyi_divergence_log(lp, lr, -1.0), InvalidInput);
}
