#include <doctest.h>

#include <cmath>

#include "corrtherm/asymptotics.hpp"
#include "corrtherm/errors.hpp"
#include "corrtherm/qubit_analytic.hpp"

using namespace corrtherm;

namespace {

const double kLn2 = std::log(2.0);

}  // namespace

TEST_CASE("grids") {
    CHECK(dyadic_grid(3, 6) == std::vector<std::size_t>{8, 16, 32, 64});
    auto g = uniform_grid(0.0, 1.0, 5);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(uniform_grid(0.3, 0.7, 1) == std::vector<double>{0.3});
}

TEST_CASE("p sweep examples") {
    const double pb = 1.0 / (1.0 + std::exp(1.0));
    std::vector<double> grid{pb};
    auto th = sweep_p(5, 1.0, grid);
    CHECK(th[0].work_per_copy == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(th[0].extraction_per_copy == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(th[0].delta_f == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(th[0].mutual_info == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    std::vector<double> anchor{0.75};
    auto r = sweep_p(2, 0.0, anchor)[0];
    CHECK(r.work_per_copy == doctest::Approx(kLn2 / 2.0).epsilon(1e-14));
    CHECK(r.single_copy_formation == doctest::Approx(std::log(1.5)).epsilon(1e-14));
    CHECK(r.work_per_copy < r.single_copy_formation);
    CHECK(r.ratio == doctest::Approx(r.work_per_copy / r.single_copy_formation));

    for (std::size_t n : {2u, 3u, 6u}) {
        auto [lo, hi] = quasi_thermal_interval(n, 1.0);
        auto recs = sweep_p(n, 1.0, uniform_grid(lo, hi, 11));
        for (const auto& rec : recs) {
            CHECK(std::abs(rec.work_per_copy * double(n) - rec.single_copy_formation) <= 1e-10);
        }
    }
}

TEST_CASE("record invariants across a grid") {
    for (double b : {0.1, kLn2, 1.0, 3.0}) {
        for (std::size_t n : {1u, 3u, 12u, 200u}) {
            auto recs = sweep_p(n, b, uniform_grid(0.0, 1.0, 101));
            for (const auto& r : recs) {
                CHECK(r.gap >= -1e-9);
                CHECK(r.extraction_per_copy <= r.work_per_copy + 1e-12);
                CHECK(r.mutual_info >= -1e-9);
                CHECK(r.work_per_copy <= r.single_copy_formation + 1e-12);
                if (r.work_per_copy <= r.single_copy_formation) {
                    CHECK(r.mutual_info / double(n) <= r.single_copy_formation - r.delta_f + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("threads keep the output order") {
    auto grid = uniform_grid(0.0, 1.0, 257);
    auto a = sweep_p(40, 0.8, grid, 1);
    auto b = sweep_p(40, 0.8, grid, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].p == b[i].p);
        CHECK(a[i].work_per_copy == b[i].work_per_copy);
        CHECK(a[i].mutual_info == b[i].mutual_info);
    }
    auto ns = dyadic_grid(0, 10);
    auto c = sweep_n(0.3, 1.0, ns, 1);
    auto d = sweep_n(0.3, 1.0, ns, 4);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i].gap == d[i].gap);
}

TEST_CASE("n sweep convergence") {
    auto ns = dyadic_grid(3, 14);
    auto recs = sweep_n(0.9, 1.0, ns);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].gap > 0.0);
        if (i > 0) CHECK(recs[i].gap < recs[i - 1].gap);
    }
    std::vector<std::size_t> one{1};
    auto r1 = sweep_n(0.9, 1.0, one)[0];
    CHECK(r1.work_per_copy == doctest::Approx(r1.single_copy_formation).epsilon(1e-14));

    auto big = dyadic_grid(6, 14);
    for (double p : {0.1, 0.5, 0.9}) {
        for (double b : {kLn2, 1.0}) {
            auto rs = sweep_n(p, b, big);
            CHECK(rate_statistic(rs) <= 5.0);
            for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].work_per_copy <= rs[i - 1].work_per_copy + 1e-9);
        }
    }
}

TEST_CASE("correlation scaling") {
    std::vector<std::size_t> one{1};
    CHECK(correlation_scaling(0.7, 1.0, one)[0].mutual_info == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    auto pts = correlation_scaling(0.7, 1.0, dyadic_grid(6, 14));
    CHECK(pts.back().mutual_info / double(pts.back().n) <= 0.01);
    for (const auto& pt : pts) CHECK(pt.mutual_info / std::log(double(pt.n)) <= 3.0);
}

TEST_CASE("rate statistic") {
    std::vector<SweepRecord> recs(3);
    recs[0].n = 1;
    recs[0].gap = 100.0;
    recs[1].n = 4;
    recs[1].gap = 0.5;
    recs[2].n = 16;
    recs[2].gap = 0.2;
    CHECK(rate_statistic(recs) == doctest::Approx(std::max(0.5 * 4 / std::log(4.0), 0.2 * 16 / std::log(16.0))));
}

TEST_CASE("argument errors") {
    std::vector<double> bad{0.2, 1.2};
    CHECK_THROWS_AS(sweep_p(3, 1.0, bad), InvalidInput);
    CHECK_THROWS_AS(sweep_p(kMaxAnalyticCopies + 1, 1.0, std::vector<double>{0.5}), InvalidInput);
    std::vector<std::size_t> unordered{4, 2};
    CHECK_THROWS_AS(sweep_n(0.3, 1.0, unordered), InvalidInput);
    std::vector<std::size_t> zero{0};
    CHECK_THROWS_AS(sweep_n(0.3, 1.0, zero), InvalidInput);
}
