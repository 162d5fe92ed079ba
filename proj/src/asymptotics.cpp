#include "corrtherm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "corrtherm/errors.hpp"
#include "corrtherm/freeenergy.hpp"
#include "corrtherm/qubit_analytic.hpp"

namespace corrtherm {

namespace {

SweepRecord make_record(double p, const RStarLadder& lad) {
    const auto opt = analytic_cwork(p, lad);
    const auto sys = LocalSystem::qubit(lad.beta_e0);
    const auto single = work_budget_single(DiagonalState::qubit(p), sys);
    const double n = double(lad.n);
    SweepRecord r;
    r.n = lad.n;
    r.p = p;
    r.work_per_copy = opt.works.formation / n;
    r.extraction_per_copy = opt.works.extraction / n;
    r.delta_f = single.delta_f;
    r.gap = r.work_per_copy - r.delta_f;
    r.mutual_info = qubit_mutual_information(opt, lad, p);
    r.single_copy_formation = single.formation;
    r.ratio = single.formation > 0.0 ? r.work_per_copy / single.formation : 1.0 / n;
    return r;
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += threads) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void check_n(std::size_t n) {
    if (n < 1) throw InvalidInput("number of copies must be at least 1");
    if (n > kMaxAnalyticCopies) throw InvalidInput("analytic sweeps support at most 100000 copies");
}

}  // namespace

std::vector<SweepRecord> sweep_p(std::size_t n, double beta_e0, std::span<const double> p_grid,
                                 unsigned threads) {
    check_n(n);
    for (double p : p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("every grid value of p must lie in [0, 1]");
    }
    const auto lad = rstar_ladder(n, beta_e0);
    std::vector<SweepRecord> out(p_grid.size());
    parallel_for(p_grid.size(), threads, [&](std::size_t i) { out[i] = make_record(p_grid[i], lad); });
    return out;
}

std::vector<SweepRecord> sweep_n(double p, double beta_e0, std::span<const std::size_t> n_list,
                                 unsigned threads) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("excited probability p must lie in [0, 1]");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        check_n(n_list[i]);
        if (i > 0 && n_list[i] <= n_list[i - 1]) throw InvalidInput("copy numbers must be strictly ascending");
    }
    std::vector<SweepRecord> out(n_list.size());
    parallel_for(n_list.size(), threads,
                 [&](std::size_t i) { out[i] = make_record(p, rstar_ladder(n_list[i], beta_e0)); });
    return out;
}

std::vector<CorrelationPoint> correlation_scaling(double p, double beta_e0,
                                                  std::span<const std::size_t> n_list) {
    std::vector<CorrelationPoint> out;
    for (const auto& r : sweep_n(p, beta_e0, n_list)) out.push_back({r.n, r.mutual_info});
    return out;
}

double rate_statistic(std::span<const SweepRecord> records) {
    double sup = 0.0;
    for (const auto& r : records) {
        if (r.n >= 2) sup = std::max(sup, r.gap * double(r.n) / std::log(double(r.n)));
    }
    return sup;
}

std::vector<std::size_t> dyadic_grid(unsigned lo_exp, unsigned hi_exp) {
    std::vector<std::size_t> out;
    for (unsigned e = lo_exp; e <= hi_exp; ++e) out.push_back(std::size_t{1} << e);
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (points < 2) return {lo};
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + (hi - lo) * double(i) / double(points - 1);
    out.back() = hi;
    return out;
}

}  // namespace corrtherm
