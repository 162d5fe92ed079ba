#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "corrtherm/asymptotics.hpp"
#include "corrtherm/cli.hpp"
#include "corrtherm/errors.hpp"
#include "corrtherm/freeenergy.hpp"
#include "corrtherm/hetero.hpp"
#include "corrtherm/lpsolver.hpp"
#include "corrtherm/majorization.hpp"
#include "corrtherm/qubit_analytic.hpp"
#include "corrtherm/spectrum.hpp"

namespace py = pybind11;
using namespace corrtherm;

namespace {

LocalSystem make_system(const std::vector<double>& energies, std::optional<double> quantum = std::nullopt) {
    LocalSystem sys{energies, quantum};
    sys.validate();
    return sys;
}

std::pair<LocalSystem, DiagonalState> make_problem(const std::vector<double>& probs,
                                                   const std::vector<double>& energies,
                                                   std::optional<double> quantum) {
    LocalSystem sys{energies, quantum};
    DiagonalState st{probs};
    if (st.probs.size() != sys.dim()) throw InvalidInput("probs and energies must have the same length");
    auto [csys, cst] = canonicalize(sys, st);
    csys.validate();
    cst.validate(csys);
    return {csys, cst};
}

py::dict cwork_py(const std::vector<double>& probs, const std::vector<double>& energies, std::size_t n,
                  bool exact, std::optional<double> quantum) {
    auto [sys, st] = make_problem(probs, energies, quantum);
    const auto res = cwork_lp(st, sys, n, exact ? LpMode::ExactRational : LpMode::Float);
    const auto corr = mutual_information(res.occupations, res.spectrum, sys, st);
    std::vector<double> levels;
    for (const auto& e : res.spectrum.entries) levels.push_back(e.energy);
    py::dict d;
    d["works"] = res.works;
    d["mutual_info"] = corr.mutual_information;
    d["q"] = res.solution.q;
    d["occupations"] = res.occupations;
    d["level_energies"] = levels;
    d["intermediate_count"] = res.solution.intermediate_count;
    if (res.solution.exact) {
        d["exact_value"] = res.solution.exact->value;
        d["exact_support_mass"] = res.solution.exact->support_mass;
        d["exact_q"] = res.solution.exact->q;
    } else {
        d["exact_value"] = py::none();
    }
    return d;
}

DistributionSpec make_spec(const std::optional<std::vector<std::tuple<double, std::vector<double>, std::vector<double>>>>& atoms,
                           const std::optional<std::tuple<double, double, double, double>>& box) {
    if (atoms.has_value() == box.has_value()) throw InvalidInput("give exactly one of atoms or box");
    if (box) {
        auto [a, b, c, d] = *box;
        return DistributionSpec::uniform_box({a, b, c, d});
    }
    std::vector<Atom> out;
    for (const auto& [w, probs, energies] : *atoms) out.push_back({LocalSystem{energies}, DiagonalState{probs}, w});
    if (out.size() == 1 && out[0].weight == 1.0) return DistributionSpec::point_mass(out[0].system, out[0].state);
    return DistributionSpec::discrete(std::move(out));
}

template <class T>
std::string repr_fields(const char* name, const std::vector<std::pair<const char*, T>>& fields) {
    std::ostringstream os;
    os.precision(12);
    os << name << '(';
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? ", " : "") << fields[i].first << '=' << fields[i].second;
    os << ')';
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_corrtherm, m) {
    m.doc() = "Correlated work of formation solvers";

    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
    py::register_exception<ConstraintViolation>(m, "ConstraintViolation", base.ptr());
    py::register_exception<InternalError>(m, "InternalError", base.ptr());

    py::class_<WorkBudget>(m, "WorkBudget")
        .def_readonly("formation", &WorkBudget::formation)
        .def_readonly("extraction", &WorkBudget::extraction)
        .def_readonly("irreversible", &WorkBudget::irreversible)
        .def_readonly("delta_f", &WorkBudget::delta_f)
        .def("__repr__", [](const WorkBudget& w) {
            return repr_fields<double>("WorkBudget", {{"formation", w.formation},
                                                      {"extraction", w.extraction},
                                                      {"irreversible", w.irreversible},
                                                      {"delta_f", w.delta_f}});
        });

    py::class_<QubitOptimum>(m, "QubitOptimum")
        .def_property_readonly("side",
                               [](const QubitOptimum& o) {
                                   return o.side == Side::Below ? "below" : o.side == Side::Above ? "above" : "thermal";
                               })
        .def_property_readonly("support", [](const QubitOptimum& o) { return std::make_pair(o.u_lo, o.u_hi); })
        .def_readonly("m_star", &QubitOptimum::m_star)
        .def_readonly("s", &QubitOptimum::s)
        .def_readonly("q_value", &QubitOptimum::q_value)
        .def_readonly("log_gamma", &QubitOptimum::log_gamma)
        .def_readonly("works", &QubitOptimum::works)
        .def_readonly("segment", &QubitOptimum::segment)
        .def_readonly("mix", &QubitOptimum::mix);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("n", &SweepRecord::n)
        .def_readonly("p", &SweepRecord::p)
        .def_readonly("work_per_copy", &SweepRecord::work_per_copy)
        .def_readonly("extraction_per_copy", &SweepRecord::extraction_per_copy)
        .def_readonly("delta_f", &SweepRecord::delta_f)
        .def_readonly("gap", &SweepRecord::gap)
        .def_readonly("mutual_info", &SweepRecord::mutual_info)
        .def_readonly("single_copy_formation", &SweepRecord::single_copy_formation)
        .def_readonly("ratio", &SweepRecord::ratio);

    py::class_<EnsembleRecord>(m, "EnsembleRecord")
        .def_readonly("n", &EnsembleRecord::n)
        .def_property_readonly("mode",
                               [](const EnsembleRecord& r) { return r.mode == EnsembleMode::Exact ? "exact" : "grouped"; })
        .def_readonly("work_per_copy", &EnsembleRecord::work_per_copy)
        .def_readonly("mean_delta_f", &EnsembleRecord::mean_delta_f)
        .def_readonly("gap", &EnsembleRecord::gap)
        .def_readonly("upper_bound", &EnsembleRecord::upper_bound)
        .def_readonly("class_count", &EnsembleRecord::class_count);

    m.def(
        "renyi_divergence",
        [](const std::vector<double>& probs, const std::vector<double>& energies, double alpha) {
            auto [sys, st] = make_problem(probs, energies, std::nullopt);
            return renyi_divergence(st, sys, alpha);
        },
        py::arg("probs"), py::arg("energies"), py::arg("alpha"),
        "D_alpha(rho || Gibbs); alpha = inf gives the max-divergence.");
    m.def(
        "free_energy_difference",
        [](const std::vector<double>& probs, const std::vector<double>& energies) {
            auto [sys, st] = make_problem(probs, energies, std::nullopt);
            return free_energy_difference(st, sys);
        },
        py::arg("probs"), py::arg("energies"));
    m.def(
        "work_budget_single",
        [](const std::vector<double>& probs, const std::vector<double>& energies) {
            auto [sys, st] = make_problem(probs, energies, std::nullopt);
            return work_budget_single(st, sys);
        },
        py::arg("probs"), py::arg("energies"));

    m.def("cwork", &cwork_py, py::arg("probs"), py::arg("energies"), py::arg("n"), py::arg("exact") = false,
          py::arg("quantum") = py::none(), "Minimal work to form n correlated copies with the given marginal.");

    m.def(
        "analytic_cwork", [](double p, std::size_t n, double beta_e0) { return analytic_cwork(p, n, beta_e0); },
        py::arg("p"), py::arg("n"), py::arg("beta_e0"));
    m.def(
        "rstar_ladder", [](std::size_t n, double beta_e0) { return rstar_ladder(n, beta_e0).p_values; },
        py::arg("n"), py::arg("beta_e0"));
    m.def("quasi_thermal_interval", &quasi_thermal_interval, py::arg("n"), py::arg("beta_e0"));
    m.def(
        "rstar_spacing_stats",
        [](std::size_t n, double beta_e0, double tail_cut) {
            auto st = rstar_spacing_stats(n, beta_e0, tail_cut);
            py::dict d;
            d["min"] = st.min;
            d["median"] = st.median;
            d["max"] = st.max;
            d["values"] = st.values;
            return d;
        },
        py::arg("n"), py::arg("beta_e0"), py::arg("tail_cut"));

    m.def(
        "can_transform",
        [](const std::vector<double>& src, const std::vector<double>& dst, const std::vector<double>& energies,
           double work, std::optional<std::vector<double>> dst_energies) {
            auto a = make_system(energies);
            auto b = make_system(dst_energies.value_or(energies));
            return can_transform(DiagonalState{src}, DiagonalState{dst}, a, b, work);
        },
        py::arg("src"), py::arg("dst"), py::arg("energies"), py::arg("work"), py::arg("dst_energies") = py::none());
    m.def(
        "min_work",
        [](const std::vector<double>& src, const std::vector<double>& dst, const std::vector<double>& energies,
           double tol, std::optional<std::vector<double>> dst_energies) {
            auto a = make_system(energies);
            auto b = make_system(dst_energies.value_or(energies));
            return min_work(DiagonalState{src}, DiagonalState{dst}, a, b, tol);
        },
        py::arg("src"), py::arg("dst"), py::arg("energies"), py::arg("tol") = 1e-10,
        py::arg("dst_energies") = py::none());

    m.def(
        "sweep_p",
        [](std::size_t n, double beta_e0, const std::vector<double>& grid, unsigned threads) {
            return sweep_p(n, beta_e0, grid, threads);
        },
        py::arg("n"), py::arg("beta_e0"), py::arg("p_grid"), py::arg("threads") = 1);
    m.def(
        "sweep_n",
        [](double p, double beta_e0, const std::vector<std::size_t>& ns, unsigned threads) {
            return sweep_n(p, beta_e0, ns, threads);
        },
        py::arg("p"), py::arg("beta_e0"), py::arg("n_list"), py::arg("threads") = 1);
    m.def(
        "correlation_scaling",
        [](double p, double beta_e0, const std::vector<std::size_t>& ns) {
            std::vector<std::pair<std::size_t, double>> out;
            for (const auto& pt : correlation_scaling(p, beta_e0, ns)) out.emplace_back(pt.n, pt.mutual_info);
            return out;
        },
        py::arg("p"), py::arg("beta_e0"), py::arg("n_list"));
    m.def("dyadic_grid", &dyadic_grid, py::arg("lo_exp"), py::arg("hi_exp"));

    m.def(
        "cwork_ensemble",
        [](const std::vector<std::pair<std::vector<double>, std::vector<double>>>& members, bool exact) {
            Ensemble ens;
            for (const auto& [probs, energies] : members) ens.members.push_back({LocalSystem{energies}, DiagonalState{probs}});
            return cwork_ensemble(ens, exact ? LpMode::ExactRational : LpMode::Float, dim_cap_from_env()).works;
        },
        py::arg("members"), py::arg("exact") = false, "members: list of (probs, energies) pairs.");
    m.def(
        "ensemble_experiment",
        [](std::size_t n, std::uint64_t seed, const std::string& mode,
           const std::optional<std::vector<std::tuple<double, std::vector<double>, std::vector<double>>>>& atoms,
           const std::optional<std::tuple<double, double, double, double>>& box) {
            EnsembleMode md;
            if (mode == "exact") md = EnsembleMode::Exact;
            else if (mode == "grouped") md = EnsembleMode::ClassGrouped;
            else throw InvalidInput("mode must be 'exact' or 'grouped'");
            return ensemble_experiment(make_spec(atoms, box), n, seed, md, dim_cap_from_env());
        },
        py::arg("n"), py::arg("seed"), py::arg("mode") = "grouped", py::arg("atoms") = py::none(),
        py::arg("box") = py::none(),
        "atoms: list of (weight, probs, energies); box: (p_lo, p_hi, gap_lo, gap_hi).");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line front end in-process; returns (code, stdout, stderr).");
}
