#include "corrtherm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "corrtherm/errors.hpp"
#include "corrtherm/hetero.hpp"
#include "corrtherm/lpsolver.hpp"
#include "corrtherm/majorization.hpp"
#include "corrtherm/qubit_analytic.hpp"

namespace corrtherm::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Problem {
    LocalSystem system;
    DiagonalState state;
};

LocalSystem resolve_system(const RunConfig& cfg) {
    if (cfg.temperature && cfg.energies.empty()) {
        throw UsageError("--temperature needs --energies");
    }
    if (!cfg.energies.empty()) {
        LocalSystem sys;
        sys.levels = cfg.energies;
        if (cfg.temperature) {
            if (!(*cfg.temperature > 0.0)) throw InvalidInput("temperature must be positive");
            for (double& e : sys.levels) e /= *cfg.temperature;
        }
        sys.quantum = cfg.quantum;
        return sys;
    }
    if (cfg.beta_e0) return LocalSystem::qubit(*cfg.beta_e0);
    throw UsageError("either --energies or --beta-e0 is required");
}

DiagonalState resolve_state(const RunConfig& cfg, const std::vector<double>& probs) {
    if (!probs.empty()) return DiagonalState{probs};
    if (cfg.p) return DiagonalState::qubit(*cfg.p);
    throw UsageError("either --probs or --p is required");
}

Problem resolve_problem(const RunConfig& cfg) {
    auto sys = resolve_system(cfg);
    auto state = resolve_state(cfg, cfg.probs);
    if (state.probs.size() != sys.dim()) {
        throw InvalidInput("state length must match the number of energy levels");
    }
    auto [csys, cstate] = canonicalize(sys, state);
    csys.validate();
    cstate.validate(csys);
    return {csys, cstate};
}

double qubit_gap(const RunConfig& cfg) {
    const auto sys = resolve_system(cfg);
    sys.validate();
    if (sys.dim() != 2) throw InvalidInput("this command needs a two-level system");
    return sys.levels[1] - sys.levels[0];
}

std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

DistributionSpec resolve_distribution(const RunConfig& cfg) {
    if (!cfg.box.empty()) {
        if (cfg.box.size() != 4) throw UsageError("--box takes p_lo,p_hi,gap_lo,gap_hi");
        return DistributionSpec::uniform_box({cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3]});
    }
    std::vector<Atom> atoms;
    for (const auto& text : cfg.atoms) {
        auto parts = split(text, ':');
        if (parts.size() != 3) throw UsageError("--atom takes WEIGHT:P1,P2,...:E1,E2,...");
        const auto w = split_doubles(parts[0]);
        if (w.size() != 1) throw UsageError("atom weight must be a single number");
        LocalSystem sys{split_doubles(parts[2]), std::nullopt};
        DiagonalState st{split_doubles(parts[1])};
        auto [csys, cst] = canonicalize(sys, st);
        atoms.push_back({csys, cst, w[0]});
    }
    for (const auto& text : cfg.qubit_atoms) {
        const auto v = split_doubles(text);
        if (v.size() != 3) throw UsageError("--qubit-atom takes WEIGHT,P,GAP");
        atoms.push_back({LocalSystem::qubit(v[2]), DiagonalState::qubit(v[1]), v[0]});
    }
    if (atoms.empty()) {
        auto prob = resolve_problem(cfg);
        return DistributionSpec::point_mass(prob.system, prob.state);
    }
    if (atoms.size() == 1 && atoms[0].weight == 1.0) {
        return DistributionSpec::point_mass(atoms[0].system, atoms[0].state);
    }
    return DistributionSpec::discrete(std::move(atoms));
}

std::string cell_text(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_number(*d);
    if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

double cell_value(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return *d;
    if (auto i = std::get_if<std::int64_t>(&c)) return double(*i);
    return std::nan("");
}

std::string to_text(const Table& t) {
    std::ostringstream os;
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < t.columns.size(); ++k) {
            os << t.columns[k] << " = " << cell_text(row[k]) << '\n';
        }
    }
    return os.str();
}

void write_atomically(const std::string& path, const std::string& body) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InvalidInput("cannot open output file " + tmp.string());
        f << body;
        if (!f) throw InvalidInput("failed writing output file " + tmp.string());
    }
    fs::rename(tmp, target);
}

struct Rendered {
    Table table;
    std::string default_format = "csv";
    std::string text;
    std::string x_column;
    std::vector<std::string> series;
};

std::string render(const Rendered& r, const std::string& format) {
    const std::string fmt = format.empty() ? r.default_format : format;
    if (fmt == "csv") return to_csv(r.table);
    if (fmt == "json") return to_json(r.table);
    if (fmt == "svg") {
        if (r.x_column.empty()) throw UsageError("svg output is not available for this command");
        return to_svg(r.table, r.x_column, r.series);
    }
    if (fmt == "text") return r.text.empty() ? to_text(r.table) : r.text;
    throw UsageError("unknown format '" + fmt + "' (expected csv, json, svg or text)");
}

Rendered cmd_solve(const RunConfig& cfg) {
    const auto prob = resolve_problem(cfg);
    if (cfg.n < 1) throw InvalidInput("number of copies must be at least 1");
    const auto single = work_budget_single(prob.state, prob.system);
    WorkBudget w;
    double mutual = 0.0;
    std::string exact_value;
    const bool analytic = prob.system.dim() == 2 && !cfg.exact;
    if (analytic) {
        const double gap = prob.system.levels[1] - prob.system.levels[0];
        const auto lad = rstar_ladder(cfg.n, gap);
        const auto opt = analytic_cwork(prob.state.probs[1], lad);
        w = opt.works;
        mutual = qubit_mutual_information(opt, lad, prob.state.probs[1]);
    } else {
        const auto res =
            cwork_lp(prob.state, prob.system, cfg.n, cfg.exact ? LpMode::ExactRational : LpMode::Float);
        w = res.works;
        mutual = mutual_information(res.occupations, res.spectrum, prob.system, prob.state).mutual_information;
        if (res.solution.exact) exact_value = res.solution.exact->value;
    }
    Rendered r;
    r.default_format = "text";
    r.table.columns = {"n", "formation", "extraction", "irreversible", "delta_f", "mutual_info",
                       "work_per_copy", "single_copy_formation"};
    const double n = double(cfg.n);
    r.table.rows.push_back({std::int64_t(cfg.n), w.formation, w.extraction, w.irreversible, w.delta_f,
                            mutual, w.formation / n, single.formation});
    if (!exact_value.empty()) {
        r.table.columns.push_back("exact_value");
        r.table.rows.back().push_back(exact_value);
    }
    return r;
}

Rendered cmd_rstates(const RunConfig& cfg) {
    const double gap = qubit_gap(cfg);
    if (cfg.n < 1) throw InvalidInput("number of copies must be at least 1");
    const auto lad = rstar_ladder(cfg.n, gap);
    Rendered r;
    r.default_format = "text";
    r.table.columns = {"k", "p", "log_partial_sum"};
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    for (std::size_t k = 0; k < lad.size(); ++k) {
        r.table.rows.push_back({std::int64_t(k), lad.p_values[k], lad.log_partial_sums[k]});
        os << lad.p_values[k] << '\n';
    }
    r.text = os.str();
    r.x_column = "k";
    r.series = {"p"};
    return r;
}

Rendered cmd_sweep(const RunConfig& cfg) {
    const double gap = qubit_gap(cfg);
    auto grid = cfg.p_grid.empty() ? uniform_grid(0.0, 1.0, cfg.points) : cfg.p_grid;
    Rendered r;
    r.table = sweep_table(sweep_p(cfg.n, gap, grid, cfg.threads));
    r.x_column = "p";
    r.series = {"work_per_copy", "extraction_per_copy", "delta_f", "single_copy_formation"};
    return r;
}

Rendered cmd_limit(const RunConfig& cfg) {
    const double gap = qubit_gap(cfg);
    if (!cfg.p) throw UsageError("--p is required");
    auto n_list = cfg.n_list.empty() ? dyadic_grid(0, cfg.max_exp) : cfg.n_list;
    Rendered r;
    r.table = sweep_table(sweep_n(*cfg.p, gap, n_list, cfg.threads));
    r.x_column = "n";
    r.series = {"work_per_copy", "delta_f", "gap"};
    return r;
}

Rendered cmd_majorize(const RunConfig& cfg) {
    auto sys = resolve_system(cfg);
    sys.validate();
    const auto thermal = DiagonalState::thermal(sys);
    const DiagonalState src = cfg.src.empty() ? thermal : DiagonalState{cfg.src};
    const DiagonalState dst = cfg.dst.empty() ? thermal : DiagonalState{cfg.dst};
    src.validate(sys);
    dst.validate(sys);
    Rendered r;
    r.default_format = "text";
    if (cfg.work) {
        r.table.columns = {"work", "feasible"};
        bool ok = can_transform(src, dst, sys, sys, *cfg.work);
        r.table.rows.push_back({*cfg.work, std::int64_t(ok ? 1 : 0)});
    } else {
        r.table.columns = {"min_work"};
        r.table.rows.push_back({min_work(src, dst, sys, cfg.tol)});
    }
    return r;
}

Rendered cmd_hetero(const RunConfig& cfg) {
    const auto spec = resolve_distribution(cfg);
    EnsembleMode mode;
    if (cfg.mode == "exact") mode = EnsembleMode::Exact;
    else if (cfg.mode == "grouped") mode = EnsembleMode::ClassGrouped;
    else throw UsageError("--mode must be exact or grouped");
    const std::size_t cap = dim_cap_from_env();
    auto n_list = cfg.n_list.empty() ? std::vector<std::size_t>{cfg.n} : cfg.n_list;
    Rendered r;
    r.table.columns = {"n", "mode", "work_per_copy", "mean_delta_f", "gap", "upper_bound", "class_count"};
    for (auto n : n_list) {
        const auto rec = ensemble_experiment(spec, n, cfg.seed, mode, cap);
        r.table.rows.push_back({std::int64_t(rec.n), std::string(mode == EnsembleMode::Exact ? "exact" : "grouped"),
                                rec.work_per_copy, rec.mean_delta_f, rec.gap,
                                std::int64_t(rec.upper_bound ? 1 : 0), std::int64_t(rec.class_count)});
    }
    r.x_column = "n";
    r.series = {"work_per_copy", "mean_delta_f"};
    return r;
}

void add_system_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--energies", cfg.energies, "Energy levels (kT units, or physical with --temperature)")
        ->delimiter(',');
    sub->add_option("--beta-e0", cfg.beta_e0, "Qubit gap beta*E0");
    sub->add_option("--temperature", cfg.temperature, "Temperature used to convert --energies to beta*E");
    sub->add_option("--quantum", cfg.quantum, "Lattice step of the energy levels");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--output,-o", cfg.output, "Write results to this file");
    sub->add_option("--format", cfg.format, "csv, json, svg or text");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0) x = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_text(row[k]);
        os << '\n';
    }
    return os.str();
}

std::string to_json(const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t k = 0; k < t.columns.size(); ++k) {
            const auto& c = row[k];
            if (auto d = std::get_if<double>(&c)) {
                if (std::isfinite(*d)) obj[t.columns[k]] = std::stod(format_number(*d));
                else obj[t.columns[k]] = format_number(*d);
            } else if (auto i = std::get_if<std::int64_t>(&c)) {
                obj[t.columns[k]] = *i;
            } else {
                obj[t.columns[k]] = std::get<std::string>(c);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string to_svg(const Table& t, const std::string& x_column, const std::vector<std::string>& series) {
    auto col = [&](const std::string& name) {
        auto it = std::find(t.columns.begin(), t.columns.end(), name);
        if (it == t.columns.end()) throw InvalidInput("no column named " + name);
        return std::size_t(it - t.columns.begin());
    };
    const std::size_t xc = col(x_column);
    std::vector<std::size_t> ys;
    for (const auto& s : series) ys.push_back(col(s));

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& row : t.rows) {
        double x = cell_value(row[xc]);
        if (!std::isfinite(x)) continue;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        for (auto yc : ys) {
            double y = cell_value(row[yc]);
            if (!std::isfinite(y)) continue;
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double w = 640, h = 400, m = 50;
    auto px = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 2 * m); };
    auto py = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 2 * m); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << x_column << "</text>\n";
    os << "<text x=\"" << m << "\" y=\"" << h - m + 15 << "\" font-size=\"10\">" << format_number(x0) << "</text>\n";
    os << "<text x=\"" << w - m << "\" y=\"" << h - m + 15 << "\" font-size=\"10\" text-anchor=\"end\">"
       << format_number(x1) << "</text>\n";
    os << "<text x=\"" << m - 5 << "\" y=\"" << h - m << "\" font-size=\"10\" text-anchor=\"end\">"
       << format_number(y0) << "</text>\n";
    os << "<text x=\"" << m - 5 << "\" y=\"" << m << "\" font-size=\"10\" text-anchor=\"end\">"
       << format_number(y1) << "</text>\n";
    for (std::size_t s = 0; s < ys.size(); ++s) {
        const char* color = colors[s % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        bool first = true;
        for (const auto& row : t.rows) {
            double x = cell_value(row[xc]), y = cell_value(row[ys[s]]);
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            os << (first ? "" : " ") << format_number(px(x)) << ',' << format_number(py(y));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << w - m << "\" y=\"" << m + 15 * double(s) << "\" font-size=\"11\" fill=\"" << color
           << "\" text-anchor=\"end\">" << series[s] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Table sweep_table(const std::vector<SweepRecord>& records) {
    Table t;
    t.columns = {"n", "p", "work_per_copy", "extraction_per_copy", "delta_f", "gap", "mutual_info",
                 "single_copy_formation", "ratio"};
    for (const auto& r : records) {
        t.rows.push_back({std::int64_t(r.n), r.p, r.work_per_copy, r.extraction_per_copy, r.delta_f, r.gap,
                          r.mutual_info, r.single_copy_formation, r.ratio});
    }
    return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Correlated work of formation solver and experiment harness", "corrtherm"};
    app.set_config("--config", "", "INI file with one [section] per subcommand");
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "Minimal work to form N correlated copies of a state");
    add_system_options(solve, cfg);
    solve->add_option("--probs", cfg.probs, "Local occupation probabilities")->delimiter(',');
    solve->add_option("--p", cfg.p, "Qubit excited-state probability");
    solve->add_option("--n", cfg.n, "Number of copies");
    solve->add_flag("--exact", cfg.exact, "Solve the LP in exact rational arithmetic");
    add_output_options(solve, cfg);

    auto* rstates = app.add_subcommand("rstates", "Reversible-state ladder of a qubit");
    add_system_options(rstates, cfg);
    rstates->add_option("--n", cfg.n, "Number of copies");
    add_output_options(rstates, cfg);

    auto* sweep = app.add_subcommand("sweep", "Works per copy across a grid of qubit states");
    add_system_options(sweep, cfg);
    sweep->add_option("--n", cfg.n, "Number of copies");
    sweep->add_option("--p-grid", cfg.p_grid, "Explicit p values")->delimiter(',');
    sweep->add_option("--points", cfg.points, "Uniform grid size on [0, 1] when --p-grid is absent");
    sweep->add_option("--threads", cfg.threads, "Worker threads");
    add_output_options(sweep, cfg);

    auto* limit = app.add_subcommand("limit", "Convergence of the work per copy with N");
    add_system_options(limit, cfg);
    limit->add_option("--p", cfg.p, "Qubit excited-state probability");
    limit->add_option("--n-list", cfg.n_list, "Ascending copy numbers")->delimiter(',');
    limit->add_option("--max-exp", cfg.max_exp, "Use N = 2^0 .. 2^max-exp when --n-list is absent");
    limit->add_option("--threads", cfg.threads, "Worker threads");
    add_output_options(limit, cfg);

    auto* major = app.add_subcommand("majorize", "Thermo-majorization feasibility and minimal work");
    add_system_options(major, cfg);
    major->add_option("--src", cfg.src, "Source probabilities (default thermal)")->delimiter(',');
    major->add_option("--dst", cfg.dst, "Target probabilities (default thermal)")->delimiter(',');
    major->add_option("--work", cfg.work, "Test feasibility at this work instead of bisecting");
    major->add_option("--tol", cfg.tol, "Bisection tolerance");
    add_output_options(major, cfg);

    auto* hetero = app.add_subcommand("hetero", "Non-identical subsystems sampled from a distribution");
    add_system_options(hetero, cfg);
    hetero->add_option("--probs", cfg.probs, "Point-mass state probabilities")->delimiter(',');
    hetero->add_option("--p", cfg.p, "Point-mass qubit excited-state probability");
    hetero->add_option("--atom", cfg.atoms, "Atom WEIGHT:P1,P2,...:E1,E2,... (repeatable)");
    hetero->add_option("--qubit-atom", cfg.qubit_atoms, "Qubit atom WEIGHT,P,GAP (repeatable)");
    hetero->add_option("--box", cfg.box, "Uniform qubit box p_lo,p_hi,gap_lo,gap_hi")->delimiter(',');
    hetero->add_option("--n", cfg.n, "Ensemble size");
    hetero->add_option("--n-list", cfg.n_list, "Several ensemble sizes (nested samples)")->delimiter(',');
    hetero->add_option("--seed", cfg.seed, "Sampling seed");
    hetero->add_option("--mode", cfg.mode, "exact or grouped");
    add_output_options(hetero, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        Rendered r;
        if (solve->parsed()) r = cmd_solve(cfg);
        else if (rstates->parsed()) r = cmd_rstates(cfg);
        else if (sweep->parsed()) r = cmd_sweep(cfg);
        else if (limit->parsed()) r = cmd_limit(cfg);
        else if (major->parsed()) r = cmd_majorize(cfg);
        else r = cmd_hetero(cfg);
        const std::string body = render(r, cfg.format);
        if (cfg.output.empty()) out << body;
        else write_atomically(cfg.output, body);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace corrtherm::cli
