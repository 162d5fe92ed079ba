#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corrtherm/cli.hpp"

using namespace corrtherm;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("corrtherm_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// Value of `key = value` in text output.
double text_value(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind(key + " = ", 0) == 0) return std::stod(line.substr(key.size() + 3));
    }
    FAIL("missing key " << key);
    return NAN;
}

}  // namespace

TEST_CASE("rstates example") {
    auto r = call({"rstates", "--n", "2", "--beta-e0", "1e-12"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.000000\n0.333333\n0.500000\n0.666667\n1.000000\n");
}

TEST_CASE("exit codes") {
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"solve", "--n", "two", "--p", "0.3", "--beta-e0", "1"}).code == 2);
    CHECK(call({"solve", "--p", "0.3"}).code == 2);
    CHECK(call({"sweep", "--beta-e0", "1", "--format", "xml"}).code == 2);
    CHECK(call({"solve", "--p", "0.3", "--beta-e0", "1", "--format", "svg"}).code == 2);

    auto bad = call({"solve", "--probs", "0.5,0.6", "--beta-e0", "1", "--n", "2"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("sum to 1") != std::string::npos);
    CHECK(call({"solve", "--probs", "0.2,0.3,0.5", "--energies", "0,1,1", "--n", "2"}).code == 1);
    CHECK(call({"limit", "--p", "0.3", "--beta-e0", "1", "--n-list", "4,2"}).code == 1);
    CHECK(call({"rstates", "--n", "2", "--beta-e0", "-1"}).code == 1);
    // solve relabels levels, so a negative gap is the mirrored qubit.
    CHECK(call({"solve", "--p", "0.3", "--beta-e0", "-1", "--n", "3"}).out ==
          call({"solve", "--p", "0.7", "--beta-e0", "1", "--n", "3"}).out);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("solve anchor") {
    auto r = call({"solve", "--p", "0.75", "--beta-e0", "1e-15", "--n", "2"});
    REQUIRE(r.code == 0);
    CHECK(text_value(r.out, "formation") == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(text_value(r.out, "extraction") == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-10));
    CHECK(text_value(r.out, "irreversible") == doctest::Approx(std::log(1.5)).epsilon(1e-10));

    auto ex = call({"solve", "--probs", "0.25,0.75", "--energies", "0,1e-15", "--n", "2", "--exact"});
    REQUIRE(ex.code == 0);
    CHECK(ex.out.find("exact_value = 2\n") != std::string::npos);
    CHECK(text_value(ex.out, "mutual_info") == doctest::Approx(text_value(r.out, "mutual_info")).epsilon(1e-9));
}

TEST_CASE("temperature conversion") {
    auto a = call({"solve", "--p", "0.2", "--energies", "0,3", "--temperature", "2", "--n", "4"});
    auto b = call({"solve", "--p", "0.2", "--beta-e0", "1.5", "--n", "4"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(call({"solve", "--p", "0.2", "--energies", "0,3", "--temperature", "0"}).code == 1);
    CHECK(call({"solve", "--p", "0.2", "--beta-e0", "1", "--temperature", "2"}).code == 2);
}

TEST_CASE("LP and analytic paths agree") {
    auto a = call({"solve", "--p", "0.83", "--beta-e0", "0.7", "--n", "5"});
    auto b = call({"solve", "--probs", "0.17,0.83", "--energies", "0,0.7", "--n", "5", "--exact"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    for (const char* k : {"formation", "extraction", "delta_f", "mutual_info"}) {
        CHECK(text_value(a.out, k) == doctest::Approx(text_value(b.out, k)).epsilon(1e-9));
    }
}

TEST_CASE("CSV is reproducible and matches JSON") {
    std::vector<std::string> base{"sweep", "--n", "7", "--beta-e0", "1", "--points", "41", "--threads", "3"};
    auto a = call(base);
    auto b = call(base);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    auto rows = parse_csv(a.out);
    REQUIRE(rows.size() == 42);
    CHECK(rows[0] == std::vector<std::string>{"n", "p", "work_per_copy", "extraction_per_copy", "delta_f", "gap",
                                              "mutual_info", "single_copy_formation", "ratio"});
    auto jargs = base;
    jargs.insert(jargs.end(), {"--format", "json"});
    auto j = nlohmann::json::parse(call(jargs).out);
    REQUIRE(j.size() == 41);
    for (std::size_t i = 0; i < 41; ++i) {
        for (std::size_t k = 0; k < rows[0].size(); ++k) {
            double csv = std::stod(rows[i + 1][k]);
            double js = j[i][rows[0][k]].get<double>();
            CHECK(cli::format_number(csv) == cli::format_number(js));
        }
    }

    auto h1 = call({"hetero", "--qubit-atom", "0.5,0.1,1", "--qubit-atom", "0.5,0.8,0.6931", "--n-list", "10,100",
                    "--seed", "5"});
    auto h2 = call({"hetero", "--qubit-atom", "0.5,0.1,1", "--qubit-atom", "0.5,0.8,0.6931", "--n-list", "10,100",
                    "--seed", "5"});
    REQUIRE(h1.code == 0);
    CHECK(h1.out == h2.out);
    CHECK(parse_csv(h1.out).size() == 3);
}

TEST_CASE("number formatting") {
    CHECK(cli::format_number(0.5) == "0.5");
    CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(cli::format_number(2.0) == "2");
    cli::Table t{{"a", "b"}, {{1.0 / 3.0, std::int64_t(4)}, {std::string("x"), 2.5}}};
    CHECK(cli::to_csv(t) == "a,b\n0.333333333333,4\nx,2.5\n");
    auto j = nlohmann::json::parse(cli::to_json(t));
    CHECK(j[0]["b"] == 4);
    CHECK(j[1]["a"] == "x");
}

TEST_CASE("atomic file output and svg") {
    auto path = scratch("sweep.csv");
    fs::remove(path);
    auto r = call({"sweep", "--n", "3", "--beta-e0", "1", "--points", "11", "-o", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(fs::exists(path));
    CHECK(!fs::exists(path.string() + ".tmp"));
    CHECK(slurp(path) == call({"sweep", "--n", "3", "--beta-e0", "1", "--points", "11"}).out);

    auto svg = call({"limit", "--p", "0.9", "--beta-e0", "1", "--max-exp", "8", "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.rfind("<svg", 0) == 0);
    CHECK(svg.out.find("<polyline") != std::string::npos);
    CHECK(svg.out.find("</svg>") != std::string::npos);

    auto missing = call({"rstates", "--n", "2", "--beta-e0", "1", "-o", "/nonexistent/dir/x.csv"});
    CHECK(missing.code == 1);
}

TEST_CASE("config file with flag override") {
    auto cfg = scratch("run.ini");
    {
        std::ofstream f(cfg);
        f << "[solve]\np = 0.75\nbeta-e0 = 1e-15\nn = 3\n";
    }
    auto from_file = call({"--config", cfg.string(), "solve"});
    REQUIRE(from_file.code == 0);
    CHECK(text_value(from_file.out, "n") == 3);
    auto direct = call({"solve", "--p", "0.75", "--beta-e0", "1e-15", "--n", "3"});
    CHECK(from_file.out == direct.out);
    auto override = call({"--config", cfg.string(), "solve", "--n", "2"});
    REQUIRE(override.code == 0);
    CHECK(text_value(override.out, "n") == 2);
    CHECK(text_value(override.out, "formation") == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(call({"--config", scratch("absent.ini").string(), "solve"}).code == 2);
}

TEST_CASE("majorize command") {
    auto w = call({"majorize", "--energies", "0,1", "--dst", "0,1"});
    REQUIRE(w.code == 0);
    // D_inf of the excited level against Gibbs weights {1, e^{-1}}/Z.
    CHECK(text_value(w.out, "min_work") == doctest::Approx(1.0 + std::log1p(std::exp(-1.0))).epsilon(1e-8));
    auto f = call({"majorize", "--energies", "0,1", "--dst", "0,1", "--work", "0.5"});
    CHECK(text_value(f.out, "feasible") == 0);
}

TEST_CASE("installed binary") {
    const char* exe = std::getenv("CORRTHERM_CLI");
    if (!exe) return;
    std::string cmd = std::string(exe) + " rstates --n 2 --beta-e0 1e-12";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    int status = ::pclose(pipe);
    CHECK(status == 0);
    CHECK(out == "0.000000\n0.333333\n0.500000\n0.666667\n1.000000\n");
    CHECK(WEXITSTATUS(std::system((std::string(exe) + " nope >/dev/null 2>&1").c_str())) == 2);
    CHECK(WEXITSTATUS(std::system((std::string(exe) + " solve --probs 0.5,0.6 --beta-e0 1 >/dev/null 2>&1").c_str())) == 1);
}
