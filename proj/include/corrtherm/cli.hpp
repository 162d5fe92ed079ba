#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corrtherm/asymptotics.hpp"

namespace corrtherm::cli {

struct RunConfig {
    std::string command;
    std::vector<double> energies;
    std::optional<double> beta_e0;
    std::optional<double> temperature;
    std::optional<double> quantum;
    std::vector<double> probs;
    std::optional<double> p;
    std::size_t n = 1;
    std::vector<std::size_t> n_list;
    unsigned max_exp = 14;
    std::vector<double> p_grid;
    std::size_t points = 101;
    bool exact = false;
    std::string mode = "grouped";
    std::vector<double> src;
    std::vector<double> dst;
    std::optional<double> work;
    double tol = 1e-10;
    std::vector<std::string> atoms;
    std::vector<std::string> qubit_atoms;
    std::vector<double> box;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string output;
    std::string format;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_number(double x);
std::string to_csv(const Table& t);
std::string to_json(const Table& t);
std::string to_svg(const Table& t, const std::string& x_column, const std::vector<std::string>& series);

Table sweep_table(const std::vector<SweepRecord>& records);

// Exit codes: 0 success, 1 domain error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace corrtherm::cli
