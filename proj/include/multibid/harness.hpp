#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multibid/algorithms.hpp"

namespace multibid {

/// Algorithm names accepted by the solve/compare front ends.
const std::vector<std::string> &algorithm_names();

struct SolveReport {
    std::string algorithm;
    Solution solution;
    double value = 0.0;
    double spend = 0.0;
    double budget = 0.0;
    double opt_value = 0.0;
    double pct_of_opt = 0.0;
    double wall_ms = 0.0;
};

/// Run one named algorithm and re-verify its output against instance-core
/// recomputation; throws std::logic_error on an infeasible or inconsistent
/// result (the CLI maps that to exit code 3).
SolveReport run_algorithm(const Instance &instance, const std::string &name,
                          const SolverParams &params, int oracle_cap = 16);

nlohmann::json report_to_json(const SolveReport &report);

struct CompareOptions {
    std::vector<std::string> algorithms;
    SolverParams params;
    int oracle_cap = 16;
    bool timings = false; // when false the ms column is 0 for stable output
    int threads = 1;
};

struct CompareRow {
    std::string instance;
    std::string algorithm;
    double value = 0.0;
    double pct_of_opt = 0.0;
    double spend = 0.0;
    double ms = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows; // sorted by (instance, algorithm)
    nlohmann::json summary;       // percentiles per algorithm + win rates
};

CompareResult run_compare(const std::vector<std::pair<std::string, Instance>> &instances,
                          const CompareOptions &options);

std::string compare_csv(const CompareResult &result);

/// Inclusive linear-interpolation percentile, q in [0,1].
double percentile(std::vector<double> values, double q);

/// Shortest-roundtrip decimal form, stable across runs.
std::string format_number(double x);

} // namespace multibid
