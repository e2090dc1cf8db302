#include "multibid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "multibid/oracles.hpp"

namespace multibid {

const std::vector<std::string> &algorithm_names() {
    static const std::vector<std::string> names{
        "ratio", "sqrt", "tower", "tower-area", "staircase-dp", "tower-dp", "uniform", "oracle"};
    return names;
}

namespace {

Solution dispatch(const Instance &instance, const std::string &name, const SolverParams &params,
                  int oracle_cap) {
    if (name == "ratio") return ratio_monotone_solve(instance, params);
    if (name == "sqrt") return sqrt_n_solve(instance);
    if (name == "tower") return tower_solve(instance, params);
    if (name == "tower-area") return tower_solve_area(instance, params);
    if (name == "staircase-dp") return staircase_dp_solve(instance, params);
    if (name == "tower-dp") return tower_dp_solve(instance, params);
    if (name == "uniform") return uniform_bid_solve(instance);
    if (name == "oracle") {
        BruteForceResult oracle = brute_force_multiplicative_optimum(instance, oracle_cap);
        Solution sol;
        sol.bids = std::move(oracle.bids);
        sol.capture = std::move(oracle.capture);
        sol.algorithm_tag = "oracle";
        sol.params = {{"oracle_cap", oracle_cap}};
        return sol;
    }
    throw ContractViolation("unknown algorithm: " + name);
}

void verify_solution(const Instance &instance, const Solution &sol, const std::string &name) {
    // Never trust solver-reported totals.
    const CaptureSet check = capture(instance, sol.bids);
    if (check.cells != sol.capture.cells || check.spend != sol.capture.spend ||
        check.value != sol.capture.value) {
        throw std::logic_error("solution capture inconsistent with its bids: " + name);
    }
    if (check.spend > instance.budget()) {
        throw std::logic_error("infeasible solution from " + name);
    }
}

} // namespace

SolveReport run_algorithm(const Instance &instance, const std::string &name,
                          const SolverParams &params, int oracle_cap) {
    const auto start = std::chrono::steady_clock::now();
    Solution sol = dispatch(instance, name, params, oracle_cap);
    const auto stop = std::chrono::steady_clock::now();
    verify_solution(instance, sol, name);

    SolveReport report;
    report.algorithm = name;
    report.value = sol.capture.value;
    report.spend = sol.capture.spend;
    report.budget = instance.budget();
    const GreedyOptResult opt = individual_optimum(instance, instance.budget());
    report.opt_value = opt.cells.value;
    report.pct_of_opt = report.opt_value > 0.0 ? report.value / report.opt_value : 1.0;
    if (report.pct_of_opt > 1.0 + 1e-9) {
        throw std::logic_error("solver exceeded the individual bidding optimum: " + name);
    }
    report.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();
    report.solution = std::move(sol);
    return report;
}

nlohmann::json report_to_json(const SolveReport &report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const Cell &c : report.solution.capture.cells) {
        cells.push_back({c.row, c.col});
    }
    return {{"algorithm", report.algorithm},
            {"value", report.value},
            {"spend", report.spend},
            {"budget", report.budget},
            {"opt_value", report.opt_value},
            {"pct_of_opt", report.pct_of_opt},
            {"bids",
             {{"rows", report.solution.bids.row_multipliers},
              {"cols", report.solution.bids.col_multipliers}}},
            {"cells", cells},
            {"params", report.solution.params},
            {"wall_ms", report.wall_ms}};
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw ContractViolation("percentile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::string format_number(double x) {
    return nlohmann::json(x).dump();
}

CompareResult run_compare(const std::vector<std::pair<std::string, Instance>> &instances,
                          const CompareOptions &options) {
    if (instances.empty()) {
        throw ContractViolation("compare needs at least one instance");
    }
    if (options.algorithms.empty()) {
        throw ContractViolation("compare needs at least one algorithm");
    }

    struct Task {
        const std::string *instance;
        const Instance *data;
        const std::string *algorithm;
    };
    std::vector<Task> tasks;
    for (const auto &[path, inst] : instances) {
        for (const std::string &alg : options.algorithms) {
            tasks.push_back({&path, &inst, &alg});
        }
    }

    std::vector<CompareRow> rows(tasks.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= tasks.size()) return;
            try {
                const SolveReport rep =
                    run_algorithm(*tasks[k].data, *tasks[k].algorithm, options.params,
                                  options.oracle_cap);
                rows[k] = {*tasks[k].instance, rep.algorithm,      rep.value,
                           rep.pct_of_opt,     rep.spend,          options.timings ? rep.wall_ms : 0.0};
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const int threads = std::max(1, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread &t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(rows.begin(), rows.end(), [](const CompareRow &a, const CompareRow &b) {
        if (a.instance != b.instance) return a.instance < b.instance;
        return a.algorithm < b.algorithm;
    });

    // Summary: pct_of_opt percentiles per algorithm plus pairwise win rates.
    std::map<std::string, std::vector<double>> pct_by_alg;
    std::map<std::string, std::map<std::string, double>> pct_by_instance_alg;
    for (const CompareRow &r : rows) {
        pct_by_alg[r.algorithm].push_back(r.pct_of_opt);
        pct_by_instance_alg[r.instance][r.algorithm] = r.pct_of_opt;
    }
    nlohmann::json summary;
    summary["instances"] = instances.size();
    for (const auto &[alg, pcts] : pct_by_alg) {
        double mean = 0.0;
        for (double p : pcts) mean += p;
        mean /= static_cast<double>(pcts.size());
        summary["algorithms"][alg] = {{"mean", mean},
                                      {"median", percentile(pcts, 0.5)},
                                      {"p25", percentile(pcts, 0.25)},
                                      {"p75", percentile(pcts, 0.75)}};
    }
    for (const std::string &a : options.algorithms) {
        for (const std::string &b : options.algorithms) {
            if (a == b) continue;
            int wins = 0;
            int total = 0;
            for (const auto &[inst, by_alg] : pct_by_instance_alg) {
                const auto ia = by_alg.find(a);
                const auto ib = by_alg.find(b);
                if (ia == by_alg.end() || ib == by_alg.end()) continue;
                ++total;
                if (ia->second > ib->second) ++wins;
            }
            summary["win_rates"][a + ">" + b] =
                total > 0 ? static_cast<double>(wins) / total : 0.0;
        }
    }
    return {std::move(rows), std::move(summary)};
}

std::string compare_csv(const CompareResult &result) {
    std::ostringstream out;
    out << "instance,algorithm,value,pct_of_opt,spend,ms\n";
    for (const CompareRow &r : result.rows) {
        out << r.instance << ',' << r.algorithm << ',' << format_number(r.value) << ','
            << format_number(r.pct_of_opt) << ',' << format_number(r.spend) << ','
            << format_number(r.ms) << '\n';
    }
    return out.str();
}

} // namespace multibid
