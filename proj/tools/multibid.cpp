#include <cstdlib>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multibid/generators.hpp"
#include "multibid/harness.hpp"
#include "multibid/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

void write_text(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<std::vector<int>> parse_edges(const std::string &spec, int n) {
    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
    if (spec.empty()) return adjacency;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto dash = token.find('-');
        if (dash == std::string::npos) {
            throw multibid::ContractViolation("edge must look like u-v: " + token);
        }
        const int u = std::stoi(token.substr(0, dash));
        const int v = std::stoi(token.substr(dash + 1));
        if (u < 0 || u >= n || v < 0 || v >= n) {
            throw multibid::ContractViolation("edge endpoint out of range: " + token);
        }
        adjacency[u].push_back(v);
    }
    return adjacency;
}

/// Expand a path or glob pattern ('*' and '?' in the filename part).
std::vector<std::string> expand_glob(const std::string &pattern) {
    namespace fs = std::filesystem;
    if (pattern.find('*') == std::string::npos && pattern.find('?') == std::string::npos) {
        return {pattern};
    }
    const fs::path p(pattern);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    std::vector<std::string> matches;
    if (fs::exists(dir)) {
        for (const auto &entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (fnmatch(p.filename().string().c_str(), name.c_str(), 0) == 0) {
                matches.push_back(entry.path().string());
            }
        }
    }
    std::sort(matches.begin(), matches.end());
    return matches;
}

multibid::SolverParams make_params(const std::string &params_json, std::uint64_t seed,
                                   int budget_buckets, double delta) {
    nlohmann::json j = nlohmann::json::object();
    if (!params_json.empty()) j = nlohmann::json::parse(params_json);
    if (!j.contains("seed")) j["seed"] = seed;
    if (budget_buckets >= 0) j["budget_buckets"] = budget_buckets;
    if (delta > 0.0) j["delta"] = delta;
    return multibid::SolverParams::from_json(j);
}

int thread_budget() {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char *env = std::getenv("MULTIBID_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return threads;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"multiplicative bidding solvers and instance tooling"};
    app.require_subcommand(1);

    // --- gen ---
    auto *gen = app.add_subcommand("gen", "generate an instance as JSON");
    std::string family;
    int gen_n = 8, gen_m = 8, gen_c = 2;
    std::uint64_t gen_seed = 0;
    double price_noise = 0.0, value_noise = 0.0, budget_fraction = 0.25;
    double gen_budget = 0.0;
    std::string value_mode = "monotone", edges, gen_out;
    gen->add_option("--family", family, "diagonal|antidiagonal|independent-set|multiplicative")
        ->required();
    gen->add_option("-n,--cols", gen_n, "columns (and rows for the square families)");
    gen->add_option("-m,--rows", gen_m, "rows (multiplicative family)");
    gen->add_option("-c,--exponent", gen_c, "antidiagonal exponent parameter, c >= 2");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--price-noise", price_noise, "relative sigma on log prices");
    gen->add_option("--value-mode", value_mode, "monotone|ratio-monotone|random");
    gen->add_option("--value-noise", value_noise, "relative sigma on values");
    gen->add_option("--budget-fraction", budget_fraction, "budget as fraction of total price");
    gen->add_option("--budget", gen_budget, "explicit budget (independent-set family)");
    gen->add_option("--edges", edges, "independent-set edges, e.g. 0-1,1-2");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // --- solve ---
    auto *solve = app.add_subcommand("solve", "run one algorithm on an instance");
    std::string solve_instance, solve_alg, solve_params, solve_out;
    std::uint64_t solve_seed = 0;
    int solve_buckets = -1, oracle_cap = 16;
    double solve_delta = 0.0;
    solve->add_option("instance", solve_instance, "instance JSON path")->required();
    solve->add_option("--alg", solve_alg,
                      "ratio|sqrt|tower|tower-area|staircase-dp|tower-dp|uniform|oracle")
        ->required();
    solve->add_option("--params", solve_params, "solver params as JSON");
    solve->add_option("--seed", solve_seed, "solver seed");
    solve->add_option("--budget-buckets", solve_buckets, "DP budget buckets (0 = exact)");
    solve->add_option("--delta", solve_delta, "geometric bid base");
    solve->add_option("--oracle-cap", oracle_cap, "max cells for the oracle algorithm");
    solve->add_option("--out", solve_out, "output path (default stdout)");

    // --- compare ---
    auto *compare = app.add_subcommand("compare", "run algorithms across instances, emit CSV");
    std::vector<std::string> compare_inputs, compare_algs;
    std::string compare_params, compare_out = "compare.csv";
    std::uint64_t compare_seed = 0;
    int compare_buckets = -1, compare_cap = 16;
    bool timings = false;
    compare->add_option("instances", compare_inputs, "instance paths or globs")->required();
    compare->add_option("--alg", compare_algs, "algorithms (repeat or comma separated)")
        ->required()
        ->delimiter(',');
    compare->add_option("--params", compare_params, "solver params as JSON");
    compare->add_option("--seed", compare_seed, "solver seed");
    compare->add_option("--budget-buckets", compare_buckets, "DP budget buckets (0 = exact)");
    compare->add_option("--oracle-cap", compare_cap, "max cells for the oracle algorithm");
    compare->add_option("--out", compare_out, "CSV output path");
    compare->add_flag("--timings", timings,
                      "measure per-run wall time in the ms column (off: ms=0 for "
                      "byte-stable output)");

    // --- validate ---
    auto *validate = app.add_subcommand("validate", "multiplicativity and monotonicity checks");
    std::string validate_instance, validate_out;
    std::uint64_t validate_seed = 0;
    validate->add_option("instance", validate_instance, "instance JSON path")->required();
    validate->add_option("--seed", validate_seed, "consensus seed");
    validate->add_option("--out", validate_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            multibid::Instance instance = [&]() -> multibid::Instance {
                if (family == "diagonal") return multibid::gen_diagonal_hard(gen_n);
                if (family == "antidiagonal") return multibid::gen_antidiagonal_hard(gen_n, gen_c);
                if (family == "independent-set") {
                    std::optional<double> budget;
                    if (gen_budget > 0.0) budget = gen_budget;
                    return multibid::gen_independent_set_instance(parse_edges(edges, gen_n),
                                                                  budget);
                }
                if (family == "multiplicative") {
                    multibid::MultiplicativeGenOptions opt;
                    opt.m = gen_m;
                    opt.n = gen_n;
                    opt.seed = gen_seed;
                    opt.price_noise = price_noise;
                    opt.value_mode = multibid::value_mode_from_string(value_mode);
                    opt.value_noise = value_noise;
                    opt.budget_fraction = budget_fraction;
                    return multibid::gen_multiplicative(opt);
                }
                throw multibid::ContractViolation("unknown family: " + family);
            }();
            write_text(gen_out, multibid::to_json(instance).dump(2) + "\n");
            return kExitOk;
        }

        if (solve->parsed()) {
            const multibid::Instance instance = multibid::load_instance(solve_instance);
            const multibid::SolverParams params =
                make_params(solve_params, solve_seed, solve_buckets, solve_delta);
            const multibid::SolveReport report =
                multibid::run_algorithm(instance, solve_alg, params, oracle_cap);
            write_text(solve_out, multibid::report_to_json(report).dump(2) + "\n");
            return kExitOk;
        }

        if (compare->parsed()) {
            std::vector<std::pair<std::string, multibid::Instance>> instances;
            for (const std::string &input : compare_inputs) {
                for (const std::string &path : expand_glob(input)) {
                    instances.emplace_back(path, multibid::load_instance(path));
                }
            }
            if (instances.empty()) {
                std::cerr << "error: no instances matched\n";
                return kExitUsage;
            }
            multibid::CompareOptions options;
            options.algorithms = compare_algs;
            options.params = make_params(compare_params, compare_seed, compare_buckets, 0.0);
            options.oracle_cap = compare_cap;
            options.timings = timings;
            options.threads = thread_budget();
            const multibid::CompareResult result = multibid::run_compare(instances, options);
            write_text(compare_out, multibid::compare_csv(result));
            std::cout << result.summary.dump(2) << "\n";
            return kExitOk;
        }

        if (validate->parsed()) {
            const multibid::Instance instance = multibid::load_instance(validate_instance);
            const multibid::MultiplicativeFit fit = multibid::fit_multiplicative(instance);
            nlohmann::json out{
                {"r_squared", fit.r_squared},
                {"value_monotonicity",
                 multibid::monotonicity_score(instance, multibid::Axis::kRows,
                                              multibid::MonotonicityMode::kValue, validate_seed)},
                {"ratio_monotonicity",
                 multibid::monotonicity_score(instance, multibid::Axis::kRows,
                                              multibid::MonotonicityMode::kRatio, validate_seed)}};
            write_text(validate_out, out.dump(2) + "\n");
            return kExitOk;
        }
    } catch (const multibid::ContractViolation &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error &e) {
        std::cerr << "infeasible result detected: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
