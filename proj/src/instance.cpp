#include "multibid/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace multibid {

Instance::Instance(int m, int n, std::vector<double> prices, std::vector<double> values,
                   double budget, std::optional<Factorization> factorization)
    : m_(m), n_(n), prices_(std::move(prices)), values_(std::move(values)),
      budget_(budget), factorization_(std::move(factorization)) {
    if (m_ <= 0 || n_ <= 0) {
        throw ContractViolation("instance dimensions must be positive");
    }
    const std::size_t cells = static_cast<std::size_t>(m_) * n_;
    if (prices_.size() != cells || values_.size() != cells) {
        throw ContractViolation("price/value matrix size does not match m*n");
    }
    for (double p : prices_) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ContractViolation("all prices must be strictly positive and finite");
        }
    }
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ContractViolation("all values must be non-negative and finite");
        }
    }
    if (!(budget_ > 0.0) || !std::isfinite(budget_)) {
        throw ContractViolation("budget must be strictly positive and finite");
    }
    if (factorization_) {
        if (static_cast<int>(factorization_->rows.size()) != m_ ||
            static_cast<int>(factorization_->cols.size()) != n_) {
            throw ContractViolation("factorization vector lengths do not match instance");
        }
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) {
                const double pred = factorization_->rows[i] * factorization_->cols[j];
                const double p = price(i, j);
                if (std::abs(pred - p) > 1e-9 * std::max(std::abs(p), 1.0)) {
                    throw ContractViolation("factorization does not reproduce prices");
                }
            }
        }
    }
}

double Instance::total_price() const {
    return std::accumulate(prices_.begin(), prices_.end(), 0.0);
}

double Instance::max_price_budget_ratio() const {
    return *std::max_element(prices_.begin(), prices_.end()) / budget_;
}

std::vector<Cell> Staircase::cells() const {
    std::vector<Cell> out;
    for (int j = 0; j < cols; ++j) {
        for (int k = 0; k < heights[j]; ++k) {
            out.push_back({row_order[k], j});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Staircase::empty() const {
    return std::all_of(heights.begin(), heights.end(), [](int h) { return h == 0; });
}

std::vector<int> Staircase::columns_by_height() const {
    std::vector<int> order(heights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [this](int a, int b) { return heights[a] > heights[b]; });
    return order;
}

CaptureSet capture(const Instance &instance, const BidAssignment &bids) {
    if (static_cast<int>(bids.row_multipliers.size()) != instance.rows() ||
        static_cast<int>(bids.col_multipliers.size()) != instance.cols()) {
        throw ContractViolation("bid assignment dimensions do not match instance");
    }
    CaptureSet out;
    for (int i = 0; i < instance.rows(); ++i) {
        const double r = bids.row_multipliers[i];
        for (int j = 0; j < instance.cols(); ++j) {
            if (r * bids.col_multipliers[j] >= instance.price(i, j)) {
                out.cells.push_back({i, j});
                out.spend += instance.price(i, j);
                out.value += instance.value(i, j);
            }
        }
    }
    return out;
}

CaptureSet tally_cells(const Instance &instance, std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    CaptureSet out;
    for (const Cell &c : cells) {
        if (c.row < 0 || c.row >= instance.rows() || c.col < 0 || c.col >= instance.cols()) {
            throw ContractViolation("cell outside instance grid");
        }
        out.spend += instance.price(c.row, c.col);
        out.value += instance.value(c.row, c.col);
    }
    out.cells = std::move(cells);
    return out;
}

bool is_feasible(const Instance &instance, const BidAssignment &bids) {
    return capture(instance, bids).spend <= instance.budget();
}

bool is_staircase(const std::vector<Cell> &cells, int m, int n) {
    std::vector<std::vector<bool>> in_col(static_cast<std::size_t>(n),
                                          std::vector<bool>(static_cast<std::size_t>(m), false));
    std::vector<int> size(static_cast<std::size_t>(n), 0);
    for (const Cell &c : cells) {
        if (c.row < 0 || c.row >= m || c.col < 0 || c.col >= n) return false;
        if (!in_col[c.col][c.row]) {
            in_col[c.col][c.row] = true;
            ++size[c.col];
        }
    }
    // A family of sets is a chain iff, sorted by size descending, each set
    // contains the next.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return size[a] > size[b]; });
    for (int k = 0; k + 1 < n; ++k) {
        const auto &big = in_col[order[k]];
        const auto &small = in_col[order[k + 1]];
        for (int i = 0; i < m; ++i) {
            if (small[i] && !big[i]) return false;
        }
    }
    return true;
}

Staircase canonicalize_staircase(const std::vector<Cell> &cells, int m, int n) {
    if (!is_staircase(cells, m, n)) {
        throw NotAStaircase("cell set is not a staircase");
    }
    Staircase s;
    s.rows = m;
    s.cols = n;
    s.heights.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> degree(static_cast<std::size_t>(m), 0); // #columns containing each row
    std::vector<std::vector<bool>> seen(static_cast<std::size_t>(n),
                                        std::vector<bool>(static_cast<std::size_t>(m), false));
    for (const Cell &c : cells) {
        if (!seen[c.col][c.row]) {
            seen[c.col][c.row] = true;
            ++s.heights[c.col];
            ++degree[c.row];
        }
    }
    // In a chain the columns containing a row are exactly the deg largest
    // ones, so ordering rows by coverage makes every column a prefix.
    s.row_order.resize(static_cast<std::size_t>(m));
    std::iota(s.row_order.begin(), s.row_order.end(), 0);
    std::stable_sort(s.row_order.begin(), s.row_order.end(),
                     [&](int a, int b) { return degree[a] > degree[b]; });
    return s;
}

nlohmann::json to_json(const Instance &instance) {
    nlohmann::json j;
    j["m"] = instance.rows();
    j["n"] = instance.cols();
    auto matrix = [&](const std::vector<double> &flat) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < instance.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int jj = 0; jj < instance.cols(); ++jj) {
                row.push_back(flat[static_cast<std::size_t>(i) * instance.cols() + jj]);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["prices"] = matrix(instance.prices());
    j["values"] = matrix(instance.values());
    j["budget"] = instance.budget();
    if (instance.factorization()) {
        j["factorization"] = {{"rows", instance.factorization()->rows},
                              {"cols", instance.factorization()->cols}};
    }
    return j;
}

Instance instance_from_json(const nlohmann::json &j) {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    auto matrix = [&](const nlohmann::json &rows, const char *what) {
        if (static_cast<int>(rows.size()) != m) {
            throw ContractViolation(std::string(what) + ": wrong row count");
        }
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(m) * n);
        for (const auto &row : rows) {
            if (static_cast<int>(row.size()) != n) {
                throw ContractViolation(std::string(what) + ": wrong column count");
            }
            for (const auto &x : row) flat.push_back(x.get<double>());
        }
        return flat;
    };
    std::optional<Factorization> fact;
    if (j.contains("factorization") && !j.at("factorization").is_null()) {
        fact = Factorization{j.at("factorization").at("rows").get<std::vector<double>>(),
                             j.at("factorization").at("cols").get<std::vector<double>>()};
    }
    return Instance(m, n, matrix(j.at("prices"), "prices"), matrix(j.at("values"), "values"),
                    j.at("budget").get<double>(), std::move(fact));
}

Instance load_instance(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instance file: " + path);
    }
    nlohmann::json j;
    in >> j;
    return instance_from_json(j);
}

void save_instance(const Instance &instance, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write instance file: " + path);
    }
    out << to_json(instance).dump(2) << "\n";
}

} // namespace multibid
