#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "urfg/matrix.hpp"

namespace urfg {

// n samples x d features, with names and optional ground-truth labels.
// Labels are carried for evaluation only; training never reads them.
struct Dataset {
    Matrix values;
    std::vector<std::string> feature_names;
    std::vector<std::string> sample_ids;
    std::optional<std::vector<int>> labels;

    std::size_t n() const { return values.rows(); }
    std::size_t d() const { return values.cols(); }

    void validate() const {
        if (n() < 2 || d() < 2)
            throw std::invalid_argument("dataset needs n >= 2 and d >= 2");
        if (feature_names.size() != d())
            throw std::invalid_argument("feature name count != d");
        if (sample_ids.size() != n())
            throw std::invalid_argument("sample id count != n");
        if (labels && labels->size() != n())
            throw std::invalid_argument("label count != n");
        for (std::size_t j = 0; j < d(); ++j) {
            if (feature_names[j].empty())
                throw std::invalid_argument("empty feature name");
            for (std::size_t k = j + 1; k < d(); ++k)
                if (feature_names[j] == feature_names[k])
                    throw std::invalid_argument("duplicate feature name: " + feature_names[j]);
        }
        for (double v : values.data())
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite value in dataset");
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("non-numeric cell '" + cell + "' at row " +
                                 std::to_string(row) + ", column " + std::to_string(col));
    }
}

}  // namespace detail

// CSV loader. Rows in file order; the label column, when named, is removed
// from the feature block and stored as integer labels.
inline Dataset load_csv(const std::string& path, bool has_header = true,
                        const std::optional<std::string>& label_column = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::vector<std::string>> raw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        raw.push_back(detail::split_csv_line(line));
    }
    if (raw.empty()) throw std::runtime_error("empty CSV: " + path);

    std::vector<std::string> names;
    std::size_t first_data_row = 0;
    if (has_header) {
        names = raw[0];
        first_data_row = 1;
    } else {
        for (std::size_t j = 0; j < raw[0].size(); ++j)
            names.push_back("V" + std::to_string(j + 1));
    }
    std::size_t n_rows = raw.size() - first_data_row;
    if (n_rows == 0) throw std::runtime_error("CSV has no data rows: " + path);

    std::optional<std::size_t> label_idx;
    if (label_column) {
        auto it = std::find(names.begin(), names.end(), *label_column);
        if (it == names.end())
            throw std::runtime_error("label column not found: " + *label_column);
        label_idx = static_cast<std::size_t>(it - names.begin());
    }

    Dataset ds;
    std::size_t d = names.size() - (label_idx ? 1 : 0);
    ds.values = Matrix(n_rows, d);
    for (std::size_t j = 0; j < names.size(); ++j)
        if (!label_idx || j != *label_idx) ds.feature_names.push_back(names[j]);
    if (label_idx) ds.labels.emplace();

    for (std::size_t r = 0; r < n_rows; ++r) {
        const auto& cells = raw[r + first_data_row];
        if (cells.size() != names.size())
            throw std::runtime_error("row " + std::to_string(r + 1) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(names.size()));
        std::size_t jj = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v = detail::parse_cell(cells[j], r + 1, j + 1);
            if (label_idx && j == *label_idx)
                ds.labels->push_back(static_cast<int>(std::llround(v)));
            else
                ds.values(r, jj++) = v;
        }
        ds.sample_ids.push_back("s" + std::to_string(r + 1));
    }
    ds.validate();
    return ds;
}

inline void write_csv(const Dataset& ds, const std::string& path,
                      bool include_labels = false) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.precision(17);
    for (std::size_t j = 0; j < ds.d(); ++j) {
        if (j) out << ',';
        out << ds.feature_names[j];
    }
    if (include_labels && ds.labels) out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.d(); ++j) {
            if (j) out << ',';
            out << ds.values(i, j);
        }
        if (include_labels && ds.labels) out << ',' << (*ds.labels)[i];
        out << '\n';
    }
}

// Sample variance, n-1 denominator.
inline double sample_variance(const Dataset& ds, std::size_t feature) {
    std::size_t n = ds.n();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += ds.values(i, feature);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dlt = ds.values(i, feature) - mean;
        ss += dlt * dlt;
    }
    return ss / static_cast<double>(n - 1);
}

inline Dataset select_features(const Dataset& ds, const std::vector<std::size_t>& keep) {
    Dataset out;
    out.values = Matrix(ds.n(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.feature_names.push_back(ds.feature_names[keep[j]]);
        for (std::size_t i = 0; i < ds.n(); ++i)
            out.values(i, j) = ds.values(i, keep[j]);
    }
    out.sample_ids = ds.sample_ids;
    out.labels = ds.labels;
    return out;
}

// Keeps the top_k highest-variance and bottom_k lowest-variance features.
// Ties go to the lower feature index; column order is preserved among kept features.
inline Dataset variance_filter(const Dataset& ds, std::size_t top_k, std::size_t bottom_k) {
    if (top_k + bottom_k > ds.d())
        throw std::invalid_argument("variance_filter: top_k + bottom_k exceeds feature count");
    std::vector<std::size_t> order(ds.d());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> var(ds.d());
    for (std::size_t j = 0; j < ds.d(); ++j) var[j] = sample_variance(ds, j);

    auto by_var_desc = [&](std::size_t a, std::size_t b) {
        if (var[a] != var[b]) return var[a] > var[b];
        return a < b;
    };
    auto by_var_asc = [&](std::size_t a, std::size_t b) {
        if (var[a] != var[b]) return var[a] < var[b];
        return a < b;
    };
    std::vector<std::size_t> desc = order, asc = order;
    std::sort(desc.begin(), desc.end(), by_var_desc);
    std::sort(asc.begin(), asc.end(), by_var_asc);

    std::vector<bool> keep(ds.d(), false);
    for (std::size_t r = 0; r < top_k; ++r) keep[desc[r]] = true;
    for (std::size_t r = 0, taken = 0; taken < bottom_k; ++r) {
        if (r >= asc.size())
            throw std::invalid_argument("variance_filter: overlapping top/bottom selection");
        if (!keep[asc[r]]) {
            keep[asc[r]] = true;
            ++taken;
        }
    }

    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < ds.d(); ++j)
        if (keep[j]) kept.push_back(j);
    return select_features(ds, kept);
}

}  // namespace urfg
