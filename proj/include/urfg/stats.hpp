#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace urfg {

// Contingency-table Adjusted Rand Index.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ARI: label length mismatch");
    std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("ARI: need at least 2 samples");

    std::map<std::pair<int, int>, std::size_t> cell;
    std::map<int, std::size_t> row, col;
    for (std::size_t i = 0; i < n; ++i) {
        cell[{a[i], b[i]}]++;
        row[a[i]]++;
        col[b[i]]++;
    }
    auto choose2 = [](std::size_t m) { return static_cast<double>(m) * (m - 1) / 2.0; };
    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [k, v] : cell) sum_cells += choose2(v);
    for (const auto& [k, v] : row) sum_rows += choose2(v);
    for (const auto& [k, v] : col) sum_cols += choose2(v);
    double total = choose2(n);
    double expected = sum_rows * sum_cols / total;
    double max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_cells - expected) / (max_index - expected);
}

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Sample Pearson r with a two-sided p-value from the t distribution, n-2 df.
inline TestResult pearson_correlation(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson: need at least 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: constant input vector");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    double df = static_cast<double>(n - 2);
    if (std::abs(r) == 1.0) return {r, 0.0};
    double t = r * std::sqrt(df / (1.0 - r * r));
    boost::math::students_t dist(df);
    double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return {r, p};
}

// Welch unequal-variance t test, two-sided, Welch-Satterthwaite df.
inline TestResult welch_t_test(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || y.size() < 2)
        throw std::invalid_argument("welch: each sample needs >= 2 points");
    auto mean_var = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double e : v) m += e;
        m /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double e : v) ss += (e - m) * (e - m);
        return std::pair<double, double>{m, ss / static_cast<double>(v.size() - 1)};
    };
    auto [mx, vx] = mean_var(x);
    auto [my, vy] = mean_var(y);
    double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    double se2 = vx / nx + vy / ny;
    if (se2 == 0.0) {
        if (mx == my) return {0.0, 1.0};
        throw std::invalid_argument("welch: degenerate zero variance with distinct means");
    }
    double t = (mx - my) / std::sqrt(se2);
    double df = se2 * se2 /
                ((vx / nx) * (vx / nx) / (nx - 1.0) + (vy / ny) * (vy / ny) / (ny - 1.0));
    boost::math::students_t dist(df);
    double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return {t, p};
}

// Cohen's d style standardized mean difference with pooled variance.
inline double standardized_mean_difference(const std::vector<double>& x,
                                           const std::vector<double>& y) {
    auto mean = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double e : v) m += e;
        return m / static_cast<double>(v.size());
    };
    double mx = mean(x), my = mean(y);
    double ssx = 0.0, ssy = 0.0;
    for (double e : x) ssx += (e - mx) * (e - mx);
    for (double e : y) ssy += (e - my) * (e - my);
    double pooled = std::sqrt((ssx + ssy) /
                              static_cast<double>(x.size() + y.size() - 2));
    if (pooled == 0.0) return 0.0;
    return (mx - my) / pooled;
}

}  // namespace urfg
