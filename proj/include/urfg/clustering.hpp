#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "urfg/forest.hpp"
#include "urfg/matrix.hpp"

namespace urfg {

struct ClusterAssignment {
    std::vector<int> labels;  // cluster ids in [0, p), renumbered by first occurrence
    std::size_t p = 0;
};

struct DendrogramMerge {
    int cluster_a = 0;  // scipy-style ids: originals 0..n-1, merged n+step
    int cluster_b = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::vector<DendrogramMerge> merges;  // length n-1
};

inline Matrix affinity_to_distance(const AffinityMatrix& aff) {
    Matrix dist(aff.values.rows(), aff.values.cols());
    for (std::size_t i = 0; i < dist.rows(); ++i)
        for (std::size_t j = 0; j < dist.cols(); ++j)
            dist(i, j) = i == j ? 0.0 : 1.0 - aff.values(i, j);
    return dist;
}

namespace detail {

inline void check_distance_matrix(const Matrix& dist) {
    if (dist.rows() != dist.cols()) throw std::invalid_argument("distance matrix not square");
    for (std::size_t i = 0; i < dist.rows(); ++i) {
        if (dist(i, i) != 0.0) throw std::invalid_argument("distance diagonal must be zero");
        for (std::size_t j = i + 1; j < dist.cols(); ++j)
            if (dist(i, j) != dist(j, i))
                throw std::invalid_argument("distance matrix not symmetric");
    }
}

}  // namespace detail

// Agglomerative Ward clustering via the Lance-Williams update on the given
// distance matrix. Merge ties are broken by the smallest (a, b) active-slot
// pair. Returns the full merge tree plus the assignment cut at p clusters.
inline std::pair<ClusterAssignment, Dendrogram> ward_cluster(const Matrix& dist, std::size_t p) {
    detail::check_distance_matrix(dist);
    std::size_t n = dist.rows();
    if (p < 1 || p > n) throw std::invalid_argument("cluster count p must be in [1, n]");

    // active clusters kept in slots; slot i initially holds original sample i
    Matrix d = dist;
    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<int> cluster_id(n);  // scipy-style id of the cluster in each slot
    std::iota(cluster_id.begin(), cluster_id.end(), 0);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};

    Dendrogram dendro;
    std::vector<int> cut_labels(n, -1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0, best_b = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!active[b]) continue;
                if (d(a, b) < best_d) {
                    best_d = d(a, b);
                    best_a = a;
                    best_b = b;
                }
            }
        }

        // record the cut just before reaching p-1 active clusters
        if (n - step == p) {
            for (std::size_t slot = 0; slot < n; ++slot) {
                if (!active[slot]) continue;
                for (std::size_t m : members[slot]) cut_labels[m] = -1 - static_cast<int>(slot);
            }
        }

        dendro.merges.push_back({cluster_id[best_a], cluster_id[best_b], best_d,
                                 size[best_a] + size[best_b]});

        // Lance-Williams Ward update against every other active cluster
        double sa = static_cast<double>(size[best_a]);
        double sb = static_cast<double>(size[best_b]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == best_a || k == best_b) continue;
            double sk = static_cast<double>(size[k]);
            double t = sa + sb + sk;
            double dak = d(best_a, k), dbk = d(best_b, k), dab = d(best_a, best_b);
            double updated = std::sqrt(std::max(
                0.0, ((sa + sk) * dak * dak + (sb + sk) * dbk * dbk - sk * dab * dab) / t));
            d(best_a, k) = d(k, best_a) = updated;
        }
        size[best_a] += size[best_b];
        cluster_id[best_a] = static_cast<int>(n + step);
        members[best_a].insert(members[best_a].end(), members[best_b].begin(),
                               members[best_b].end());
        active[best_b] = false;
        members[best_b].clear();
    }

    if (p == 1) std::fill(cut_labels.begin(), cut_labels.end(), -1);

    // renumber by first occurrence
    ClusterAssignment assign;
    assign.p = p;
    assign.labels.resize(n);
    std::vector<int> seen;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = std::find(seen.begin(), seen.end(), cut_labels[i]);
        if (it == seen.end()) {
            seen.push_back(cut_labels[i]);
            it = seen.end() - 1;
        }
        assign.labels[i] = static_cast<int>(it - seen.begin());
    }
    return {assign, dendro};
}

}  // namespace urfg
