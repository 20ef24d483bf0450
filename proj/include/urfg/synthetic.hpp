#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "urfg/dataset.hpp"

namespace urfg {

// Gaussian blob generator config. cluster_centers is clusters x relevant
// features; irrelevant features are drawn around 0 for every cluster.
struct SyntheticSpec {
    std::size_t n_relevant = 0;
    std::size_t n_irrelevant = 0;
    Matrix cluster_centers;  // clusters x n_relevant
    std::size_t points_per_cluster = 50;
    double std_dev = 0.2;
    std::uint64_t seed = 0;

    void validate() const {
        if (points_per_cluster < 1) throw std::invalid_argument("points_per_cluster < 1");
        if (std_dev <= 0.0) throw std::invalid_argument("std_dev must be positive");
        if (cluster_centers.cols() != n_relevant)
            throw std::invalid_argument("cluster_centers must have one column per relevant feature");
        if (cluster_centers.rows() < 1) throw std::invalid_argument("need at least one cluster");
    }
};

enum class FeatureRole { Relevant, Irrelevant };

// Ground-truth annotation carried alongside synthetic datasets.
struct SyntheticAnnotation {
    std::vector<FeatureRole> roles;                    // one per feature
    std::vector<int> redundancy_group;                 // -1 = unique; shared id = same centers
    // ev1_pairs only: (feature a, feature b, clusters the pair separates)
    struct Pair { std::size_t a, b; int separated_clusters; };
    std::vector<Pair> pairs;

    std::vector<std::size_t> relevant_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < roles.size(); ++j)
            if (roles[j] == FeatureRole::Relevant) out.push_back(j);
        return out;
    }
    std::vector<std::size_t> irrelevant_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < roles.size(); ++j)
            if (roles[j] == FeatureRole::Irrelevant) out.push_back(j);
        return out;
    }
};

struct SyntheticDataset {
    Dataset data;
    SyntheticAnnotation annotation;
};

// Draws samples cluster by cluster, row-major within each cluster.
// Deterministic for a fixed seed.
inline Dataset generate_blobs(const SyntheticSpec& spec) {
    spec.validate();
    std::size_t clusters = spec.cluster_centers.rows();
    std::size_t d = spec.n_relevant + spec.n_irrelevant;
    std::size_t n = clusters * spec.points_per_cluster;

    Dataset ds;
    ds.values = Matrix(n, d);
    for (std::size_t j = 0; j < d; ++j)
        ds.feature_names.push_back("V" + std::to_string(j + 1));
    ds.labels.emplace();

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.std_dev);

    std::size_t row = 0;
    for (std::size_t g = 0; g < clusters; ++g) {
        for (std::size_t p = 0; p < spec.points_per_cluster; ++p, ++row) {
            for (std::size_t j = 0; j < d; ++j) {
                double center = j < spec.n_relevant ? spec.cluster_centers(g, j) : 0.0;
                ds.values(row, j) = center + noise(rng);
            }
            ds.labels->push_back(static_cast<int>(g));
            ds.sample_ids.push_back("s" + std::to_string(row + 1));
        }
    }
    ds.validate();
    return ds;
}

namespace detail {

inline Matrix centers_from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

inline SyntheticAnnotation plain_annotation(std::size_t n_relevant, std::size_t n_irrelevant) {
    SyntheticAnnotation ann;
    for (std::size_t j = 0; j < n_relevant; ++j) ann.roles.push_back(FeatureRole::Relevant);
    for (std::size_t j = 0; j < n_irrelevant; ++j) ann.roles.push_back(FeatureRole::Irrelevant);
    ann.redundancy_group.assign(n_relevant + n_irrelevant, -1);
    return ann;
}

}  // namespace detail

// 3 relevant + 10 irrelevant features, 4 clusters. Relevant feature Vj spikes
// to 1 in cluster j-1 and stays at 0 elsewhere.
inline SyntheticDataset make_ev1_centrality(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_relevant = 3;
    spec.n_irrelevant = 10;
    spec.cluster_centers = detail::centers_from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    spec.seed = seed;
    return {generate_blobs(spec), detail::plain_annotation(3, 10)};
}

// 8 relevant + 5 irrelevant features as four pairs with graded discriminating
// power: pair m separates m clusters in its own 2-d subspace (m = 1..4).
// Center patterns per feature, across the 4 clusters:
//   V1,V2: [1,1,1,1] / [1,1,1,1]  -> one blob       (separates 1)
//   V3,V4: [1,0,0,0] / [0,1,1,1]  -> two blobs      (separates 2)
//   V5,V6: [1,0,0,0] / [0,1,0,0]  -> three blobs    (separates 3)
//   V7,V8: [1,0,0,1] / [0,1,0,1]  -> four blobs     (separates 4)
inline SyntheticDataset make_ev1_pairs(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_relevant = 8;
    spec.n_irrelevant = 5;
    spec.cluster_centers = detail::centers_from_rows({
        {1, 1, 1, 0, 1, 0, 1, 0},
        {1, 1, 0, 1, 0, 1, 0, 1},
        {1, 1, 0, 1, 0, 0, 0, 0},
        {1, 1, 0, 1, 0, 0, 1, 1},
    });
    spec.seed = seed;
    SyntheticDataset out{generate_blobs(spec), detail::plain_annotation(8, 5)};
    out.annotation.pairs = {{0, 1, 1}, {2, 3, 2}, {4, 5, 3}, {6, 7, 4}};
    return out;
}

// 4 relevant + 9 irrelevant features, 4 clusters; relevant feature Vg alone
// identifies cluster g-1.
inline SyntheticDataset make_ev2_cluster(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_relevant = 4;
    spec.n_irrelevant = 9;
    spec.cluster_centers =
        detail::centers_from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    spec.seed = seed;
    return {generate_blobs(spec), detail::plain_annotation(4, 9)};
}

// 13 features with q relevant (q in [3,7]) and q+1 clusters; the i-th relevant
// feature sits at 1 for cluster i+1 and at 0 elsewhere.
inline SyntheticDataset make_ev3_relevant(std::size_t q, std::uint64_t seed) {
    if (q < 3 || q > 7) throw std::invalid_argument("ev3 requires q in [3,7]");
    SyntheticSpec spec;
    spec.n_relevant = q;
    spec.n_irrelevant = 13 - q;
    spec.cluster_centers = Matrix(q + 1, q, 0.0);
    for (std::size_t j = 0; j < q; ++j) spec.cluster_centers(j + 1, j) = 1.0;
    spec.seed = seed;
    return {generate_blobs(spec), detail::plain_annotation(q, 13 - q)};
}

// 10 features, 4 clusters; relevant features come in redundant pairs sharing
// identical centers: {V1,V2} at [1,0,0,0], {V3,V4} at [0,1,0,0], {V5,V6} at
// [0,0,1,0]. V7-V10 irrelevant. Slightly tighter clusters than the other
// suites keep noise splits from diluting the redundancy structure in the
// derived feature graphs.
inline SyntheticDataset make_ev4_redundant(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_relevant = 6;
    spec.n_irrelevant = 4;
    spec.cluster_centers = detail::centers_from_rows({
        {1, 1, 0, 0, 0, 0},
        {0, 0, 1, 1, 0, 0},
        {0, 0, 0, 0, 1, 1},
        {0, 0, 0, 0, 0, 0},
    });
    spec.std_dev = 0.15;
    spec.seed = seed;
    SyntheticDataset out{generate_blobs(spec), detail::plain_annotation(6, 4)};
    out.annotation.redundancy_group = {0, 0, 1, 1, 2, 2, -1, -1, -1, -1};
    return out;
}

inline SyntheticDataset synthetic_suite(const std::string& name, std::uint64_t replicate_seed,
                                        std::size_t q = 3) {
    if (name == "ev1_centrality") return make_ev1_centrality(replicate_seed);
    if (name == "ev1_pairs") return make_ev1_pairs(replicate_seed);
    if (name == "ev2_cluster") return make_ev2_cluster(replicate_seed);
    if (name == "ev3_relevant") return make_ev3_relevant(q, replicate_seed);
    if (name == "ev4_redundant") return make_ev4_redundant(replicate_seed);
    throw std::invalid_argument("unknown synthetic suite: " + name);
}

}  // namespace urfg
