#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "urfg/dataset.hpp"

namespace urfg {

struct Node {
    int id = 0;
    std::optional<std::size_t> split_feature;
    std::optional<double> split_threshold;
    int left = -1;
    int right = -1;
    std::size_t depth = 0;
    std::size_t n_inbag = 0;                 // bootstrap multiplicity included
    std::optional<double> split_score;       // score of the chosen split
    bool is_leaf() const { return !split_feature.has_value(); }
};

struct Tree {
    std::vector<Node> nodes;
    int root_id = 0;
    std::vector<std::size_t> inbag_sample_ids;  // multiset, sorted

    const Node& root() const { return nodes[static_cast<std::size_t>(root_id)]; }

    // Routes one sample (row i of values) to its leaf node id.
    int route(const Matrix& values, std::size_t i) const {
        int cur = root_id;
        while (!nodes[static_cast<std::size_t>(cur)].is_leaf()) {
            const Node& nd = nodes[static_cast<std::size_t>(cur)];
            cur = values(i, *nd.split_feature) <= *nd.split_threshold ? nd.left : nd.right;
        }
        return cur;
    }
};

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t min_leaf_size = 5;
    std::size_t mtry = 0;  // 0 = ceil(sqrt(d))
    bool bootstrap = true;
    std::optional<std::size_t> max_depth;
    std::uint64_t seed = 0;

    std::size_t effective_mtry(std::size_t d) const {
        std::size_t m = mtry == 0
            ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
            : mtry;
        return std::min(m, d);
    }
    void validate(std::size_t d) const {
        if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
        if (min_leaf_size < 1) throw std::invalid_argument("min_leaf_size must be >= 1");
        if (mtry > d) throw std::invalid_argument("mtry exceeds feature count");
    }
};

enum class ForestMode { UnsupervisedFixation, SupervisedGini };

struct Forest {
    std::vector<Tree> trees;
    ForestParams params;
    ForestMode mode = ForestMode::UnsupervisedFixation;
    std::vector<std::string> feature_names;

    std::size_t d() const { return feature_names.size(); }
};

struct AffinityMatrix {
    Matrix values;  // symmetric n x n, unit diagonal
    std::size_t n_trees_counted = 0;
};

// Fixation-index split score. Within-child mean pairwise squared distance
// D_sq over ordered pairs, cross-child mean D_cross; the raw index is
// ((D_sq_left + D_sq_right)/2) / D_cross, returned oriented as
// 1 - index so that larger means better separation. Degenerate cases:
// singleton child contributes D_sq = 0; D_cross = 0 scores 0.
inline double fixation_split_score(const std::vector<double>& left,
                                   const std::vector<double>& right) {
    if (left.empty() || right.empty())
        throw std::invalid_argument("fixation_split_score: empty side");
    auto within = [](const std::vector<double>& v) {
        double n = static_cast<double>(v.size());
        if (v.size() < 2) return 0.0;
        double s = 0.0, ss = 0.0;
        for (double x : v) { s += x; ss += x * x; }
        return 2.0 * (n * ss - s * s) / (n * (n - 1.0));
    };
    double sl = 0.0, ssl = 0.0, sr = 0.0, ssr = 0.0;
    for (double x : left) { sl += x; ssl += x * x; }
    for (double x : right) { sr += x; ssr += x * x; }
    double nl = static_cast<double>(left.size());
    double nr = static_cast<double>(right.size());
    double cross = (nr * ssl + nl * ssr - 2.0 * sl * sr) / (nl * nr);
    if (cross <= 0.0) return 0.0;
    double index = ((within(left) + within(right)) / 2.0) / cross;
    return 1.0 - index;
}

struct SplitChoice {
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = 0.0;
};

namespace detail {

// splitmix64, used to derive independent per-tree seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct SortedFeature {
    std::vector<double> values;  // node's in-bag values of one feature, sorted
};

// Scans all midpoint thresholds of one feature using prefix sums; calls
// report(threshold, n_left, score) for every split admissible under
// min_leaf_size.
template <typename ScoreFn>
inline void scan_thresholds(const std::vector<double>& sorted, std::size_t min_leaf,
                            ScoreFn&& score_at) {
    std::size_t n = sorted.size();
    for (std::size_t k = min_leaf; k + min_leaf <= n; ++k) {
        if (sorted[k - 1] == sorted[k]) continue;
        double thr = sorted[k - 1] + (sorted[k] - sorted[k - 1]) / 2.0;
        score_at(thr, k);
    }
}

// Fixation score for the split [0,k) / [k,n) of a sorted value vector,
// computed from running sums in O(1) per threshold.
class FixationScanner {
public:
    explicit FixationScanner(const std::vector<double>& sorted) : v_(sorted) {
        prefix_s_.resize(v_.size() + 1, 0.0);
        prefix_ss_.resize(v_.size() + 1, 0.0);
        for (std::size_t i = 0; i < v_.size(); ++i) {
            prefix_s_[i + 1] = prefix_s_[i] + v_[i];
            prefix_ss_[i + 1] = prefix_ss_[i] + v_[i] * v_[i];
        }
    }

    double score(std::size_t k) const {
        double n = static_cast<double>(v_.size());
        double nl = static_cast<double>(k), nr = n - nl;
        double sl = prefix_s_[k], ssl = prefix_ss_[k];
        double sr = prefix_s_.back() - sl, ssr = prefix_ss_.back() - ssl;
        double cross = (nr * ssl + nl * ssr - 2.0 * sl * sr) / (nl * nr);
        if (cross <= 0.0) return 0.0;
        double wl = nl < 2 ? 0.0 : 2.0 * (nl * ssl - sl * sl) / (nl * (nl - 1.0));
        double wr = nr < 2 ? 0.0 : 2.0 * (nr * ssr - sr * sr) / (nr * (nr - 1.0));
        return 1.0 - ((wl + wr) / 2.0) / cross;
    }

private:
    const std::vector<double>& v_;
    std::vector<double> prefix_s_, prefix_ss_;
};

inline double gini(const std::vector<std::size_t>& counts, double total) {
    double g = 1.0;
    for (std::size_t c : counts) {
        double p = static_cast<double>(c) / total;
        g -= p * p;
    }
    return g;
}

}  // namespace detail

// Best fixation split over the candidate features for the in-bag samples
// listed in `samples` (indices into ds, with multiplicity). Thresholds are
// midpoints between consecutive distinct sorted values; ties broken by lower
// feature index, then lower threshold. Absent when no split scores > 0.
inline std::optional<SplitChoice> best_split(const Dataset& ds,
                                             const std::vector<std::size_t>& samples,
                                             const std::vector<std::size_t>& candidate_features,
                                             std::size_t min_leaf_size) {
    std::optional<SplitChoice> best;
    std::vector<std::size_t> feats = candidate_features;
    std::sort(feats.begin(), feats.end());
    std::vector<double> vals(samples.size());
    for (std::size_t f : feats) {
        for (std::size_t i = 0; i < samples.size(); ++i) vals[i] = ds.values(samples[i], f);
        std::sort(vals.begin(), vals.end());
        detail::FixationScanner scan(vals);
        detail::scan_thresholds(vals, min_leaf_size, [&](double thr, std::size_t k) {
            double s = scan.score(k);
            if (s > 0.0 && (!best || s > best->score))
                best = SplitChoice{f, thr, s};
        });
    }
    return best;
}

// Gini counterpart of best_split: maximizes the weighted impurity decrease
// I(parent) - (N_l I_l + N_r I_r)/N.
inline std::optional<SplitChoice> best_gini_split(const Dataset& ds,
                                                  const std::vector<int>& labels,
                                                  const std::vector<std::size_t>& samples,
                                                  const std::vector<std::size_t>& candidate_features,
                                                  std::size_t min_leaf_size,
                                                  int n_classes) {
    std::optional<SplitChoice> best;
    std::vector<std::size_t> feats = candidate_features;
    std::sort(feats.begin(), feats.end());

    std::size_t n = samples.size();
    std::vector<std::pair<double, int>> vl(n);  // (value, label)
    std::vector<std::size_t> total_counts(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t s : samples) total_counts[static_cast<std::size_t>(labels[s])]++;
    double parent_impurity = detail::gini(total_counts, static_cast<double>(n));

    std::vector<std::size_t> left_counts(static_cast<std::size_t>(n_classes));
    for (std::size_t f : feats) {
        for (std::size_t i = 0; i < n; ++i)
            vl[i] = {ds.values(samples[i], f), labels[samples[i]]};
        std::sort(vl.begin(), vl.end());
        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::size_t k = 0;
        for (std::size_t cut = min_leaf_size; cut + min_leaf_size <= n; ++cut) {
            while (k < cut) left_counts[static_cast<std::size_t>(vl[k++].second)]++;
            if (vl[cut - 1].first == vl[cut].first) continue;
            double thr = vl[cut - 1].first + (vl[cut].first - vl[cut - 1].first) / 2.0;
            double nl = static_cast<double>(cut), nr = static_cast<double>(n - cut);
            std::vector<std::size_t> right_counts(total_counts);
            for (std::size_t c = 0; c < right_counts.size(); ++c)
                right_counts[c] -= left_counts[c];
            double il = detail::gini(left_counts, nl);
            double ir = detail::gini(right_counts, nr);
            double decrease = parent_impurity - (nl * il + nr * ir) / static_cast<double>(n);
            if (decrease > 0.0 && (!best || decrease > best->score))
                best = SplitChoice{f, thr, decrease};
        }
    }
    return best;
}

namespace detail {

struct GrowContext {
    const Dataset& ds;
    const ForestParams& params;
    const std::vector<int>* labels;  // null in unsupervised mode
    int n_classes = 0;
    std::size_t mtry = 0;
    std::mt19937_64 rng;
    Tree tree;
};

inline std::vector<std::size_t> sample_features(std::mt19937_64& rng, std::size_t d,
                                                std::size_t m) {
    std::vector<std::size_t> pool(d);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, d - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(m);
    return pool;
}

inline int grow_node(GrowContext& ctx, std::vector<std::size_t>& samples, std::size_t depth) {
    int id = static_cast<int>(ctx.tree.nodes.size());
    ctx.tree.nodes.push_back(Node{});
    ctx.tree.nodes.back().id = id;
    ctx.tree.nodes.back().depth = depth;
    ctx.tree.nodes.back().n_inbag = samples.size();

    bool can_split = samples.size() >= 2 * ctx.params.min_leaf_size &&
                     (!ctx.params.max_depth || depth < *ctx.params.max_depth);
    if (!can_split) return id;

    auto feats = sample_features(ctx.rng, ctx.ds.d(), ctx.mtry);
    std::optional<SplitChoice> choice =
        ctx.labels ? best_gini_split(ctx.ds, *ctx.labels, samples, feats,
                                     ctx.params.min_leaf_size, ctx.n_classes)
                   : best_split(ctx.ds, samples, feats, ctx.params.min_leaf_size);
    if (!choice) return id;

    std::vector<std::size_t> left_samples, right_samples;
    for (std::size_t s : samples) {
        if (ctx.ds.values(s, choice->feature) <= choice->threshold)
            left_samples.push_back(s);
        else
            right_samples.push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();

    int left_id = grow_node(ctx, left_samples, depth + 1);
    int right_id = grow_node(ctx, right_samples, depth + 1);
    Node& nd = ctx.tree.nodes[static_cast<std::size_t>(id)];
    nd.split_feature = choice->feature;
    nd.split_threshold = choice->threshold;
    nd.split_score = choice->score;
    nd.left = left_id;
    nd.right = right_id;
    return id;
}

inline Tree grow_tree_impl(const Dataset& ds, const ForestParams& params,
                           std::uint64_t tree_seed, const std::vector<int>* labels,
                           int n_classes) {
    GrowContext ctx{ds, params, labels, n_classes, params.effective_mtry(ds.d()),
                    std::mt19937_64(tree_seed), Tree{}};
    std::vector<std::size_t> inbag;
    if (params.bootstrap) {
        std::uniform_int_distribution<std::size_t> pick(0, ds.n() - 1);
        for (std::size_t i = 0; i < ds.n(); ++i) inbag.push_back(pick(ctx.rng));
        std::sort(inbag.begin(), inbag.end());
    } else {
        inbag.resize(ds.n());
        std::iota(inbag.begin(), inbag.end(), 0);
    }
    ctx.tree.inbag_sample_ids = inbag;
    ctx.tree.root_id = grow_node(ctx, inbag, 0);
    return ctx.tree;
}

}  // namespace detail

inline Tree grow_tree(const Dataset& ds, const ForestParams& params, std::uint64_t tree_seed) {
    params.validate(ds.d());
    return detail::grow_tree_impl(ds, params, tree_seed, nullptr, 0);
}

inline Forest train_unsupervised_forest(const Dataset& ds, const ForestParams& params) {
    params.validate(ds.d());
    Forest forest;
    forest.params = params;
    forest.mode = ForestMode::UnsupervisedFixation;
    forest.feature_names = ds.feature_names;
    forest.trees.reserve(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t)
        forest.trees.push_back(
            detail::grow_tree_impl(ds, params, detail::mix_seed(params.seed, t), nullptr, 0));
    return forest;
}

inline Forest train_supervised_forest(const Dataset& ds, const std::vector<int>& labels,
                                      const ForestParams& params) {
    params.validate(ds.d());
    if (labels.size() != ds.n())
        throw std::invalid_argument("label count does not match sample count");
    int n_classes = 0;
    for (int c : labels) {
        if (c < 0) throw std::invalid_argument("negative class label");
        n_classes = std::max(n_classes, c + 1);
    }
    Forest forest;
    forest.params = params;
    forest.mode = ForestMode::SupervisedGini;
    forest.feature_names = ds.feature_names;
    forest.trees.reserve(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t)
        forest.trees.push_back(detail::grow_tree_impl(
            ds, params, detail::mix_seed(params.seed, t), &labels, n_classes));
    return forest;
}

// Routes every sample (in-bag and out-of-bag) down every tree and counts
// co-leaf membership.
inline AffinityMatrix compute_affinity(const Forest& forest, const Dataset& ds) {
    if (forest.feature_names != ds.feature_names)
        throw std::invalid_argument("forest/dataset feature space mismatch");
    std::size_t n = ds.n();
    AffinityMatrix aff;
    aff.values = Matrix(n, n, 0.0);
    aff.n_trees_counted = forest.trees.size();

    std::vector<int> leaf_of(n);
    std::map<int, std::vector<std::size_t>> members;
    for (const Tree& tree : forest.trees) {
        members.clear();
        for (std::size_t i = 0; i < n; ++i) {
            leaf_of[i] = tree.route(ds.values, i);
            members[leaf_of[i]].push_back(i);
        }
        for (const auto& [leaf, group] : members)
            for (std::size_t a = 0; a < group.size(); ++a)
                for (std::size_t b = a + 1; b < group.size(); ++b) {
                    aff.values(group[a], group[b]) += 1.0;
                    aff.values(group[b], group[a]) += 1.0;
                }
    }
    double t = static_cast<double>(aff.n_trees_counted);
    for (double& v : aff.values.data()) v /= t;
    for (std::size_t i = 0; i < n; ++i) aff.values(i, i) = 1.0;
    return aff;
}

// Mean over trees of sum_{nodes splitting j} (N(node)/N(root)) * impurity decrease.
inline std::vector<double> gini_importance(const Forest& forest) {
    if (forest.mode != ForestMode::SupervisedGini)
        throw std::invalid_argument("gini_importance requires a supervised forest");
    std::vector<double> importance(forest.d(), 0.0);
    for (const Tree& tree : forest.trees) {
        double n_root = static_cast<double>(tree.root().n_inbag);
        for (const Node& nd : tree.nodes)
            if (!nd.is_leaf())
                importance[*nd.split_feature] +=
                    (static_cast<double>(nd.n_inbag) / n_root) * *nd.split_score;
    }
    for (double& v : importance) v /= static_cast<double>(forest.trees.size());
    return importance;
}

}  // namespace urfg
