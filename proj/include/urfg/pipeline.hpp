#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urfg/clustering.hpp"
#include "urfg/dataset.hpp"
#include "urfg/feature_graph.hpp"
#include "urfg/forest.hpp"
#include "urfg/graph_mining.hpp"
#include "urfg/serialize.hpp"
#include "urfg/stats.hpp"
#include "urfg/synthetic.hpp"

namespace urfg {

// FNV-1a over raw bytes; used for the pipeline audit trail.
inline std::uint64_t content_hash(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) h = (h ^ p[i]) * 0x100000001b3ULL;
    return h;
}

inline std::uint64_t content_hash(const std::vector<double>& v) {
    return content_hash(v.data(), v.size() * sizeof(double));
}

struct AuditEntry {
    std::string stage;
    std::uint64_t hash = 0;
};

struct AuditLog {
    std::vector<AuditEntry> entries;
    void record(const std::string& stage, std::uint64_t hash) { entries.push_back({stage, hash}); }
    bool stage_before(const std::string& a, const std::string& b) const {
        auto find = [&](const std::string& s) {
            for (std::size_t i = 0; i < entries.size(); ++i)
                if (entries[i].stage == s) return static_cast<long>(i);
            return -1L;
        };
        long ia = find(a), ib = find(b);
        return ia >= 0 && ib >= 0 && ia < ib;
    }
    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : entries) j.push_back({{"stage", e.stage}, {"hash", e.hash}});
        return j;
    }
};

struct PipelineConfig {
    ForestParams forest;
    EdgeCriterion criterion = EdgeCriterion::Sample;
    std::size_t p = 2;
    SelectionMethod method = SelectionMethod::Greedy;
    SelectionObjective objective = SelectionObjective::MaxAW;
    std::size_t k = 3;
    bool include_leaf_edges = true;
    GraphOptions graph_options;
};

struct PipelineOutputs {
    Forest forest;
    AffinityMatrix affinity;
    ClusterAssignment assignment;
    Dendrogram dendrogram;
    DirectedFeatureGraph overall_graph;
    std::vector<DirectedFeatureGraph> cluster_graphs;
    UndirectedFeatureGraph undirected;
    std::vector<double> centrality;
    SelectionResult selection;
    AuditLog audit;
};

// Full chain: forest -> affinity -> ward -> graphs -> centrality + selection.
inline PipelineOutputs run_pipeline(const Dataset& ds, const PipelineConfig& cfg) {
    PipelineOutputs out;
    out.audit.record("input", content_hash(ds.values.data()));
    out.forest = train_unsupervised_forest(ds, cfg.forest);
    out.audit.record("train_unsupervised_forest", content_hash(&cfg.forest.seed, sizeof cfg.forest.seed));
    out.affinity = compute_affinity(out.forest, ds);
    out.audit.record("compute_affinity", content_hash(out.affinity.values.data()));
    Matrix dist = affinity_to_distance(out.affinity);
    out.audit.record("affinity_to_distance", content_hash(dist.data()));
    auto [assignment, dendro] = ward_cluster(dist, cfg.p);
    out.assignment = assignment;
    out.dendrogram = dendro;
    out.audit.record("ward_cluster",
                     content_hash(assignment.labels.data(), assignment.labels.size() * sizeof(int)));
    out.overall_graph = build_graph(out.forest, cfg.criterion, std::nullopt, cfg.graph_options);
    out.audit.record("build_graph", content_hash(out.overall_graph.adjacency.data()));
    out.cluster_graphs =
        cluster_specific_graphs(out.forest, cfg.criterion, out.assignment, ds, cfg.graph_options);
    out.undirected = to_undirected(out.overall_graph);
    out.centrality = out_degree_centrality(out.overall_graph, cfg.include_leaf_edges);
    out.audit.record("out_degree_centrality", content_hash(out.centrality));
    std::size_t k = std::min(cfg.k, ds.d());
    out.selection = cfg.method == SelectionMethod::Greedy
                        ? greedy_select(out.undirected, k)
                        : brute_force_select(out.undirected, k, cfg.objective);
    out.audit.record("select", content_hash(out.selection.avg));
    return out;
}

inline void write_pipeline_outputs(const Dataset& ds, const PipelineOutputs& out,
                                   const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
    write_text_file(path("assignments.csv"), assignments_csv(out.assignment, ds.sample_ids));
    write_text_file(path("affinity.csv"), affinity_csv(out.affinity));
    write_text_file(path("dendrogram.json"), dendrogram_to_json(out.dendrogram).dump(2) + "\n");
    write_text_file(path("graph_overall.json"), export_graph(out.overall_graph, "json"));
    write_text_file(path("graph_overall.csv"), export_graph(out.overall_graph, "adjacency_csv"));
    for (std::size_t c = 0; c < out.cluster_graphs.size(); ++c)
        write_text_file(path("graph_cluster_" + std::to_string(c) + ".json"),
                        export_graph(out.cluster_graphs[c], "json"));
    write_text_file(path("centrality.csv"), centrality_csv(ds.feature_names, out.centrality));
    write_text_file(path("selection.json"),
                    selection_to_json(out.selection, ds.feature_names).dump(2) + "\n");
    write_text_file(path("selection_trace.csv"),
                    selection_trace_csv(out.selection, ds.feature_names));
    write_text_file(path("audit.json"), out.audit.to_json().dump(2) + "\n");
}

// ---- synthetic experiment harness ----

inline const std::vector<EdgeCriterion>& all_criteria() {
    static const std::vector<EdgeCriterion> cs = {EdgeCriterion::Present, EdgeCriterion::Fixation,
                                                  EdgeCriterion::Level, EdgeCriterion::Sample};
    return cs;
}

struct GroupComparison {
    std::vector<double> group_a;  // pooled values across replicates
    std::vector<double> group_b;
    TestResult welch;
    double smd = 0.0;  // standardized mean difference, a - b
};

struct Ev1Report {
    std::map<EdgeCriterion, GroupComparison> relevant_vs_irrelevant;
};

inline Ev1Report run_ev1_centrality_experiment(std::size_t replicates, ForestParams params,
                                               std::uint64_t base_seed) {
    Ev1Report report;
    for (std::size_t r = 0; r < replicates; ++r) {
        SyntheticDataset sd = make_ev1_centrality(base_seed + r);
        params.seed = base_seed + r;
        Forest forest = train_unsupervised_forest(sd.data, params);
        for (EdgeCriterion crit : all_criteria()) {
            DirectedFeatureGraph g = build_graph(forest, crit);
            std::vector<double> cent = out_degree_centrality(g);
            GroupComparison& gc = report.relevant_vs_irrelevant[crit];
            for (std::size_t j : sd.annotation.relevant_indices()) gc.group_a.push_back(cent[j]);
            for (std::size_t j : sd.annotation.irrelevant_indices()) gc.group_b.push_back(cent[j]);
        }
    }
    for (auto& [crit, gc] : report.relevant_vs_irrelevant) {
        gc.welch = welch_t_test(gc.group_a, gc.group_b);
        gc.smd = standardized_mean_difference(gc.group_a, gc.group_b);
    }
    return report;
}

struct Ev1PairsReport {
    // pooled (edge weight, separated cluster count) points per criterion
    std::map<EdgeCriterion, TestResult> pearson;
    std::map<EdgeCriterion, std::vector<std::pair<double, int>>> points;
};

inline Ev1PairsReport run_ev1_pairs_experiment(std::size_t replicates, ForestParams params,
                                               std::uint64_t base_seed) {
    Ev1PairsReport report;
    for (std::size_t r = 0; r < replicates; ++r) {
        SyntheticDataset sd = make_ev1_pairs(base_seed + r);
        params.seed = base_seed + r;
        Forest forest = train_unsupervised_forest(sd.data, params);
        for (EdgeCriterion crit : all_criteria()) {
            UndirectedFeatureGraph u = to_undirected(build_graph(forest, crit));
            for (const auto& pr : sd.annotation.pairs)
                report.points[crit].push_back({u.weights(pr.a, pr.b), pr.separated_clusters});
        }
    }
    for (auto& [crit, pts] : report.points) {
        std::vector<double> w, m;
        for (const auto& [weight, sep] : pts) {
            w.push_back(weight);
            m.push_back(static_cast<double>(sep));
        }
        report.pearson[crit] = pearson_correlation(w, m);
    }
    return report;
}

// Majority-vote map from predicted cluster id to ground-truth cluster id.
inline std::map<int, int> majority_cluster_map(const ClusterAssignment& assignment,
                                               const std::vector<int>& truth) {
    std::map<int, std::map<int, std::size_t>> counts;
    for (std::size_t i = 0; i < truth.size(); ++i)
        counts[assignment.labels[i]][truth[i]]++;
    std::map<int, int> out;
    for (const auto& [pred, hist] : counts) {
        int best = -1;
        std::size_t best_n = 0;
        for (const auto& [g, n] : hist)
            if (n > best_n) {
                best_n = n;
                best = g;
            }
        out[pred] = best;
    }
    return out;
}

struct Ev2Report {
    struct PerCriterion {
        std::vector<double> cluster_specific;  // pooled centralities
        std::vector<double> sub_relevant;
        std::vector<double> irrelevant;
        std::size_t replicates_with_strict_ordering = 0;
        TestResult welch_specific_vs_sub;
        TestResult welch_sub_vs_irrelevant;
    };
    std::map<EdgeCriterion, PerCriterion> by_criterion;
    std::size_t replicates = 0;
};

inline Ev2Report run_ev2_cluster_experiment(std::size_t replicates, ForestParams params,
                                            std::uint64_t base_seed) {
    Ev2Report report;
    report.replicates = replicates;
    for (std::size_t r = 0; r < replicates; ++r) {
        SyntheticDataset sd = make_ev2_cluster(base_seed + r);
        params.seed = base_seed + r;
        Forest forest = train_unsupervised_forest(sd.data, params);
        AffinityMatrix aff = compute_affinity(forest, sd.data);
        auto [assignment, dendro] = ward_cluster(affinity_to_distance(aff), 4);
        auto truth_of = majority_cluster_map(assignment, *sd.data.labels);

        for (EdgeCriterion crit : all_criteria()) {
            auto graphs = cluster_specific_graphs(forest, crit, assignment, sd.data);
            auto& pc = report.by_criterion[crit];
            double mean_spec = 0, mean_sub = 0, mean_irr = 0;
            std::size_t n_spec = 0, n_sub = 0, n_irr = 0;
            for (std::size_t c = 0; c < graphs.size(); ++c) {
                std::vector<double> cent = out_degree_centrality(graphs[c]);
                int g = truth_of[static_cast<int>(c)];
                // relevant feature g singles out ground-truth cluster g
                for (std::size_t j = 0; j < cent.size(); ++j) {
                    if (sd.annotation.roles[j] == FeatureRole::Irrelevant) {
                        pc.irrelevant.push_back(cent[j]);
                        mean_irr += cent[j];
                        ++n_irr;
                    } else if (static_cast<int>(j) == g) {
                        pc.cluster_specific.push_back(cent[j]);
                        mean_spec += cent[j];
                        ++n_spec;
                    } else {
                        pc.sub_relevant.push_back(cent[j]);
                        mean_sub += cent[j];
                        ++n_sub;
                    }
                }
            }
            if (n_spec && n_sub && n_irr) {
                mean_spec /= static_cast<double>(n_spec);
                mean_sub /= static_cast<double>(n_sub);
                mean_irr /= static_cast<double>(n_irr);
                if (mean_spec > mean_sub && mean_sub > mean_irr)
                    pc.replicates_with_strict_ordering++;
            }
        }
    }
    for (auto& [crit, pc] : report.by_criterion) {
        pc.welch_specific_vs_sub = welch_t_test(pc.cluster_specific, pc.sub_relevant);
        pc.welch_sub_vs_irrelevant = welch_t_test(pc.sub_relevant, pc.irrelevant);
    }
    return report;
}

struct Ev3Replicate {
    std::vector<std::size_t> greedy_order;          // greedy selection order, k = 12
    std::vector<double> greedy_avg;                 // avg trace
    std::set<std::size_t> brute_at_q;               // brute-force set at k = q
    bool greedy_all_relevant_first = false;
    bool brute_all_relevant_at_q = false;
    std::size_t largest_drop_position = 0;          // 1-based avg index
    std::vector<double> relevant_fraction_by_k;     // k = 2..12 (greedy prefixes)
};

struct Ev3Report {
    std::size_t q = 0;
    std::vector<Ev3Replicate> replicates;
};

inline Ev3Report run_ev3_experiment(std::size_t q, std::size_t replicates, ForestParams params,
                                    std::uint64_t base_seed,
                                    EdgeCriterion criterion = EdgeCriterion::Sample) {
    Ev3Report report;
    report.q = q;
    for (std::size_t r = 0; r < replicates; ++r) {
        SyntheticDataset sd = make_ev3_relevant(q, base_seed + r);
        params.seed = base_seed + r;
        Forest forest = train_unsupervised_forest(sd.data, params);
        UndirectedFeatureGraph u = to_undirected(build_graph(forest, criterion));

        Ev3Replicate rep;
        SelectionResult greedy = greedy_select(u, 12);
        rep.greedy_order = greedy.selected;
        rep.greedy_avg = greedy.avg;

        auto relevant = sd.annotation.relevant_indices();
        std::set<std::size_t> relevant_set(relevant.begin(), relevant.end());
        rep.greedy_all_relevant_first =
            greedy.selected.size() >= q &&
            std::all_of(greedy.selected.begin(), greedy.selected.begin() + static_cast<long>(q),
                        [&](std::size_t v) { return relevant_set.count(v) > 0; });

        SelectionResult brute = brute_force_select(u, std::min(q, greedy.selected.size()),
                                                   SelectionObjective::MaxAW);
        rep.brute_at_q = {brute.selected.begin(), brute.selected.end()};
        rep.brute_all_relevant_at_q =
            rep.brute_at_q.size() == q &&
            std::all_of(rep.brute_at_q.begin(), rep.brute_at_q.end(),
                        [&](std::size_t v) { return relevant_set.count(v) > 0; });

        if (greedy.selected.size() >= 3)
            rep.largest_drop_position = knee_report(greedy).front().position;

        for (std::size_t k = 2; k <= 12 && k <= greedy.selected.size(); ++k) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (relevant_set.count(greedy.selected[i])) ++hits;
            rep.relevant_fraction_by_k.push_back(static_cast<double>(hits) /
                                                 static_cast<double>(std::min(k, q)));
        }
        report.replicates.push_back(std::move(rep));
    }
    return report;
}

struct Ev4Replicate {
    std::vector<std::size_t> best_triad;  // sorted
    double best_triad_aw = 0.0;
    bool triad_in_valid_set = false;
    bool greedy_matches_brute = false;
    std::vector<std::pair<std::vector<std::size_t>, double>> all_triads;  // sorted by AW desc
    std::vector<double> greedy_avg;
    std::vector<std::size_t> two_largest_drop_positions;
};

struct Ev4Report {
    std::vector<Ev4Replicate> replicates;
};

inline Ev4Report run_ev4_experiment(std::size_t replicates, ForestParams params,
                                    std::uint64_t base_seed,
                                    EdgeCriterion criterion = EdgeCriterion::Sample) {
    Ev4Report report;
    for (std::size_t r = 0; r < replicates; ++r) {
        SyntheticDataset sd = make_ev4_redundant(base_seed + r);
        params.seed = base_seed + r;
        Forest forest = train_unsupervised_forest(sd.data, params);
        UndirectedFeatureGraph u = to_undirected(build_graph(forest, criterion));

        Ev4Replicate rep;
        // rank all C(10,3) triads by AW
        for (std::size_t a = 0; a < u.d(); ++a)
            for (std::size_t b = a + 1; b < u.d(); ++b)
                for (std::size_t c = b + 1; c < u.d(); ++c) {
                    std::vector<std::size_t> triad{a, b, c};
                    rep.all_triads.push_back({triad, subgraph_weight(u, triad).average});
                }
        std::stable_sort(rep.all_triads.begin(), rep.all_triads.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        rep.best_triad = rep.all_triads.front().first;
        rep.best_triad_aw = rep.all_triads.front().second;

        // valid set: one of {V1,V2} x {V3,V4} x {V5,V6}
        rep.triad_in_valid_set =
            rep.best_triad.size() == 3 &&
            (rep.best_triad[0] <= 1) && (rep.best_triad[1] >= 2 && rep.best_triad[1] <= 3) &&
            (rep.best_triad[2] >= 4 && rep.best_triad[2] <= 5);

        SelectionResult brute = brute_force_select(u, 3, SelectionObjective::MaxAW);
        SelectionResult greedy3 = greedy_select(u, 3);
        std::set<std::size_t> bs(brute.selected.begin(), brute.selected.end());
        std::set<std::size_t> gs(greedy3.selected.begin(), greedy3.selected.end());
        rep.greedy_matches_brute = bs == gs;

        SelectionResult greedy_full = greedy_select(u, u.d() - 1);
        rep.greedy_avg = greedy_full.avg;
        if (greedy_full.selected.size() >= 3) {
            auto drops = knee_report(greedy_full);
            rep.two_largest_drop_positions = {drops[0].position};
            if (drops.size() > 1) rep.two_largest_drop_positions.push_back(drops[1].position);
            std::sort(rep.two_largest_drop_positions.begin(),
                      rep.two_largest_drop_positions.end());
        }
        report.replicates.push_back(std::move(rep));
    }
    return report;
}

// ---- benchmark comparison ----

struct BenchmarkConfig {
    std::size_t trees = 100;            // unsupervised forests for graph/importance
    std::size_t replicates = 10;
    std::size_t selection_trees = 100;  // forests retrained per feature subset
    std::size_t selection_replicates = 5;
    std::size_t min_leaf_size = 5;
    EdgeCriterion criterion = EdgeCriterion::Sample;
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_k;   // default: d
};

struct ComparisonReport {
    std::vector<std::size_t> ks;  // contiguous from 2
    std::vector<double> graph_ari_mean, graph_ari_sd;
    std::vector<double> impurity_ari_mean, impurity_ari_sd;
    double baseline_ari_mean = 0.0;  // no-selection pipeline
    TestResult pearson_centrality_vs_gini;
    std::vector<double> centrality;
    std::vector<double> gini;
    AuditLog audit;
};

namespace detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
    double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return {m, sd};
}

// Mean ARI of ward clustering on unsupervised forests trained on a feature
// subset, against ground truth.
inline std::pair<double, double> subset_clustering_ari(
    const Dataset& ds, const std::vector<std::size_t>& subset, std::size_t p,
    const std::vector<int>& truth, const BenchmarkConfig& cfg, std::uint64_t seed_offset) {
    Dataset sub = select_features(ds, subset);
    std::vector<double> aris;
    for (std::size_t r = 0; r < cfg.selection_replicates; ++r) {
        ForestParams params;
        params.n_trees = cfg.selection_trees;
        params.min_leaf_size = cfg.min_leaf_size;
        params.seed = cfg.seed + seed_offset + r;
        Forest forest = train_unsupervised_forest(sub, params);
        AffinityMatrix aff = compute_affinity(forest, sub);
        auto [assignment, dendro] = ward_cluster(affinity_to_distance(aff), p);
        aris.push_back(adjusted_rand_index(assignment.labels, truth));
    }
    return mean_sd(aris);
}

}  // namespace detail

// Graph-based vs impurity-based top-k selection, scored by clustering ARI.
// Ground-truth labels are read only at the final scoring stage.
inline ComparisonReport run_benchmark_comparison(const Dataset& ds, const BenchmarkConfig& cfg) {
    if (!ds.labels) throw std::invalid_argument("benchmark requires ground-truth labels");
    ComparisonReport report;
    std::size_t d = ds.d();
    std::set<int> distinct(ds.labels->begin(), ds.labels->end());
    std::size_t p = distinct.size();

    report.audit.record("input", content_hash(ds.values.data()));

    // replicate unsupervised training; average the feature graphs
    std::vector<DirectedFeatureGraph> graphs;
    std::vector<ClusterAssignment> assignments;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        ForestParams params;
        params.n_trees = cfg.trees;
        params.min_leaf_size = cfg.min_leaf_size;
        params.seed = cfg.seed + r;
        Forest forest = train_unsupervised_forest(ds, params);
        graphs.push_back(build_graph(forest, cfg.criterion));
        AffinityMatrix aff = compute_affinity(forest, ds);
        auto [assignment, dendro] = ward_cluster(affinity_to_distance(aff), p);
        assignments.push_back(assignment);
    }
    report.audit.record("train_unsupervised_replicates", content_hash(graphs.front().adjacency.data()));
    DirectedFeatureGraph avg_graph = average_graphs(graphs);
    report.audit.record("average_graphs", content_hash(avg_graph.adjacency.data()));
    report.centrality = out_degree_centrality(avg_graph);

    // supervised forests on the cluster predictions, for gini importance
    std::vector<double> gini_sum(d, 0.0);
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        ForestParams params;
        params.n_trees = cfg.trees;
        params.min_leaf_size = cfg.min_leaf_size;
        params.seed = cfg.seed + 1000 + r;
        Forest sup = train_supervised_forest(ds, assignments[r].labels, params);
        std::vector<double> imp = gini_importance(sup);
        for (std::size_t j = 0; j < d; ++j) gini_sum[j] += imp[j];
    }
    report.gini.resize(d);
    for (std::size_t j = 0; j < d; ++j)
        report.gini[j] = gini_sum[j] / static_cast<double>(cfg.replicates);
    report.audit.record("gini_importance", content_hash(report.gini));
    report.pearson_centrality_vs_gini = pearson_correlation(report.centrality, report.gini);

    // rankings: greedy order over the averaged graph; gini descending
    UndirectedFeatureGraph u = to_undirected(avg_graph);
    SelectionResult greedy_full = greedy_select(u, d);
    std::vector<std::size_t> gini_order(d);
    std::iota(gini_order.begin(), gini_order.end(), 0);
    std::stable_sort(gini_order.begin(), gini_order.end(), [&](std::size_t a, std::size_t b) {
        if (report.gini[a] != report.gini[b]) return report.gini[a] > report.gini[b];
        return a < b;
    });
    report.audit.record("select", content_hash(greedy_full.avg));

    // scoring: ground truth read from here on
    report.audit.record("labels_read", content_hash(ds.labels->data(),
                                                    ds.labels->size() * sizeof(int)));
    std::size_t max_k = cfg.max_k ? std::min(*cfg.max_k, d) : d;
    for (std::size_t k = 2; k <= max_k; ++k) {
        std::vector<std::size_t> graph_subset(
            greedy_full.selected.begin(),
            greedy_full.selected.begin() +
                static_cast<long>(std::min(k, greedy_full.selected.size())));
        std::sort(graph_subset.begin(), graph_subset.end());
        std::vector<std::size_t> gini_subset(gini_order.begin(),
                                             gini_order.begin() + static_cast<long>(k));
        std::sort(gini_subset.begin(), gini_subset.end());

        // shared seed schedule for both arms
        auto [gm, gsd] = detail::subset_clustering_ari(ds, graph_subset, p, *ds.labels, cfg,
                                                       10000 + 100 * k);
        auto [im, isd] = detail::subset_clustering_ari(ds, gini_subset, p, *ds.labels, cfg,
                                                       10000 + 100 * k);
        report.ks.push_back(k);
        report.graph_ari_mean.push_back(gm);
        report.graph_ari_sd.push_back(gsd);
        report.impurity_ari_mean.push_back(im);
        report.impurity_ari_sd.push_back(isd);
    }

    // no-selection baseline with the k = d seed schedule
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), 0);
    report.baseline_ari_mean =
        detail::subset_clustering_ari(ds, all, p, *ds.labels, cfg, 10000 + 100 * max_k).first;
    report.audit.record("score", content_hash(report.graph_ari_mean));
    return report;
}

// ---- JSON reports ----

inline nlohmann::json test_result_json(const TestResult& t) {
    return {{"statistic", t.statistic}, {"p_value", t.p_value}};
}

inline nlohmann::json ev1_report_json(const Ev1Report& r) {
    nlohmann::json j;
    for (const auto& [crit, gc] : r.relevant_vs_irrelevant) {
        nlohmann::json e;
        e["welch"] = test_result_json(gc.welch);
        e["smd"] = gc.smd;
        e["relevant_centralities"] = gc.group_a;
        e["irrelevant_centralities"] = gc.group_b;
        j[to_string(crit)] = e;
    }
    return j;
}

inline nlohmann::json ev1_pairs_report_json(const Ev1PairsReport& r) {
    nlohmann::json j;
    for (const auto& [crit, pr] : r.pearson) {
        nlohmann::json e;
        e["pearson"] = test_result_json(pr);
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& [w, m] : r.points.at(crit))
            pts.push_back({{"weight", w}, {"separated_clusters", m}});
        e["points"] = pts;
        j[to_string(crit)] = e;
    }
    return j;
}

inline nlohmann::json ev2_report_json(const Ev2Report& r) {
    nlohmann::json j;
    for (const auto& [crit, pc] : r.by_criterion) {
        nlohmann::json e;
        e["replicates_with_strict_ordering"] = pc.replicates_with_strict_ordering;
        e["replicates"] = r.replicates;
        e["welch_specific_vs_sub"] = test_result_json(pc.welch_specific_vs_sub);
        e["welch_sub_vs_irrelevant"] = test_result_json(pc.welch_sub_vs_irrelevant);
        j[to_string(crit)] = e;
    }
    return j;
}

inline nlohmann::json ev3_report_json(const Ev3Report& r) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : r.replicates)
        reps.push_back({{"greedy_order", rep.greedy_order},
                        {"greedy_avg", rep.greedy_avg},
                        {"greedy_all_relevant_first", rep.greedy_all_relevant_first},
                        {"brute_all_relevant_at_q", rep.brute_all_relevant_at_q},
                        {"largest_drop_position", rep.largest_drop_position},
                        {"relevant_fraction_by_k", rep.relevant_fraction_by_k}});
    return {{"q", r.q}, {"replicates", reps}};
}

inline nlohmann::json ev4_report_json(const Ev4Report& r) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : r.replicates) {
        nlohmann::json triads = nlohmann::json::array();
        for (const auto& [t, aw] : rep.all_triads)
            triads.push_back({{"triad", t}, {"aw", aw}});
        reps.push_back({{"best_triad", rep.best_triad},
                        {"best_triad_aw", rep.best_triad_aw},
                        {"triad_in_valid_set", rep.triad_in_valid_set},
                        {"greedy_matches_brute", rep.greedy_matches_brute},
                        {"greedy_avg", rep.greedy_avg},
                        {"two_largest_drop_positions", rep.two_largest_drop_positions},
                        {"ranked_triads", triads}});
    }
    return {{"replicates", reps}};
}

inline nlohmann::json comparison_report_json(const ComparisonReport& r) {
    return {{"k", r.ks},
            {"graph_ari_mean", r.graph_ari_mean},
            {"graph_ari_sd", r.graph_ari_sd},
            {"impurity_ari_mean", r.impurity_ari_mean},
            {"impurity_ari_sd", r.impurity_ari_sd},
            {"baseline_ari_mean", r.baseline_ari_mean},
            {"pearson_centrality_vs_gini", test_result_json(r.pearson_centrality_vs_gini)},
            {"centrality", r.centrality},
            {"gini_importance", r.gini},
            {"audit", r.audit.to_json()}};
}

}  // namespace urfg
