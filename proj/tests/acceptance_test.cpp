// End-to-end acceptance checks. Each test prints a single summary line so the
// suite's verdict can be read off the log: one PASS/FAIL per criterion.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "urfg/urfg.hpp"

#ifndef URFG_CLI_PATH
#error "URFG_CLI_PATH must be defined"
#endif
#ifndef URFG_DATA_DIR
#error "URFG_DATA_DIR must be defined"
#endif

namespace fs = std::filesystem;

namespace {

void report(int num, const std::string& what) {
    std::cout << "[ACCEPTANCE] criterion " << num << " (" << what << "): "
              << (testing::Test::HasFailure() ? "FAIL" : "PASS") << std::endl;
}

double median(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return static_cast<double>(v[n / 2]);
    return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

urfg::ForestParams desk_params(std::size_t trees = 100) {
    urfg::ForestParams p;
    p.n_trees = trees;
    return p;
}

TEST(Acceptance, Criterion01FormulaOracles) {
    EXPECT_NEAR(urfg::fixation_split_score({0.0, 0.0}, {1.0, 1.0}), 1.0, 1e-9);
    EXPECT_NEAR(urfg::fixation_split_score({0.0, 1.0}, {0.0, 1.0}), -1.0, 1e-9);

    urfg::UndirectedFeatureGraph tri;
    tri.vertices = {"A", "B", "C"};
    tri.weights = urfg::Matrix(3, 3, 0.0);
    auto setw = [&](std::size_t a, std::size_t b, double w) {
        tri.weights(a, b) = tri.weights(b, a) = w;
    };
    setw(0, 1, 1.0);
    setw(0, 2, 2.0);
    setw(1, 2, 3.0);
    auto sw = urfg::subgraph_weight(tri, {0, 1, 2});
    EXPECT_NEAR(sw.total, 6.0, 1e-9);
    EXPECT_NEAR(sw.average, 2.0, 1e-9);
    setw(0, 1, 5.0);
    setw(0, 2, 4.0);
    setw(1, 2, 1.0);
    EXPECT_NEAR(urfg::average_new_weight(tri, 2, {0, 1}), 2.5, 1e-9);

    EXPECT_NEAR(urfg::adjusted_rand_index({0, 0, 1, 1}, {0, 0, 0, 1}), 0.0, 1e-9);

    auto r = urfg::pearson_correlation({1, 2, 3, 4}, {1, 2, 3, 5});
    EXPECT_NEAR(r.statistic, 6.5 / std::sqrt(5.0 * 8.75), 1e-9);

    urfg::Dataset ds;
    ds.values = urfg::Matrix(4, 1);
    for (int i = 0; i < 4; ++i) ds.values(static_cast<std::size_t>(i), 0) = i < 2 ? 0.0 : 1.0;
    ds.feature_names = {"x"};
    ds.sample_ids = {"a", "b", "c", "d"};
    auto split = urfg::best_gini_split(ds, {0, 0, 1, 1}, {0, 1, 2, 3}, {0}, 1, 2);
    ASSERT_TRUE(split.has_value());
    EXPECT_NEAR(split->score, 0.5, 1e-9);

    report(1, "formula oracles");
}

TEST(Acceptance, Criterion02GraphAdditivity) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        urfg::SyntheticDataset sd = urfg::make_ev2_cluster(seed);
        urfg::ForestParams params = desk_params(100);
        params.seed = seed;
        urfg::Forest forest = urfg::train_unsupervised_forest(sd.data, params);
        urfg::AffinityMatrix aff = urfg::compute_affinity(forest, sd.data);
        auto [assignment, dendro] = urfg::ward_cluster(urfg::affinity_to_distance(aff), 4);
        for (urfg::EdgeCriterion crit : urfg::all_criteria()) {
            urfg::DirectedFeatureGraph overall = urfg::build_graph(forest, crit);
            auto graphs = urfg::cluster_specific_graphs(forest, crit, assignment, sd.data);
            urfg::Matrix sum(overall.adjacency.rows(), overall.adjacency.cols(), 0.0);
            for (const auto& g : graphs)
                for (std::size_t i = 0; i < sum.data().size(); ++i)
                    sum.data()[i] += g.adjacency.data()[i];
            double max_err = 0.0;
            for (std::size_t i = 0; i < sum.data().size(); ++i)
                max_err = std::max(max_err,
                                   std::abs(sum.data()[i] - overall.adjacency.data()[i]));
            EXPECT_LE(max_err, 1e-9) << "seed " << seed << " criterion "
                                     << urfg::to_string(crit);
        }
    }
    report(2, "cluster graph additivity");
}

TEST(Acceptance, Criterion03Ev1CentralitySeparation) {
    urfg::Ev1Report rep = urfg::run_ev1_centrality_experiment(10, desk_params(100), 1);
    const auto& sample = rep.relevant_vs_irrelevant.at(urfg::EdgeCriterion::Sample);
    EXPECT_GT(sample.welch.statistic, 0.0);
    EXPECT_LT(sample.welch.p_value, 0.01);
    const auto& present = rep.relevant_vs_irrelevant.at(urfg::EdgeCriterion::Present);
    EXPECT_GE(sample.smd, present.smd);
    report(3, "ev1 centrality separation");
}

TEST(Acceptance, Criterion04Ev1EdgeWeightCorrelation) {
    urfg::Ev1PairsReport rep = urfg::run_ev1_pairs_experiment(10, desk_params(100), 2);
    const auto& pearson = rep.pearson.at(urfg::EdgeCriterion::Sample);
    EXPECT_GT(pearson.statistic, 0.0);
    EXPECT_LT(pearson.p_value, 0.05);
    report(4, "ev1 pair-weight correlation");
}

TEST(Acceptance, Criterion05Ev2Ordering) {
    urfg::Ev2Report rep = urfg::run_ev2_cluster_experiment(10, desk_params(100), 3);
    for (urfg::EdgeCriterion crit : urfg::all_criteria()) {
        const auto& pc = rep.by_criterion.at(crit);
        EXPECT_GE(pc.replicates_with_strict_ordering, 9u) << urfg::to_string(crit);
        EXPECT_GT(pc.welch_specific_vs_sub.statistic, 0.0) << urfg::to_string(crit);
        EXPECT_LT(pc.welch_specific_vs_sub.p_value, 0.05) << urfg::to_string(crit);
        EXPECT_GT(pc.welch_sub_vs_irrelevant.statistic, 0.0) << urfg::to_string(crit);
        EXPECT_LT(pc.welch_sub_vs_irrelevant.p_value, 0.05) << urfg::to_string(crit);
    }
    report(5, "ev2 cluster-specific ordering");
}

TEST(Acceptance, Criterion06Ev3Selection) {
    for (std::size_t q : {3u, 5u, 7u}) {
        urfg::Ev3Report rep = urfg::run_ev3_experiment(q, 10, desk_params(100), 4 + q);
        std::size_t greedy_ok = 0, brute_ok = 0;
        std::vector<std::size_t> drops;
        for (const auto& r : rep.replicates) {
            if (r.greedy_all_relevant_first) ++greedy_ok;
            if (r.brute_all_relevant_at_q) ++brute_ok;
            drops.push_back(r.largest_drop_position);
        }
        EXPECT_GE(greedy_ok, 9u) << "q = " << q;
        EXPECT_GE(brute_ok, 9u) << "q = " << q;
        EXPECT_DOUBLE_EQ(median(drops), static_cast<double>(q)) << "q = " << q;
    }
    report(6, "ev3 relevant-first selection");
}

TEST(Acceptance, Criterion07Ev4Redundancy) {
    urfg::ForestParams params;
    params.n_trees = 2000;
    params.min_leaf_size = 20;
    params.mtry = 3;
    urfg::Ev4Report rep = urfg::run_ev4_experiment(10, params, 5);
    std::size_t valid = 0;
    std::vector<std::size_t> first_drops, second_drops;
    for (const auto& r : rep.replicates) {
        if (r.triad_in_valid_set) ++valid;
        EXPECT_TRUE(r.greedy_matches_brute);
        ASSERT_EQ(r.two_largest_drop_positions.size(), 2u);
        first_drops.push_back(r.two_largest_drop_positions[0]);
        second_drops.push_back(r.two_largest_drop_positions[1]);
    }
    EXPECT_GE(valid, 9u);
    EXPECT_DOUBLE_EQ(median(first_drops), 3.0);
    EXPECT_DOUBLE_EQ(median(second_drops), 6.0);
    report(7, "ev4 redundancy triads");
}

TEST(Acceptance, Criterion08GreedyVsBruteRandomGraphs) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> d_dist(5, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t equal = 0, trials = 0;
    while (trials < 100) {
        std::size_t d = d_dist(rng);
        urfg::UndirectedFeatureGraph g;
        for (std::size_t j = 0; j < d; ++j) g.vertices.push_back("V" + std::to_string(j));
        g.weights = urfg::Matrix(d, d, 0.0);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a + 1; b < d; ++b)
                if (u(rng) < 0.5) g.weights(a, b) = g.weights(b, a) = u(rng) + 0.05;
        auto comps = urfg::connected_components(g);
        std::size_t comp = comps.front().size();
        if (comp < 2) continue;
        std::uniform_int_distribution<std::size_t> k_dist(2, std::min<std::size_t>(6, comp));
        std::size_t k = k_dist(rng);
        ++trials;
        auto greedy = urfg::greedy_select(g, k);
        auto brute = urfg::brute_force_select(g, k, urfg::SelectionObjective::MaxAW);
        double gaw = urfg::subgraph_weight(g, greedy.selected).average;
        double baw = urfg::subgraph_weight(g, brute.selected).average;
        EXPECT_LE(gaw, baw + 1e-12);
        std::set<std::size_t> gs(greedy.selected.begin(), greedy.selected.end());
        std::set<std::size_t> bs(brute.selected.begin(), brute.selected.end());
        if (gs == bs) ++equal;
    }
    EXPECT_GE(equal, 60u);
    report(8, "greedy vs brute-force on random graphs");
}

TEST(Acceptance, Criterion09BenchmarkDirection) {
    std::string data_dir = URFG_DATA_DIR;

    urfg::Dataset iris = urfg::load_csv(data_dir + "/iris.csv", true, std::string("label"));
    urfg::BenchmarkConfig iris_cfg;
    iris_cfg.trees = 200;
    iris_cfg.replicates = 10;
    iris_cfg.selection_trees = 200;
    iris_cfg.selection_replicates = 5;
    iris_cfg.seed = 6;
    urfg::ComparisonReport iris_rep = urfg::run_benchmark_comparison(iris, iris_cfg);
    ASSERT_FALSE(iris_rep.ks.empty());
    EXPECT_EQ(iris_rep.ks.back(), iris.d());
    EXPECT_NEAR(iris_rep.graph_ari_mean.back(), iris_rep.baseline_ari_mean, 0.05);

    urfg::Dataset wine = urfg::load_csv(data_dir + "/wine.csv", true, std::string("label"));
    ASSERT_GE(wine.d(), 13u);
    urfg::BenchmarkConfig wine_cfg;
    wine_cfg.trees = 100;
    wine_cfg.replicates = 10;
    wine_cfg.selection_trees = 100;
    wine_cfg.selection_replicates = 5;
    wine_cfg.seed = 7;
    urfg::ComparisonReport wine_rep = urfg::run_benchmark_comparison(wine, wine_cfg);
    double graph_mean = 0.0, impurity_mean = 0.0;
    for (std::size_t i = 0; i < wine_rep.ks.size(); ++i) {
        graph_mean += wine_rep.graph_ari_mean[i];
        impurity_mean += wine_rep.impurity_ari_mean[i];
    }
    graph_mean /= static_cast<double>(wine_rep.ks.size());
    impurity_mean /= static_cast<double>(wine_rep.ks.size());
    EXPECT_GE(graph_mean, impurity_mean - 0.05);

    // labels must not influence anything before the scoring stage
    EXPECT_TRUE(wine_rep.audit.stage_before("select", "labels_read"));
    report(9, "benchmark direction on iris and wine");
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(URFG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), root).string()] =
                urfg::read_text_file(entry.path().string());
    return files;
}

// every CLI command with a fixed seed, outputs under `root`
void run_cli_chain(const fs::path& root) {
    auto dir = [&](const std::string& name) { return (root / name).string(); };
    std::string data_dir = URFG_DATA_DIR;
    ASSERT_EQ(run_cli("generate --suite ev2_cluster --seed 7 --out-dir " + dir("gen")), 0);
    std::string csv = dir("gen") + "/ev2_cluster.csv";
    ASSERT_EQ(run_cli("cluster --input " + csv + " --label-column label --p 4 --trees 30 "
                      "--seed 7 --out-dir " + dir("clu")), 0);
    ASSERT_EQ(run_cli("graph --forest " + dir("clu") + "/forest.json --data " + csv +
                      " --label-column label --assignments " + dir("clu") +
                      "/assignments.csv --criterion sample --out-dir " + dir("gra")), 0);
    ASSERT_EQ(run_cli("rank --graph " + dir("gra") + "/graph_overall.json --out-dir " +
                      dir("rnk")), 0);
    ASSERT_EQ(run_cli("select --graph " + dir("gra") + "/graph_overall.json --k 3 "
                      "--method brute --out-dir " + dir("sel")), 0);
    ASSERT_EQ(run_cli("pipeline --suite ev2_cluster --p 4 --k 3 --trees 30 --seed 7 "
                      "--out-dir " + dir("pip")), 0);
    ASSERT_EQ(run_cli("experiment --suite ev1_pairs --replicates 2 --trees 20 --seed 7 "
                      "--out-dir " + dir("exp")), 0);
    ASSERT_EQ(run_cli("benchmark --input " + data_dir + "/iris.csv --label-column label "
                      "--trees 20 --replicates 2 --selection-trees 20 "
                      "--selection-replicates 2 --max-k 3 --seed 7 --out-dir " + dir("ben")), 0);
}

TEST(Acceptance, Criterion10CliDeterminism) {
    fs::path base = fs::path(testing::TempDir()) / "urfg_acceptance_cli";
    fs::remove_all(base);
    fs::path run1 = base / "run1", run2 = base / "run2";
    fs::create_directories(run1);
    fs::create_directories(run2);
    run_cli_chain(run1);
    run_cli_chain(run2);
    if (!testing::Test::HasFailure()) {
        auto a = read_tree(run1);
        auto b = read_tree(run2);
        EXPECT_EQ(a.size(), b.size());
        EXPECT_GE(a.size(), 20u);
        for (const auto& [name, content] : a) {
            auto it = b.find(name);
            ASSERT_NE(it, b.end()) << name;
            EXPECT_EQ(content, it->second) << "output differs across reruns: " << name;
        }
    }
    report(10, "CLI determinism");
}

}  // namespace
