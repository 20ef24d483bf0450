// Command-line pipelines: synthetic data generation, unsupervised forest
// clustering, feature graph construction and mining, and the benchmark
// comparison between graph-based and impurity-based feature selection.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "urfg/urfg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::size_t trees = 100;
    std::size_t replicates = 10;
    std::size_t min_leaf = 5;
    std::size_t mtry = 0;
    std::string out_dir = ".";
};

void add_global_flags(CLI::App* cmd, GlobalOptions& g) {
    cmd->add_option("--seed", g.seed, "base RNG seed");
    cmd->add_option("--trees", g.trees, "trees per forest");
    cmd->add_option("--replicates", g.replicates, "replicate count");
    cmd->add_option("--min-leaf", g.min_leaf, "minimum leaf size");
    cmd->add_option("--mtry", g.mtry, "features sampled per node (0 = ceil(sqrt(d)))");
    cmd->add_option("--out-dir", g.out_dir, "output directory");
}

urfg::ForestParams forest_params(const GlobalOptions& g) {
    urfg::ForestParams p;
    p.n_trees = g.trees;
    p.min_leaf_size = g.min_leaf;
    p.mtry = g.mtry;
    p.seed = g.seed;
    return p;
}

std::string out_path(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

json annotation_json(const urfg::SyntheticAnnotation& ann, std::size_t q) {
    json j;
    json roles = json::array();
    for (auto r : ann.roles)
        roles.push_back(r == urfg::FeatureRole::Relevant ? "relevant" : "irrelevant");
    j["roles"] = roles;
    j["redundancy_group"] = ann.redundancy_group;
    if (!ann.pairs.empty()) {
        json pairs = json::array();
        for (const auto& p : ann.pairs)
            pairs.push_back({{"a", p.a}, {"b", p.b}, {"separated_clusters", p.separated_clusters}});
        j["pairs"] = pairs;
    }
    j["q"] = q;
    return j;
}

urfg::ClusterAssignment read_assignments(const std::string& path) {
    std::string text = urfg::read_text_file(path);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    urfg::ClusterAssignment a;
    int max_c = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = urfg::detail::split_csv_line(line);
        if (cells.size() != 2) throw std::runtime_error("bad assignments row: " + line);
        int c = std::stoi(cells[1]);
        a.labels.push_back(c);
        max_c = std::max(max_c, c);
    }
    a.p = static_cast<std::size_t>(max_c + 1);
    return a;
}

int run(int argc, char** argv) {
    CLI::App app{"unsupervised random forest feature graphs"};
    app.require_subcommand(1);

    // generate
    auto gen = app.add_subcommand("generate", "write a synthetic suite as CSV + JSON sidecar");
    GlobalOptions gen_g;
    std::string gen_suite = "ev1_centrality";
    std::size_t gen_q = 3;
    gen->add_option("--suite", gen_suite,
                    "ev1_centrality|ev1_pairs|ev2_cluster|ev3_relevant|ev4_redundant")
        ->required();
    gen->add_option("--q", gen_q, "relevant feature count for ev3_relevant");
    add_global_flags(gen, gen_g);
    gen->callback([&] {
        urfg::SyntheticDataset sd = urfg::synthetic_suite(gen_suite, gen_g.seed, gen_q);
        urfg::write_csv(sd.data, out_path(gen_g, gen_suite + ".csv"), true);
        json sidecar;
        sidecar["suite"] = gen_suite;
        sidecar["seed"] = gen_g.seed;
        sidecar["labels"] = *sd.data.labels;
        sidecar["annotation"] = annotation_json(sd.annotation, gen_q);
        urfg::write_text_file(out_path(gen_g, gen_suite + ".json"), sidecar.dump(2) + "\n");
        std::cout << "wrote " << out_path(gen_g, gen_suite + ".csv") << "\n";
    });

    // cluster
    auto clu = app.add_subcommand("cluster", "train an unsupervised forest and cluster");
    GlobalOptions clu_g;
    std::string clu_input, clu_label;
    std::size_t clu_p = 2;
    clu->add_option("--input", clu_input, "input CSV")->required();
    clu->add_option("--label-column", clu_label, "column holding evaluation labels");
    clu->add_option("--p", clu_p, "number of clusters")->required();
    add_global_flags(clu, clu_g);
    clu->callback([&] {
        auto label = clu_label.empty() ? std::nullopt : std::optional<std::string>(clu_label);
        urfg::Dataset ds = urfg::load_csv(clu_input, true, label);
        urfg::Forest forest = urfg::train_unsupervised_forest(ds, forest_params(clu_g));
        urfg::AffinityMatrix aff = urfg::compute_affinity(forest, ds);
        auto [assignment, dendro] = urfg::ward_cluster(urfg::affinity_to_distance(aff), clu_p);
        urfg::write_text_file(out_path(clu_g, "forest.json"),
                              urfg::forest_to_json(forest).dump() + "\n");
        urfg::write_text_file(out_path(clu_g, "affinity.csv"), urfg::affinity_csv(aff));
        urfg::write_text_file(out_path(clu_g, "assignments.csv"),
                              urfg::assignments_csv(assignment, ds.sample_ids));
        urfg::write_text_file(out_path(clu_g, "dendrogram.json"),
                              urfg::dendrogram_to_json(dendro).dump(2) + "\n");
        if (ds.labels) {
            double ari = urfg::adjusted_rand_index(assignment.labels, *ds.labels);
            json j{{"ari", ari}};
            urfg::write_text_file(out_path(clu_g, "ari.json"), j.dump(2) + "\n");
        }
        std::cout << "wrote assignments to " << out_path(clu_g, "assignments.csv") << "\n";
    });

    // graph
    auto gra = app.add_subcommand("graph", "build feature graphs from a trained forest");
    GlobalOptions gra_g;
    std::string gra_forest, gra_data, gra_assign, gra_label, gra_criterion = "sample";
    bool gra_raw_fixation = false;
    gra->add_option("--forest", gra_forest, "forest JSON")->required();
    gra->add_option("--data", gra_data, "dataset CSV (for cluster-specific graphs)");
    gra->add_option("--label-column", gra_label, "label column to drop from --data");
    gra->add_option("--assignments", gra_assign, "assignments CSV for cluster-specific graphs");
    gra->add_option("--criterion", gra_criterion, "present|fixation|level|sample");
    gra->add_flag("--raw-fixation", gra_raw_fixation,
                  "fixation criterion uses the raw within/between index");
    add_global_flags(gra, gra_g);
    gra->callback([&] {
        urfg::Forest forest = urfg::forest_from_json(json::parse(urfg::read_text_file(gra_forest)));
        urfg::EdgeCriterion crit = urfg::criterion_from_string(gra_criterion);
        urfg::GraphOptions opts;
        opts.raw_fixation_index = gra_raw_fixation;
        urfg::DirectedFeatureGraph overall = urfg::build_graph(forest, crit, std::nullopt, opts);
        urfg::write_text_file(out_path(gra_g, "graph_overall.json"),
                              urfg::export_graph(overall, "json"));
        urfg::write_text_file(out_path(gra_g, "graph_overall.csv"),
                              urfg::export_graph(overall, "adjacency_csv"));
        urfg::write_text_file(out_path(gra_g, "graph_overall.dot"),
                              urfg::export_graph(overall, "dot"));
        urfg::write_text_file(out_path(gra_g, "graph_overall.graphml"),
                              urfg::export_graph(overall, "graphml"));
        if (!gra_assign.empty()) {
            if (gra_data.empty())
                throw std::runtime_error("--assignments requires --data");
            auto label = gra_label.empty() ? std::nullopt : std::optional<std::string>(gra_label);
            urfg::Dataset ds = urfg::load_csv(gra_data, true, label);
            urfg::ClusterAssignment assignment = read_assignments(gra_assign);
            auto graphs = urfg::cluster_specific_graphs(forest, crit, assignment, ds, opts);
            for (std::size_t c = 0; c < graphs.size(); ++c)
                urfg::write_text_file(out_path(gra_g, "graph_cluster_" + std::to_string(c) + ".json"),
                                      urfg::export_graph(graphs[c], "json"));
        }
        std::cout << "wrote " << out_path(gra_g, "graph_overall.json") << "\n";
    });

    // rank
    auto rnk = app.add_subcommand("rank", "out-degree centrality of a feature graph");
    GlobalOptions rnk_g;
    std::string rnk_graph;
    bool rnk_no_leaf = false;
    rnk->add_option("--graph", rnk_graph, "graph JSON")->required();
    rnk->add_flag("--exclude-leaf", rnk_no_leaf, "exclude edges into the leaf vertex");
    add_global_flags(rnk, rnk_g);
    rnk->callback([&] {
        urfg::DirectedFeatureGraph g =
            urfg::graph_from_json(json::parse(urfg::read_text_file(rnk_graph)));
        auto cent = urfg::out_degree_centrality(g, !rnk_no_leaf);
        urfg::write_text_file(out_path(rnk_g, "centrality.csv"),
                              urfg::centrality_csv(g.vertices, cent));
        std::cout << "wrote " << out_path(rnk_g, "centrality.csv") << "\n";
    });

    // select
    auto sel = app.add_subcommand("select", "top-k feature selection on a feature graph");
    GlobalOptions sel_g;
    std::string sel_graph, sel_method = "greedy", sel_objective = "aw";
    std::size_t sel_k = 3;
    sel->add_option("--graph", sel_graph, "graph JSON")->required();
    sel->add_option("--method", sel_method, "greedy|brute");
    sel->add_option("--k", sel_k, "features to select")->required();
    sel->add_option("--objective", sel_objective, "aw|tw (brute force only)");
    add_global_flags(sel, sel_g);
    sel->callback([&] {
        urfg::DirectedFeatureGraph g =
            urfg::graph_from_json(json::parse(urfg::read_text_file(sel_graph)));
        urfg::UndirectedFeatureGraph u = urfg::to_undirected(g);
        urfg::SelectionObjective obj = sel_objective == "tw" ? urfg::SelectionObjective::MaxTW
                                                             : urfg::SelectionObjective::MaxAW;
        urfg::SelectionResult result = sel_method == "brute"
                                           ? urfg::brute_force_select(u, sel_k, obj)
                                           : urfg::greedy_select(u, sel_k);
        urfg::write_text_file(out_path(sel_g, "selection.json"),
                              urfg::selection_to_json(result, g.vertices).dump(2) + "\n");
        urfg::write_text_file(out_path(sel_g, "selection_trace.csv"),
                              urfg::selection_trace_csv(result, g.vertices));
        std::cout << "wrote " << out_path(sel_g, "selection.json") << "\n";
    });

    // pipeline
    auto pip = app.add_subcommand("pipeline", "full chain on one dataset");
    GlobalOptions pip_g;
    std::string pip_input, pip_label, pip_suite, pip_criterion = "sample",
                pip_method = "greedy";
    std::size_t pip_p = 2, pip_k = 3, pip_q = 3;
    pip->add_option("--input", pip_input, "input CSV");
    pip->add_option("--suite", pip_suite, "synthetic suite instead of --input");
    pip->add_option("--q", pip_q, "relevant feature count for ev3_relevant");
    pip->add_option("--label-column", pip_label, "evaluation label column");
    pip->add_option("--p", pip_p, "number of clusters")->required();
    pip->add_option("--k", pip_k, "features to select");
    pip->add_option("--criterion", pip_criterion, "present|fixation|level|sample");
    pip->add_option("--method", pip_method, "greedy|brute");
    add_global_flags(pip, pip_g);
    pip->callback([&] {
        if (pip_input.empty() == pip_suite.empty())
            throw std::runtime_error("pipeline needs exactly one of --input / --suite");
        urfg::Dataset ds;
        if (!pip_input.empty()) {
            auto label = pip_label.empty() ? std::nullopt : std::optional<std::string>(pip_label);
            ds = urfg::load_csv(pip_input, true, label);
        } else {
            ds = urfg::synthetic_suite(pip_suite, pip_g.seed, pip_q).data;
        }
        urfg::PipelineConfig cfg;
        cfg.forest = forest_params(pip_g);
        cfg.criterion = urfg::criterion_from_string(pip_criterion);
        cfg.p = pip_p;
        cfg.k = pip_k;
        cfg.method = pip_method == "brute" ? urfg::SelectionMethod::BruteForce
                                           : urfg::SelectionMethod::Greedy;
        urfg::PipelineOutputs out = urfg::run_pipeline(ds, cfg);
        urfg::write_pipeline_outputs(ds, out, pip_g.out_dir);
        std::cout << "wrote pipeline outputs to " << pip_g.out_dir << "\n";
    });

    // benchmark
    auto ben = app.add_subcommand("benchmark", "graph-based vs impurity-based selection");
    GlobalOptions ben_g;
    std::string ben_input, ben_label = "label", ben_criterion = "sample";
    std::size_t ben_sel_trees = 100, ben_sel_replicates = 5, ben_max_k = 0;
    ben->add_option("--input", ben_input, "labelled CSV")->required();
    ben->add_option("--label-column", ben_label, "ground-truth label column");
    ben->add_option("--criterion", ben_criterion, "edge-building criterion");
    ben->add_option("--selection-trees", ben_sel_trees, "trees per subset forest");
    ben->add_option("--selection-replicates", ben_sel_replicates, "forests per subset");
    ben->add_option("--max-k", ben_max_k, "largest k to evaluate (0 = d)");
    add_global_flags(ben, ben_g);
    ben->callback([&] {
        urfg::Dataset ds = urfg::load_csv(ben_input, true, ben_label);
        urfg::BenchmarkConfig cfg;
        cfg.trees = ben_g.trees;
        cfg.replicates = ben_g.replicates;
        cfg.selection_trees = ben_sel_trees;
        cfg.selection_replicates = ben_sel_replicates;
        cfg.min_leaf_size = ben_g.min_leaf;
        cfg.criterion = urfg::criterion_from_string(ben_criterion);
        cfg.seed = ben_g.seed;
        if (ben_max_k > 0) cfg.max_k = ben_max_k;
        urfg::ComparisonReport report = urfg::run_benchmark_comparison(ds, cfg);
        urfg::write_text_file(out_path(ben_g, "benchmark.json"),
                              urfg::comparison_report_json(report).dump(2) + "\n");
        std::cout << "wrote " << out_path(ben_g, "benchmark.json") << "\n";
    });

    // experiment
    auto exp = app.add_subcommand("experiment", "synthetic experiment suites");
    GlobalOptions exp_g;
    std::string exp_suite;
    std::size_t exp_q = 3;
    exp->add_option("--suite", exp_suite, "ev1|ev1_pairs|ev2|ev3|ev4")->required();
    exp->add_option("--q", exp_q, "relevant feature count for ev3");
    add_global_flags(exp, exp_g);
    exp->callback([&] {
        urfg::ForestParams params = forest_params(exp_g);
        json report;
        if (exp_suite == "ev1")
            report = urfg::ev1_report_json(
                urfg::run_ev1_centrality_experiment(exp_g.replicates, params, exp_g.seed));
        else if (exp_suite == "ev1_pairs")
            report = urfg::ev1_pairs_report_json(
                urfg::run_ev1_pairs_experiment(exp_g.replicates, params, exp_g.seed));
        else if (exp_suite == "ev2")
            report = urfg::ev2_report_json(
                urfg::run_ev2_cluster_experiment(exp_g.replicates, params, exp_g.seed));
        else if (exp_suite == "ev3")
            report = urfg::ev3_report_json(
                urfg::run_ev3_experiment(exp_q, exp_g.replicates, params, exp_g.seed));
        else if (exp_suite == "ev4")
            report = urfg::ev4_report_json(
                urfg::run_ev4_experiment(exp_g.replicates, params, exp_g.seed));
        else
            throw std::runtime_error("unknown experiment suite: " + exp_suite);
        std::string name = "experiment_" + exp_suite + ".json";
        urfg::write_text_file(out_path(exp_g, name), report.dump(2) + "\n");
        std::cout << "wrote " << out_path(exp_g, name) << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
