#include <gtest/gtest.h>

#include "urfg/serialize.hpp"
#include "urfg/synthetic.hpp"

namespace {

urfg::Forest small_forest() {
    urfg::SyntheticDataset sd = urfg::make_ev2_cluster(21);
    urfg::ForestParams params;
    params.n_trees = 5;
    params.seed = 9;
    return urfg::train_unsupervised_forest(sd.data, params);
}

TEST(ForestJson, RoundTripPreservesStructure) {
    urfg::Forest forest = small_forest();
    urfg::Forest back = urfg::forest_from_json(urfg::forest_to_json(forest));
    ASSERT_EQ(back.trees.size(), forest.trees.size());
    EXPECT_EQ(back.feature_names, forest.feature_names);
    EXPECT_EQ(back.mode, forest.mode);
    EXPECT_EQ(back.params.seed, forest.params.seed);
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const urfg::Tree& a = forest.trees[t];
        const urfg::Tree& b = back.trees[t];
        ASSERT_EQ(a.nodes.size(), b.nodes.size());
        EXPECT_EQ(a.inbag_sample_ids, b.inbag_sample_ids);
        for (std::size_t i = 0; i < a.nodes.size(); ++i) {
            EXPECT_EQ(a.nodes[i].is_leaf(), b.nodes[i].is_leaf());
            EXPECT_EQ(a.nodes[i].n_inbag, b.nodes[i].n_inbag);
            if (!a.nodes[i].is_leaf()) {
                EXPECT_EQ(*a.nodes[i].split_feature, *b.nodes[i].split_feature);
                EXPECT_DOUBLE_EQ(*a.nodes[i].split_threshold, *b.nodes[i].split_threshold);
                EXPECT_DOUBLE_EQ(*a.nodes[i].split_score, *b.nodes[i].split_score);
            }
        }
    }
}

TEST(ForestJson, RoundTripYieldsIdenticalGraphs) {
    urfg::Forest forest = small_forest();
    urfg::Forest back = urfg::forest_from_json(urfg::forest_to_json(forest));
    for (urfg::EdgeCriterion crit : {urfg::EdgeCriterion::Present, urfg::EdgeCriterion::Sample}) {
        urfg::DirectedFeatureGraph ga = urfg::build_graph(forest, crit);
        urfg::DirectedFeatureGraph gb = urfg::build_graph(back, crit);
        EXPECT_EQ(ga.adjacency, gb.adjacency);
    }
}

TEST(ForestJson, RejectsUnknownVersion) {
    nlohmann::json j = urfg::forest_to_json(small_forest());
    j["format_version"] = 99;
    EXPECT_THROW(urfg::forest_from_json(j), std::runtime_error);
}

TEST(SelectionJson, NamesAndTraces) {
    urfg::SelectionResult r;
    r.selected = {2, 0, 1};
    r.avg = {5.0, 10.0 / 3.0};
    r.avg_n = {5.0, 2.5};
    r.method = urfg::SelectionMethod::Greedy;
    std::vector<std::string> names{"A", "B", "C"};
    nlohmann::json j = urfg::selection_to_json(r, names);
    EXPECT_EQ(j.at("method"), "greedy");
    EXPECT_EQ(j.at("selected"), (std::vector<std::string>{"C", "A", "B"}));
    EXPECT_EQ(j.at("avg").size(), 2u);
    EXPECT_FALSE(j.at("component_restricted").get<bool>());
}

TEST(SelectionTraceCsv, FirstRowHasNoMetrics) {
    urfg::SelectionResult r;
    r.selected = {0, 1};
    r.avg = {5.0};
    r.avg_n = {5.0};
    std::string csv = urfg::selection_trace_csv(r, {"A", "B"});
    EXPECT_EQ(csv, "feature,avg,avg_n\nA,,\nB,5,5\n");
}

TEST(CsvWriters, AssignmentsAndCentrality) {
    urfg::ClusterAssignment assignment;
    assignment.labels = {1, 0};
    assignment.p = 2;
    EXPECT_EQ(urfg::assignments_csv(assignment, {"s1", "s2"}),
              "sample_id,cluster\ns1,1\ns2,0\n");
    EXPECT_EQ(urfg::centrality_csv({"A", "B"}, {1.5, 0.0}),
              "feature,out_degree_centrality\nA,1.5\nB,0\n");
}

TEST(CsvWriters, AffinityMatrix) {
    urfg::AffinityMatrix aff;
    aff.values = urfg::Matrix(2, 2, 0.25);
    aff.values(0, 0) = aff.values(1, 1) = 1.0;
    EXPECT_EQ(urfg::affinity_csv(aff), "1,0.25\n0.25,1\n");
}

TEST(DendrogramJson, RecordsMerges) {
    urfg::Dendrogram d;
    d.merges = {{0, 1, 0.5, 2}, {2, 3, 0.9, 4}};
    nlohmann::json j = urfg::dendrogram_to_json(d);
    ASSERT_EQ(j.at("merges").size(), 2u);
    EXPECT_EQ(j["merges"][1]["size"], 4);
    EXPECT_DOUBLE_EQ(j["merges"][0]["height"].get<double>(), 0.5);
}

TEST(TextFiles, RoundTripAndErrors) {
    std::string path = testing::TempDir() + "urfg_serialize_test.txt";
    urfg::write_text_file(path, "hello\nworld\n");
    EXPECT_EQ(urfg::read_text_file(path), "hello\nworld\n");
    EXPECT_THROW(urfg::read_text_file("/nonexistent/x.txt"), std::runtime_error);
    EXPECT_THROW(urfg::write_text_file("/nonexistent/dir/x.txt", "y"), std::runtime_error);
}

}  // namespace
