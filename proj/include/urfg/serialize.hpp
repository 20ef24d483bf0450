#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urfg/clustering.hpp"
#include "urfg/forest.hpp"
#include "urfg/graph_mining.hpp"

namespace urfg {

inline constexpr int kForestFormatVersion = 1;

inline nlohmann::json forest_to_json(const Forest& forest) {
    nlohmann::json j;
    j["format_version"] = kForestFormatVersion;
    j["mode"] = forest.mode == ForestMode::UnsupervisedFixation ? "unsupervised_fixation"
                                                                : "supervised_gini";
    j["feature_names"] = forest.feature_names;
    j["params"] = {{"n_trees", forest.params.n_trees},
                   {"min_leaf_size", forest.params.min_leaf_size},
                   {"mtry", forest.params.mtry},
                   {"bootstrap", forest.params.bootstrap},
                   {"seed", forest.params.seed}};
    if (forest.params.max_depth) j["params"]["max_depth"] = *forest.params.max_depth;

    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& t : forest.trees) {
        nlohmann::json jt;
        jt["root_id"] = t.root_id;
        jt["inbag"] = t.inbag_sample_ids;
        nlohmann::json nodes = nlohmann::json::array();
        for (const Node& nd : t.nodes) {
            nlohmann::json jn;
            jn["id"] = nd.id;
            jn["depth"] = nd.depth;
            jn["n_inbag"] = nd.n_inbag;
            if (!nd.is_leaf()) {
                jn["feature"] = *nd.split_feature;
                jn["threshold"] = *nd.split_threshold;
                jn["score"] = *nd.split_score;
                jn["left"] = nd.left;
                jn["right"] = nd.right;
            }
            nodes.push_back(jn);
        }
        jt["nodes"] = nodes;
        trees.push_back(jt);
    }
    j["trees"] = trees;
    return j;
}

inline Forest forest_from_json(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != kForestFormatVersion)
        throw std::runtime_error("unsupported forest format version");
    Forest forest;
    forest.mode = j.at("mode").get<std::string>() == "supervised_gini"
                      ? ForestMode::SupervisedGini
                      : ForestMode::UnsupervisedFixation;
    forest.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    const auto& jp = j.at("params");
    forest.params.n_trees = jp.at("n_trees").get<std::size_t>();
    forest.params.min_leaf_size = jp.at("min_leaf_size").get<std::size_t>();
    forest.params.mtry = jp.at("mtry").get<std::size_t>();
    forest.params.bootstrap = jp.at("bootstrap").get<bool>();
    forest.params.seed = jp.at("seed").get<std::uint64_t>();
    if (jp.contains("max_depth")) forest.params.max_depth = jp.at("max_depth").get<std::size_t>();

    for (const auto& jt : j.at("trees")) {
        Tree t;
        t.root_id = jt.at("root_id").get<int>();
        t.inbag_sample_ids = jt.at("inbag").get<std::vector<std::size_t>>();
        for (const auto& jn : jt.at("nodes")) {
            Node nd;
            nd.id = jn.at("id").get<int>();
            nd.depth = jn.at("depth").get<std::size_t>();
            nd.n_inbag = jn.at("n_inbag").get<std::size_t>();
            if (jn.contains("feature")) {
                nd.split_feature = jn.at("feature").get<std::size_t>();
                nd.split_threshold = jn.at("threshold").get<double>();
                nd.split_score = jn.at("score").get<double>();
                nd.left = jn.at("left").get<int>();
                nd.right = jn.at("right").get<int>();
            }
            t.nodes.push_back(nd);
        }
        forest.trees.push_back(std::move(t));
    }
    return forest;
}

inline nlohmann::json selection_to_json(const SelectionResult& result,
                                        const std::vector<std::string>& feature_names) {
    nlohmann::json j;
    j["method"] = result.method == SelectionMethod::Greedy ? "greedy" : "brute_force";
    std::vector<std::string> names;
    for (std::size_t v : result.selected) names.push_back(feature_names.at(v));
    j["selected"] = names;
    j["avg"] = result.avg;
    j["avg_n"] = result.avg_n;
    j["component_restricted"] = result.component_restricted;
    return j;
}

inline std::string selection_trace_csv(const SelectionResult& result,
                                       const std::vector<std::string>& feature_names) {
    std::ostringstream out;
    out.precision(17);
    out << "feature,avg,avg_n\n";
    for (std::size_t i = 0; i < result.selected.size(); ++i) {
        out << feature_names.at(result.selected[i]) << ',';
        if (i >= 1) out << result.avg[i - 1];
        out << ',';
        if (i >= 1) out << result.avg_n[i - 1];
        out << '\n';
    }
    return out.str();
}

inline std::string assignments_csv(const ClusterAssignment& assignment,
                                   const std::vector<std::string>& sample_ids) {
    std::ostringstream out;
    out << "sample_id,cluster\n";
    for (std::size_t i = 0; i < assignment.labels.size(); ++i)
        out << sample_ids.at(i) << ',' << assignment.labels[i] << '\n';
    return out.str();
}

inline std::string affinity_csv(const AffinityMatrix& aff) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < aff.values.rows(); ++i) {
        for (std::size_t j = 0; j < aff.values.cols(); ++j) {
            if (j) out << ',';
            out << aff.values(i, j);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string centrality_csv(const std::vector<std::string>& feature_names,
                                  const std::vector<double>& centrality) {
    std::ostringstream out;
    out.precision(17);
    out << "feature,out_degree_centrality\n";
    for (std::size_t j = 0; j < feature_names.size(); ++j)
        out << feature_names[j] << ',' << centrality.at(j) << '\n';
    return out.str();
}

inline nlohmann::json dendrogram_to_json(const Dendrogram& dendro) {
    nlohmann::json merges = nlohmann::json::array();
    for (const DendrogramMerge& m : dendro.merges)
        merges.push_back({{"a", m.cluster_a}, {"b", m.cluster_b},
                          {"height", m.height}, {"size", m.size}});
    return {{"merges", merges}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace urfg
