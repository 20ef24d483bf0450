#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urfg/clustering.hpp"
#include "urfg/forest.hpp"

namespace urfg {

enum class EdgeCriterion { Present, Fixation, Level, Sample };

inline std::string to_string(EdgeCriterion c) {
    switch (c) {
        case EdgeCriterion::Present: return "present";
        case EdgeCriterion::Fixation: return "fixation";
        case EdgeCriterion::Level: return "level";
        case EdgeCriterion::Sample: return "sample";
    }
    throw std::logic_error("bad criterion");
}

inline EdgeCriterion criterion_from_string(const std::string& s) {
    if (s == "present") return EdgeCriterion::Present;
    if (s == "fixation") return EdgeCriterion::Fixation;
    if (s == "level") return EdgeCriterion::Level;
    if (s == "sample") return EdgeCriterion::Sample;
    throw std::invalid_argument("unknown edge criterion: " + s);
}

// Directed feature graph over d feature vertices plus the leaf vertex `l`
// (index d). The leaf row is all zeros by construction.
struct DirectedFeatureGraph {
    std::vector<std::string> vertices;  // d feature names; leaf vertex implicit
    Matrix adjacency;                   // (d+1) x (d+1), leaf last
    EdgeCriterion criterion = EdgeCriterion::Present;
    std::optional<int> cluster;

    std::size_t d() const { return vertices.size(); }
    std::size_t leaf_index() const { return vertices.size(); }
};

struct UndirectedFeatureGraph {
    std::vector<std::string> vertices;  // d feature names, leaf excluded
    Matrix weights;                     // symmetric d x d, zero diagonal

    std::size_t d() const { return vertices.size(); }
};

struct GraphOptions {
    // When set, the fixation criterion uses the raw within/between index
    // instead of the oriented (clamped at 0) split score.
    bool raw_fixation_index = false;
};

// Quantity q(node, child) under one edge-building criterion.
inline double edge_quantity(const Tree& tree, const Node& node, const Node& child,
                            EdgeCriterion criterion,
                            const GraphOptions& opts = {}) {
    if (node.is_leaf()) throw std::invalid_argument("edge_quantity: parent is a leaf");
    switch (criterion) {
        case EdgeCriterion::Present:
            return 1.0;
        case EdgeCriterion::Fixation:
            return opts.raw_fixation_index ? 1.0 - *node.split_score
                                           : std::max(0.0, *node.split_score);
        case EdgeCriterion::Level:
            return 1.0 / static_cast<double>(child.depth);
        case EdgeCriterion::Sample:
            return static_cast<double>(child.n_inbag) /
                   static_cast<double>(tree.root().n_inbag);
    }
    throw std::logic_error("bad criterion");
}

struct ClusterContext {
    const ClusterAssignment* assignment = nullptr;
    int cluster = 0;
    const Dataset* dataset = nullptr;
};

namespace detail {

// Routed sample counts per node: total and belonging to one cluster.
// All n samples are routed (the in-bag multiset is a subset, so every
// node with in-bag samples receives at least one routed sample).
struct RoutedCounts {
    std::vector<std::size_t> total;
    std::vector<std::size_t> in_cluster;
};

inline RoutedCounts route_cluster_counts(const Tree& tree, const Dataset& ds,
                                         const ClusterAssignment& assignment, int cluster) {
    RoutedCounts rc;
    rc.total.assign(tree.nodes.size(), 0);
    rc.in_cluster.assign(tree.nodes.size(), 0);
    for (std::size_t i = 0; i < ds.n(); ++i) {
        bool in_c = assignment.labels[i] == cluster;
        int cur = tree.root_id;
        for (;;) {
            rc.total[static_cast<std::size_t>(cur)]++;
            if (in_c) rc.in_cluster[static_cast<std::size_t>(cur)]++;
            const Node& nd = tree.nodes[static_cast<std::size_t>(cur)];
            if (nd.is_leaf()) break;
            cur = ds.values(i, *nd.split_feature) <= *nd.split_threshold ? nd.left : nd.right;
        }
    }
    return rc;
}

}  // namespace detail

// Accumulates q (times the cluster factor f when a cluster context is given)
// over every parent -> child pair of every tree. Fixed tree/node iteration
// order keeps the accumulation reproducible.
inline DirectedFeatureGraph build_graph(const Forest& forest, EdgeCriterion criterion,
                                        const std::optional<ClusterContext>& cluster_context =
                                            std::nullopt,
                                        const GraphOptions& opts = {}) {
    DirectedFeatureGraph g;
    g.vertices = forest.feature_names;
    g.adjacency = Matrix(g.d() + 1, g.d() + 1, 0.0);
    g.criterion = criterion;

    if (cluster_context) {
        const ClusterContext& cc = *cluster_context;
        if (!cc.assignment || !cc.dataset)
            throw std::invalid_argument("cluster context missing assignment or dataset");
        if (cc.assignment->labels.size() != cc.dataset->n())
            throw std::invalid_argument("cluster assignment does not cover the dataset");
        if (cc.cluster < 0 || static_cast<std::size_t>(cc.cluster) >= cc.assignment->p)
            throw std::invalid_argument("cluster id out of range");
        g.cluster = cc.cluster;
    }

    std::size_t leaf = g.leaf_index();
    for (const Tree& tree : forest.trees) {
        detail::RoutedCounts rc;
        if (cluster_context)
            rc = detail::route_cluster_counts(tree, *cluster_context->dataset,
                                              *cluster_context->assignment,
                                              cluster_context->cluster);
        for (const Node& nd : tree.nodes) {
            if (nd.is_leaf()) continue;
            for (int child_id : {nd.left, nd.right}) {
                const Node& child = tree.nodes[static_cast<std::size_t>(child_id)];
                double q = edge_quantity(tree, nd, child, criterion, opts);
                if (cluster_context) {
                    std::size_t ci = static_cast<std::size_t>(child_id);
                    q *= static_cast<double>(rc.in_cluster[ci]) /
                         static_cast<double>(rc.total[ci]);
                }
                std::size_t to = child.is_leaf() ? leaf : *child.split_feature;
                g.adjacency(*nd.split_feature, to) += q;
            }
        }
    }
    return g;
}

// One graph per cluster; their entry-wise sum equals the overall graph.
inline std::vector<DirectedFeatureGraph> cluster_specific_graphs(
    const Forest& forest, EdgeCriterion criterion, const ClusterAssignment& assignment,
    const Dataset& ds, const GraphOptions& opts = {}) {
    std::vector<DirectedFeatureGraph> out;
    out.reserve(assignment.p);
    for (std::size_t c = 0; c < assignment.p; ++c)
        out.push_back(build_graph(forest, criterion,
                                  ClusterContext{&assignment, static_cast<int>(c), &ds}, opts));
    return out;
}

inline DirectedFeatureGraph average_graphs(const std::vector<DirectedFeatureGraph>& graphs) {
    if (graphs.empty()) throw std::invalid_argument("average_graphs: empty list");
    DirectedFeatureGraph avg = graphs.front();
    for (std::size_t i = 1; i < graphs.size(); ++i) {
        const DirectedFeatureGraph& g = graphs[i];
        if (g.vertices != avg.vertices || g.criterion != avg.criterion)
            throw std::invalid_argument("average_graphs: vertex/criterion mismatch");
        for (std::size_t k = 0; k < avg.adjacency.data().size(); ++k)
            avg.adjacency.data()[k] += g.adjacency.data()[k];
    }
    double m = static_cast<double>(graphs.size());
    for (double& v : avg.adjacency.data()) v /= m;
    return avg;
}

// Drops the leaf vertex and self-edges; weight{i,j} = (A[i,j] + A[j,i]) / 2,
// an absent direction counting as 0.
inline UndirectedFeatureGraph to_undirected(const DirectedFeatureGraph& g) {
    UndirectedFeatureGraph u;
    u.vertices = g.vertices;
    u.weights = Matrix(g.d(), g.d(), 0.0);
    for (std::size_t i = 0; i < g.d(); ++i)
        for (std::size_t j = i + 1; j < g.d(); ++j) {
            double w = (g.adjacency(i, j) + g.adjacency(j, i)) / 2.0;
            u.weights(i, j) = u.weights(j, i) = w;
        }
    return u;
}

// ---- serialization ----

inline nlohmann::json graph_to_json(const DirectedFeatureGraph& g) {
    nlohmann::json j;
    j["criterion"] = to_string(g.criterion);
    if (g.cluster)
        j["cluster"] = *g.cluster;
    else
        j["cluster"] = nullptr;
    j["vertices"] = g.vertices;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i <= g.d(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k <= g.d(); ++k) row.push_back(g.adjacency(i, k));
        rows.push_back(row);
    }
    j["matrix"] = rows;
    return j;
}

inline DirectedFeatureGraph graph_from_json(const nlohmann::json& j) {
    DirectedFeatureGraph g;
    g.criterion = criterion_from_string(j.at("criterion").get<std::string>());
    if (!j.at("cluster").is_null()) g.cluster = j.at("cluster").get<int>();
    g.vertices = j.at("vertices").get<std::vector<std::string>>();
    std::size_t m = g.d() + 1;
    g.adjacency = Matrix(m, m);
    const auto& rows = j.at("matrix");
    if (rows.size() != m) throw std::invalid_argument("graph json: bad matrix shape");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) g.adjacency(i, k) = rows[i][k].get<double>();
    return g;
}

inline std::string export_graph(const DirectedFeatureGraph& g, const std::string& format) {
    std::ostringstream out;
    out.precision(17);
    std::size_t m = g.d() + 1;
    auto vertex_name = [&](std::size_t i) {
        return i < g.d() ? g.vertices[i] : std::string("l");
    };
    if (format == "adjacency_csv") {
        for (std::size_t i = 0; i < m; ++i) out << ',' << vertex_name(i);
        out << '\n';
        for (std::size_t i = 0; i < m; ++i) {
            out << vertex_name(i);
            for (std::size_t k = 0; k < m; ++k) out << ',' << g.adjacency(i, k);
            out << '\n';
        }
    } else if (format == "dot") {
        out << "digraph feature_graph {\n";
        out << "  graph [criterion=\"" << to_string(g.criterion) << "\"];\n";
        for (std::size_t i = 0; i < m; ++i)
            out << "  \"" << vertex_name(i) << "\";\n";
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                if (g.adjacency(i, k) > 0.0)
                    out << "  \"" << vertex_name(i) << "\" -> \"" << vertex_name(k)
                        << "\" [weight=" << g.adjacency(i, k) << "];\n";
        out << "}\n";
    } else if (format == "graphml") {
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
            << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
            << "  <key id=\"c\" for=\"graph\" attr.name=\"criterion\" attr.type=\"string\"/>\n"
            << "  <graph edgedefault=\"directed\">\n"
            << "    <data key=\"c\">" << to_string(g.criterion) << "</data>\n";
        for (std::size_t i = 0; i < m; ++i)
            out << "    <node id=\"" << vertex_name(i) << "\"/>\n";
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k)
                if (g.adjacency(i, k) > 0.0)
                    out << "    <edge source=\"" << vertex_name(i) << "\" target=\""
                        << vertex_name(k) << "\"><data key=\"w\">" << g.adjacency(i, k)
                        << "</data></edge>\n";
        out << "  </graph>\n</graphml>\n";
    } else if (format == "json") {
        out << graph_to_json(g).dump(2) << '\n';
    } else {
        throw std::invalid_argument("unsupported graph export format: " + format);
    }
    return out.str();
}

inline DirectedFeatureGraph import_graph_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty adjacency csv");
    auto header = urfg::detail::split_csv_line(line);
    if (header.size() < 2 || header.back() != "l")
        throw std::invalid_argument("adjacency csv: expected trailing leaf column");
    DirectedFeatureGraph g;
    for (std::size_t i = 1; i + 1 < header.size(); ++i) g.vertices.push_back(header[i]);
    std::size_t m = g.d() + 1;
    g.adjacency = Matrix(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw std::invalid_argument("adjacency csv: truncated");
        auto cells = urfg::detail::split_csv_line(line);
        if (cells.size() != m + 1) throw std::invalid_argument("adjacency csv: bad row width");
        for (std::size_t k = 0; k < m; ++k) g.adjacency(i, k) = std::stod(cells[k + 1]);
    }
    return g;
}

}  // namespace urfg
