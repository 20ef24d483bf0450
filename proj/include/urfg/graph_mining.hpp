#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "urfg/feature_graph.hpp"

namespace urfg {

enum class SelectionMethod { Greedy, BruteForce };
enum class SelectionObjective { MaxAW, MaxTW };

struct SelectionResult {
    std::vector<std::size_t> selected;  // in selection order
    std::vector<double> avg;            // AW of the selected set after each addition
    std::vector<double> avg_n;          // AWN of the vertex added at each step
    SelectionMethod method = SelectionMethod::Greedy;
    bool component_restricted = false;
};

// Sum of outgoing edge weights per feature vertex. Edges into the leaf
// vertex are included by default.
inline std::vector<double> out_degree_centrality(const DirectedFeatureGraph& g,
                                                 bool include_leaf_edges = true) {
    std::vector<double> c(g.d(), 0.0);
    std::size_t cols = include_leaf_edges ? g.d() + 1 : g.d();
    for (std::size_t i = 0; i < g.d(); ++i)
        for (std::size_t j = 0; j < cols; ++j) c[i] += g.adjacency(i, j);
    return c;
}

// Maximal connected vertex sets over positive-weight edges, largest first;
// equal sizes ordered by smallest contained index.
inline std::vector<std::vector<std::size_t>> connected_components(
    const UndirectedFeatureGraph& g) {
    std::size_t d = g.d();
    std::vector<bool> seen(d, false);
    std::vector<std::vector<std::size_t>> comps;
    for (std::size_t start = 0; start < d; ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> comp, stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (std::size_t u = 0; u < d; ++u)
                if (!seen[u] && g.weights(v, u) > 0.0) {
                    seen[u] = true;
                    stack.push_back(u);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return comps;
}

struct SubgraphWeight {
    double total = 0.0;      // TW
    double average = 0.0;    // AW = 2 TW / (|V'| (|V'|-1))
    bool connected = false;
};

inline SubgraphWeight subgraph_weight(const UndirectedFeatureGraph& g,
                                      const std::vector<std::size_t>& vertex_set) {
    if (vertex_set.size() < 2)
        throw std::invalid_argument("subgraph_weight: need at least 2 vertices");
    for (std::size_t v : vertex_set)
        if (v >= g.d()) throw std::invalid_argument("subgraph_weight: vertex out of range");

    SubgraphWeight sw;
    for (std::size_t a = 0; a < vertex_set.size(); ++a)
        for (std::size_t b = a + 1; b < vertex_set.size(); ++b)
            sw.total += g.weights(vertex_set[a], vertex_set[b]);
    double m = static_cast<double>(vertex_set.size());
    sw.average = 2.0 * sw.total / (m * (m - 1.0));

    // connectivity of the induced subgraph
    std::vector<bool> visited(vertex_set.size(), false);
    std::vector<std::size_t> stack{0};
    visited[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < vertex_set.size(); ++b)
            if (!visited[b] && g.weights(vertex_set[a], vertex_set[b]) > 0.0) {
                visited[b] = true;
                stack.push_back(b);
                ++count;
            }
    }
    sw.connected = count == vertex_set.size();
    return sw;
}

// Mean weight of edges linking a candidate vertex to the selected set;
// absent edges weigh 0.
inline double average_new_weight(const UndirectedFeatureGraph& g, std::size_t candidate,
                                 const std::vector<std::size_t>& selected) {
    double s = 0.0;
    for (std::size_t v : selected) s += g.weights(candidate, v);
    return s / static_cast<double>(selected.size());
}

namespace detail {

// Orders a chosen vertex set greedily (heaviest internal edge first, then by
// AWN within the set) so brute-force results carry comparable avg traces.
inline void fill_trace(const UndirectedFeatureGraph& g, std::vector<std::size_t> set,
                       SelectionResult& out) {
    std::size_t best_a = set[0], best_b = set[1];
    double best_w = -1.0;
    for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b)
            if (g.weights(set[a], set[b]) > best_w) {
                best_w = g.weights(set[a], set[b]);
                best_a = set[a];
                best_b = set[b];
            }
    out.selected = {std::min(best_a, best_b), std::max(best_a, best_b)};
    out.avg = {best_w};
    out.avg_n = {best_w};
    std::vector<std::size_t> rest;
    for (std::size_t v : set)
        if (v != best_a && v != best_b) rest.push_back(v);
    std::sort(rest.begin(), rest.end());
    while (!rest.empty()) {
        std::size_t winner = 0;
        double best_awn = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rest.size(); ++i) {
            double awn = average_new_weight(g, rest[i], out.selected);
            if (awn > best_awn) {
                best_awn = awn;
                winner = i;
            }
        }
        out.selected.push_back(rest[winner]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(winner));
        out.avg.push_back(subgraph_weight(g, out.selected).average);
        out.avg_n.push_back(best_awn);
    }
}

struct EsuState {
    const UndirectedFeatureGraph* g;
    std::size_t k;
    std::size_t budget;
    std::size_t visited = 0;
    SelectionObjective objective;
    std::optional<std::vector<std::size_t>> best;
    double best_value = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> neighbors(std::size_t v) const {
        std::vector<std::size_t> out;
        for (std::size_t u = 0; u < g->d(); ++u)
            if (g->weights(v, u) > 0.0) out.push_back(u);
        return out;
    }

    void visit(const std::vector<std::size_t>& set) {
        if (++visited > budget) {
            double bound = 1.0;
            for (std::size_t i = 0; i < k; ++i)
                bound = bound * static_cast<double>(g->d() - i) / static_cast<double>(i + 1);
            throw std::runtime_error("brute-force enumeration budget exceeded; candidate bound C(" +
                                     std::to_string(g->d()) + "," + std::to_string(k) + ") = " +
                                     std::to_string(bound));
        }
        SubgraphWeight sw = subgraph_weight(*g, set);
        double value = objective == SelectionObjective::MaxAW ? sw.average : sw.total;
        std::vector<std::size_t> sorted = set;
        std::sort(sorted.begin(), sorted.end());
        if (value > best_value || (value == best_value && best && sorted < *best)) {
            best_value = value;
            best = sorted;
        }
    }

    // ESU extension: each connected set is generated exactly once by anchoring
    // on its smallest vertex and only extending with exclusive neighbors.
    void extend(std::vector<std::size_t>& sub, std::vector<std::size_t> ext,
                std::size_t anchor, std::vector<bool>& in_sub_or_ext) {
        if (sub.size() == k) {
            visit(sub);
            return;
        }
        while (!ext.empty()) {
            std::size_t w = ext.front();
            ext.erase(ext.begin());
            std::vector<std::size_t> ext2 = ext;
            std::vector<std::size_t> added;
            for (std::size_t u : neighbors(w))
                if (u > anchor && !in_sub_or_ext[u]) {
                    ext2.push_back(u);
                    in_sub_or_ext[u] = true;
                    added.push_back(u);
                }
            sub.push_back(w);
            extend(sub, std::move(ext2), anchor, in_sub_or_ext);
            sub.pop_back();
            for (std::size_t u : added) in_sub_or_ext[u] = false;
        }
    }
};

}  // namespace detail

// Exhaustive search over connected induced size-k subgraphs of the largest
// component, grown incrementally so no disconnected candidate is generated.
inline SelectionResult brute_force_select(const UndirectedFeatureGraph& g, std::size_t k,
                                          SelectionObjective objective = SelectionObjective::MaxAW,
                                          std::size_t budget = 10'000'000) {
    auto comps = connected_components(g);
    if (comps.empty()) throw std::invalid_argument("brute_force_select: empty graph");
    const auto& comp = comps.front();
    if (k < 2 || k > comp.size())
        throw std::invalid_argument("brute_force_select: k must be in [2, largest component size " +
                                    std::to_string(comp.size()) + "]");

    detail::EsuState state{&g, k, budget, 0, objective, std::nullopt,
                           -std::numeric_limits<double>::infinity()};
    std::vector<bool> in_comp(g.d(), false);
    for (std::size_t v : comp) in_comp[v] = true;

    std::vector<bool> marker(g.d(), false);
    for (std::size_t v : comp) {
        std::vector<std::size_t> sub{v};
        std::vector<std::size_t> ext;
        std::fill(marker.begin(), marker.end(), false);
        marker[v] = true;
        for (std::size_t u : state.neighbors(v))
            if (u > v) {
                ext.push_back(u);
                marker[u] = true;
            }
        state.extend(sub, std::move(ext), v, marker);
    }
    if (!state.best) throw std::logic_error("brute_force_select: enumeration found no candidate");

    SelectionResult result;
    result.method = SelectionMethod::BruteForce;
    result.component_restricted = comp.size() < g.d();
    detail::fill_trace(g, *state.best, result);
    return result;
}

// Greedy growth: seed with the heaviest edge of the largest component, then
// repeatedly add the adjacent vertex with the highest AWN. Ties go to the
// lowest vertex index. When k exceeds the component, the full component is
// returned with the restriction flag set (strict mode throws instead).
inline SelectionResult greedy_select(const UndirectedFeatureGraph& g, std::size_t k,
                                     bool strict = false) {
    auto comps = connected_components(g);
    if (comps.empty()) throw std::invalid_argument("greedy_select: empty graph");
    const auto& comp = comps.front();
    if (k < 2) throw std::invalid_argument("greedy_select: k must be >= 2");
    std::size_t requested_k = k;
    if (k > comp.size()) {
        if (strict)
            throw std::invalid_argument("greedy_select: k exceeds largest component size " +
                                        std::to_string(comp.size()));
        k = comp.size();
    }

    SelectionResult result;
    result.method = SelectionMethod::Greedy;
    result.component_restricted = comp.size() < g.d() || requested_k > comp.size();

    // heaviest edge inside the component, lowest index pair on ties
    std::size_t seed_a = comp[0], seed_b = comp[0];
    double seed_w = -1.0;
    for (std::size_t a = 0; a < comp.size(); ++a)
        for (std::size_t b = a + 1; b < comp.size(); ++b) {
            double w = g.weights(comp[a], comp[b]);
            if (w > seed_w) {
                seed_w = w;
                seed_a = comp[a];
                seed_b = comp[b];
            }
        }
    result.selected = {seed_a, seed_b};
    result.avg = {seed_w};
    result.avg_n = {seed_w};

    std::vector<bool> in_sel(g.d(), false);
    in_sel[seed_a] = in_sel[seed_b] = true;
    while (result.selected.size() < k) {
        std::size_t winner = g.d();
        double best_awn = -std::numeric_limits<double>::infinity();
        for (std::size_t cand : comp) {
            if (in_sel[cand]) continue;
            bool adjacent = false;
            for (std::size_t v : result.selected)
                if (g.weights(cand, v) > 0.0) {
                    adjacent = true;
                    break;
                }
            if (!adjacent) continue;
            double awn = average_new_weight(g, cand, result.selected);
            if (awn > best_awn || (awn == best_awn && cand < winner)) {
                best_awn = awn;
                winner = cand;
            }
        }
        if (winner == g.d()) break;  // nothing reachable (cannot occur inside a component)
        result.selected.push_back(winner);
        in_sel[winner] = true;
        result.avg.push_back(subgraph_weight(g, result.selected).average);
        result.avg_n.push_back(best_awn);
    }
    return result;
}

struct KneeDrop {
    std::size_t position = 0;  // 1-based index into avg where the decline lands
    double drop = 0.0;         // avg[position] - avg[position-1], negative = decline
};

// Successive differences of the avg trace, most negative first. Advisory:
// the position numerically equals the selected-set size before the drop.
inline std::vector<KneeDrop> knee_report(const SelectionResult& result) {
    if (result.selected.size() < 3)
        throw std::invalid_argument("knee_report: need at least 3 selected features");
    std::vector<KneeDrop> drops;
    for (std::size_t i = 1; i < result.avg.size(); ++i)
        drops.push_back({i + 1, result.avg[i] - result.avg[i - 1]});
    std::stable_sort(drops.begin(), drops.end(),
                     [](const KneeDrop& a, const KneeDrop& b) { return a.drop < b.drop; });
    return drops;
}

}  // namespace urfg
