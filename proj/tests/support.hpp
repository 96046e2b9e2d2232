#pragma once

// Generators and brute-force oracles shared by the test binaries. Oracles
// here deliberately avoid the library's own enumeration and simulation code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mcbench/graph.hpp"

namespace testing_support {

using mcbench::Edge;
using mcbench::WeightedGraph;

inline WeightedGraph complete_graph(int n, double w = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, w});
    }
    return WeightedGraph(n, edges);
}

inline WeightedGraph cycle_graph(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return WeightedGraph(n, edges);
}

inline WeightedGraph single_edge(double w = 1.0) { return WeightedGraph(2, {{0, 1, w}}); }

/// Random graph with n in [n_lo, n_hi], edge density in [0.2, 0.8], and
/// either unit weights or weights drawn from (0, 10].
inline WeightedGraph random_graph(std::mt19937_64& rng, int n_lo, int n_hi, bool weighted) {
    std::uniform_int_distribution<int> size(n_lo, n_hi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = size(rng);
    const double density = 0.2 + 0.6 * unit(rng);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (unit(rng) < density) edges.push_back({i, j, weighted ? 10.0 * (1.0 - unit(rng)) : 1.0});
        }
    }
    if (edges.empty()) edges.push_back({0, n - 1, 1.0});
    return WeightedGraph(n, edges);
}

/// Uniform random 3-regular simple graph on n (even) vertices by the pairing
/// model with rejection of loops and multi-edges.
inline WeightedGraph random_3_regular(int n, std::mt19937_64& rng) {
    for (;;) {
        std::vector<int> points;
        for (int v = 0; v < n; ++v) points.insert(points.end(), 3, v);
        std::shuffle(points.begin(), points.end(), rng);
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        for (std::size_t i = 0; i < points.size(); i += 2) {
            int a = points[i], b = points[i + 1];
            if (a == b) {
                ok = false;
                break;
            }
            if (a > b) std::swap(a, b);
            if (!seen.insert({a, b}).second) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<Edge> edges;
        for (auto [a, b] : seen) edges.push_back({a, b, 1.0});
        return WeightedGraph(n, edges);
    }
}

/// Cut value straight from the definition, bit v set meaning x_v = -1.
inline double direct_cut(const WeightedGraph& g, std::uint64_t bits) {
    double total = 0.0;
    for (const auto& e : g.edges()) {
        const int xi = ((bits >> e.i) & 1U) ? -1 : 1;
        const int xj = ((bits >> e.j) & 1U) ? -1 : 1;
        total += e.w * (1 - xi * xj) / 2.0;
    }
    return total;
}

/// Sorted values of all canonical cuts (vertex 0 fixed to +1).
inline std::vector<double> direct_distribution(const WeightedGraph& g) {
    std::vector<double> values;
    const std::uint64_t count = std::uint64_t{1} << (g.n() - 1);
    for (std::uint64_t i = 0; i < count; ++i) values.push_back(direct_cut(g, i << 1));
    std::sort(values.begin(), values.end());
    return values;
}

/// min over theta in (0, pi] of (2 theta / pi) / (1 - cos theta) by a dense
/// scan followed by ternary refinement on the bracketing cell.
inline double alpha_gw_oracle() {
    auto f = [](double t) { return (2.0 * t / std::numbers::pi) / (1.0 - std::cos(t)); };
    const int steps = 200000;
    double best_t = std::numbers::pi;
    for (int s = 1; s <= steps; ++s) {
        const double t = std::numbers::pi * s / steps;
        if (f(t) < f(best_t)) best_t = t;
    }
    double lo = best_t - std::numbers::pi / steps, hi = best_t + std::numbers::pi / steps;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (f(m1) < f(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return f((lo + hi) / 2);
}

/// Depth-1 single-edge QAOA expectation (1 + sin 4beta sin gamma) / 2.
inline double single_edge_closed_form(double gamma, double beta) {
    return (1.0 + std::sin(4.0 * beta) * std::sin(gamma)) / 2.0;
}

}  // namespace testing_support
