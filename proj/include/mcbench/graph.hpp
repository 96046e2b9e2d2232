#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcbench {

/// Thrown when a caller violates an operation's precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Edge {
    int i = 0;
    int j = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/***
 * Undirected graph with strictly positive edge weights on vertices 0..n-1.
 * Edges are stored canonically (i < j), sorted lexicographically, without
 * duplicates. Immutable after construction.
 */
class WeightedGraph {
public:
    struct Neighbor {
        int vertex;
        double w;
    };

    /// Validates and canonicalizes `edges`; throws ContractError on a
    /// self-loop, out-of-range endpoint, non-positive weight or duplicate.
    WeightedGraph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const Neighbor> neighbors(int v) const;
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

    double total_weight() const { return total_weight_; }
    bool is_connected() const;

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    double total_weight_ = 0.0;
};

/// +1 / -1 side assignment. Canonical cuts keep vertex 0 on the +1 side.
class Cut {
public:
    explicit Cut(std::vector<int8_t> signs);

    /// Bit v set means vertex v on the -1 side.
    static Cut from_bits(std::uint64_t bits, int n);

    std::size_t size() const { return signs_.size(); }
    int8_t operator[](std::size_t v) const { return signs_[v]; }
    const std::vector<int8_t>& signs() const { return signs_; }
    std::uint64_t to_bits() const;

    Cut complement() const;
    Cut canonical() const;
    bool is_canonical() const { return signs_.empty() || signs_[0] == 1; }

    friend bool operator==(const Cut&, const Cut&) = default;

private:
    std::vector<int8_t> signs_;
};

double cut_value(const WeightedGraph& graph, const Cut& cut);

/// Cut value of the bitstring encoding (bit v set means vertex v on the -1 side).
double cut_value_bits(const WeightedGraph& graph, std::uint64_t bits);

inline double total_weight(const WeightedGraph& graph) { return graph.total_weight(); }

}  // namespace mcbench
