#include "mcbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcbench {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 2) {
        throw ContractError("graph needs at least two vertices, got n=" + std::to_string(n));
    }
    for (auto& e : edges_) {
        if (e.i == e.j) {
            throw ContractError("self-loop on vertex " + std::to_string(e.i));
        }
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= n) {
            throw ContractError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                ") out of range for n=" + std::to_string(n));
        }
        if (!(e.w > 0.0) || !std::isfinite(e.w)) {
            throw ContractError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                ") has non-positive weight");
        }
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
            throw ContractError("duplicate edge (" + std::to_string(edges_[k].i) + "," +
                                std::to_string(edges_[k].j) + ")");
        }
    }

    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges_) {
        ++deg[e.i];
        ++deg[e.j];
        total_weight_ += e.w;
    }
    offsets_.assign(n + 1, 0);
    std::partial_sum(deg.begin(), deg.end(), offsets_.begin() + 1);
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[fill[e.i]++] = {e.j, e.w};
        adjacency_[fill[e.j]++] = {e.i, e.w};
    }
}

std::span<const WeightedGraph::Neighbor> WeightedGraph::neighbors(int v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
}

bool WeightedGraph::is_connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& nb : neighbors(v)) {
            if (!seen[nb.vertex]) {
                seen[nb.vertex] = 1;
                ++visited;
                stack.push_back(nb.vertex);
            }
        }
    }
    return visited == n_;
}

Cut::Cut(std::vector<int8_t> signs) : signs_(std::move(signs)) {
    for (auto s : signs_) {
        if (s != 1 && s != -1) throw ContractError("cut entries must be +1 or -1");
    }
}

Cut Cut::from_bits(std::uint64_t bits, int n) {
    std::vector<int8_t> s(n);
    for (int v = 0; v < n; ++v) s[v] = ((bits >> v) & 1U) ? -1 : 1;
    return Cut(std::move(s));
}

std::uint64_t Cut::to_bits() const {
    std::uint64_t bits = 0;
    for (std::size_t v = 0; v < signs_.size(); ++v) {
        if (signs_[v] < 0) bits |= std::uint64_t{1} << v;
    }
    return bits;
}

Cut Cut::complement() const {
    auto s = signs_;
    for (auto& x : s) x = static_cast<int8_t>(-x);
    return Cut(std::move(s));
}

Cut Cut::canonical() const { return is_canonical() ? *this : complement(); }

double cut_value(const WeightedGraph& graph, const Cut& cut) {
    if (cut.size() != static_cast<std::size_t>(graph.n())) {
        throw ContractError("cut length " + std::to_string(cut.size()) + " does not match n=" +
                            std::to_string(graph.n()));
    }
    double value = 0.0;
    for (const auto& e : graph.edges()) {
        if (cut[e.i] != cut[e.j]) value += e.w;
    }
    return value;
}

double cut_value_bits(const WeightedGraph& graph, std::uint64_t bits) {
    double value = 0.0;
    for (const auto& e : graph.edges()) {
        if (((bits >> e.i) ^ (bits >> e.j)) & 1U) value += e.w;
    }
    return value;
}

}  // namespace mcbench
