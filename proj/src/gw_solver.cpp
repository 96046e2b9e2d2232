#include "mcbench/gw_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mcbench/parallel.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

namespace {

constexpr double kInnerSlack = 1e-9;
constexpr std::uint64_t kSampleBlock = 4096;
// Relative slack when comparing a sampled cut against alpha * c_max.
constexpr double kRatioSlack = 1e-9;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
    return s;
}

}  // namespace

int default_sdp_rank(int n) { return static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1; }

GwFactorization::GwFactorization(int n, int rank, std::vector<double> vectors, double sdp_value, double residual,
                                 long iterations)
    : n_(n),
      rank_(rank),
      vectors_(std::move(vectors)),
      sdp_value_(sdp_value),
      residual_(residual),
      iterations_(iterations) {
    if (vectors_.size() != static_cast<std::size_t>(n) * rank) {
        throw ContractError("factorization needs n*rank coordinates");
    }
}

double GwFactorization::inner(int i, int j) const { return dot(vector(i), vector(j)); }

double relaxation_objective(const WeightedGraph& graph, int rank, std::span<const double> vectors) {
    double value = 0.0;
    for (const auto& e : graph.edges()) {
        auto yi = vectors.subspan(static_cast<std::size_t>(e.i) * rank, rank);
        auto yj = vectors.subspan(static_cast<std::size_t>(e.j) * rank, rank);
        value += e.w * (1.0 - dot(yi, yj));
    }
    return 0.5 * value;
}

GwFactorization solve_sdp(const WeightedGraph& graph, const SdpConfig& config) {
    const int n = graph.n();
    const int k = config.rank > 0 ? config.rank : default_sdp_rank(n);

    Rng rng = make_rng(config.seed, {fnv1a64("sdp-init")});
    std::normal_distribution<double> normal;
    std::vector<double> y(static_cast<std::size_t>(n) * k);
    for (int i = 0; i < n; ++i) {
        double norm = 0.0;
        for (int t = 0; t < k; ++t) {
            double v = normal(rng);
            y[i * k + t] = v;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (int t = 0; t < k; ++t) y[i * k + t] /= norm;
    }

    std::vector<double> g(k);
    double displacement = 0.0;
    for (long iter = 1; iter <= config.max_iters; ++iter) {
        displacement = 0.0;
        for (int i = 0; i < n; ++i) {
            std::fill(g.begin(), g.end(), 0.0);
            for (const auto& nb : graph.neighbors(i)) {
                const double* yj = &y[static_cast<std::size_t>(nb.vertex) * k];
                for (int t = 0; t < k; ++t) g[t] += nb.w * yj[t];
            }
            double norm = std::sqrt(dot(g, g));
            if (norm <= 1e-300) continue;
            double moved = 0.0;
            double* yi = &y[static_cast<std::size_t>(i) * k];
            for (int t = 0; t < k; ++t) {
                double next = -g[t] / norm;
                moved += (next - yi[t]) * (next - yi[t]);
                yi[t] = next;
            }
            displacement = std::max(displacement, std::sqrt(moved));
        }
        if (displacement < config.tol) {
            const double value = relaxation_objective(graph, k, y);
            return GwFactorization(n, k, std::move(y), value, displacement, iter);
        }
    }
    throw SdpNonConvergence(displacement, config.max_iters);
}

GwFactorization solve_sdp_with_retry(const WeightedGraph& graph, const SdpConfig& config) {
    try {
        return solve_sdp(graph, config);
    } catch (const SdpNonConvergence&) {
        SdpConfig retry = config;
        retry.rank = 2 * (config.rank > 0 ? config.rank : default_sdp_rank(graph.n()));
        retry.max_iters = 10 * config.max_iters;
        return solve_sdp(graph, retry);
    }
}

GwFactorization factorization_from_vectors(const WeightedGraph& graph, int rank, std::vector<double> vectors) {
    const int n = graph.n();
    if (vectors.size() != static_cast<std::size_t>(n) * rank) {
        throw ContractError("expected n*rank coordinates");
    }
    for (int i = 0; i < n; ++i) {
        std::span<double> yi(vectors.data() + static_cast<std::size_t>(i) * rank, rank);
        double norm = std::sqrt(dot(yi, yi));
        if (norm == 0.0) throw ContractError("zero vector for vertex " + std::to_string(i));
        for (auto& v : yi) v /= norm;
    }
    const double value = relaxation_objective(graph, rank, vectors);
    return GwFactorization(n, rank, std::move(vectors), value, 0.0, 0);
}

double expected_cut(const GwFactorization& fact, const WeightedGraph& graph) {
    if (fact.n() != graph.n()) throw ContractError("factorization and graph sizes differ");
    double total = 0.0;
    for (const auto& e : graph.edges()) {
        double ip = fact.inner(e.i, e.j);
        if (std::abs(ip) > 1.0 + kInnerSlack) {
            throw std::domain_error("inner product " + std::to_string(ip) + " outside [-1, 1]");
        }
        total += e.w * std::acos(std::clamp(ip, -1.0, 1.0));
    }
    return total / std::numbers::pi;
}

double alpha_gw() {
    static const double value = [] {
        // Stationarity of (2t/pi)/(1 - cos t): (1 - cos t) - t sin t = 0, bracketed in [2, 2.5].
        double lo = 2.0, hi = 2.5;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            double h = (1.0 - std::cos(mid)) - mid * std::sin(mid);
            (h < 0.0 ? lo : hi) = mid;
        }
        const double theta = 0.5 * (lo + hi);
        return (2.0 * theta / std::numbers::pi) / (1.0 - std::cos(theta));
    }();
    return value;
}

GwReport make_report(const GwFactorization& fact, const WeightedGraph& graph, double c_max) {
    GwReport r;
    r.c_max = c_max;
    r.sdp_value = fact.sdp_value();
    r.expected_cut = expected_cut(fact, graph);
    r.expected_alpha = c_max > 0.0 ? r.expected_cut / c_max : 0.0;
    r.alpha_gw = alpha_gw();
    r.lower_bound = r.alpha_gw * c_max;
    r.lower_bound_sdp = r.alpha_gw * r.sdp_value;
    return r;
}

Cut hyperplane_round(const GwFactorization& fact, std::span<const double> direction) {
    if (direction.size() != static_cast<std::size_t>(fact.rank())) {
        throw ContractError("direction dimension does not match factorization rank");
    }
    if (std::abs(std::sqrt(dot(direction, direction)) - 1.0) > 1e-6) {
        throw ContractError("rounding direction must be a unit vector");
    }
    std::vector<int8_t> signs(fact.n());
    for (int i = 0; i < fact.n(); ++i) signs[i] = dot(fact.vector(i), direction) >= 0.0 ? 1 : -1;
    return Cut(std::move(signs)).canonical();
}

std::optional<double> expected_samples(std::uint64_t samples, std::uint64_t hits) {
    if (hits == 0) return std::nullopt;
    return static_cast<double>(samples) / static_cast<double>(hits);
}

const TargetRecord& SamplingStats::record(const std::string& label) const {
    for (const auto& r : records) {
        if (r.label == label) return r;
    }
    throw std::out_of_range("no sampling record labelled " + label);
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int step = 160; step <= 200; ++step) grid.push_back(step / 200.0);
    return grid;
}

namespace {

struct BlockResult {
    std::vector<std::uint64_t> hits;
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double best = 0.0;
};

}  // namespace

SamplingStats sample_roundings(const GwFactorization& fact, const WeightedGraph& graph, const GwReport& report,
                               const SamplingConfig& config) {
    if (config.samples < 1) throw ContractError("sample budget K must be at least 1");
    if (fact.n() != graph.n()) throw ContractError("factorization and graph sizes differ");

    SamplingStats stats;
    stats.samples = config.samples;
    stats.workers = std::max(config.workers, 1);
    for (double a : config.alpha_grid) stats.records.push_back({"grid", a, 0});
    stats.records.push_back({"gw_lower_bound", report.alpha_gw, 0});
    stats.records.push_back({"gw_expectation", report.expected_alpha, 0});
    stats.records.push_back({"c_max", 1.0, 0});

    std::vector<double> thresholds;
    for (const auto& r : stats.records) thresholds.push_back(r.alpha * report.c_max - kRatioSlack * report.c_max);

    const int n = fact.n();
    const int k = fact.rank();
    const std::uint64_t blocks = (config.samples + kSampleBlock - 1) / kSampleBlock;
    std::vector<BlockResult> results(blocks);

    parallel_for(blocks, config.workers, [&](std::size_t b) {
        Rng rng = make_rng(config.seed, {fnv1a64("gw-rounding"), b});
        std::normal_distribution<double> normal;
        const std::uint64_t count = std::min(kSampleBlock, config.samples - b * kSampleBlock);
        BlockResult& out = results[b];
        out.hits.assign(thresholds.size(), 0);
        std::vector<double> r(k);
        std::vector<int8_t> side(n);
        for (std::uint64_t s = 0; s < count; ++s) {
            for (auto& v : r) v = normal(rng);
            for (int i = 0; i < n; ++i) side[i] = dot(fact.vector(i), r) >= 0.0 ? 1 : -1;
            double value = 0.0;
            for (const auto& e : graph.edges()) {
                if (side[e.i] != side[e.j]) value += e.w;
            }
            ++out.count;
            const double d = value - out.mean;
            out.mean += d / static_cast<double>(out.count);
            out.m2 += d * (value - out.mean);
            out.best = std::max(out.best, value);
            for (std::size_t t = 0; t < thresholds.size(); ++t) {
                if (value >= thresholds[t]) ++out.hits[t];
            }
        }
    });

    std::uint64_t total = 0;
    double mean = 0.0, m2 = 0.0;
    for (const auto& blk : results) {
        const auto merged = total + blk.count;
        const double d = blk.mean - mean;
        mean += d * static_cast<double>(blk.count) / static_cast<double>(merged);
        m2 += blk.m2 + d * d * static_cast<double>(total) * static_cast<double>(blk.count) / static_cast<double>(merged);
        total = merged;
        stats.best_cut = std::max(stats.best_cut, blk.best);
        for (std::size_t t = 0; t < thresholds.size(); ++t) stats.records[t].hits += blk.hits[t];
    }
    stats.mean_cut = mean;
    stats.stddev_cut = total > 1 ? std::sqrt(m2 / static_cast<double>(total - 1)) : 0.0;
    return stats;
}

}  // namespace mcbench
