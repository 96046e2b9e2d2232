#include "mcbench/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "mcbench/parallel.hpp"

namespace mcbench {

std::uint64_t nearest_rank(double q, std::uint64_t size) {
    if (!(q >= 0.0 && q <= 100.0)) {
        throw ContractError("percentile q must lie in [0, 100], got " + std::to_string(q));
    }
    const double x = q * static_cast<double>(size) / 100.0;
    // Absorb representation error so that e.g. q=90, L=10 yields rank 9.
    const double rank = std::ceil(x - 1e-12 * static_cast<double>(size));
    return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(rank, 0.0)), 1, size);
}

CutDistribution CutDistribution::from_values(int n, std::vector<double> values) {
    if (n < 1 || values.size() != (std::uint64_t{1} << (n - 1))) {
        throw ContractError("distribution of n=" + std::to_string(n) + " needs 2^(n-1) values");
    }
    std::sort(values.begin(), values.end());
    CutDistribution d;
    d.n_ = n;
    d.min_ = values.front();
    d.max_ = values.back();
    d.values_ = std::move(values);
    return d;
}

CutDistribution CutDistribution::from_histogram(int n, double min, double max, double bin_width,
                                                std::vector<std::uint64_t> bins,
                                                std::vector<std::pair<double, std::uint64_t>> tracked) {
    CutDistribution d;
    d.n_ = n;
    d.min_ = min;
    d.max_ = max;
    d.bin_width_ = bin_width;
    d.bins_ = std::move(bins);
    d.tracked_ = std::move(tracked);
    return d;
}

std::span<const double> CutDistribution::values() const {
    if (!is_exact()) throw std::logic_error("cut distribution is stored as a histogram");
    return values_;
}

double CutDistribution::percentile(double q) const {
    const std::uint64_t rank = nearest_rank(q, size());
    if (is_exact()) return values_[rank - 1];
    std::uint64_t cumulative = 0;
    for (std::size_t b = 0; b < bins_.size(); ++b) {
        cumulative += bins_[b];
        if (cumulative >= rank) return std::min(static_cast<double>(b + 1) * bin_width_, max_);
    }
    return max_;
}

std::uint64_t CutDistribution::count_above(double t) const {
    if (is_exact()) {
        return static_cast<std::uint64_t>(values_.end() - std::upper_bound(values_.begin(), values_.end(), t));
    }
    for (const auto& [threshold, count] : tracked_) {
        if (threshold == t) return count;
    }
    if (t < min_) return size();
    if (t >= max_) return 0;
    // Untracked threshold: counts whole bins lying above t's bin.
    const auto first = static_cast<std::size_t>(std::floor(t / bin_width_)) + 1;
    std::uint64_t count = 0;
    for (std::size_t b = first; b < bins_.size(); ++b) count += bins_[b];
    return count;
}

namespace {

enum class Storage { List, Histogram, None };

constexpr int kChunkLog = 16;
constexpr int kResyncLog = 12;

struct Partial {
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_index = 0;
    double lowest = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> bins;
    std::vector<std::uint64_t> tracked;
};

constexpr std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

/// Visits canonical cuts with Gray-code index in [begin, end). Each visited
/// value is a function of its index alone: accumulation restarts from a direct
/// evaluation at every multiple of 2^kResyncLog.
template <typename Visit>
void walk(const WeightedGraph& graph, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
    constexpr std::uint64_t resync_mask = (std::uint64_t{1} << kResyncLog) - 1;
    std::uint64_t bits = gray(begin) << 1;
    double value = cut_value_bits(graph, bits);
    for (std::uint64_t i = begin;; ++i) {
        visit(i, value);
        if (i + 1 == end) break;
        const int v = std::countr_zero(i + 1) + 1;
        const std::uint64_t side = (bits >> v) & 1U;
        double delta = 0.0;
        for (const auto& nb : graph.neighbors(v)) {
            delta += (((bits >> nb.vertex) & 1U) == side) ? nb.w : -nb.w;
        }
        bits ^= std::uint64_t{1} << v;
        if (((i + 1) & resync_mask) == 0) {
            value = cut_value_bits(graph, bits);
        } else {
            value += delta;
        }
    }
}

OracleResult run_enumeration(const WeightedGraph& graph, const EnumerationOptions& options, Storage storage) {
    const int n = graph.n();
    if (n > options.max_vertices || n > 62) {
        throw EnumerationRefused("refusing to enumerate 2^" + std::to_string(n - 1) + " cuts for n=" +
                                 std::to_string(n) + " (cap is n=" + std::to_string(options.max_vertices) + ")");
    }
    if (storage == Storage::List && n > options.exact_list_max_n) storage = Storage::Histogram;

    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    const std::uint64_t chunk = std::min<std::uint64_t>(total, std::uint64_t{1} << kChunkLog);
    const std::uint64_t chunks = total / chunk;
    const int workers = static_cast<int>(std::min<std::uint64_t>(std::max(options.workers, 1), chunks));

    std::vector<double> values;
    if (storage == Storage::List) values.resize(total);
    const std::size_t nbins = std::max<std::size_t>(options.histogram_bins, 1);
    const double bin_width = graph.total_weight() > 0 ? graph.total_weight() / static_cast<double>(nbins) : 1.0;
    const auto& thresholds = options.tracked_thresholds;

    std::vector<Partial> partials(workers);
    parallel_for(workers, workers, [&](std::size_t w) {
        Partial& part = partials[w];
        if (storage == Storage::Histogram) {
            part.bins.assign(nbins, 0);
            part.tracked.assign(thresholds.size(), 0);
        }
        const std::uint64_t first = chunks * w / workers;
        const std::uint64_t last = chunks * (w + 1) / workers;
        for (std::uint64_t c = first; c < last; ++c) {
            walk(graph, c * chunk, (c + 1) * chunk, [&](std::uint64_t i, double value) {
                if (value > part.best) {
                    part.best = value;
                    part.best_index = i;
                }
                part.lowest = std::min(part.lowest, value);
                if (storage == Storage::List) {
                    values[i] = value;
                } else if (storage == Storage::Histogram) {
                    auto b = static_cast<std::size_t>(value / bin_width);
                    ++part.bins[std::min(b, nbins - 1)];
                    for (std::size_t t = 0; t < thresholds.size(); ++t) {
                        if (value > thresholds[t]) ++part.tracked[t];
                    }
                }
            });
        }
    });

    Partial merged = partials.front();
    for (std::size_t w = 1; w < partials.size(); ++w) {
        const Partial& p = partials[w];
        if (p.best > merged.best || (p.best == merged.best && p.best_index < merged.best_index)) {
            merged.best = p.best;
            merged.best_index = p.best_index;
        }
        merged.lowest = std::min(merged.lowest, p.lowest);
        for (std::size_t b = 0; b < p.bins.size(); ++b) merged.bins[b] += p.bins[b];
        for (std::size_t t = 0; t < p.tracked.size(); ++t) merged.tracked[t] += p.tracked[t];
    }

    InstanceProfile profile;
    profile.c_max = merged.best;
    profile.c_min = 0.0;
    profile.argmax_cut = Cut::from_bits(gray(merged.best_index) << 1, n);

    if (storage == Storage::List) {
        return {CutDistribution::from_values(n, std::move(values)), std::move(profile)};
    }
    std::vector<std::pair<double, std::uint64_t>> tracked;
    for (std::size_t t = 0; t < merged.tracked.size(); ++t) tracked.emplace_back(thresholds[t], merged.tracked[t]);
    return {CutDistribution::from_histogram(n, merged.lowest, merged.best, bin_width, std::move(merged.bins),
                                            std::move(tracked)),
            std::move(profile)};
}

}  // namespace

OracleResult enumerate_cuts(const WeightedGraph& graph, const EnumerationOptions& options) {
    return run_enumeration(graph, options, Storage::List);
}

CutDistribution enumerate_distribution(const WeightedGraph& graph, const EnumerationOptions& options) {
    return enumerate_cuts(graph, options).distribution;
}

InstanceProfile max_cut(const WeightedGraph& graph, const EnumerationOptions& options) {
    return run_enumeration(graph, options, Storage::None).profile;
}

}  // namespace mcbench
