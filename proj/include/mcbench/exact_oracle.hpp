#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mcbench/graph.hpp"

namespace mcbench {

class EnumerationRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
    int max_vertices = 30;
    /// Above this size the distribution is kept as a fixed-resolution histogram.
    int exact_list_max_n = 24;
    std::size_t histogram_bins = std::size_t{1} << 20;
    /// Thresholds whose strict counts stay exact in histogram mode.
    std::vector<double> tracked_thresholds;
    int workers = 1;
};

/***
 * Multiset of the values of all 2^(n-1) canonical cuts (vertex 0 fixed on the
 * +1 side). Small instances keep the full sorted list; larger ones keep a
 * histogram with exact max and exact counts for the tracked thresholds.
 */
class CutDistribution {
public:
    static CutDistribution from_values(int n, std::vector<double> values);
    static CutDistribution from_histogram(int n, double min, double max, double bin_width,
                                          std::vector<std::uint64_t> bins,
                                          std::vector<std::pair<double, std::uint64_t>> tracked);

    int n() const { return n_; }
    std::uint64_t size() const { return std::uint64_t{1} << (n_ - 1); }
    bool is_exact() const { return !values_.empty(); }

    /// Sorted values; throws std::logic_error in histogram mode.
    std::span<const double> values() const;

    double max() const { return max_; }
    double min() const { return min_; }

    /// Nearest-rank percentile: sorted value at 1-based rank ceil(q/100 * L),
    /// clamped to [1, L]. In histogram mode the upper bin edge is returned.
    double percentile(double q) const;

    /// |{v : v > t}|. Exact in list mode and for tracked thresholds.
    std::uint64_t count_above(double t) const;

private:
    int n_ = 0;
    std::vector<double> values_;
    double max_ = 0.0;
    double min_ = 0.0;
    double bin_width_ = 0.0;
    std::vector<std::uint64_t> bins_;
    std::vector<std::pair<double, std::uint64_t>> tracked_;
};

inline double percentile(const CutDistribution& dist, double q) { return dist.percentile(q); }
inline std::uint64_t count_above(const CutDistribution& dist, double t) { return dist.count_above(t); }

/// 1-based nearest rank ceil(q/100 * size) clamped to [1, size].
std::uint64_t nearest_rank(double q, std::uint64_t size);

struct InstanceProfile {
    double c_max = 0.0;
    double c_min = 0.0;
    Cut argmax_cut{std::vector<int8_t>{1}};
};

struct OracleResult {
    CutDistribution distribution;
    InstanceProfile profile;
};

/// Exact enumeration in Gray-code order; the result does not depend on the
/// worker count.
OracleResult enumerate_cuts(const WeightedGraph& graph, const EnumerationOptions& options = {});

CutDistribution enumerate_distribution(const WeightedGraph& graph, const EnumerationOptions& options = {});

/// Streams the enumeration without storing the distribution.
InstanceProfile max_cut(const WeightedGraph& graph, const EnumerationOptions& options = {});

}  // namespace mcbench
