#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcbench/run_matrix.hpp"

namespace mcbench {

/// Entry (r, s) is the maximum of run r's first s+1 values.
class BestSoFarMatrix {
public:
    BestSoFarMatrix(std::size_t runs, std::size_t shots, std::vector<double> values);

    std::size_t runs() const { return runs_; }
    std::size_t shots() const { return shots_; }
    double at(std::size_t run, std::size_t shot) const { return values_[run * shots_ + shot]; }
    std::span<const double> row(std::size_t run) const { return {values_.data() + run * shots_, shots_}; }
    std::span<const double> values() const { return values_; }

    /// Every entry divided by `scale`, optionally keeping only the first `shots` columns.
    BestSoFarMatrix normalized(double scale, std::size_t shots) const;

private:
    std::size_t runs_;
    std::size_t shots_;
    std::vector<double> values_;
};

BestSoFarMatrix best_so_far(const RunMatrix& matrix);

struct PercentileCurve {
    double q = 0.0;
    std::vector<double> points;
    std::vector<double> ci_low;   // empty unless bootstrapped
    std::vector<double> ci_high;
    int replicates = 0;
    double level = 0.0;

    bool has_bands() const { return !ci_low.empty(); }
};

/// Nearest-rank q-th percentile of each column. q must lie in (0, 100].
PercentileCurve percentile_curve(const BestSoFarMatrix& bsf, double q);

struct BootstrapConfig {
    int replicates = 1000;
    double level = 0.95;
    std::uint64_t seed = 0;
    int workers = 1;
};

/// Point curve plus percentile-method bands from row resampling. Replicate b
/// draws its rows from the substream (seed, b), so bands do not depend on
/// the worker count. Bands are widened where needed to contain the point.
PercentileCurve bootstrap_ci(const BestSoFarMatrix& bsf, double q, const BootstrapConfig& config);

struct ThresholdCurve {
    std::string label;
    double threshold = 0.0;
    std::vector<double> fractions;  // percent of runs with best-so-far > threshold
};

ThresholdCurve threshold_curve(const BestSoFarMatrix& bsf, double threshold, std::string label = {});

enum class PoolingMethod { PooledRuns, AveragedCurves };

struct AggregateInput {
    std::string instance;
    BestSoFarMatrix bsf;
    double c_max = 0.0;
    double expected_alpha = 0.0;
};

struct AggregateResult {
    PoolingMethod method = PoolingMethod::PooledRuns;
    std::size_t shots = 0;
    std::size_t instances = 0;
    PercentileCurve p90;
    PercentileCurve p99;
    double min_expected_alpha = 0.0;
    double max_expected_alpha = 0.0;
};

/// Approximation-ratio curves across instances. Matrices are truncated to the
/// smallest shot budget and divided by their own c_max.
AggregateResult aggregate_instances(std::span<const AggregateInput> inputs,
                                    PoolingMethod method = PoolingMethod::PooledRuns);

std::string_view pooling_method_name(PoolingMethod method);
PoolingMethod parse_pooling_method(std::string_view text);

}  // namespace mcbench
