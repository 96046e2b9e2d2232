#include "mcbench/stats_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcbench/exact_oracle.hpp"
#include "mcbench/graph.hpp"
#include "mcbench/parallel.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

BestSoFarMatrix::BestSoFarMatrix(std::size_t runs, std::size_t shots, std::vector<double> values)
    : runs_(runs), shots_(shots), values_(std::move(values)) {
    if (runs < 1 || shots < 1) throw ContractError("best-so-far matrix needs R >= 1 and N >= 1");
    if (values_.size() != runs * shots) throw ContractError("best-so-far matrix needs R*N values");
}

BestSoFarMatrix BestSoFarMatrix::normalized(double scale, std::size_t shots) const {
    if (!(scale > 0.0)) throw ContractError("normalization scale must be positive");
    if (shots < 1 || shots > shots_) throw ContractError("cannot keep more shots than the matrix has");
    std::vector<double> out(runs_ * shots);
    for (std::size_t r = 0; r < runs_; ++r) {
        for (std::size_t s = 0; s < shots; ++s) out[r * shots + s] = at(r, s) / scale;
    }
    return BestSoFarMatrix(runs_, shots, std::move(out));
}

BestSoFarMatrix best_so_far(const RunMatrix& matrix) {
    std::vector<double> out(matrix.values().begin(), matrix.values().end());
    for (std::size_t r = 0; r < matrix.runs(); ++r) {
        double* row = out.data() + r * matrix.shots();
        for (std::size_t s = 1; s < matrix.shots(); ++s) row[s] = std::max(row[s], row[s - 1]);
    }
    return BestSoFarMatrix(matrix.runs(), matrix.shots(), std::move(out));
}

namespace {

void check_q(double q) {
    if (!(q > 0.0 && q <= 100.0)) throw ContractError("percentile q must lie in (0, 100]");
}

// k-th smallest (1-based) of `column`, which is reordered.
double kth(std::vector<double>& column, std::size_t k) {
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(k - 1), column.end());
    return column[k - 1];
}

}  // namespace

PercentileCurve percentile_curve(const BestSoFarMatrix& bsf, double q) {
    check_q(q);
    PercentileCurve curve;
    curve.q = q;
    curve.points.resize(bsf.shots());
    const std::size_t k = nearest_rank(q, bsf.runs());
    std::vector<double> column(bsf.runs());
    for (std::size_t s = 0; s < bsf.shots(); ++s) {
        for (std::size_t r = 0; r < bsf.runs(); ++r) column[r] = bsf.at(r, s);
        curve.points[s] = kth(column, k);
    }
    return curve;
}

PercentileCurve bootstrap_ci(const BestSoFarMatrix& bsf, double q, const BootstrapConfig& config) {
    if (config.replicates < 100) throw ContractError("bootstrap needs at least 100 replicates");
    if (!(config.level > 0.0 && config.level < 1.0)) throw ContractError("bootstrap level must lie in (0, 1)");
    PercentileCurve curve = percentile_curve(bsf, q);
    curve.replicates = config.replicates;
    curve.level = config.level;

    const std::size_t runs = bsf.runs(), shots = bsf.shots();
    const auto replicates = static_cast<std::size_t>(config.replicates);
    const std::size_t k = nearest_rank(q, runs);

    // replicate_values[b * shots + s]
    std::vector<double> replicate_values(replicates * shots);
    parallel_for(replicates, config.workers, [&](std::size_t b) {
        Rng rng = make_rng(config.seed, {fnv1a64("bootstrap"), b});
        std::vector<std::size_t> rows(runs);
        for (auto& r : rows) r = static_cast<std::size_t>(uniform_below(rng, runs));
        std::vector<double> column(runs);
        for (std::size_t s = 0; s < shots; ++s) {
            for (std::size_t i = 0; i < runs; ++i) column[i] = bsf.at(rows[i], s);
            replicate_values[b * shots + s] = kth(column, k);
        }
    });

    const double tail = 100.0 * (1.0 - config.level) / 2.0;
    const std::size_t k_low = nearest_rank(tail, replicates);
    const std::size_t k_high = nearest_rank(100.0 - tail, replicates);
    curve.ci_low.resize(shots);
    curve.ci_high.resize(shots);
    std::vector<double> column(replicates);
    for (std::size_t s = 0; s < shots; ++s) {
        for (std::size_t b = 0; b < replicates; ++b) column[b] = replicate_values[b * shots + s];
        curve.ci_low[s] = std::min(kth(column, k_low), curve.points[s]);
        curve.ci_high[s] = std::max(kth(column, k_high), curve.points[s]);
    }
    return curve;
}

ThresholdCurve threshold_curve(const BestSoFarMatrix& bsf, double threshold, std::string label) {
    ThresholdCurve curve{std::move(label), threshold, std::vector<double>(bsf.shots())};
    for (std::size_t s = 0; s < bsf.shots(); ++s) {
        std::size_t above = 0;
        for (std::size_t r = 0; r < bsf.runs(); ++r) above += bsf.at(r, s) > threshold ? 1 : 0;
        curve.fractions[s] = 100.0 * static_cast<double>(above) / static_cast<double>(bsf.runs());
    }
    return curve;
}

AggregateResult aggregate_instances(std::span<const AggregateInput> inputs, PoolingMethod method) {
    if (inputs.empty()) throw ContractError("aggregation needs at least one instance");
    AggregateResult result;
    result.method = method;
    result.instances = inputs.size();
    result.shots = std::numeric_limits<std::size_t>::max();
    result.min_expected_alpha = std::numeric_limits<double>::infinity();
    result.max_expected_alpha = -std::numeric_limits<double>::infinity();
    for (const auto& in : inputs) {
        result.shots = std::min(result.shots, in.bsf.shots());
        result.min_expected_alpha = std::min(result.min_expected_alpha, in.expected_alpha);
        result.max_expected_alpha = std::max(result.max_expected_alpha, in.expected_alpha);
    }

    std::vector<BestSoFarMatrix> normalized;
    normalized.reserve(inputs.size());
    for (const auto& in : inputs) normalized.push_back(in.bsf.normalized(in.c_max, result.shots));

    if (method == PoolingMethod::PooledRuns) {
        std::size_t total_runs = 0;
        for (const auto& m : normalized) total_runs += m.runs();
        std::vector<double> pooled;
        pooled.reserve(total_runs * result.shots);
        for (const auto& m : normalized) pooled.insert(pooled.end(), m.values().begin(), m.values().end());
        const BestSoFarMatrix all(total_runs, result.shots, std::move(pooled));
        result.p90 = percentile_curve(all, 90.0);
        result.p99 = percentile_curve(all, 99.0);
        return result;
    }

    result.p90.q = 90.0;
    result.p99.q = 99.0;
    result.p90.points.assign(result.shots, 0.0);
    result.p99.points.assign(result.shots, 0.0);
    for (const auto& m : normalized) {
        const auto c90 = percentile_curve(m, 90.0);
        const auto c99 = percentile_curve(m, 99.0);
        for (std::size_t s = 0; s < result.shots; ++s) {
            result.p90.points[s] += c90.points[s];
            result.p99.points[s] += c99.points[s];
        }
    }
    const double count = static_cast<double>(normalized.size());
    for (std::size_t s = 0; s < result.shots; ++s) {
        result.p90.points[s] /= count;
        result.p99.points[s] /= count;
    }
    return result;
}

std::string_view pooling_method_name(PoolingMethod method) {
    return method == PoolingMethod::PooledRuns ? "pooled" : "averaged";
}

PoolingMethod parse_pooling_method(std::string_view text) {
    if (text == "pooled") return PoolingMethod::PooledRuns;
    if (text == "averaged") return PoolingMethod::AveragedCurves;
    throw ContractError("unknown pooling method '" + std::string(text) + "' (expected pooled or averaged)");
}

}  // namespace mcbench
