#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcbench/graph.hpp"

namespace mcbench {

struct SdpConfig {
    int rank = 0;  ///< 0 selects ceil(sqrt(2n)) + 1
    double tol = 1e-8;
    long max_iters = 100000;
    std::uint64_t seed = 0;
};

int default_sdp_rank(int n);

class SdpNonConvergence : public std::runtime_error {
public:
    SdpNonConvergence(double residual, long iterations)
        : std::runtime_error("SDP did not converge after " + std::to_string(iterations) +
                             " sweeps (last displacement " + std::to_string(residual) + ")"),
          residual_(residual),
          iterations_(iterations) {}
    double residual() const { return residual_; }
    long iterations() const { return iterations_; }

private:
    double residual_;
    long iterations_;
};

/// Unit vectors y_0..y_{n-1} in R^rank factoring the relaxation optimum.
class GwFactorization {
public:
    GwFactorization(int n, int rank, std::vector<double> vectors, double sdp_value, double residual,
                    long iterations);

    int n() const { return n_; }
    int rank() const { return rank_; }
    std::span<const double> vector(int i) const {
        return {vectors_.data() + static_cast<std::size_t>(i) * rank_, static_cast<std::size_t>(rank_)};
    }
    double inner(int i, int j) const;

    double sdp_value() const { return sdp_value_; }
    double solve_residual() const { return residual_; }
    long iterations() const { return iterations_; }

private:
    int n_;
    int rank_;
    std::vector<double> vectors_;
    double sdp_value_;
    double residual_;
    long iterations_;
};

/// (1/2) sum_ij w_ij (1 - <y_i, y_j>) for the given unit vectors.
double relaxation_objective(const WeightedGraph& graph, int rank, std::span<const double> vectors);

/// Block-coordinate ascent on the rank-restricted relaxation: each y_i is
/// replaced by the normalized negative weighted sum of its neighbours until
/// the largest per-vertex displacement in a sweep drops below tol.
GwFactorization solve_sdp(const WeightedGraph& graph, const SdpConfig& config = {});

/// solve_sdp, retried once with doubled rank and ten times the sweep budget.
/// Degenerate optima converge sublinearly under the displacement criterion.
GwFactorization solve_sdp_with_retry(const WeightedGraph& graph, const SdpConfig& config = {});

/// Builds a factorization from caller-supplied vectors (normalized here).
GwFactorization factorization_from_vectors(const WeightedGraph& graph, int rank, std::vector<double> vectors);

/// Analytic hyperplane-rounding expectation sum_ij w_ij arccos(<y_i,y_j>) / pi.
double expected_cut(const GwFactorization& fact, const WeightedGraph& graph);

/// min over theta in (0, pi] of (2 theta / pi) / (1 - cos theta).
double alpha_gw();

struct GwReport {
    double c_max = 0.0;
    double sdp_value = 0.0;
    double expected_cut = 0.0;
    double expected_alpha = 0.0;
    double lower_bound = 0.0;      ///< alpha_gw * c_max
    double lower_bound_sdp = 0.0;  ///< alpha_gw * sdp_value
    double alpha_gw = 0.0;
};

GwReport make_report(const GwFactorization& fact, const WeightedGraph& graph, double c_max);

/// x_i = sgn<y_i, r> with sgn(0) = +1, returned in canonical form.
Cut hyperplane_round(const GwFactorization& fact, std::span<const double> direction);

struct TargetRecord {
    std::string label;
    double alpha = 0.0;
    std::uint64_t hits = 0;  ///< S_alpha: samples with ratio >= alpha

    bool reached() const { return hits > 0; }
};

/// E_K = K / S, or nothing when the target was not reached within K samples.
std::optional<double> expected_samples(std::uint64_t samples, std::uint64_t hits);

struct SamplingStats {
    std::uint64_t samples = 0;
    std::vector<TargetRecord> records;
    double mean_cut = 0.0;
    double stddev_cut = 0.0;
    double best_cut = 0.0;
    int workers = 1;

    std::optional<double> expected_samples_for(const TargetRecord& record) const {
        return mcbench::expected_samples(samples, record.hits);
    }
    const TargetRecord& record(const std::string& label) const;
};

/// 0.800, 0.805, ..., 1.000.
std::vector<double> default_alpha_grid();

struct SamplingConfig {
    std::uint64_t samples = 100000000;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<double> alpha_grid = default_alpha_grid();
};

/// Streams K independent roundings. Samples are drawn in fixed-size blocks,
/// each with its own RNG substream, so results are independent of `workers`.
/// Records the alpha grid followed by "gw_lower_bound", "gw_expectation" and
/// "c_max".
SamplingStats sample_roundings(const GwFactorization& fact, const WeightedGraph& graph, const GwReport& report,
                               const SamplingConfig& config);

}  // namespace mcbench
