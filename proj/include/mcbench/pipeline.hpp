#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mcbench/config.hpp"
#include "mcbench/exact_oracle.hpp"
#include "mcbench/gw_solver.hpp"
#include "mcbench/qaoa_sim.hpp"
#include "mcbench/run_matrix.hpp"
#include "mcbench/stats_engine.hpp"

namespace mcbench {

constexpr std::string_view kToolkitVersion = "0.1.0";

/// Provenance written at the top of every artifact as `# key=value` lines.
struct ArtifactStamp {
    std::string config_hash;
    Metadata seeds;
};

std::string stamp_header(const ArtifactStamp& stamp);

/// Drops leading `#` lines.
std::string_view strip_stamp(std::string_view text);

/// R independent runs of N shots each from one prepared state. Run r draws
/// from the substream (seed, r).
RunMatrix simulate_runs(const WeightedGraph& graph, const QaoaParams& params, std::uint64_t runs,
                        std::uint64_t shots, std::uint64_t seed, int workers, const std::string& instance,
                        Metadata metadata = {});

std::string profile_csv(const ArtifactStamp& stamp, const WeightedGraph& graph, const OracleResult& oracle,
                        const std::optional<GwReport>& report, const std::optional<GuardVerdict>& verdict);

std::string gw_report_csv(const ArtifactStamp& stamp, const GwReport& report, const SamplingStats& sampling);

/// Reads c_max, sdp_value, expected_cut, expected_alpha, lower_bound,
/// lower_bound_sdp and alpha_gw back from gw_report_csv output.
GwReport parse_gw_report_csv(std::string_view text);

/// label, alpha, S_alpha, E_K ("inf" when the target was not reached within K).
std::string expected_samples_csv(const ArtifactStamp& stamp, const SamplingStats& sampling);

/// s, p90, p90_lo, p90_hi, p99, p99_lo, p99_hi with s counted from 1.
std::string percentiles_csv(const ArtifactStamp& stamp, const PercentileCurve& p90, const PercentileCurve& p99);

/// Fractions above alpha_gw c_max, 0.9 c_max, the GW expectation and 0.99 c_max.
std::vector<ThresholdCurve> standard_thresholds(const BestSoFarMatrix& bsf, const GwReport& report);

/// s, pct_gt_lower_bound, pct_gt_0.9cmax, pct_gt_gw_expectation, pct_gt_0.99cmax.
std::string thresholds_csv(const ArtifactStamp& stamp, const std::vector<ThresholdCurve>& curves);

/// s, p90, p99, min_expected_alpha, max_expected_alpha.
std::string aggregate_csv(const ArtifactStamp& stamp, const AggregateResult& result);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

class StageError : public std::runtime_error {
public:
    StageError(std::string instance, std::string stage, const std::string& detail);
    const std::string& instance() const { return instance_; }
    const std::string& stage() const { return stage_; }

private:
    std::string instance_;
    std::string stage_;
};

struct InstanceSummary {
    std::string name;
    int n = 0;
    double c_max = 0.0;
    double expected_alpha = 0.0;
    std::optional<double> samples_to_beat_expectation;  ///< E_K for the GW expectation target
};

struct PipelineResult {
    std::filesystem::path out;
    std::string config_hash;
    std::vector<InstanceSummary> instances;
};

/***
 * Output tree under config.resolve(config.out):
 *   config.txt, aggregate.csv
 *   instances/<name>/graph.gml, profile.csv, gw_report.csv,
 *     gw_expected_samples.csv, run_matrix.bin, run_matrix.csv,
 *     percentiles.csv, thresholds.csv
 * An instance directory holds an INCOMPLETE file until all of its stages
 * finish. Throws ConfigError on invalid configs and StageError naming the
 * first failing instance otherwise.
 */
PipelineResult run_pipeline(const ExperimentConfig& config);

}  // namespace mcbench
