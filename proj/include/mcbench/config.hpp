#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcbench/gw_solver.hpp"
#include "mcbench/instance_gen.hpp"
#include "mcbench/qaoa_sim.hpp"
#include "mcbench/stats_engine.hpp"

namespace mcbench {

constexpr std::uint64_t kDefaultMasterSeed = 20240229;

/// One `generate = <model> key=value ...` line of a config file.
struct GenerateRequest {
    GenSpec spec;
    int count = 1;
    int line = 0;
};

/***
 * Flat `key = value` experiment description. Blank lines and text after '#'
 * are ignored. `instance` and `generate` may repeat; every other key may
 * appear once.
 *
 *   instance = data/toy/er_n-10_p-0.2_1.gml    (relative to the config file)
 *   generate = er n=12 p=0.3 count=5 [weights=unit|uniform]
 *   generate = ba n=12 m=3 count=5
 *   generate = cws n=12 k=4 p=0.3 count=5
 *   runs, shots, qaoa.p, qaoa.gamma, qaoa.beta (comma-separated per layer),
 *   gw.samples, gw.rank, gw.tol, gw.max_iters,
 *   guard.max_gw_expectation_alpha, guard.hardness_percentile,
 *   guard.min_count, guard.max_count, generate.max_attempts,
 *   bootstrap.replicates, bootstrap.level, aggregate.pooling,
 *   seed, workers, out
 */
struct ExperimentConfig {
    std::filesystem::path base_dir;
    std::vector<std::filesystem::path> instances;
    std::vector<GenerateRequest> generate;

    long long runs = 1000;
    std::optional<long long> shots;  ///< default floor(2^(n/2)) per instance
    int qaoa_depth = 1;
    std::vector<double> gammas{0.5};
    std::vector<double> betas{0.5};

    long long gw_samples = 100000000;
    SdpConfig sdp;

    double guard_max_alpha = 0.97;
    std::optional<double> guard_percentile;  ///< default GuardConfig::scaled_for(n)
    std::optional<long long> guard_min_count;
    long long guard_max_count = 128;
    long max_attempts = 100000;

    int bootstrap_replicates = 1000;
    double bootstrap_level = 0.95;
    PoolingMethod pooling = PoolingMethod::PooledRuns;

    std::uint64_t seed = kDefaultMasterSeed;
    bool seed_defaulted = true;
    int workers = 1;
    std::filesystem::path out = "results";

    std::vector<std::string> defaulted;  ///< keys filled from defaults, in echo order

    /// Instance paths and `out` are relative to the config file's directory.
    std::filesystem::path resolve(const std::filesystem::path& path) const;
    GuardConfig guards_for(int n) const;
    long long shots_for(int n) const;
    QaoaParams qaoa_params() const;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Throws ConfigError listing every malformed line.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every invariant violation, each naming its key. Reads instance files to
/// check the shot budget against 2^(n-1).
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Canonical `key = value` listing with defaults filled in; defaulted keys
/// carry a trailing "# default" marker.
std::string echo_config(const ExperimentConfig& config);

/// FNV-1a of the canonical echo without `workers` and `out`, which do not
/// affect results. Printed as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace mcbench
