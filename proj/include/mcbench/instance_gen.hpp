#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcbench/exact_oracle.hpp"
#include "mcbench/graph.hpp"
#include "mcbench/gw_solver.hpp"
#include "mcbench/instance_name.hpp"

namespace mcbench {

enum class WeightScheme { Unit, Uniform };

std::string_view weight_scheme_name(WeightScheme scheme);
WeightScheme parse_weight_scheme(std::string_view text);

struct GenSpec {
    GraphModel model = GraphModel::ErdosRenyi;
    int n = 12;
    double p = 0.5;  ///< er edge probability, cws rewiring probability
    int m = 1;       ///< ba attachment count
    int k = 2;       ///< cws ring degree (even)
    WeightScheme weights = WeightScheme::Unit;
    std::uint64_t seed = 0;
    int cws_max_tries = 100;
};

/// Throws ContractError when a model parameter is out of range.
void validate_gen_spec(const GenSpec& spec);

WeightedGraph gen_erdos_renyi(int n, double p, std::uint64_t seed, WeightScheme weights = WeightScheme::Unit);

/// Preferential attachment from m isolated seed vertices; |E| = m (n - m).
WeightedGraph gen_barabasi_albert(int n, int m, std::uint64_t seed, WeightScheme weights = WeightScheme::Unit);

/// Ring lattice with k nearest neighbours, each lattice edge rewired with
/// probability p; regenerated until connected, at most max_tries times.
WeightedGraph gen_connected_watts_strogatz(int n, int k, double p, std::uint64_t seed, int max_tries = 100,
                                           WeightScheme weights = WeightScheme::Unit);

/// Dispatches on spec.model using `seed` in place of spec.seed.
WeightedGraph generate_graph(const GenSpec& spec, std::uint64_t seed);

InstanceName instance_name_for(const GenSpec& spec, long long task_id);

struct GuardConfig {
    double max_gw_expectation_alpha = 0.97;
    double hardness_percentile = 99.9;
    std::optional<std::uint64_t> min_count;  ///< defaults to n
    std::uint64_t max_count = 128;

    std::uint64_t min_count_for(int n) const { return min_count.value_or(static_cast<std::uint64_t>(n)); }

    /// Default guards for graphs with n vertices. The hardness percentile
    /// keeps 99.9 while the top 0.1% of cuts still spans at least max_count
    /// cuts, and otherwise relaxes to the rank leaving max_count cuts above.
    static GuardConfig scaled_for(int n);
};

void validate_guard_config(const GuardConfig& guards);

enum class GuardFailure { GwExpectation, SamplingHardness, TooFewGoodCuts, TooManyGoodCuts, SdpFailure };

std::string_view guard_failure_name(GuardFailure failure);

struct GuardVerdict {
    bool accepted = false;
    std::vector<GuardFailure> reasons;
    double percentile_value = 0.0;
    std::uint64_t count_above_expectation = 0;
};

GuardVerdict apply_guards(const WeightedGraph& graph, const GuardConfig& guards, const InstanceProfile& profile,
                          const GwReport& report, const CutDistribution& dist);

struct GenerationOptions {
    long max_attempts = 100000;
    SdpConfig sdp;
    EnumerationOptions enumeration;
    int workers = 1;
};

struct GeneratedInstance {
    WeightedGraph graph;
    InstanceName name;
    std::uint64_t seed = 0;
    long attempts = 0;
    InstanceProfile profile;
    GwReport report;
    GuardVerdict verdict;
    std::map<GuardFailure, long> rejections;
};

class GenerationExhausted : public std::runtime_error {
public:
    GenerationExhausted(long attempts, std::map<GuardFailure, long> rejections);
    const std::map<GuardFailure, long>& rejections() const { return rejections_; }

private:
    std::map<GuardFailure, long> rejections_;
};

/// Tries seeds spec.seed, spec.seed + 1, ... and returns the lowest one whose
/// graph passes every guard. The result does not depend on options.workers.
GeneratedInstance generate_instance(const GenSpec& spec, const GuardConfig& guards, long long task_id,
                                    const GenerationOptions& options = {});

}  // namespace mcbench
