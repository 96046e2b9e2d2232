#include "mcbench/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mcbench/parallel.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

std::string_view weight_scheme_name(WeightScheme scheme) {
    return scheme == WeightScheme::Unit ? "unit" : "uniform";
}

WeightScheme parse_weight_scheme(std::string_view text) {
    if (text == "unit") return WeightScheme::Unit;
    if (text == "uniform") return WeightScheme::Uniform;
    throw ContractError("unknown weight scheme '" + std::string(text) + "'");
}

void validate_gen_spec(const GenSpec& spec) {
    if (spec.n < 2) throw ContractError("n must be at least 2");
    switch (spec.model) {
        case GraphModel::ErdosRenyi:
            if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ContractError("er: p must lie in [0, 1]");
            break;
        case GraphModel::BarabasiAlbert:
            if (spec.m < 1 || spec.m >= spec.n) throw ContractError("ba: m must satisfy 1 <= m < n");
            break;
        case GraphModel::ConnectedWattsStrogatz:
            if (spec.k < 2 || spec.k % 2 != 0 || spec.k >= spec.n) {
                throw ContractError("cws: k must be even with 2 <= k < n");
            }
            if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ContractError("cws: p must lie in [0, 1]");
            if (spec.cws_max_tries < 1) throw ContractError("cws: max_tries must be positive");
            break;
    }
}

namespace {

std::vector<Edge> weighted(std::vector<std::pair<int, int>> pairs, WeightScheme scheme, Rng& rng) {
    std::sort(pairs.begin(), pairs.end());
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        // uniform(0, 1]
        double w = scheme == WeightScheme::Unit ? 1.0 : 1.0 - uniform01(rng);
        edges.push_back({a, b, w});
    }
    return edges;
}

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

WeightedGraph gen_erdos_renyi(int n, double p, std::uint64_t seed, WeightScheme weights) {
    GenSpec spec;
    spec.model = GraphModel::ErdosRenyi;
    spec.n = n;
    spec.p = p;
    validate_gen_spec(spec);
    Rng rng = make_rng(seed, {fnv1a64("er")});
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (uniform01(rng) < p) pairs.emplace_back(i, j);
        }
    }
    return WeightedGraph(n, weighted(std::move(pairs), weights, rng));
}

WeightedGraph gen_barabasi_albert(int n, int m, std::uint64_t seed, WeightScheme weights) {
    GenSpec spec;
    spec.model = GraphModel::BarabasiAlbert;
    spec.n = n;
    spec.m = m;
    validate_gen_spec(spec);
    Rng rng = make_rng(seed, {fnv1a64("ba")});
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> targets(m);
    for (int t = 0; t < m; ++t) targets[t] = t;
    // Each vertex appears once per incident edge, so uniform draws from this
    // list are degree-proportional.
    std::vector<int> repeated;
    for (int source = m; source < n; ++source) {
        for (int t : targets) pairs.push_back(ordered(source, t));
        repeated.insert(repeated.end(), targets.begin(), targets.end());
        repeated.insert(repeated.end(), m, source);
        targets.clear();
        while (static_cast<int>(targets.size()) < m) {
            int pick = repeated[uniform_below(rng, repeated.size())];
            if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
        }
    }
    return WeightedGraph(n, weighted(std::move(pairs), weights, rng));
}

WeightedGraph gen_connected_watts_strogatz(int n, int k, double p, std::uint64_t seed, int max_tries,
                                           WeightScheme weights) {
    GenSpec spec;
    spec.model = GraphModel::ConnectedWattsStrogatz;
    spec.n = n;
    spec.k = k;
    spec.p = p;
    spec.cws_max_tries = max_tries;
    validate_gen_spec(spec);
    Rng rng = make_rng(seed, {fnv1a64("cws")});

    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::set<std::pair<int, int>> edges;
        std::vector<std::set<int>> adj(n);
        auto add = [&](int a, int b) {
            edges.insert(ordered(a, b));
            adj[a].insert(b);
            adj[b].insert(a);
        };
        auto remove = [&](int a, int b) {
            edges.erase(ordered(a, b));
            adj[a].erase(b);
            adj[b].erase(a);
        };
        for (int j = 1; j <= k / 2; ++j) {
            for (int u = 0; u < n; ++u) add(u, (u + j) % n);
        }
        for (int j = 1; j <= k / 2; ++j) {
            for (int u = 0; u < n; ++u) {
                if (uniform01(rng) >= p) continue;
                const int v = (u + j) % n;
                if (!adj[u].count(v)) continue;
                if (static_cast<int>(adj[u].size()) >= n - 1) continue;
                int w = static_cast<int>(uniform_below(rng, n));
                while (w == u || adj[u].count(w)) w = static_cast<int>(uniform_below(rng, n));
                remove(u, v);
                add(u, w);
            }
        }
        std::vector<std::pair<int, int>> pairs(edges.begin(), edges.end());
        WeightedGraph graph(n, weighted(std::move(pairs), weights, rng));
        if (graph.is_connected()) return graph;
    }
    throw std::runtime_error("connected Watts-Strogatz: no connected graph after " + std::to_string(max_tries) +
                             " tries");
}

WeightedGraph generate_graph(const GenSpec& spec, std::uint64_t seed) {
    switch (spec.model) {
        case GraphModel::ErdosRenyi: return gen_erdos_renyi(spec.n, spec.p, seed, spec.weights);
        case GraphModel::BarabasiAlbert: return gen_barabasi_albert(spec.n, spec.m, seed, spec.weights);
        case GraphModel::ConnectedWattsStrogatz:
            return gen_connected_watts_strogatz(spec.n, spec.k, spec.p, seed, spec.cws_max_tries, spec.weights);
    }
    throw ContractError("unknown model");
}

InstanceName instance_name_for(const GenSpec& spec, long long task_id) {
    switch (spec.model) {
        case GraphModel::ErdosRenyi: return InstanceName::er(spec.n, spec.p, task_id);
        case GraphModel::BarabasiAlbert: return InstanceName::ba(spec.n, spec.m, task_id);
        case GraphModel::ConnectedWattsStrogatz: return InstanceName::cws(spec.n, spec.k, spec.p, task_id);
    }
    throw ContractError("unknown model");
}

GuardConfig GuardConfig::scaled_for(int n) {
    GuardConfig g;
    const double cuts = std::ldexp(1.0, n - 1);
    const double relaxed = 100.0 * (1.0 - static_cast<double>(g.max_count) / cuts);
    g.hardness_percentile = std::max(0.0, std::min(g.hardness_percentile, relaxed));
    return g;
}

void validate_guard_config(const GuardConfig& guards) {
    if (!(guards.max_gw_expectation_alpha > 0.0 && guards.max_gw_expectation_alpha <= 1.0)) {
        throw ContractError("max_gw_expectation_alpha must lie in (0, 1]");
    }
    if (!(guards.hardness_percentile >= 0.0 && guards.hardness_percentile <= 100.0)) {
        throw ContractError("hardness percentile must lie in [0, 100]");
    }
    if (guards.min_count && *guards.min_count > guards.max_count) {
        throw ContractError("min_count must not exceed max_count");
    }
}

std::string_view guard_failure_name(GuardFailure failure) {
    switch (failure) {
        case GuardFailure::GwExpectation: return "gw_expectation";
        case GuardFailure::SamplingHardness: return "sampling_hardness";
        case GuardFailure::TooFewGoodCuts: return "too_few_good_cuts";
        case GuardFailure::TooManyGoodCuts: return "too_many_good_cuts";
        case GuardFailure::SdpFailure: return "sdp_failure";
    }
    return "?";
}

GuardVerdict apply_guards(const WeightedGraph& graph, const GuardConfig& guards, const InstanceProfile& profile,
                          const GwReport& report, const CutDistribution& dist) {
    GuardVerdict v;
    v.percentile_value = dist.percentile(guards.hardness_percentile);
    v.count_above_expectation = dist.count_above(report.expected_cut);
    if (report.expected_alpha > guards.max_gw_expectation_alpha) v.reasons.push_back(GuardFailure::GwExpectation);
    if (!(v.percentile_value < alpha_gw() * profile.c_max)) v.reasons.push_back(GuardFailure::SamplingHardness);
    if (v.count_above_expectation < guards.min_count_for(graph.n())) {
        v.reasons.push_back(GuardFailure::TooFewGoodCuts);
    }
    if (v.count_above_expectation >= guards.max_count) v.reasons.push_back(GuardFailure::TooManyGoodCuts);
    v.accepted = v.reasons.empty();
    return v;
}

GenerationExhausted::GenerationExhausted(long attempts, std::map<GuardFailure, long> rejections)
    : std::runtime_error([&] {
          std::string msg = "no instance passed the guards within " + std::to_string(attempts) + " attempts (";
          bool first = true;
          for (const auto& [reason, count] : rejections) {
              msg += (first ? "" : ", ") + std::string(guard_failure_name(reason)) + "=" + std::to_string(count);
              first = false;
          }
          return msg + ")";
      }()),
      rejections_(std::move(rejections)) {}

namespace {

struct Candidate {
    std::optional<GeneratedInstance> accepted;
    std::vector<GuardFailure> reasons;
};

Candidate evaluate_candidate(const GenSpec& spec, const GuardConfig& guards, long long task_id,
                             const GenerationOptions& options, std::uint64_t seed) {
    WeightedGraph graph = generate_graph(spec, seed);
    SdpConfig sdp = options.sdp;
    sdp.seed = derive_seed(seed, {fnv1a64("sdp")});
    std::optional<GwFactorization> fact;
    try {
        fact = solve_sdp_with_retry(graph, sdp);
    } catch (const SdpNonConvergence&) {
        return {std::nullopt, {GuardFailure::SdpFailure}};
    }

    // sdp_value >= c_max, so expected_cut / sdp_value bounds the GW ratio from
    // below and rejects easy graphs before enumeration.
    const double cut_expectation = expected_cut(*fact, graph);
    if (fact->sdp_value() > 0.0 &&
        cut_expectation / fact->sdp_value() > guards.max_gw_expectation_alpha * (1.0 + 1e-9)) {
        return {std::nullopt, {GuardFailure::GwExpectation}};
    }

    EnumerationOptions enumeration = options.enumeration;
    enumeration.tracked_thresholds.push_back(cut_expectation);
    auto oracle = enumerate_cuts(graph, enumeration);
    GwReport report = make_report(*fact, graph, oracle.profile.c_max);
    GuardVerdict verdict = apply_guards(graph, guards, oracle.profile, report, oracle.distribution);
    if (!verdict.accepted) return {std::nullopt, verdict.reasons};

    GeneratedInstance inst{std::move(graph), instance_name_for(spec, task_id), seed, 0,
                           std::move(oracle.profile), report, std::move(verdict), {}};
    return {std::move(inst), {}};
}

}  // namespace

GeneratedInstance generate_instance(const GenSpec& spec, const GuardConfig& guards, long long task_id,
                                    const GenerationOptions& options) {
    validate_gen_spec(spec);
    validate_guard_config(guards);
    if (spec.n > options.enumeration.max_vertices) {
        throw EnumerationRefused("instance generation needs exact enumeration; n=" + std::to_string(spec.n) +
                                 " exceeds the cap");
    }

    std::map<GuardFailure, long> rejections;
    const long batch = std::max(options.workers, 1);
    for (long start = 0; start < options.max_attempts; start += batch) {
        const long size = std::min(batch, options.max_attempts - start);
        std::vector<Candidate> results(size);
        parallel_for(size, options.workers, [&](std::size_t t) {
            results[t] = evaluate_candidate(spec, guards, task_id, options, spec.seed + start + t);
        });
        for (long t = 0; t < size; ++t) {
            if (results[t].accepted) {
                GeneratedInstance inst = std::move(*results[t].accepted);
                inst.attempts = start + t + 1;
                inst.rejections = rejections;
                return inst;
            }
            for (auto reason : results[t].reasons) ++rejections[reason];
        }
    }
    throw GenerationExhausted(options.max_attempts, rejections);
}

}  // namespace mcbench
