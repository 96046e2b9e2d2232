#include "mcbench/pipeline.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "mcbench/gml.hpp"
#include "mcbench/instance_gen.hpp"
#include "mcbench/parallel.hpp"
#include "mcbench/rng.hpp"
#include "mcbench/text.hpp"

namespace mcbench {

namespace fs = std::filesystem;

std::string stamp_header(const ArtifactStamp& stamp) {
    std::string out = "# mcbench_version=" + std::string(kToolkitVersion) + "\n";
    out += "# config_hash=" + stamp.config_hash + "\n";
    for (const auto& [key, value] : stamp.seeds) out += "# " + key + "=" + value + "\n";
    return out;
}

std::string_view strip_stamp(std::string_view text) {
    while (!text.empty() && text.front() == '#') {
        const auto eol = text.find('\n');
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    }
    return text;
}

RunMatrix simulate_runs(const WeightedGraph& graph, const QaoaParams& params, std::uint64_t runs,
                        std::uint64_t shots, std::uint64_t seed, int workers, const std::string& instance,
                        Metadata metadata) {
    if (runs < 1 || shots < 1) throw ContractError("simulation needs at least one run and one shot");
    const std::uint64_t bound = std::uint64_t{1} << (graph.n() - 1);
    if (shots > bound) {
        throw ContractError("shot budget " + std::to_string(shots) + " exceeds 2^(n-1) = " + std::to_string(bound));
    }
    auto diagonal = cost_diagonal(graph);
    const Statevector state = build_state(diagonal, graph.n(), params);
    const SamplingMethod method = choose_sampling_method(shots, graph.n());
    const ShotSampler sampler(state, std::move(diagonal), method);

    std::vector<double> values(runs * shots);
    parallel_for(runs, workers, [&](std::size_t r) {
        Rng rng = make_rng(seed, {fnv1a64("qaoa-run"), r});
        for (std::uint64_t s = 0; s < shots; ++s) values[r * shots + s] = sampler.draw(rng).cut;
    });

    metadata.emplace_back("qaoa_seed", std::to_string(seed));
    metadata.emplace_back("runs", std::to_string(runs));
    metadata.emplace_back("shots", std::to_string(shots));
    metadata.emplace_back("depth", std::to_string(params.depth()));
    std::string gammas, betas;
    for (int l = 0; l < params.depth(); ++l) {
        gammas += (l ? "," : "") + format_double(params.gammas[l]);
        betas += (l ? "," : "") + format_double(params.betas[l]);
    }
    metadata.emplace_back("gamma", gammas);
    metadata.emplace_back("beta", betas);
    metadata.emplace_back("sampling", std::string(sampling_method_name(method)));
    return RunMatrix(runs, shots, std::move(values), instance, std::move(metadata));
}

namespace {

std::string bits_string(const Cut& cut) {
    std::string out;
    for (auto x : cut.signs()) out += x < 0 ? '1' : '0';
    return out;
}

void kv(std::string& out, std::string_view key, const std::string& value) {
    out += std::string(key) + "," + value + "\n";
}

}  // namespace

std::string profile_csv(const ArtifactStamp& stamp, const WeightedGraph& graph, const OracleResult& oracle,
                        const std::optional<GwReport>& report, const std::optional<GuardVerdict>& verdict) {
    const auto& dist = oracle.distribution;
    std::string out = stamp_header(stamp) + "key,value\n";
    kv(out, "n", std::to_string(graph.n()));
    kv(out, "edges", std::to_string(graph.edge_count()));
    kv(out, "total_weight", format_double(total_weight(graph)));
    kv(out, "distinct_cuts", std::to_string(dist.size()));
    kv(out, "c_max", format_double(oracle.profile.c_max));
    kv(out, "c_min", format_double(oracle.profile.c_min));
    kv(out, "argmax_cut", bits_string(oracle.profile.argmax_cut));
    for (double q : {50.0, 90.0, 99.0, 99.9}) kv(out, "percentile_" + format_double(q), format_double(dist.percentile(q)));
    if (report) {
        kv(out, "count_above_gw_expectation", std::to_string(dist.count_above(report->expected_cut)));
        kv(out, "count_above_gw_lower_bound", std::to_string(dist.count_above(report->lower_bound)));
    }
    if (verdict) {
        kv(out, "guards_accepted", verdict->accepted ? "true" : "false");
        std::string reasons;
        for (auto r : verdict->reasons) reasons += (reasons.empty() ? "" : ";") + std::string(guard_failure_name(r));
        kv(out, "guard_failures", reasons);
        kv(out, "guard_percentile_value", format_double(verdict->percentile_value));
    }
    return out;
}

std::string gw_report_csv(const ArtifactStamp& stamp, const GwReport& report, const SamplingStats& sampling) {
    std::string out = stamp_header(stamp) + "key,value\n";
    kv(out, "c_max", format_double(report.c_max));
    kv(out, "sdp_value", format_double(report.sdp_value));
    kv(out, "expected_cut", format_double(report.expected_cut));
    kv(out, "expected_alpha", format_double(report.expected_alpha));
    kv(out, "lower_bound", format_double(report.lower_bound));
    kv(out, "lower_bound_sdp", format_double(report.lower_bound_sdp));
    kv(out, "alpha_gw", format_double(report.alpha_gw));
    kv(out, "samples", std::to_string(sampling.samples));
    kv(out, "sample_mean_cut", format_double(sampling.mean_cut));
    kv(out, "sample_stddev_cut", format_double(sampling.stddev_cut));
    kv(out, "sample_best_cut", format_double(sampling.best_cut));
    return out;
}

GwReport parse_gw_report_csv(std::string_view text) {
    std::map<std::string, double> values;
    for (auto line : split(strip_stamp(text), '\n')) {
        const auto parts = split(trim(line), ',');
        if (parts.size() != 2) continue;
        if (auto v = parse_double(parts[1])) values[std::string(parts[0])] = *v;
    }
    auto get = [&](const char* key) {
        auto it = values.find(key);
        if (it == values.end()) throw std::runtime_error(std::string("GW report lacks ") + key);
        return it->second;
    };
    GwReport r;
    r.c_max = get("c_max");
    r.sdp_value = get("sdp_value");
    r.expected_cut = get("expected_cut");
    r.expected_alpha = get("expected_alpha");
    r.lower_bound = get("lower_bound");
    r.lower_bound_sdp = get("lower_bound_sdp");
    r.alpha_gw = get("alpha_gw");
    return r;
}

std::string expected_samples_csv(const ArtifactStamp& stamp, const SamplingStats& sampling) {
    std::string out = stamp_header(stamp) + "label,alpha,S_alpha,E_K\n";
    for (const auto& r : sampling.records) {
        const auto e = sampling.expected_samples_for(r);
        out += r.label + "," + format_double(r.alpha) + "," + std::to_string(r.hits) + "," +
               (e ? format_double(*e) : "inf") + "\n";
    }
    return out;
}

std::string percentiles_csv(const ArtifactStamp& stamp, const PercentileCurve& p90, const PercentileCurve& p99) {
    if (p90.points.size() != p99.points.size()) throw ContractError("percentile curves differ in length");
    auto band = [](const PercentileCurve& c, std::vector<double> const& v, std::size_t s) {
        return c.has_bands() ? format_double(v[s]) : std::string();
    };
    std::string out = stamp_header(stamp) + "s,p90,p90_lo,p90_hi,p99,p99_lo,p99_hi\n";
    for (std::size_t s = 0; s < p90.points.size(); ++s) {
        out += std::to_string(s + 1) + "," + format_double(p90.points[s]) + "," + band(p90, p90.ci_low, s) + "," +
               band(p90, p90.ci_high, s) + "," + format_double(p99.points[s]) + "," + band(p99, p99.ci_low, s) + "," +
               band(p99, p99.ci_high, s) + "\n";
    }
    return out;
}

std::vector<ThresholdCurve> standard_thresholds(const BestSoFarMatrix& bsf, const GwReport& report) {
    return {
        threshold_curve(bsf, report.lower_bound, "pct_gt_lower_bound"),
        threshold_curve(bsf, 0.9 * report.c_max, "pct_gt_0.9cmax"),
        threshold_curve(bsf, report.expected_cut, "pct_gt_gw_expectation"),
        threshold_curve(bsf, 0.99 * report.c_max, "pct_gt_0.99cmax"),
    };
}

std::string thresholds_csv(const ArtifactStamp& stamp, const std::vector<ThresholdCurve>& curves) {
    std::string out = stamp_header(stamp) + "s";
    for (const auto& c : curves) out += "," + c.label;
    out += "\n";
    const std::size_t shots = curves.empty() ? 0 : curves.front().fractions.size();
    for (std::size_t s = 0; s < shots; ++s) {
        out += std::to_string(s + 1);
        for (const auto& c : curves) out += "," + format_double(c.fractions[s]);
        out += "\n";
    }
    return out;
}

std::string aggregate_csv(const ArtifactStamp& stamp, const AggregateResult& result) {
    std::string out = stamp_header(stamp);
    out += "# pooling=" + std::string(pooling_method_name(result.method)) + "\n";
    out += "# instances=" + std::to_string(result.instances) + "\n";
    out += "s,p90,p99,min_expected_alpha,max_expected_alpha\n";
    for (std::size_t s = 0; s < result.shots; ++s) {
        out += std::to_string(s + 1) + "," + format_double(result.p90.points[s]) + "," +
               format_double(result.p99.points[s]) + "," + format_double(result.min_expected_alpha) + "," +
               format_double(result.max_expected_alpha) + "\n";
    }
    return out;
}

void write_text_file(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StageError::StageError(std::string instance, std::string stage, const std::string& detail)
    : std::runtime_error("instance " + instance + ", stage " + stage + ": " + detail),
      instance_(std::move(instance)),
      stage_(std::move(stage)) {}

namespace {

// One unit of pipeline work: a file on disk or the i-th graph of a generate line.
struct Task {
    std::optional<fs::path> file;
    const GenerateRequest* request = nullptr;
    int index = 0;
    long long task_id = 0;
};

struct TaskOutcome {
    std::optional<InstanceSummary> summary;
    std::optional<AggregateInput> aggregate;
    std::optional<StageError> error;
};

class InstanceRunner {
public:
    InstanceRunner(const ExperimentConfig& config, const std::string& hash, const fs::path& out, int workers)
        : config_(config), hash_(hash), out_(out), workers_(workers) {}

    TaskOutcome run(const Task& task) {
        std::string name = task.file ? task.file->stem().string() : "generate-" + std::to_string(task.task_id);
        std::string stage = "load";
        try {
            std::optional<WeightedGraph> graph;
            std::optional<GuardVerdict> verdict;
            Metadata seeds;
            if (task.file) {
                graph = read_gml_file(config_.resolve(*task.file));
            } else {
                stage = "generate";
                GenSpec spec = task.request->spec;
                spec.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(task.index)});
                GenerationOptions options;
                options.max_attempts = config_.max_attempts;
                options.sdp = config_.sdp;
                options.workers = workers_;
                auto inst = generate_instance(spec, config_.guards_for(spec.n), task.task_id, options);
                name = format_name(inst.name);
                seeds.emplace_back("graph_seed", std::to_string(inst.seed));
                graph = std::move(inst.graph);
            }
            return analyse(name, *graph, std::move(seeds), stage);
        } catch (const StageError& e) {
            return {std::nullopt, std::nullopt, e};
        } catch (const std::exception& e) {
            return {std::nullopt, std::nullopt, StageError(name, stage, e.what())};
        }
    }

private:
    TaskOutcome analyse(const std::string& name, const WeightedGraph& graph, Metadata seeds, std::string& stage) {
        const fs::path dir = out_ / "instances" / name;
        fs::create_directories(dir);
        const fs::path marker = dir / "INCOMPLETE";
        write_text_file(marker, "stage in progress\n");
        try {
            auto outcome = stages(name, graph, std::move(seeds), dir, stage);
            fs::remove(marker);
            return outcome;
        } catch (const std::exception& e) {
            write_text_file(marker, "failed at stage " + stage + ": " + e.what() + "\n");
            throw StageError(name, stage, e.what());
        }
    }

    TaskOutcome stages(const std::string& name, const WeightedGraph& graph, Metadata seeds, const fs::path& dir,
                       std::string& stage) {
        const std::uint64_t instance_seed = derive_seed(config_.seed, {fnv1a64(name)});
        SdpConfig sdp = config_.sdp;
        sdp.seed = derive_seed(instance_seed, {fnv1a64("sdp")});
        const std::uint64_t rounding_seed = derive_seed(instance_seed, {fnv1a64("gw-rounding")});
        const std::uint64_t qaoa_seed = derive_seed(instance_seed, {fnv1a64("qaoa")});
        const std::uint64_t bootstrap_seed = derive_seed(instance_seed, {fnv1a64("bootstrap")});
        seeds.insert(seeds.begin(), {"master_seed", std::to_string(config_.seed)});
        seeds.emplace_back("instance", name);
        seeds.emplace_back("sdp_seed", std::to_string(sdp.seed));
        seeds.emplace_back("rounding_seed", std::to_string(rounding_seed));
        seeds.emplace_back("qaoa_seed", std::to_string(qaoa_seed));
        seeds.emplace_back("bootstrap_seed", std::to_string(bootstrap_seed));
        const ArtifactStamp stamp{hash_, seeds};

        write_gml_file(dir / "graph.gml", graph);

        stage = "solve-gw";
        const auto fact = solve_sdp_with_retry(graph, sdp);
        const double cut_expectation = expected_cut(fact, graph);

        stage = "brute-force";
        EnumerationOptions enumeration;
        enumeration.workers = workers_;
        enumeration.tracked_thresholds = {cut_expectation};
        auto oracle = enumerate_cuts(graph, enumeration);
        const GwReport report = make_report(fact, graph, oracle.profile.c_max);
        const auto verdict = apply_guards(graph, config_.guards_for(graph.n()), oracle.profile, report,
                                          oracle.distribution);
        write_text_file(dir / "profile.csv", profile_csv(stamp, graph, oracle, report, verdict));

        stage = "solve-gw";
        SamplingConfig sampling;
        sampling.samples = static_cast<std::uint64_t>(config_.gw_samples);
        sampling.seed = rounding_seed;
        sampling.workers = workers_;
        const auto stats = sample_roundings(fact, graph, report, sampling);
        write_text_file(dir / "gw_report.csv", gw_report_csv(stamp, report, stats));
        write_text_file(dir / "gw_expected_samples.csv", expected_samples_csv(stamp, stats));

        stage = "simulate-qaoa";
        Metadata meta{{"config_hash", hash_}, {"mcbench_version", std::string(kToolkitVersion)}};
        const auto shots = static_cast<std::uint64_t>(config_.shots_for(graph.n()));
        const auto matrix = simulate_runs(graph, config_.qaoa_params(), static_cast<std::uint64_t>(config_.runs),
                                          shots, qaoa_seed, workers_, name, std::move(meta));
        write_run_matrix(dir / "run_matrix.bin", matrix);
        write_text_file(dir / "run_matrix.csv", stamp_header(stamp) + run_matrix_csv(matrix));

        stage = "stats";
        const auto bsf = best_so_far(matrix);
        BootstrapConfig boot;
        boot.replicates = config_.bootstrap_replicates;
        boot.level = config_.bootstrap_level;
        boot.workers = workers_;
        boot.seed = derive_seed(bootstrap_seed, {90});
        const auto p90 = bootstrap_ci(bsf, 90.0, boot);
        boot.seed = derive_seed(bootstrap_seed, {99});
        const auto p99 = bootstrap_ci(bsf, 99.0, boot);
        write_text_file(dir / "percentiles.csv", percentiles_csv(stamp, p90, p99));
        write_text_file(dir / "thresholds.csv", thresholds_csv(stamp, standard_thresholds(bsf, report)));

        InstanceSummary summary{name, graph.n(), report.c_max, report.expected_alpha,
                                stats.expected_samples_for(stats.record("gw_expectation"))};
        return {summary, AggregateInput{name, bsf, report.c_max, report.expected_alpha}, std::nullopt};
    }

    const ExperimentConfig& config_;
    const std::string& hash_;
    const fs::path& out_;
    int workers_;
};

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& config) {
    if (auto errors = validate_config(config); !errors.empty()) throw ConfigError(errors);
    const std::string hash = config_hash(config);
    const fs::path out = config.resolve(config.out);

    std::vector<Task> tasks;
    for (const auto& file : config.instances) tasks.push_back({file, nullptr, 0, 0});
    long long next_task_id = 1;
    for (const auto& request : config.generate) {
        for (int i = 0; i < request.count; ++i) tasks.push_back({std::nullopt, &request, i, next_task_id++});
    }

    fs::create_directories(out / "instances");
    write_text_file(out / "config.txt", "# config_hash=" + hash + "\n" + echo_config(config));

    const int outer = static_cast<int>(std::min<std::size_t>(tasks.size(), static_cast<std::size_t>(config.workers)));
    const int inner = std::max(1, config.workers / std::max(outer, 1));
    InstanceRunner runner(config, hash, out, inner);
    std::vector<TaskOutcome> outcomes(tasks.size());
    parallel_for(tasks.size(), outer, [&](std::size_t t) { outcomes[t] = runner.run(tasks[t]); });

    PipelineResult result{out, hash, {}};
    std::vector<AggregateInput> inputs;
    std::map<std::string, std::size_t> seen;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        if (outcomes[t].error) throw *outcomes[t].error;
        const auto& summary = *outcomes[t].summary;
        if (auto [it, fresh] = seen.emplace(summary.name, t); !fresh) {
            throw StageError(summary.name, "aggregate", "two tasks produced the same instance name");
        }
        result.instances.push_back(summary);
        inputs.push_back(std::move(*outcomes[t].aggregate));
    }

    try {
        const auto aggregate = aggregate_instances(inputs, config.pooling);
        const ArtifactStamp stamp{hash, {{"master_seed", std::to_string(config.seed)}}};
        write_text_file(out / "aggregate.csv", aggregate_csv(stamp, aggregate));
    } catch (const std::exception& e) {
        throw StageError("*", "aggregate", e.what());
    }
    return result;
}

}  // namespace mcbench
