#include "mcbench/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mcbench/gml.hpp"
#include "mcbench/qaoa_sim.hpp"
#include "mcbench/text.hpp"

namespace mcbench {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

// Keys in echo order. `instance` and `generate` are listed separately.
const std::vector<std::string>& scalar_keys() {
    static const std::vector<std::string> keys = {
        "seed",
        "runs",
        "shots",
        "qaoa.p",
        "qaoa.gamma",
        "qaoa.beta",
        "gw.samples",
        "gw.rank",
        "gw.tol",
        "gw.max_iters",
        "guard.max_gw_expectation_alpha",
        "guard.hardness_percentile",
        "guard.min_count",
        "guard.max_count",
        "generate.max_attempts",
        "bootstrap.replicates",
        "bootstrap.level",
        "aggregate.pooling",
        "workers",
        "out",
    };
    return keys;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    return out;
}

std::string format_generate(const GenerateRequest& g) {
    const auto& s = g.spec;
    std::string out(model_prefix(s.model));
    out += " n=" + std::to_string(s.n);
    switch (s.model) {
        case GraphModel::ErdosRenyi:
            out += " p=" + format_double(s.p);
            break;
        case GraphModel::BarabasiAlbert:
            out += " m=" + std::to_string(s.m);
            break;
        case GraphModel::ConnectedWattsStrogatz:
            out += " k=" + std::to_string(s.k) + " p=" + format_double(s.p);
            break;
    }
    out += " count=" + std::to_string(g.count);
    out += " weights=" + std::string(weight_scheme_name(s.weights));
    return out;
}

class Parser {
public:
    explicit Parser(ExperimentConfig& config) : config_(config) {}

    void line(int number, std::string_view raw) {
        std::string_view text = raw.substr(0, raw.find('#'));
        text = trim(text);
        if (text.empty()) return;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            error(number, "expected 'key = value'");
            return;
        }
        const std::string key(trim(text.substr(0, eq)));
        const std::string_view value = trim(text.substr(eq + 1));
        if (key == "instance") {
            if (value.empty()) return error(number, "instance: empty path");
            config_.instances.emplace_back(std::string(value));
            return;
        }
        if (key == "generate") return generate(number, value);
        if (std::find(scalar_keys().begin(), scalar_keys().end(), key) == scalar_keys().end()) {
            return error(number, "unknown key '" + key + "'");
        }
        if (!seen_.insert(key).second) return error(number, key + ": given more than once");
        scalar(number, key, value);
    }

    void finish() {
        if (!seen_.count("qaoa.gamma")) config_.gammas.assign(std::max(config_.qaoa_depth, 0), 0.5);
        if (!seen_.count("qaoa.beta")) config_.betas.assign(std::max(config_.qaoa_depth, 0), 0.5);
        config_.seed_defaulted = !seen_.count("seed");
        config_.defaulted.clear();
        for (const auto& key : scalar_keys()) {
            if (!seen_.count(key)) config_.defaulted.push_back(key);
        }
        // Seeds of generate lines without an explicit seed follow the master seed.
        for (std::size_t i = 0; i < config_.generate.size(); ++i) {
            if (!explicit_gen_seed_[i]) {
                config_.generate[i].spec.seed = derive_seed(config_.seed, {fnv1a64("generate"), i});
            }
        }
        if (!errors_.empty()) throw ConfigError(errors_);
    }

private:
    void error(int number, const std::string& message) {
        errors_.push_back("line " + std::to_string(number) + ": " + message);
    }

    std::optional<long long> integer(int number, const std::string& key, std::string_view value) {
        auto v = parse_int(value);
        if (!v) error(number, key + ": expected an integer, got '" + std::string(value) + "'");
        return v;
    }

    std::optional<double> real(int number, const std::string& key, std::string_view value) {
        auto v = parse_double(value);
        if (!v) error(number, key + ": expected a number, got '" + std::string(value) + "'");
        return v;
    }

    std::optional<std::vector<double>> reals(int number, const std::string& key, std::string_view value) {
        std::vector<double> out;
        for (auto part : split(value, ',')) {
            auto v = parse_double(trim(part));
            if (!v) {
                error(number, key + ": expected comma-separated numbers, got '" + std::string(value) + "'");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        return out;
    }

    void scalar(int number, const std::string& key, std::string_view value) {
        auto& c = config_;
        if (key == "seed") {
            if (auto v = integer(number, key, value)) {
                if (*v < 0) return error(number, "seed: must be non-negative");
                c.seed = static_cast<std::uint64_t>(*v);
            }
        } else if (key == "runs") {
            if (auto v = integer(number, key, value)) c.runs = *v;
        } else if (key == "shots") {
            if (value == "auto") return;
            if (auto v = integer(number, key, value)) c.shots = *v;
        } else if (key == "qaoa.p") {
            if (auto v = integer(number, key, value)) c.qaoa_depth = static_cast<int>(*v);
        } else if (key == "qaoa.gamma") {
            if (auto v = reals(number, key, value)) c.gammas = *v;
        } else if (key == "qaoa.beta") {
            if (auto v = reals(number, key, value)) c.betas = *v;
        } else if (key == "gw.samples") {
            if (auto v = real(number, key, value)) {
                if (*v != std::floor(*v) || std::abs(*v) > 9e18) {
                    return error(number, "gw.samples: expected a whole number");
                }
                c.gw_samples = static_cast<long long>(*v);
            }
        } else if (key == "gw.rank") {
            if (auto v = integer(number, key, value)) c.sdp.rank = static_cast<int>(*v);
        } else if (key == "gw.tol") {
            if (auto v = real(number, key, value)) c.sdp.tol = *v;
        } else if (key == "gw.max_iters") {
            if (auto v = integer(number, key, value)) c.sdp.max_iters = static_cast<int>(*v);
        } else if (key == "guard.max_gw_expectation_alpha") {
            if (auto v = real(number, key, value)) c.guard_max_alpha = *v;
        } else if (key == "guard.hardness_percentile") {
            if (value == "scaled") return;
            if (auto v = real(number, key, value)) c.guard_percentile = *v;
        } else if (key == "guard.min_count") {
            if (value == "n") return;
            if (auto v = integer(number, key, value)) c.guard_min_count = *v;
        } else if (key == "guard.max_count") {
            if (auto v = integer(number, key, value)) c.guard_max_count = *v;
        } else if (key == "generate.max_attempts") {
            if (auto v = integer(number, key, value)) c.max_attempts = static_cast<long>(*v);
        } else if (key == "bootstrap.replicates") {
            if (auto v = integer(number, key, value)) c.bootstrap_replicates = static_cast<int>(*v);
        } else if (key == "bootstrap.level") {
            if (auto v = real(number, key, value)) c.bootstrap_level = *v;
        } else if (key == "aggregate.pooling") {
            try {
                c.pooling = parse_pooling_method(value);
            } catch (const ContractError& e) {
                error(number, std::string("aggregate.pooling: ") + e.what());
            }
        } else if (key == "workers") {
            if (auto v = integer(number, key, value)) c.workers = static_cast<int>(*v);
        } else if (key == "out") {
            c.out = std::string(value);
        }
    }

    void generate(int number, std::string_view value) {
        std::istringstream in{std::string(value)};
        std::string word;
        GenerateRequest request;
        request.line = number;
        bool explicit_seed = false;
        if (!(in >> word)) return error(number, "generate: missing model");
        try {
            request.spec.model = parse_model(word);
        } catch (const std::exception&) {
            return error(number, "generate: unknown model '" + word + "' (expected er, ba or cws)");
        }
        const std::string model = word;
        std::set<std::string> fields;
        while (in >> word) {
            const auto eq = word.find('=');
            if (eq == std::string::npos) return error(number, "generate: expected key=value, got '" + word + "'");
            const std::string key = word.substr(0, eq), v = word.substr(eq + 1);
            if (!fields.insert(key).second) return error(number, "generate: " + key + " given more than once");
            auto as_int = [&]() -> std::optional<long long> {
                auto x = parse_int(v);
                if (!x) error(number, "generate: " + key + " expects an integer, got '" + v + "'");
                return x;
            };
            if (key == "n") {
                if (auto x = as_int()) request.spec.n = static_cast<int>(*x);
            } else if (key == "m") {
                if (auto x = as_int()) request.spec.m = static_cast<int>(*x);
            } else if (key == "k") {
                if (auto x = as_int()) request.spec.k = static_cast<int>(*x);
            } else if (key == "count") {
                if (auto x = as_int()) request.count = static_cast<int>(*x);
            } else if (key == "seed") {
                if (auto x = as_int()) {
                    request.spec.seed = static_cast<std::uint64_t>(*x);
                    explicit_seed = true;
                }
            } else if (key == "p") {
                auto x = parse_double(v);
                if (!x) return error(number, "generate: p expects a number, got '" + v + "'");
                request.spec.p = *x;
            } else if (key == "weights") {
                try {
                    request.spec.weights = parse_weight_scheme(v);
                } catch (const ContractError& e) {
                    return error(number, std::string("generate: ") + e.what());
                }
            } else {
                return error(number, "generate: unknown field '" + key + "'");
            }
        }
        std::vector<std::string> required{"n"};
        switch (request.spec.model) {
            case GraphModel::ErdosRenyi: required.push_back("p"); break;
            case GraphModel::BarabasiAlbert: required.push_back("m"); break;
            case GraphModel::ConnectedWattsStrogatz:
                required.push_back("k");
                required.push_back("p");
                break;
        }
        for (const auto& key : required) {
            if (!fields.count(key)) return error(number, "generate: " + key + " is required for " + model);
        }
        config_.generate.push_back(request);
        explicit_gen_seed_.push_back(explicit_seed);
    }

    ExperimentConfig& config_;
    std::set<std::string> seen_;
    std::vector<bool> explicit_gen_seed_;
    std::vector<std::string> errors_;
};

std::vector<std::string> echo_lines(const ExperimentConfig& c, bool runtime_keys) {
    std::map<std::string, std::string> values;
    values["seed"] = std::to_string(c.seed);
    values["runs"] = std::to_string(c.runs);
    values["shots"] = c.shots ? std::to_string(*c.shots) : "auto";
    values["qaoa.p"] = std::to_string(c.qaoa_depth);
    values["qaoa.gamma"] = format_list(c.gammas);
    values["qaoa.beta"] = format_list(c.betas);
    values["gw.samples"] = std::to_string(c.gw_samples);
    values["gw.rank"] = std::to_string(c.sdp.rank);
    values["gw.tol"] = format_double(c.sdp.tol);
    values["gw.max_iters"] = std::to_string(c.sdp.max_iters);
    values["guard.max_gw_expectation_alpha"] = format_double(c.guard_max_alpha);
    values["guard.hardness_percentile"] = c.guard_percentile ? format_double(*c.guard_percentile) : "scaled";
    values["guard.min_count"] = c.guard_min_count ? std::to_string(*c.guard_min_count) : "n";
    values["guard.max_count"] = std::to_string(c.guard_max_count);
    values["generate.max_attempts"] = std::to_string(c.max_attempts);
    values["bootstrap.replicates"] = std::to_string(c.bootstrap_replicates);
    values["bootstrap.level"] = format_double(c.bootstrap_level);
    values["aggregate.pooling"] = std::string(pooling_method_name(c.pooling));
    values["workers"] = std::to_string(c.workers);
    values["out"] = c.out.generic_string();

    std::vector<std::string> lines;
    for (const auto& key : scalar_keys()) {
        if (!runtime_keys && (key == "workers" || key == "out")) continue;
        std::string line = key + " = " + values[key];
        if (runtime_keys && std::find(c.defaulted.begin(), c.defaulted.end(), key) != c.defaulted.end()) {
            line += "  # default";
        }
        lines.push_back(line);
    }
    for (const auto& p : c.instances) lines.push_back("instance = " + p.generic_string());
    for (const auto& g : c.generate) {
        lines.push_back("generate = " + format_generate(g) + " seed=" + std::to_string(g.spec.seed));
    }
    return lines;
}

}  // namespace

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const {
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

GuardConfig ExperimentConfig::guards_for(int n) const {
    GuardConfig g = GuardConfig::scaled_for(n);
    g.max_gw_expectation_alpha = guard_max_alpha;
    if (guard_percentile) g.hardness_percentile = *guard_percentile;
    if (guard_min_count) g.min_count = static_cast<std::uint64_t>(*guard_min_count);
    g.max_count = static_cast<std::uint64_t>(guard_max_count);
    return g;
}

long long ExperimentConfig::shots_for(int n) const {
    if (shots) return *shots;
    return static_cast<long long>(std::floor(std::pow(2.0, n / 2.0)));
}

QaoaParams ExperimentConfig::qaoa_params() const { return QaoaParams{gammas, betas}; }

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig config;
    config.base_dir = base_dir;
    Parser parser(config);
    int number = 0;
    for (auto raw : split(text, '\n')) parser.line(++number, raw);
    parser.finish();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file " + path.string()});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
    std::vector<std::string> errors;
    auto check = [&](bool ok, const std::string& message) {
        if (!ok) errors.push_back(message);
    };
    check(c.runs >= 1, "runs: must be at least 1");
    check(!c.shots || *c.shots >= 1, "shots: must be at least 1");
    check(c.qaoa_depth >= 1, "qaoa.p: must be at least 1");
    check(static_cast<long long>(c.gammas.size()) == c.qaoa_depth,
          "qaoa.gamma: " + std::to_string(c.gammas.size()) + " angles for depth " + std::to_string(c.qaoa_depth));
    check(static_cast<long long>(c.betas.size()) == c.qaoa_depth,
          "qaoa.beta: " + std::to_string(c.betas.size()) + " angles for depth " + std::to_string(c.qaoa_depth));
    check(c.gw_samples >= 1, "gw.samples: must be at least 1");
    check(c.sdp.rank >= 0, "gw.rank: must be non-negative (0 selects the default rank)");
    check(c.sdp.tol > 0.0, "gw.tol: must be positive");
    check(c.sdp.max_iters >= 1, "gw.max_iters: must be at least 1");
    check(c.guard_max_alpha > 0.0 && c.guard_max_alpha <= 1.0, "guard.max_gw_expectation_alpha: must lie in (0, 1]");
    check(!c.guard_percentile || (*c.guard_percentile > 0.0 && *c.guard_percentile <= 100.0),
          "guard.hardness_percentile: must lie in (0, 100]");
    check(c.guard_max_count >= 1, "guard.max_count: must be at least 1");
    check(!c.guard_min_count || (*c.guard_min_count >= 0 && *c.guard_min_count < c.guard_max_count),
          "guard.min_count: must lie in [0, guard.max_count)");
    check(c.max_attempts >= 1, "generate.max_attempts: must be at least 1");
    check(c.bootstrap_replicates >= 100, "bootstrap.replicates: must be at least 100");
    check(c.bootstrap_level > 0.0 && c.bootstrap_level < 1.0, "bootstrap.level: must lie in (0, 1)");
    check(c.workers >= 1, "workers: must be at least 1");
    check(!c.out.empty(), "out: must not be empty");
    check(!c.instances.empty() || !c.generate.empty(), "instance/generate: no instances configured");

    auto check_size = [&](const std::string& where, int n) {
        if (n > kDefaultMaxQubits) {
            errors.push_back(where + ": n = " + std::to_string(n) + " exceeds the simulator cap of " +
                             std::to_string(kDefaultMaxQubits) + " qubits");
            return;
        }
        const long long bound = 1LL << (n - 1);
        const long long shots = c.shots_for(n);
        if (shots > bound) {
            errors.push_back("shots: " + std::to_string(shots) + " exceeds 2^(n-1) = " + std::to_string(bound) +
                             " for " + where);
        }
    };

    std::set<std::string> names;
    for (const auto& p : c.instances) {
        const auto path = c.resolve(p);
        const std::string where = "instance " + p.generic_string();
        try {
            const auto graph = read_gml_file(path);
            check_size(where, graph.n());
        } catch (const std::exception& e) {
            errors.push_back(where + ": " + e.what());
        }
        if (!names.insert(p.stem().string()).second) errors.push_back(where + ": duplicate instance name");
    }
    for (const auto& g : c.generate) {
        const std::string where = "generate (line " + std::to_string(g.line) + ")";
        try {
            validate_gen_spec(g.spec);
            check_size(where, g.spec.n);
        } catch (const ContractError& e) {
            errors.push_back(where + ": " + e.what());
        }
        if (g.count < 1) errors.push_back(where + ": count must be at least 1");
    }
    return errors;
}

std::string echo_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& line : echo_lines(config, true)) out += line + "\n";
    return out;
}

std::string config_hash(const ExperimentConfig& config) {
    std::string canonical;
    for (const auto& line : echo_lines(config, false)) canonical += line + "\n";
    for (const auto& p : config.instances) {
        std::ifstream in(config.resolve(p), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        canonical += ss.str();
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

}  // namespace mcbench
