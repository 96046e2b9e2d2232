#include "mcbench/qaoa_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mcbench {

void QaoaParams::validate() const {
    if (gammas.empty()) throw ContractError("QAOA depth p must be at least 1");
    if (gammas.size() != betas.size()) {
        throw ContractError("QAOA needs as many betas as gammas (got " + std::to_string(gammas.size()) + " and " +
                            std::to_string(betas.size()) + ")");
    }
}

Statevector::Statevector(int n, std::vector<Amplitude> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    if (n < 1 || n > 62 || amps_.size() != (std::size_t{1} << n)) {
        throw ContractError("statevector of n qubits needs 2^n amplitudes");
    }
}

double Statevector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

Statevector initial_state(int n, int max_qubits) {
    if (n > max_qubits) {
        throw ContractError("refusing to simulate " + std::to_string(n) + " qubits (cap is " +
                            std::to_string(max_qubits) + ")");
    }
    const double amp = std::pow(2.0, -0.5 * n);
    return Statevector(n, std::vector<Statevector::Amplitude>(std::size_t{1} << n, {amp, 0.0}));
}

std::vector<double> cost_diagonal(const WeightedGraph& graph) {
    const int n = graph.n();
    std::vector<double> diag(std::size_t{1} << n, 0.0);
    // diag[z] from diag[z without its top bit v]: moving v to the -1 side cuts
    // edges to +1 neighbours and uncuts edges to -1 neighbours.
    for (int v = 0; v < n; ++v) {
        const std::size_t base = std::size_t{1} << v;
        for (std::size_t low = 0; low < base; ++low) {
            double delta = 0.0;
            for (const auto& nb : graph.neighbors(v)) {
                if (nb.vertex > v) {
                    delta += nb.w;
                } else {
                    delta += ((low >> nb.vertex) & 1U) ? -nb.w : nb.w;
                }
            }
            diag[base | low] = diag[low] + delta;
        }
    }
    return diag;
}

void apply_cost_phase(Statevector& state, std::span<const double> diagonal, double gamma) {
    auto amps = state.amplitudes();
    if (diagonal.size() != amps.size()) throw ContractError("cost diagonal does not match the state dimension");
    if (gamma == 0.0) return;
    for (std::size_t z = 0; z < amps.size(); ++z) {
        const double phase = -gamma * diagonal[z];
        amps[z] *= Statevector::Amplitude(std::cos(phase), std::sin(phase));
    }
}

void apply_cost_phase(Statevector& state, const WeightedGraph& graph, double gamma) {
    if (state.n() != graph.n()) throw ContractError("state and graph sizes differ");
    apply_cost_phase(state, cost_diagonal(graph), gamma);
}

void apply_mixer(Statevector& state, double beta) {
    if (beta == 0.0) return;
    auto amps = state.amplitudes();
    const double c = std::cos(beta);
    const Statevector::Amplitude minus_i_s(0.0, -std::sin(beta));
    for (int q = 0; q < state.n(); ++q) {
        const std::size_t stride = std::size_t{1} << q;
        for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                const auto a = amps[i];
                const auto b = amps[i + stride];
                amps[i] = a * c + minus_i_s * b;
                amps[i + stride] = b * c + minus_i_s * a;
            }
        }
    }
}

Statevector build_state(std::span<const double> diagonal, int n, const QaoaParams& params, int max_qubits) {
    params.validate();
    Statevector state = initial_state(n, max_qubits);
    for (int layer = 0; layer < params.depth(); ++layer) {
        apply_cost_phase(state, diagonal, params.gammas[layer]);
        apply_mixer(state, params.betas[layer]);
    }
    return state;
}

Statevector build_state(const WeightedGraph& graph, const QaoaParams& params, int max_qubits) {
    if (graph.n() > max_qubits) {
        throw ContractError("refusing to simulate " + std::to_string(graph.n()) + " qubits (cap is " +
                            std::to_string(max_qubits) + ")");
    }
    return build_state(cost_diagonal(graph), graph.n(), params, max_qubits);
}

double expectation(const Statevector& state, std::span<const double> diagonal) {
    auto amps = state.amplitudes();
    if (diagonal.size() != amps.size()) throw ContractError("cost diagonal does not match the state dimension");
    double value = 0.0;
    for (std::size_t z = 0; z < amps.size(); ++z) value += std::norm(amps[z]) * diagonal[z];
    return value;
}

double expectation(const Statevector& state, const WeightedGraph& graph) {
    if (state.n() != graph.n()) throw ContractError("state and graph sizes differ");
    return expectation(state, cost_diagonal(graph));
}

std::string_view sampling_method_name(SamplingMethod method) {
    return method == SamplingMethod::Alias ? "alias" : "inverse_cdf";
}

SamplingMethod choose_sampling_method(std::uint64_t shots, int n) {
    return shots > (std::uint64_t{1} << n) / 16 ? SamplingMethod::Alias : SamplingMethod::InverseCdf;
}

ShotSampler::ShotSampler(const Statevector& state, std::vector<double> diagonal, SamplingMethod method)
    : method_(method), diagonal_(std::move(diagonal)) {
    auto amps = state.amplitudes();
    if (diagonal_.size() != amps.size()) throw ContractError("cost diagonal does not match the state dimension");
    const std::size_t size = amps.size();
    std::vector<double> prob(size);
    double total = 0.0;
    for (std::size_t z = 0; z < size; ++z) {
        prob[z] = std::norm(amps[z]);
        total += prob[z];
    }
    if (!(total > 0.0)) throw ContractError("cannot sample from a zero state");

    if (method_ == SamplingMethod::InverseCdf) {
        cumulative_.resize(size);
        double running = 0.0;
        for (std::size_t z = 0; z < size; ++z) {
            running += prob[z] / total;
            cumulative_[z] = running;
        }
        return;
    }

    // Vose's alias method.
    alias_prob_.assign(size, 0.0);
    alias_index_.assign(size, 0);
    std::vector<double> scaled(size);
    std::vector<std::uint32_t> small, large;
    for (std::size_t z = 0; z < size; ++z) {
        scaled[z] = prob[z] / total * static_cast<double>(size);
        (scaled[z] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(z));
    }
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        alias_prob_[s] = scaled[s];
        alias_index_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (auto z : large) alias_prob_[z] = 1.0;
    for (auto z : small) alias_prob_[z] = 1.0;
}

Shot ShotSampler::draw(Rng& rng) const {
    std::size_t z = 0;
    if (method_ == SamplingMethod::InverseCdf) {
        const double u = uniform01(rng);
        z = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
        if (z >= cumulative_.size()) {
            // Rounding left the last prefix sum below u; take the last state with mass.
            z = cumulative_.size() - 1;
            while (z > 0 && cumulative_[z] == cumulative_[z - 1]) --z;
        }
    } else {
        const std::size_t column = static_cast<std::size_t>(uniform_below(rng, alias_prob_.size()));
        z = uniform01(rng) < alias_prob_[column] ? column : alias_index_[column];
    }
    return {static_cast<std::uint64_t>(z), diagonal_[z]};
}

std::vector<Shot> sample_shots(const Statevector& state, const WeightedGraph& graph, std::uint64_t shots,
                               std::uint64_t seed) {
    if (shots < 1) throw ContractError("shot count must be at least 1");
    if (state.n() != graph.n()) throw ContractError("state and graph sizes differ");
    ShotSampler sampler(state, cost_diagonal(graph), choose_sampling_method(shots, graph.n()));
    Rng rng = make_rng(seed, {fnv1a64("qaoa-shots")});
    std::vector<Shot> out(shots);
    for (auto& s : out) s = sampler.draw(rng);
    return out;
}

GridOptimum grid_optimize_p1(const WeightedGraph& graph, int resolution) {
    if (resolution < 1) throw ContractError("grid resolution must be positive");
    const auto diag = cost_diagonal(graph);
    auto evaluate = [&](double gamma, double beta) {
        return expectation(build_state(diag, graph.n(), QaoaParams{{gamma}, {beta}}), diag);
    };

    const double gamma_step = std::numbers::pi / resolution;
    const double beta_step = 0.5 * std::numbers::pi / resolution;
    GridOptimum best{0.0, 0.0, evaluate(0.0, 0.0)};
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const double g = i * gamma_step, b = j * beta_step;
            const double e = evaluate(g, b);
            if (e > best.expectation) best = {g, b, e};
        }
    }

    auto golden = [&](double lo, double hi, auto&& f) {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = f(x1);
            }
        }
        return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
    };

    auto [g, eg] = golden(best.gamma - gamma_step, best.gamma + gamma_step,
                          [&](double x) { return evaluate(x, best.beta); });
    if (eg > best.expectation) best = {g, best.beta, eg};
    auto [b, eb] = golden(best.beta - beta_step, best.beta + beta_step,
                          [&](double x) { return evaluate(best.gamma, x); });
    if (eb > best.expectation) best = {best.gamma, b, eb};
    return best;
}

}  // namespace mcbench
