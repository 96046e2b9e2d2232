#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mcbench/graph.hpp"
#include "mcbench/rng.hpp"

namespace mcbench {

constexpr int kDefaultMaxQubits = 24;

struct QaoaParams {
    std::vector<double> gammas;
    std::vector<double> betas;

    int depth() const { return static_cast<int>(gammas.size()); }

    /// Throws ContractError unless depth >= 1 and both angle lists have equal length.
    void validate() const;
};

/// 2^n amplitudes; bit i of a basis index is qubit (vertex) i, set meaning
/// the vertex sits on the -1 side.
class Statevector {
public:
    using Amplitude = std::complex<double>;

    Statevector(int n, std::vector<Amplitude> amplitudes);

    int n() const { return n_; }
    std::size_t dimension() const { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> amplitudes() { return amps_; }
    double norm_squared() const;

private:
    int n_;
    std::vector<Amplitude> amps_;
};

/// Uniform superposition, every amplitude 2^(-n/2).
Statevector initial_state(int n, int max_qubits = kDefaultMaxQubits);

/// Cut value C(z) of every basis state z, built incrementally in O(2^n * avg degree).
std::vector<double> cost_diagonal(const WeightedGraph& graph);

/// a_z <- exp(-i gamma C(z)) a_z.
void apply_cost_phase(Statevector& state, std::span<const double> diagonal, double gamma);
void apply_cost_phase(Statevector& state, const WeightedGraph& graph, double gamma);

/// exp(-i beta X) on every qubit.
void apply_mixer(Statevector& state, double beta);

/// prod_k exp(-i beta_k H_B) exp(-i gamma_k H_C) applied to the uniform state.
Statevector build_state(const WeightedGraph& graph, const QaoaParams& params, int max_qubits = kDefaultMaxQubits);
Statevector build_state(std::span<const double> diagonal, int n, const QaoaParams& params,
                        int max_qubits = kDefaultMaxQubits);

double expectation(const Statevector& state, std::span<const double> diagonal);
double expectation(const Statevector& state, const WeightedGraph& graph);

struct Shot {
    std::uint64_t bitstring = 0;
    double cut = 0.0;
};

enum class SamplingMethod { InverseCdf, Alias };

std::string_view sampling_method_name(SamplingMethod method);

/// Alias tables pay off once the shot count exceeds 2^n / 16.
SamplingMethod choose_sampling_method(std::uint64_t shots, int n);

/// Draws computational-basis measurements from |a_z|^2.
class ShotSampler {
public:
    ShotSampler(const Statevector& state, std::vector<double> diagonal, SamplingMethod method);

    SamplingMethod method() const { return method_; }
    Shot draw(Rng& rng) const;

private:
    SamplingMethod method_;
    std::vector<double> diagonal_;
    std::vector<double> cumulative_;
    std::vector<double> alias_prob_;
    std::vector<std::uint32_t> alias_index_;
};

std::vector<Shot> sample_shots(const Statevector& state, const WeightedGraph& graph, std::uint64_t shots,
                               std::uint64_t seed);

struct GridOptimum {
    double gamma = 0.0;
    double beta = 0.0;
    double expectation = 0.0;
};

/// Depth-1 angle search over gamma in [0, pi), beta in [0, pi/2) on a
/// resolution x resolution grid, followed by one golden-section pass per angle.
GridOptimum grid_optimize_p1(const WeightedGraph& graph, int resolution);

}  // namespace mcbench
