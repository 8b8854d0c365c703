#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qrr/graph.hpp"

namespace qrr {

using cplx = std::complex<double>;

struct QaoaAngles {
    int p = 0;
    std::vector<double> gammas, betas;
};

// Tabulated fixed angles for unit-weight 3-regular graphs, p in {1, 2, 3}.
QaoaAngles fixed_angles(int p);

constexpr int kMaxQubits = 24;

// Qubit q is bit q of the basis index.
struct StateVector {
    int m = 0;
    std::vector<cplx> amp;
};

// |+>^m, then per layer the phase separator exp(-i gamma C_cut) (equal, up to a global
// phase, to the Ising form exp(+i gamma/2 sum Z_a Z_b)) and the mixer exp(-i beta X) on
// every qubit. Parallel kernel: a precomputed cut table and a pairwise mixer sweep.
StateVector qaoa_state(const std::vector<Edge>& edges, int m, const QaoaAngles& angles);

// Reference implementation applying one two-qubit phase gate per edge. Single-threaded;
// kept as the oracle for the parallel kernel.
StateVector qaoa_state_serial(const std::vector<Edge>& edges, int m, const QaoaAngles& angles);

double norm_squared(const StateVector& s);
double zz_expectation_exact(const StateVector& s, int a, int b);
double zz_expectation_exact_serial(const StateVector& s, int a, int b);
double cost_expectation(const std::vector<Edge>& edges, const StateVector& s);

// Bitstrings as masks (bit q = measured value of qubit q).
using Samples = std::vector<std::uint64_t>;

Samples sample_bitstrings(const StateVector& s, std::int64_t n_ex, std::uint64_t seed);
double estimate_zz(const Samples& samples, int a, int b);

// General p=1 product formula, any unit-weight graph.
double zz_analytic_p1(const Graph& g, int i, int j, double gamma, double beta);
// Closed form in W_ij and N_ij = (W^2)_ij, valid on 3-regular hosts.
double zz_analytic_p1_cubic(const Graph& g, int i, int j, double gamma, double beta);

double apply_depolarizing(double corr, double fidelity);

// R[q][t][o] = P(observe o | true t) for qubit q.
struct ConfusionModel {
    std::vector<std::array<std::array<double, 2>, 2>> R;

    static ConfusionModel identity(int m);
    static ConfusionModel symmetric(int m, double flip);
    // p01 = P(read 1 | 0), p10 = P(read 0 | 1).
    static ConfusionModel asymmetric(int m, double p01, double p10);
    void validate() const;
};

Samples apply_readout_noise(const Samples& samples, const ConfusionModel& model, std::uint64_t seed);

// Four-outcome marginal of qubits (a, b): index = bit_a + 2 bit_b.
using Marginal = std::array<double, 4>;

Marginal marginal(const Samples& samples, int a, int b);
Marginal forward_confusion(const Marginal& truth, const ConfusionModel& model, int a, int b);
// Iterative Bayesian unfolding against the tensor-product confusion of qubits a and b.
Marginal ibu_mitigate(const Marginal& observed, const ConfusionModel& model, int a, int b, int iters,
                      std::optional<Marginal> prior = std::nullopt);
double zz_from_marginal(const Marginal& m);

}  // namespace qrr
