#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrr/graph.hpp"

namespace qrr {

// Durations in seconds.
struct RuntimeParams {
    double t_1q = 40e-9;
    double t_2q = 122e-9;
    double t_meas_reset = 6e-6;
    int M = 100;
    std::int64_t n_ex = 5000;
    // c0, c_N, c_nex, c_Np, c_Nnex, c_Npnex of the cloud-service fit.
    std::array<double, 6> qcs = {2.77e-2, 1.07e-3, 2.04e-4, 3.83e-4, 8.37e-7, 4.46e-7};

    void validate() const;
};

// n_ex [t_init + p (t_mx + n t_ps) + t_mr], t_init = t_1q, t_mx = 2 t_1q, t_ps = 4 t_1q + 3 t_2q.
double circuit_duration(int n_qubits, int p, std::int64_t n_ex, const RuntimeParams& params);

double qcs_duration(int n, int p, std::int64_t n_ex, const std::array<double, 6>& c);

struct QuantumRuntime {
    double formula = 0.0;  // mean duration x ceil(count x mean size / M)
    double packed = 0.0;   // first-fit-decreasing batches, each as long as its slowest circuit
    std::size_t tasks = 0;
    double mean_size = 0.0;
    double mean_duration = 0.0;
    long formula_batches = 0;
    long packed_batches = 0;
};

QuantumRuntime quantum_runtime(const Graph& g, int p, const RuntimeParams& params);
QuantumRuntime quantum_runtime_from_sizes(const std::vector<int>& sizes, int p, const RuntimeParams& params);

constexpr double kSaSecondsPerSweepVar = 1.79e-8;
constexpr double kCorrSecondsPerEntryShot = 3.859e-10;

// Planning model in seconds. solver: "sa" (control = sweeps), "pt" (control = sweeps, 10
// replicas), "corr_build" (n = entries, control = shots), "bm" (control = budget in ms).
double classical_runtime_estimate(const std::string& solver, int n, double control);

struct Run {
    double t_ms = 0.0;
    bool matched = false;
};

struct TimeToMatch {
    std::size_t runs = 0, matched = 0;
    double mean_t_ms = 0.0;
    double p_hat = 0.0;
    double t_star_ms = 0.0;  // +inf when nothing matched
    bool lower_bound = false;
};

TimeToMatch time_to_match(const std::vector<Run>& runs);

struct GridPoint {
    double control = 0.0;
    TimeToMatch ttm;
};

struct TStarOpt {
    double best_control = 0.0;
    double t_star_ms = 0.0;
    bool lower_bound = false;
    std::size_t best_index = 0;
    std::vector<GridPoint> points;
};

// One solver run at a control setting with the given seed.
using Trial = std::function<Run(double control, std::uint64_t seed)>;

// Evaluates every grid point with runs_per_point seeded runs and returns the minimizer of
// t* (first on ties). Run r at grid index k uses seed split(seed, k, r).
TStarOpt t_star_opt(const Trial& trial, const std::vector<double>& grid, int runs_per_point, std::uint64_t seed);

std::uint64_t trial_seed(std::uint64_t seed, std::size_t grid_index, std::size_t run);

}  // namespace qrr
