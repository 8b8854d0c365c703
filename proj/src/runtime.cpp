#include "qrr/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrr/errors.hpp"
#include "qrr/lightcone.hpp"
#include "qrr/rng.hpp"

namespace qrr {

void RuntimeParams::validate() const {
    if (!(t_1q > 0) || !(t_2q > 0) || !(t_meas_reset > 0)) throw InvalidArgument("runtime params: durations must be positive");
    if (M < 7) throw InvalidArgument("runtime params: machine needs at least 7 qubits");
    if (n_ex < 1) throw InvalidArgument("runtime params: n_ex must be >= 1");
}

double circuit_duration(int n_qubits, int p, std::int64_t n_ex, const RuntimeParams& params) {
    if (n_qubits < 1 || p < 1 || n_ex < 1) throw InvalidArgument("circuit_duration: n, p and n_ex must be positive");
    const double t_init = params.t_1q;
    const double t_mx = 2 * params.t_1q;
    const double t_ps = 4 * params.t_1q + 3 * params.t_2q;
    return static_cast<double>(n_ex) * (t_init + p * (t_mx + n_qubits * t_ps) + params.t_meas_reset);
}

double qcs_duration(int n, int p, std::int64_t n_ex, const std::array<double, 6>& c) {
    if (n < 0 || p < 0 || n_ex < 0) throw InvalidArgument("qcs_duration: inputs must be non-negative");
    const double N = n, P = p, X = static_cast<double>(n_ex);
    return c[0] + c[1] * N + c[2] * X + c[3] * N * P + c[4] * N * X + c[5] * N * P * X;
}

QuantumRuntime quantum_runtime_from_sizes(const std::vector<int>& sizes, int p, const RuntimeParams& params) {
    params.validate();
    QuantumRuntime r;
    r.tasks = sizes.size();
    if (sizes.empty()) return r;
    for (int s : sizes)
        if (s > params.M)
            throw CapacityError("subcircuit of " + std::to_string(s) + " qubits does not fit on a " + std::to_string(params.M) + "-qubit machine");
    double sum_size = 0.0, sum_dur = 0.0;
    for (int s : sizes) {
        sum_size += s;
        sum_dur += circuit_duration(s, p, params.n_ex, params);
    }
    r.mean_size = sum_size / sizes.size();
    r.mean_duration = sum_dur / sizes.size();
    r.formula_batches = static_cast<long>(std::ceil(static_cast<double>(sizes.size()) * r.mean_size / params.M - 1e-9));
    r.formula = r.mean_duration * r.formula_batches;

    std::vector<int> sorted = sizes;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<int> free;     // remaining capacity per batch
    std::vector<int> largest;  // largest circuit per batch (sets its duration)
    for (int s : sorted) {
        auto it = std::find_if(free.begin(), free.end(), [s](int f) { return f >= s; });
        if (it == free.end()) {
            free.push_back(params.M - s);
            largest.push_back(s);
        } else {
            *it -= s;
        }
    }
    r.packed_batches = static_cast<long>(free.size());
    for (int s : largest) r.packed += circuit_duration(s, p, params.n_ex, params);
    return r;
}

QuantumRuntime quantum_runtime(const Graph& g, int p, const RuntimeParams& params) {
    std::vector<int> sizes;
    for (auto [i, j] : correlated_pairs(g, p)) sizes.push_back(subproblem(g, i, j, p).size);
    return quantum_runtime_from_sizes(sizes, p, params);
}

double classical_runtime_estimate(const std::string& solver, int n, double control) {
    if (n < 0 || control < 0) throw InvalidArgument("classical_runtime_estimate: inputs must be non-negative");
    if (solver == "sa") return kSaSecondsPerSweepVar * n * control;
    if (solver == "pt") return kSaSecondsPerSweepVar * n * control * 10;
    if (solver == "corr_build") return kCorrSecondsPerEntryShot * n * control;
    if (solver == "bm") return control / 1000.0;
    throw InvalidArgument("classical_runtime_estimate: no model for solver '" + solver + "'");
}

TimeToMatch time_to_match(const std::vector<Run>& runs) {
    if (runs.empty()) throw InvalidArgument("time_to_match: no runs");
    TimeToMatch t;
    t.runs = runs.size();
    double sum = 0.0;
    for (const auto& r : runs) {
        sum += r.t_ms;
        t.matched += r.matched;
    }
    t.mean_t_ms = sum / runs.size();
    t.p_hat = static_cast<double>(t.matched) / runs.size();
    if (t.matched == 0) {
        t.t_star_ms = std::numeric_limits<double>::infinity();
        t.lower_bound = true;
    } else {
        t.t_star_ms = t.mean_t_ms / t.p_hat;
    }
    return t;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t grid_index, std::size_t run) {
    return Rng(seed).split(grid_index).at(run);
}

TStarOpt t_star_opt(const Trial& trial, const std::vector<double>& grid, int runs_per_point, std::uint64_t seed) {
    if (grid.empty()) throw InvalidArgument("t_star_opt: empty control grid");
    if (runs_per_point < 1) throw InvalidArgument("t_star_opt: runs_per_point must be >= 1");
    TStarOpt out;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<Run> runs;
        for (int r = 0; r < runs_per_point; ++r) runs.push_back(trial(grid[k], trial_seed(seed, k, r)));
        out.points.push_back({grid[k], time_to_match(runs)});
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < out.points.size(); ++k)
        if (out.points[k].ttm.t_star_ms < out.points[best].ttm.t_star_ms) best = k;
    out.best_index = best;
    out.best_control = out.points[best].control;
    out.t_star_ms = out.points[best].ttm.t_star_ms;
    out.lower_bound = out.points[best].ttm.lower_bound;
    return out;
}

}  // namespace qrr
