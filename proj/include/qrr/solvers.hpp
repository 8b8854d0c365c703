#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "qrr/graph.hpp"
#include "qrr/report.hpp"

namespace qrr {

// Temperatures are in energy units of the Ising objective sum z_i z_j (lower is better).
struct Schedule {
    enum class Kind { Linear, Geometric };
    Kind kind = Kind::Geometric;
    int sweeps = 100;
    double t_hot = 0.0, t_cold = 0.0;

    void validate() const;
    // Temperature of sweep l = 1..sweeps, interpolated in inverse temperature.
    double temperature(int l) const;
};

// T_hot = 6 / ln 2 (a 6-unit uphill move accepted half the time), T_cold = 2 / ln(100 n).
std::pair<double, double> default_temperatures(int n);
Schedule default_schedule(int n, int sweeps, Schedule::Kind kind = Schedule::Kind::Geometric);
Schedule::Kind parse_schedule_kind(const std::string& s);

// min{1, exp(-(E' - E)/T)}.
double metropolis_probability(double delta_energy, double temperature);
// min{1, exp[(E_l - E_{l+1}) (1/T_l - 1/T_{l+1})]}.
double exchange_probability(double e_l, double e_next, double t_l, double t_next);

SolverReport sa_solve(const Graph& g, const Schedule& schedule, std::uint64_t seed);

constexpr int kDefaultReplicas = 10;

SolverReport pt_solve(const Graph& g, int sweeps, int replicas, std::uint64_t seed);

SolverReport greedy_construct(const Graph& g, std::uint64_t seed);

struct BmBudget {
    double time_ms = 0.0;  // wall-clock budget; ignored when restarts > 0
    int restarts = 0;      // perturb-and-repeat rounds after the first pass
};

constexpr double kBmPerturbation = 1.0;
constexpr int kBmHyperplanes = 32;

SolverReport bm_solve(const Graph& g, const BmBudget& budget, std::uint64_t seed);

}  // namespace qrr
