#include "qrr/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

void Schedule::validate() const {
    if (sweeps < 1) throw InvalidArgument("schedule: sweeps must be >= 1");
    if (!(t_cold > 0) || !(t_hot > t_cold)) throw InvalidArgument("schedule: need T_hot > T_cold > 0");
}

double Schedule::temperature(int l) const {
    const double bh = 1.0 / t_hot, bc = 1.0 / t_cold, x = static_cast<double>(l) / sweeps;
    if (kind == Kind::Linear) return 1.0 / (bh + x * (bc - bh));
    return 1.0 / std::exp(std::log(bh) + x * (std::log(bc) - std::log(bh)));
}

std::pair<double, double> default_temperatures(int n) {
    if (n < 4) throw InvalidArgument("default_temperatures: n must be >= 4");
    return {6.0 / std::numbers::ln2, 2.0 / std::log(100.0 * n)};
}

Schedule default_schedule(int n, int sweeps, Schedule::Kind kind) {
    auto [th, tc] = default_temperatures(n);
    Schedule s;
    s.kind = kind;
    s.sweeps = sweeps;
    s.t_hot = th;
    s.t_cold = tc;
    return s;
}

Schedule::Kind parse_schedule_kind(const std::string& s) {
    if (s == "linear") return Schedule::Kind::Linear;
    if (s == "geometric") return Schedule::Kind::Geometric;
    throw InvalidArgument("unknown schedule '" + s + "' (expected linear or geometric)");
}

double metropolis_probability(double delta_energy, double temperature) {
    if (delta_energy <= 0) return 1.0;
    return std::exp(-delta_energy / temperature);
}

double exchange_probability(double e_l, double e_next, double t_l, double t_next) {
    double x = (e_l - e_next) * (1.0 / t_l - 1.0 / t_next);
    return x >= 0 ? 1.0 : std::exp(x);
}

namespace {

// Spin configuration with cached local fields h_i = sum_j z_j and energy sum z_i z_j.
struct Chain {
    Assignment z;
    std::vector<int> h;
    long energy = 0;

    void init(const Graph& g, Rng& rng) {
        z.resize(g.n());
        for (auto& x : z) x = rng.coin() ? 1 : -1;
        recompute(g);
    }
    void recompute(const Graph& g) {
        h.assign(g.n(), 0);
        for (auto [u, v] : g.edges()) h[u] += z[v], h[v] += z[u];
        energy = ising_value(g, z);
    }
    void flip(const Graph& g, int i) {
        energy -= 2L * z[i] * h[i];
        z[i] = -z[i];
        for (int j : g.neighbors(i)) h[j] += 2 * z[i];
    }
};

int max_degree(const Graph& g) {
    int d = 0;
    for (int v = 0; v < g.n(); ++v) d = std::max(d, g.degree(v));
    return d;
}

// One sweep of n uniformly drawn single-spin proposals at temperature t. Tracks the best
// energy seen; copies the configuration on each new record.
struct Sweeper {
    const Graph& g;
    std::vector<double> accept;  // accept[k] = exp(-2k / T) for an uphill move of 2k
    long proposals = 0;

    void sweep(Chain& c, double t, Rng& rng, long& best_e, Assignment& best_z) {
        const int n = g.n();
        accept.resize(max_degree(g) + 1);
        for (std::size_t k = 0; k < accept.size(); ++k) accept[k] = std::exp(-2.0 * k / t);
        for (int s = 0; s < n; ++s) {
            int i = static_cast<int>(rng.below(n));
            int d = -c.z[i] * c.h[i];  // energy change is 2d
            if (d <= 0 || rng.uniform() < accept[d]) {
                c.flip(g, i);
                if (c.energy < best_e) {
                    best_e = c.energy;
                    best_z = c.z;
                }
            }
            // Drift guard; energies are integers so this only catches bookkeeping bugs.
            if (++proposals % 1000000 == 0) {
                long e = c.energy;
                c.recompute(g);
                if (e != c.energy) throw NumericalError("local field bookkeeping drifted");
            }
        }
    }
};

}  // namespace

SolverReport sa_solve(const Graph& g, const Schedule& schedule, std::uint64_t seed) {
    schedule.validate();
    SolverReport rep;
    rep.solver = "sa";
    rep.seed = seed;
    rep.params["sweeps"] = schedule.sweeps;
    rep.params["schedule"] = schedule.kind == Schedule::Kind::Linear ? "linear" : "geometric";
    rep.params["t_hot"] = schedule.t_hot;
    rep.params["t_cold"] = schedule.t_cold;

    Stopwatch sw;
    Rng rng(seed);
    Chain c;
    c.init(g, rng);
    long best_e = c.energy;
    Assignment best_z = c.z;
    Sweeper sweeper{g, {}};
    // Best-seen cut, recorded at the sweeps where it improves.
    Json trace = Json::array();
    const long m = static_cast<long>(g.num_edges());
    trace.push_back({0, (m - best_e) / 2});
    for (int l = 1; l <= schedule.sweeps; ++l) {
        long before = best_e;
        sweeper.sweep(c, schedule.temperature(l), rng, best_e, best_z);
        if (best_e < before) trace.push_back({l, (m - best_e) / 2});
    }
    rep.time_ms = sw.ms();
    rep.extra["best_trace"] = std::move(trace);
    rep.z = std::move(best_z);
    rep.cut = cut_value(g, rep.z);
    return rep;
}

SolverReport pt_solve(const Graph& g, int sweeps, int replicas, std::uint64_t seed) {
    if (sweeps < 1) throw InvalidArgument("pt_solve: sweeps must be >= 1");
    if (replicas < 1) throw InvalidArgument("pt_solve: need at least one replica");
    auto [th, tc] = default_temperatures(std::max(g.n(), 4));
    SolverReport rep;
    rep.solver = "pt";
    rep.seed = seed;
    rep.params["sweeps"] = sweeps;
    rep.params["replicas"] = replicas;

    Stopwatch sw;
    // Replica 0 is the hottest. A single replica runs at T_cold.
    std::vector<double> temps(replicas);
    for (int r = 0; r < replicas; ++r)
        temps[r] = replicas == 1 ? tc : th * std::pow(tc / th, static_cast<double>(r) / (replicas - 1));
    Rng rng(seed);
    std::vector<Chain> chains(replicas);
    for (auto& c : chains) c.init(g, rng);
    long best_e = chains[0].energy;
    Assignment best_z = chains[0].z;
    for (const auto& c : chains)
        if (c.energy < best_e) best_e = c.energy, best_z = c.z;
    Sweeper sweeper{g, {}};
    for (int k = 0; k < sweeps; ++k) {
        for (int r = 0; r < replicas; ++r) sweeper.sweep(chains[r], temps[r], rng, best_e, best_z);
        for (int r = 0; r + 1 < replicas; ++r) {
            double pr = exchange_probability(chains[r].energy, chains[r + 1].energy, temps[r], temps[r + 1]);
            if (pr >= 1.0 || rng.uniform() < pr) std::swap(chains[r], chains[r + 1]);
        }
    }
    rep.time_ms = sw.ms();
    rep.z = std::move(best_z);
    rep.cut = cut_value(g, rep.z);
    return rep;
}

SolverReport greedy_construct(const Graph& g, std::uint64_t seed) {
    SolverReport rep;
    rep.solver = "greedy";
    rep.seed = seed;
    Stopwatch sw;
    Rng rng(seed);
    const int n = g.n();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    Assignment z(n, 0);
    for (int i : order) {
        int s = 0;
        for (int j : g.neighbors(i)) s += z[j];
        // Minimize z_i s; unset neighbours contribute 0.
        z[i] = s > 0 ? -1 : s < 0 ? 1 : (rng.coin() ? 1 : -1);
    }
    rep.time_ms = sw.ms();
    rep.z = std::move(z);
    rep.cut = cut_value(g, rep.z);
    return rep;
}

namespace {

void coordinate_descent(const Graph& g, std::vector<double>& theta) {
    for (int pass = 0; pass < 100; ++pass) {
        double moved = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            double x = 0.0, y = 0.0;
            for (int j : g.neighbors(i)) x += std::cos(theta[j]), y += std::sin(theta[j]);
            if (x * x + y * y < 1e-24) continue;
            // Minimizer of sum_j cos(theta_i - theta_j): point opposite the neighbours' resultant.
            double t = std::atan2(y, x) + std::numbers::pi;
            double d = std::abs(std::remainder(t - theta[i], 2 * std::numbers::pi));
            moved = std::max(moved, d);
            theta[i] = t;
        }
        if (moved < 1e-6) break;
    }
}

void local_search(const Graph& g, Assignment& z) {
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < g.n(); ++i)
            if (flip_gain(g, z, i) > 0) z[i] = -z[i], improved = true;
    }
}

}  // namespace

SolverReport bm_solve(const Graph& g, const BmBudget& budget, std::uint64_t seed) {
    if (budget.restarts < 0 || budget.time_ms < 0 || (budget.restarts == 0 && !(budget.time_ms > 0)))
        throw InvalidArgument("bm_solve: budget must be positive");
    SolverReport rep;
    rep.solver = "bm";
    rep.seed = seed;
    if (budget.restarts > 0)
        rep.params["restarts"] = budget.restarts;
    else
        rep.params["time_ms"] = budget.time_ms;

    Stopwatch sw;
    Rng rng(seed);
    const int n = g.n();
    std::vector<double> theta(n), best_theta;
    for (auto& t : theta) t = rng.uniform(0.0, 2 * std::numbers::pi);
    Assignment z(n), best_z;
    int best_cut = -1;
    long rounds = 0;
    for (;;) {
        coordinate_descent(g, theta);
        int round_best = -1;
        Assignment round_z;
        for (int h = 0; h < kBmHyperplanes; ++h) {
            double phi = rng.uniform(0.0, 2 * std::numbers::pi);
            for (int i = 0; i < n; ++i) z[i] = std::cos(theta[i] - phi) >= 0 ? 1 : -1;
            int c = cut_value(g, z);
            if (c > round_best) round_best = c, round_z = z;
        }
        local_search(g, round_z);
        int c = cut_value(g, round_z);
        if (c > best_cut) {
            best_cut = c;
            best_z = round_z;
            best_theta = theta;
        }
        ++rounds;
        bool done = budget.restarts > 0 ? rounds > budget.restarts : sw.ms() >= budget.time_ms;
        if (done) break;
        theta = best_theta;
        for (auto& t : theta) t += rng.uniform(-kBmPerturbation, kBmPerturbation);
    }
    rep.time_ms = sw.ms();
    rep.z = std::move(best_z);
    rep.cut = best_cut;
    rep.extra["rounds"] = rounds;
    return rep;
}

}  // namespace qrr
