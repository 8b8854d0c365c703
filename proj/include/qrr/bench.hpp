#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qrr/graph.hpp"
#include "qrr/qrr.hpp"
#include "qrr/report.hpp"
#include "qrr/runtime.hpp"
#include "qrr/solvers.hpp"

namespace qrr {

// Names accepted by SolverContext::run.
const std::vector<std::string>& registered_solvers();
bool is_registered_solver(const std::string& name);

// Runs any registered solver by name. Keeps one CorrelationEngine per (p, backend) so
// repeated QRR calls share the isomorphism cache. Not thread-safe.
//
// params: sa {sweeps, schedule}, pt {sweeps, replicas}, bm {restarts | time_ms},
// qrr / qrr_star / qgw {p, backend, n_ex, sample_seed, f}, gw / qgw {iters, step}.
class SolverContext {
public:
    SolverReport run(const std::string& solver, const ProblemInstance& inst, const Json& params, std::uint64_t seed);
    CorrelationEngine& engine(int p, const Backend& backend);

private:
    std::map<std::string, std::unique_ptr<CorrelationEngine>> engines_;
};

Backend backend_from_params(const Json& params);

// Throws DataError unless the reported cut equals the recomputed cut of the assignment.
void verify_report(const Graph& g, const SolverReport& r);

struct BestKnown {
    std::string id;
    int n = 0;
    int cut = 0;
    std::string flag;  // "exact" (brute force) or "best-known"
    int runs = 0;
    int hits = 0;      // heuristic runs that reached the best cut
    bool peak = false;  // best value reached by at least two runs
    Assignment z;
};

struct OracleOptions {
    int restarts = 20;      // runs of each heuristic
    int bm_rounds = 50;     // perturbation rounds per BM run
    double bm_time_ms = 0;  // wall-clock budget per BM run instead of bm_rounds when > 0
    int sa_sweeps = 2000;   // geometric schedule
    std::uint64_t seed = 1;
};

// Brute force when n <= 26; otherwise the best of opts.restarts BM and SA runs.
BestKnown estimate_optimum(const ProblemInstance& inst, const OracleOptions& opts);

enum class TimingMode { Measured, Model };
TimingMode parse_timing_mode(const std::string& s);

// Time charged to a classical run: wall-clock, or the fitted per-sweep model.
double charged_time_ms(const SolverReport& r, int n, TimingMode mode);

constexpr double kBmModelSecondsPerRoundVar = 2.0e-7;

// One run of a classical solver at a control value: sa/pt sweeps, bm rounds (>= 1),
// greedy ignores control.
SolverReport run_classical(const std::string& solver, const ProblemInstance& inst, double control, std::uint64_t seed);

TStarOpt t_star_opt(const std::string& solver, const ProblemInstance& inst, int target_cut, const std::vector<double>& grid,
                    int runs_per_point, std::uint64_t seed, TimingMode mode = TimingMode::Measured);

struct CampaignConfig {
    std::vector<int> sizes;
    int instances_per_size = 10;
    std::uint64_t seed = 1;
    std::vector<int> ps = {1};
    std::string backend = "exact";
    std::int64_t n_ex = 10000;
    double f = kGreedyF;
    std::vector<std::string> classical = {"sa", "bm"};   // time-to-match solvers
    std::vector<std::string> approx = {"classical_rr", "greedy", "gw", "qgw"};  // extra quality rows
    std::vector<double> sa_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    std::vector<double> pt_grid = {1, 2, 4, 8, 16, 32, 64, 128};
    std::vector<double> bm_grid = {1, 2, 4, 8, 16, 32, 64, 128};
    int runs_per_point = 20;
    OracleOptions oracle;
    TimingMode timing = TimingMode::Model;
    RuntimeParams runtime;
    std::string output_dir = "campaign";
    std::string external_csv;        // instance_id,n,solver,runtime_s,cut
    double external_cap_s = 600.0;   // runs at or beyond the cap without a match are lower bounds

    void validate() const;
};

struct CampaignSummary {
    std::size_t instances = 0;
    std::size_t failed_rows = 0;
    std::vector<std::string> files;
};

// Writes approx_ratio.csv, results.csv, tstar_opt.csv, speedup.csv, perf.csv,
// best_known.csv and errors.csv into config.output_dir.
CampaignSummary run_campaign(const CampaignConfig& config);

// CSV number formatting shared by every emitted table.
std::string fmt_num(double x);

}  // namespace qrr
