#include "qrr/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

namespace {

constexpr double kGreedyModelSecondsPerVar = 5.0e-8;

const std::vector<std::string> kClassical = {"sa", "pt", "bm", "greedy"};

std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

template <class T>
T param_or(const Json& params, const char* key, T fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    return params.at(key).get<T>();
}

std::string join_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out += ',';
        out += cells[k];
    }
    return out + '\n';
}

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

const std::vector<double>& grid_for(const CampaignConfig& c, const std::string& solver) {
    static const std::vector<double> single = {1};
    if (solver == "sa") return c.sa_grid;
    if (solver == "pt") return c.pt_grid;
    if (solver == "bm") return c.bm_grid;
    return single;
}

}  // namespace

const std::vector<std::string>& registered_solvers() {
    static const std::vector<std::string> names = {"sa", "pt", "bm", "greedy", "classical_rr", "gw", "qgw", "qrr", "qrr_star"};
    return names;
}

bool is_registered_solver(const std::string& name) { return contains(registered_solvers(), name); }

std::string fmt_num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

Backend backend_from_params(const Json& params) {
    Backend b;
    b.kind = parse_backend_kind(param_or<std::string>(params, "backend", "exact"));
    if (b.kind == Backend::Kind::Infinite) throw InvalidArgument("backend 'infinite' is a test hook and needs a reference assignment");
    b.n_ex = param_or<std::int64_t>(params, "n_ex", b.n_ex);
    b.seed = param_or<std::uint64_t>(params, "sample_seed", b.seed);
    b.fidelity = param_or<double>(params, "fidelity", b.fidelity);
    b.readout_p01 = param_or<double>(params, "readout_p01", b.readout_p01);
    b.readout_p10 = param_or<double>(params, "readout_p10", b.readout_p10);
    b.mitigate = param_or<bool>(params, "mitigate", b.mitigate);
    b.ibu_iters = param_or<int>(params, "ibu_iters", b.ibu_iters);
    if (b.n_ex < 1) throw InvalidArgument("n_ex must be >= 1");
    if (!(b.fidelity > 0) || b.fidelity > 1) throw InvalidArgument("fidelity must be in (0, 1]");
    return b;
}

CorrelationEngine& SolverContext::engine(int p, const Backend& backend) {
    std::string key = std::to_string(p) + '|' + backend.to_json().dump();
    auto& slot = engines_[key];
    if (!slot) slot = std::make_unique<CorrelationEngine>(p, backend);
    return *slot;
}

SolverReport SolverContext::run(const std::string& solver, const ProblemInstance& inst, const Json& params, std::uint64_t seed) {
    if (!is_registered_solver(solver)) throw InvalidArgument("unknown solver '" + solver + "'");
    const int n = inst.n();
    SolverReport r;
    if (solver == "sa") {
        int sweeps = param_or<int>(params, "sweeps", 1000);
        auto kind = parse_schedule_kind(param_or<std::string>(params, "schedule", "geometric"));
        r = sa_solve(inst, default_schedule(n, sweeps, kind), seed);
    } else if (solver == "pt") {
        r = pt_solve(inst, param_or<int>(params, "sweeps", 500), param_or<int>(params, "replicas", kDefaultReplicas), seed);
    } else if (solver == "bm") {
        BmBudget b;
        b.restarts = param_or<int>(params, "restarts", 0);
        b.time_ms = param_or<double>(params, "time_ms", b.restarts > 0 ? 0.0 : 100.0);
        r = bm_solve(inst, b, seed);
    } else if (solver == "greedy") {
        r = greedy_construct(inst, seed);
    } else if (solver == "classical_rr") {
        r = classical_rr_solve(inst);
    } else if (solver == "gw") {
        r = gw_solve(adjacency_matrix(inst), inst, param_or<int>(params, "iters", kGwIters), param_or<double>(params, "step", 1.0)).report;
    } else {
        int p = param_or<int>(params, "p", 1);
        auto& eng = engine(p, backend_from_params(params));
        if (solver == "qrr") {
            r = qrr_solve(inst, eng, seed);
        } else if (solver == "qrr_star") {
            r = qrr_star_solve(inst, eng, param_or<double>(params, "f", kGreedyF), seed);
        } else {
            Stopwatch sw;
            CorrelationMatrix z = eng.build(inst, inst.id());
            double t_corr = sw.ms();
            r = gw_solve(z.to_sparse(), inst, param_or<int>(params, "iters", kGwIters), param_or<double>(params, "step", 1.0)).report;
            r.solver = "qgw";
            r.params["p"] = p;
            r.params["backend"] = eng.backend().name();
            r.stage_times.insert(r.stage_times.begin(), {"correlations", t_corr});
            r.time_ms += t_corr;
        }
    }
    r.seed = seed;
    r.extra["instance_id"] = inst.id();
    verify_report(inst, r);
    return r;
}

void verify_report(const Graph& g, const SolverReport& r) {
    if (static_cast<int>(r.z.size()) != g.n())
        throw DataError("verification mismatch: " + r.solver + " returned " + std::to_string(r.z.size()) + " spins for n=" + std::to_string(g.n()));
    int c = cut_value(g, r.z);
    if (c != r.cut)
        throw DataError("verification mismatch: " + r.solver + " reported cut " + std::to_string(r.cut) + " but the assignment cuts " +
                        std::to_string(c));
}

BestKnown estimate_optimum(const ProblemInstance& inst, const OracleOptions& opts) {
    BestKnown b;
    b.id = inst.id();
    b.n = inst.n();
    if (inst.n() <= kBruteForceMaxN) {
        auto bf = brute_force_maxcut(inst);
        b.cut = bf.cut;
        b.z = std::move(bf.z);
        b.flag = "exact";
        return b;
    }
    if (opts.restarts < 1)
        throw InvalidArgument("no oracle available: n=" + std::to_string(inst.n()) + " exceeds brute force and restarts is 0");
    if (opts.bm_rounds < 0 || opts.sa_sweeps < 1) throw InvalidArgument("oracle: bm_rounds >= 0 and sa_sweeps >= 1 required");
    Rng base = Rng(opts.seed).split(inst.seed());
    std::vector<int> cuts;
    auto consider = [&](const SolverReport& r) {
        verify_report(inst, r);
        cuts.push_back(r.cut);
        if (r.cut > b.cut || b.z.empty()) b.cut = r.cut, b.z = r.z;
    };
    for (int k = 0; k < opts.restarts; ++k) {
        BmBudget budget;
        if (opts.bm_time_ms > 0) {
            budget.time_ms = opts.bm_time_ms;
        } else {
            budget.restarts = opts.bm_rounds;
            if (budget.restarts == 0) budget.time_ms = 1e-9;
        }
        consider(bm_solve(inst, budget, base.split(0).at(k)));
        consider(sa_solve(inst, default_schedule(inst.n(), opts.sa_sweeps), base.split(1).at(k)));
    }
    b.flag = "best-known";
    b.runs = static_cast<int>(cuts.size());
    b.hits = static_cast<int>(std::count(cuts.begin(), cuts.end(), b.cut));
    b.peak = b.hits >= 2;
    return b;
}

TimingMode parse_timing_mode(const std::string& s) {
    if (s == "measured") return TimingMode::Measured;
    if (s == "model") return TimingMode::Model;
    throw InvalidArgument("unknown timing mode '" + s + "' (expected measured or model)");
}

double charged_time_ms(const SolverReport& r, int n, TimingMode mode) {
    if (mode == TimingMode::Measured) return r.time_ms;
    if (r.solver == "sa") return 1000.0 * classical_runtime_estimate("sa", n, r.params.at("sweeps").get<double>());
    if (r.solver == "pt")
        return 1000.0 * classical_runtime_estimate("sa", n, r.params.at("sweeps").get<double>()) * r.params.at("replicas").get<double>();
    if (r.solver == "bm") return 1000.0 * kBmModelSecondsPerRoundVar * n * r.extra.at("rounds").get<double>();
    if (r.solver == "greedy") return 1000.0 * kGreedyModelSecondsPerVar * n;
    throw InvalidArgument("no timing model for solver '" + r.solver + "'");
}

SolverReport run_classical(const std::string& solver, const ProblemInstance& inst, double control, std::uint64_t seed) {
    if (solver == "sa") return sa_solve(inst, default_schedule(inst.n(), std::max(1, static_cast<int>(std::lround(control)))), seed);
    if (solver == "pt") return pt_solve(inst, std::max(1, static_cast<int>(std::lround(control))), kDefaultReplicas, seed);
    if (solver == "bm") {
        // control counts rounds; one round is the initial descent.
        BmBudget b;
        b.restarts = std::max(0, static_cast<int>(std::lround(control)) - 1);
        if (b.restarts == 0) b.time_ms = 1e-9;
        return bm_solve(inst, b, seed);
    }
    if (solver == "greedy") return greedy_construct(inst, seed);
    throw InvalidArgument("'" + solver + "' is not a time-to-match solver");
}

TStarOpt t_star_opt(const std::string& solver, const ProblemInstance& inst, int target_cut, const std::vector<double>& grid,
                    int runs_per_point, std::uint64_t seed, TimingMode mode) {
    Trial trial = [&](double control, std::uint64_t s) {
        SolverReport r = run_classical(solver, inst, control, s);
        verify_report(inst, r);
        return Run{charged_time_ms(r, inst.n(), mode), r.cut >= target_cut};
    };
    return t_star_opt(trial, grid, runs_per_point, seed);
}

void CampaignConfig::validate() const {
    if (sizes.empty()) throw InvalidArgument("campaign: no sizes given");
    for (int n : sizes)
        if (n < 4 || n % 2) throw InvalidArgument("campaign: size " + std::to_string(n) + " must be even and >= 4");
    if (instances_per_size < 1) throw InvalidArgument("campaign: instances_per_size must be >= 1");
    if (ps.empty()) throw InvalidArgument("campaign: no p values given");
    for (int p : ps)
        if (p < 1 || p > 3) throw InvalidArgument("campaign: p must be in 1..3");
    parse_backend_kind(backend);
    if (backend == "infinite") throw InvalidArgument("campaign: backend 'infinite' is a test hook");
    if (n_ex < 1) throw InvalidArgument("campaign: n_ex must be >= 1");
    if (f < 0) throw InvalidArgument("campaign: f must be >= 0");
    for (const auto& s : classical) {
        if (!is_registered_solver(s)) throw InvalidArgument("campaign: unknown solver '" + s + "'");
        if (!contains(kClassical, s)) throw InvalidArgument("campaign: '" + s + "' has no time-to-match control");
    }
    for (const auto& s : approx)
        if (!is_registered_solver(s)) throw InvalidArgument("campaign: unknown solver '" + s + "'");
    for (const auto* g : {&sa_grid, &pt_grid, &bm_grid}) {
        if (g->empty()) throw InvalidArgument("campaign: empty control grid");
        for (double x : *g)
            if (!(x >= 1)) throw InvalidArgument("campaign: control values must be >= 1");
    }
    if (runs_per_point < 1) throw InvalidArgument("campaign: runs_per_point must be >= 1");
    if (oracle.restarts < 0) throw InvalidArgument("campaign: oracle restarts must be >= 0");
    runtime.validate();
    if (output_dir.empty()) throw InvalidArgument("campaign: output_dir is empty");
    if (!(external_cap_s > 0)) throw InvalidArgument("campaign: external_cap_s must be positive");
}

namespace {

struct InstanceResult {
    ProblemInstance inst;
    BestKnown best;
    bool ok = false;
    std::map<int, SolverReport> qrr, qrr_star;  // by p
    std::map<int, double> t_quantum_ms;         // formula t_Q by p
    std::map<std::string, SolverReport> approx;
    std::map<std::string, TStarOpt> tstar;
    std::map<std::string, std::vector<std::vector<int>>> cuts;  // solver -> grid point -> run cuts
    std::map<std::string, std::vector<std::vector<double>>> times;
    std::vector<std::pair<std::string, std::string>> errors;  // stage, message
};

struct ExternalRow {
    std::string instance_id;
    int n = 0;
    std::string solver;
    double runtime_s = 0.0;
    int cut = 0;
};

std::vector<ExternalRow> read_external(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open external results '" + path + "'");
    std::vector<ExternalRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (lineno == 1 && !cells.empty() && cells[0] == "instance_id") continue;
        if (cells.size() != 5) throw DataError(path + ":" + std::to_string(lineno) + ": expected instance_id,n,solver,runtime_s,cut");
        try {
            rows.push_back({cells[0], std::stoi(cells[1]), cells[2], std::stod(cells[3]), std::stoi(cells[4])});
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return rows;
}

// Time of QRR* charged to the classical side: emulation is replaced by the quantum model.
double qrr_classical_ms(const SolverReport& r, int n, const CampaignConfig& c) {
    if (c.timing == TimingMode::Model) {
        double entries = r.extra.at("nnz").get<double>();
        (void)n;
        return 1000.0 * classical_runtime_estimate("corr_build", static_cast<int>(entries), static_cast<double>(c.runtime.n_ex));
    }
    double t = 0.0;
    for (const auto& [stage, ms] : r.stage_times)
        if (stage != "correlations") t += ms;
    return t;
}

void write_file(const std::filesystem::path& path, const std::string& text, CampaignSummary& summary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
    summary.files.push_back(path.string());
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config) {
    config.validate();
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const int target_p = config.ps.front();

    std::vector<InstanceResult> results;
    for (int n : config.sizes)
        for (int k = 0; k < config.instances_per_size; ++k) {
            InstanceResult r;
            std::uint64_t s = Rng(config.seed).split(static_cast<std::uint64_t>(n)).at(static_cast<std::uint64_t>(k));
            r.inst = generate_regular(n, s);
            results.push_back(std::move(r));
        }

    // Oracles and classical time-to-match are independent per instance.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < results.size(); ++k) {
        auto& r = results[k];
        try {
            OracleOptions o = config.oracle;
            o.seed = config.seed;
            r.best = estimate_optimum(r.inst, o);
            r.ok = true;
        } catch (const std::exception& e) {
            r.errors.emplace_back("oracle", e.what());
        }
    }

    // Quantum solvers share the isomorphism cache, so they run serially.
    SolverContext ctx;
    for (auto& r : results) {
        for (int p : config.ps) {
            Json params = {{"p", p}, {"backend", config.backend}, {"n_ex", config.n_ex}, {"sample_seed", config.seed}, {"f", config.f}};
            std::uint64_t seed = hash_combine(config.seed, r.inst.seed());
            try {
                r.qrr[p] = ctx.run("qrr", r.inst, params, seed);
                r.qrr_star[p] = ctx.run("qrr_star", r.inst, params, seed);
                r.t_quantum_ms[p] = 1000.0 * quantum_runtime(r.inst, p, config.runtime).formula;
            } catch (const std::exception& e) {
                r.errors.emplace_back("qrr_p" + std::to_string(p), e.what());
            }
        }
        for (const auto& s : config.approx) {
            Json params = {{"p", target_p}, {"backend", config.backend}, {"n_ex", config.n_ex}, {"sample_seed", config.seed}};
            try {
                r.approx[s] = ctx.run(s, r.inst, params, hash_combine(config.seed, r.inst.seed()));
            } catch (const std::exception& e) {
                r.errors.emplace_back(s, e.what());
            }
        }
    }

#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < results.size(); ++k) {
        auto& r = results[k];
        if (!r.qrr_star.count(target_p)) continue;
        const int target = r.qrr_star.at(target_p).cut;
        for (const auto& s : config.classical) {
            const auto& grid = grid_for(config, s);
            auto& cuts = r.cuts[s];
            auto& times = r.times[s];
            cuts.assign(grid.size(), {});
            times.assign(grid.size(), {});
            std::size_t calls = 0;
            Trial trial = [&](double control, std::uint64_t seed) {
                // t_star_opt visits grid points in order, runs_per_point runs each.
                std::size_t point = calls++ / config.runs_per_point;
                SolverReport rep = run_classical(s, r.inst, control, seed);
                verify_report(r.inst, rep);
                double t = charged_time_ms(rep, r.inst.n(), config.timing);
                cuts[point].push_back(rep.cut);
                times[point].push_back(t);
                return Run{t, rep.cut >= target};
            };
            try {
                r.tstar[s] = t_star_opt(trial, grid, config.runs_per_point, hash_combine(hash_combine(config.seed, r.inst.seed()), name_hash(s)));
            } catch (const std::exception& e) {
                r.errors.emplace_back("tstar_" + s, e.what());
            }
        }
    }

    std::vector<ExternalRow> external;
    if (!config.external_csv.empty()) external = read_external(config.external_csv);

    CampaignSummary summary;
    summary.instances = results.size();
    fs::path dir(config.output_dir);

    // Best-known optima.
    {
        std::string t = "instance_id,n,seed,best_cut,flag,runs,hits,peak\n";
        for (const auto& r : results) {
            if (!r.ok) continue;
            t += join_row({r.inst.id(), std::to_string(r.inst.n()), std::to_string(r.inst.seed()), std::to_string(r.best.cut), r.best.flag,
                           std::to_string(r.best.runs), std::to_string(r.best.hits), r.best.peak ? "1" : "0"});
        }
        write_file(dir / "best_known.csv", t, summary);
    }

    // (a) approximation ratio per solver and size.
    {
        std::string t = "solver,p,n,instances,mean_alpha,std_alpha,min_alpha,max_alpha,flag\n";
        auto emit = [&](const std::string& name, const std::string& p, int n, auto&& get) {
            std::vector<double> a;
            bool exact = true;
            for (const auto& r : results) {
                if (r.inst.n() != n || !r.ok) continue;
                const SolverReport* rep = get(r);
                if (!rep) continue;
                a.push_back(approximation_ratio(r.inst, rep->z, r.best.cut));
                exact = exact && r.best.flag == "exact";
            }
            if (a.empty()) return;
            t += join_row({name, p, std::to_string(n), std::to_string(a.size()), fmt_num(mean_of(a)), fmt_num(stddev_of(a)),
                           fmt_num(*std::min_element(a.begin(), a.end())), fmt_num(*std::max_element(a.begin(), a.end())),
                           exact ? "exact" : "best-known"});
        };
        for (int n : config.sizes) {
            for (int p : config.ps) {
                emit("qrr", std::to_string(p), n, [p](const InstanceResult& r) { return r.qrr.count(p) ? &r.qrr.at(p) : nullptr; });
                emit("qrr_star", std::to_string(p), n, [p](const InstanceResult& r) { return r.qrr_star.count(p) ? &r.qrr_star.at(p) : nullptr; });
            }
            for (const auto& s : config.approx) {
                bool quantum = s == "qgw";
                emit(s, quantum ? std::to_string(target_p) : "", n,
                     [&s](const InstanceResult& r) { return r.approx.count(s) ? &r.approx.at(s) : nullptr; });
            }
        }
        write_file(dir / "approx_ratio.csv", t, summary);
    }

    // Per-instance grid results, plus external rows.
    struct Tstar {
        double t = 0, control = 0;
        bool lower = false, interior = false;
    };
    std::map<std::pair<int, std::string>, std::vector<Tstar>> by_size;
    {
        std::string t = "instance_id,n,solver,control,runs,matched,mean_t_ms,t_star_ms,is_lower_bound\n";
        for (const auto& r : results)
            for (const auto& s : config.classical) {
                auto it = r.tstar.find(s);
                if (it == r.tstar.end()) continue;
                const auto& opt = it->second;
                for (const auto& pt : opt.points)
                    t += join_row({r.inst.id(), std::to_string(r.inst.n()), s, fmt_num(pt.control), std::to_string(pt.ttm.runs),
                                   std::to_string(pt.ttm.matched), fmt_num(pt.ttm.mean_t_ms), fmt_num(pt.ttm.t_star_ms),
                                   pt.ttm.lower_bound ? "1" : "0"});
                bool interior = opt.best_index > 0 && opt.best_index + 1 < opt.points.size();
                by_size[{r.inst.n(), s}].push_back({opt.t_star_ms, opt.best_control, opt.lower_bound, interior});
            }
        std::map<std::string, const InstanceResult*> by_id;
        for (const auto& r : results) by_id[r.inst.id()] = &r;
        for (const auto& e : external) {
            auto it = by_id.find(e.instance_id);
            if (it == by_id.end() || !it->second->qrr_star.count(target_p)) {
                ++summary.failed_rows;
                continue;
            }
            bool matched = e.cut >= it->second->qrr_star.at(target_p).cut;
            bool lower = !matched || e.runtime_s >= config.external_cap_s;
            double ms = 1000.0 * (matched ? e.runtime_s : std::max(e.runtime_s, config.external_cap_s));
            t += join_row({e.instance_id, std::to_string(e.n), csv_text(e.solver), fmt_num(config.external_cap_s), "1", matched ? "1" : "0",
                           fmt_num(1000.0 * e.runtime_s), fmt_num(ms), lower ? "1" : "0"});
            by_size[{e.n, e.solver}].push_back({ms, config.external_cap_s, lower, false});
        }
        write_file(dir / "results.csv", t, summary);
    }

    // (b) t*_opt versus n.
    {
        std::string t = "n,solver,target,instances,finite,lower_bounds,mean_t_star_opt_ms,median_t_star_opt_ms,mean_best_control,interior_fraction\n";
        for (const auto& [key, rows] : by_size) {
            std::vector<double> ts, controls;
            std::size_t finite = 0, lower = 0, interior = 0;
            for (const auto& x : rows) {
                ts.push_back(x.t);
                controls.push_back(x.control);
                finite += std::isfinite(x.t);
                lower += x.lower;
                interior += x.interior;
            }
            t += join_row({std::to_string(key.first), csv_text(key.second), "qrr_star_p" + std::to_string(target_p), std::to_string(rows.size()),
                           std::to_string(finite), std::to_string(lower), fmt_num(mean_of(ts)), fmt_num(median_of(ts)), fmt_num(mean_of(controls)),
                           fmt_num(static_cast<double>(interior) / rows.size())});
        }
        write_file(dir / "tstar_opt.csv", t, summary);
    }

    // (c) speedup t*_opt / t_QRR*.
    {
        std::string t = "n,solver,p,t_quantum_ms,t_classical_ms,t_qrr_star_ms,t_star_opt_ms,speedup,is_lower_bound\n";
        for (int n : config.sizes)
            for (int p : config.ps) {
                std::vector<double> tq, tc;
                for (const auto& r : results) {
                    if (r.inst.n() != n || !r.qrr_star.count(p) || !r.t_quantum_ms.count(p)) continue;
                    tq.push_back(r.t_quantum_ms.at(p));
                    tc.push_back(qrr_classical_ms(r.qrr_star.at(p), n, config));
                }
                if (tq.empty()) continue;
                double t_qrr = mean_of(tq) + mean_of(tc);
                for (const auto& [key, rows] : by_size) {
                    if (key.first != n) continue;
                    std::vector<double> ts;
                    bool lower = false;
                    for (const auto& x : rows) ts.push_back(x.t), lower = lower || x.lower;
                    double topt = mean_of(ts);
                    t += join_row({std::to_string(n), csv_text(key.second), std::to_string(p), fmt_num(mean_of(tq)), fmt_num(mean_of(tc)),
                                   fmt_num(t_qrr), fmt_num(topt), fmt_num(topt / t_qrr), lower ? "1" : "0"});
                }
            }
        write_file(dir / "speedup.csv", t, summary);
    }

    // (d) run-time versus performance.
    {
        std::string t = "solver,n,control,instances,mean_one_minus_alpha,mean_t_ms,mean_t_ms_per_n,flag\n";
        for (int n : config.sizes) {
            for (const auto& s : config.classical) {
                const auto& grid = grid_for(config, s);
                for (std::size_t g = 0; g < grid.size(); ++g) {
                    std::vector<double> gap, time;
                    bool exact = true;
                    for (const auto& r : results) {
                        if (r.inst.n() != n || !r.ok || !r.cuts.count(s) || r.cuts.at(s).size() <= g) continue;
                        for (std::size_t k = 0; k < r.cuts.at(s)[g].size(); ++k) {
                            gap.push_back(1.0 - static_cast<double>(r.cuts.at(s)[g][k]) / r.best.cut);
                            time.push_back(r.times.at(s)[g][k]);
                        }
                        exact = exact && r.best.flag == "exact";
                    }
                    if (gap.empty()) continue;
                    std::size_t count = 0;
                    for (const auto& r : results) count += r.inst.n() == n && r.cuts.count(s);
                    t += join_row({s, std::to_string(n), fmt_num(grid[g]), std::to_string(count), fmt_num(mean_of(gap)), fmt_num(mean_of(time)),
                                   fmt_num(mean_of(time) / n), exact ? "exact" : "best-known"});
                }
            }
            for (int p : config.ps) {
                std::vector<double> gap, time;
                bool exact = true;
                for (const auto& r : results) {
                    if (r.inst.n() != n || !r.ok || !r.qrr_star.count(p) || !r.t_quantum_ms.count(p)) continue;
                    gap.push_back(1.0 - static_cast<double>(r.qrr_star.at(p).cut) / r.best.cut);
                    time.push_back(r.t_quantum_ms.at(p) + qrr_classical_ms(r.qrr_star.at(p), n, config));
                    exact = exact && r.best.flag == "exact";
                }
                if (gap.empty()) continue;
                t += join_row({"qrr_star", std::to_string(n), std::to_string(p), std::to_string(gap.size()), fmt_num(mean_of(gap)),
                               fmt_num(mean_of(time)), fmt_num(mean_of(time) / n), exact ? "exact" : "best-known"});
            }
        }
        write_file(dir / "perf.csv", t, summary);
    }

    {
        std::string t = "instance_id,n,stage,message\n";
        for (const auto& r : results)
            for (const auto& [stage, msg] : r.errors) {
                t += join_row({r.inst.id(), std::to_string(r.inst.n()), stage, csv_text(msg)});
                ++summary.failed_rows;
            }
        write_file(dir / "errors.csv", t, summary);
    }
    return summary;
}

}  // namespace qrr
