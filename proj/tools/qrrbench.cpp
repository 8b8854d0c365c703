// qrrbench: instance generation, solving, oracles, campaigns and run-time models.
//
// Exit codes: 0 success, 2 usage, 3 data, 4 numerical.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrr/bench.hpp"
#include "qrr/emulator.hpp"
#include "qrr/errors.hpp"
#include "qrr/lightcone.hpp"
#include "qrr/rng.hpp"

namespace fs = std::filesystem;
using namespace qrr;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

std::ofstream open_out(const std::string& path) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

std::vector<ProblemInstance> load_all(const std::string& manifest) {
    std::vector<ProblemInstance> out;
    for (const auto& row : read_manifest(manifest)) out.push_back(load_instance(row, manifest));
    return out;
}

// "key=value" with value typed as int, double, bool or string in that order.
Json parse_params(const std::vector<std::string>& kvs) {
    Json j = Json::object();
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidArgument("parameter '" + kv + "' is not key=value");
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        std::size_t used = 0;
        try {
            long long i = std::stoll(v, &used);
            if (used == v.size()) {
                j[k] = i;
                continue;
            }
            double d = std::stod(v, &used);
            if (used == v.size()) {
                j[k] = d;
                continue;
            }
        } catch (const std::exception&) {
        }
        if (v == "true" || v == "false")
            j[k] = v == "true";
        else
            j[k] = v;
    }
    return j;
}

std::map<std::string, int> read_best_known(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open best-known table '" + path + "'");
    std::map<std::string, int> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() < 4) throw DataError(path + ": malformed row '" + line + "'");
        out[cells[0]] = std::stoi(cells[3]);
    }
    return out;
}

int cmd_generate(const std::vector<int>& sizes, int count, std::uint64_t seed, const std::string& out_dir) {
    if (sizes.empty() || count < 1) throw InvalidArgument("generate: need --sizes and --count >= 1");
    fs::create_directories(out_dir);
    std::vector<ManifestEntry> rows;
    for (int n : sizes)
        for (int k = 0; k < count; ++k) {
            std::uint64_t s = Rng(seed).split(static_cast<std::uint64_t>(n)).at(static_cast<std::uint64_t>(k));
            ProblemInstance inst = generate_regular(n, s);
            std::string file = inst.id() + ".txt";
            save_edge_list((fs::path(out_dir) / file).string(), inst);
            rows.push_back({inst.id(), n, s, file});
        }
    write_manifest((fs::path(out_dir) / "manifest.jsonl").string(), rows);
    std::cout << "wrote " << rows.size() << " instances to " << out_dir << "\n";
    return kOk;
}

int cmd_estimate_optimum(const std::string& manifest, const OracleOptions& opts, const std::string& out_path) {
    auto insts = load_all(manifest);
    std::vector<BestKnown> rows(insts.size());
    for (std::size_t k = 0; k < insts.size(); ++k) rows[k] = estimate_optimum(insts[k], opts);
    auto out = open_out(out_path);
    out << "instance_id,n,seed,best_cut,flag,runs,hits,peak\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& b = rows[k];
        out << b.id << ',' << b.n << ',' << insts[k].seed() << ',' << b.cut << ',' << b.flag << ',' << b.runs << ',' << b.hits << ','
            << (b.peak ? 1 : 0) << '\n';
    }
    return kOk;
}

int cmd_solve(const std::string& manifest, const std::string& solver, const Json& params, const std::vector<std::uint64_t>& seeds,
              const std::string& best_path, const std::string& out_path, bool with_assignment) {
    if (!is_registered_solver(solver)) throw InvalidArgument("unknown solver '" + solver + "'");
    auto insts = load_all(manifest);
    std::map<std::string, int> best;
    if (!best_path.empty()) best = read_best_known(best_path);
    std::ofstream file;
    if (!out_path.empty()) file = open_out(out_path);
    std::ostream& out = out_path.empty() ? std::cout : file;
    SolverContext ctx;
    for (const auto& inst : insts)
        for (std::uint64_t s : seeds) {
            SolverReport r = ctx.run(solver, inst, params, s);
            if (auto it = best.find(inst.id()); it != best.end()) r.alpha = approximation_ratio(inst, r.z, it->second);
            out << r.to_json(with_assignment).dump() << '\n';
        }
    return kOk;
}

int cmd_runtime_model(RuntimeParams params, int n, int p, const std::string& manifest) {
    params.validate();
    Json out;
    if (!manifest.empty()) {
        Json rows = Json::array();
        for (const auto& inst : load_all(manifest)) {
            auto q = quantum_runtime(inst, p, params);
            rows.push_back({{"instance_id", inst.id()}, {"n", inst.n()}, {"tasks", q.tasks}, {"mean_size", q.mean_size},
                            {"formula_ms", 1000 * q.formula}, {"formula_batches", q.formula_batches}, {"packed_ms", 1000 * q.packed},
                            {"packed_batches", q.packed_batches}});
        }
        out["instances"] = rows;
    }
    if (n > 0) {
        out["circuit_duration_s"] = circuit_duration(n, p, params.n_ex, params);
        out["qcs_duration_s"] = qcs_duration(n, p, params.n_ex, params.qcs);
        out["sa_seconds_per_sweep"] = classical_runtime_estimate("sa", n, 1);
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
}

int cmd_emulate_class(const std::string& manifest, int p, std::int64_t n_ex, std::uint64_t seed, const std::string& out_path,
                      const std::string& cache_path) {
    if (p < 1) throw InvalidArgument("emulate-class: p must be >= 1");
    if (n_ex < 1) throw InvalidArgument("emulate-class: n_ex must be >= 1");
    IsoDatabase db;
    if (!manifest.empty()) {
        for (const auto& inst : load_all(manifest))
            for (auto [i, j] : correlated_pairs(inst, p)) db.insert(subproblem(inst, i, j, p, inst.id()));
    } else if (!cache_path.empty()) {
        db = IsoDatabase::load(cache_path);
    } else {
        throw InvalidArgument("emulate-class: need --manifest or --cache");
    }
    if (!manifest.empty() && !cache_path.empty()) db.save(cache_path);
    const QaoaAngles angles = fixed_angles(p);
    auto out = open_out(out_path);
    out << "class_key,class_hash,size,anchor_a,anchor_b,members,value_exact,value_sampled,n_ex,seed\n";
    for (const auto& c : db.classes()) {
        const auto& t = c.canonical_task;
        StateVector sv = qaoa_state(t.sub_edges, t.size, angles);
        double exact = zz_expectation_exact(sv, t.anchor_a, t.anchor_b);
        std::uint64_t s = hash_combine(seed, c.hash);
        double sampled = estimate_zz(sample_bitstrings(sv, n_ex, s), t.anchor_a, t.anchor_b);
        out << c.key << ',' << c.hash << ',' << t.size << ',' << t.anchor_a << ',' << t.anchor_b << ',' << c.member_count << ','
            << fmt_num(exact) << ',' << fmt_num(sampled) << ',' << n_ex << ',' << s << '\n';
    }
    std::cerr << db.size() << " classes\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QAOA relax-and-round max-cut benchmark harness"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config; [section] names match subcommands");

    std::uint64_t seed = 1;

    auto* gen = app.add_subcommand("generate", "Generate random 3-regular instances and a manifest");
    std::vector<int> gen_sizes;
    int gen_count = 1;
    std::string gen_out = "instances";
    gen->add_option("--sizes", gen_sizes, "Vertex counts")->required()->delimiter(',');
    gen->add_option("--count", gen_count, "Instances per size");
    gen->add_option("--seed", seed, "Master seed");
    gen->add_option("--out", gen_out, "Output directory");

    auto* est = app.add_subcommand("estimate-optimum", "Exact or best-known optimum per instance");
    std::string est_manifest, est_out = "best_known.csv";
    OracleOptions oracle;
    est->add_option("--manifest", est_manifest)->required();
    est->add_option("--restarts", oracle.restarts, "BM and SA runs each (n > 26)");
    est->add_option("--budget-ms", oracle.bm_time_ms, "Wall-clock budget per BM run; 0 uses --bm-rounds");
    est->add_option("--bm-rounds", oracle.bm_rounds);
    est->add_option("--sa-sweeps", oracle.sa_sweeps);
    est->add_option("--seed", seed);
    est->add_option("--out", est_out);

    auto* solve = app.add_subcommand("solve", "Run one solver over a manifest; one JSON report per line");
    std::string solve_manifest, solver, solve_best, solve_out;
    std::vector<std::string> kv;
    std::vector<std::uint64_t> seeds;
    int runs = 1;
    bool no_assignment = false;
    solve->add_option("--manifest", solve_manifest)->required();
    solve->add_option("--solver", solver, "sa pt bm greedy classical_rr gw qgw qrr qrr_star")->required();
    solve->add_option("--param", kv, "key=value solver parameter (repeatable)");
    solve->add_option("--seeds", seeds, "Explicit run seeds")->delimiter(',');
    solve->add_option("--seed", seed, "Master seed when --seeds is absent");
    solve->add_option("--runs", runs, "Runs per instance when --seeds is absent");
    solve->add_option("--best-known", solve_best, "best_known.csv for approximation ratios");
    solve->add_option("--out", solve_out, "JSONL output (default stdout)");
    solve->add_flag("--no-assignment", no_assignment);

    auto* bench = app.add_subcommand("benchmark", "Run a benchmark campaign and write CSV tables");
    CampaignConfig cfg;
    std::string timing = "model";
    bench->add_option("--sizes", cfg.sizes)->delimiter(',');
    bench->add_option("--instances_per_size", cfg.instances_per_size);
    bench->add_option("--seed", cfg.seed);
    bench->add_option("--ps", cfg.ps)->delimiter(',');
    bench->add_option("--backend", cfg.backend);
    bench->add_option("--n_ex", cfg.n_ex);
    bench->add_option("--f", cfg.f);
    bench->add_option("--classical", cfg.classical)->delimiter(',');
    bench->add_option("--approx", cfg.approx)->delimiter(',');
    bench->add_option("--sa_grid", cfg.sa_grid)->delimiter(',');
    bench->add_option("--pt_grid", cfg.pt_grid)->delimiter(',');
    bench->add_option("--bm_grid", cfg.bm_grid)->delimiter(',');
    bench->add_option("--runs_per_point", cfg.runs_per_point);
    bench->add_option("--oracle_restarts", cfg.oracle.restarts);
    bench->add_option("--oracle_bm_rounds", cfg.oracle.bm_rounds);
    bench->add_option("--oracle_sa_sweeps", cfg.oracle.sa_sweeps);
    bench->add_option("--timing", timing, "model (reproducible) or measured");
    bench->add_option("--M", cfg.runtime.M);
    bench->add_option("--runtime_n_ex", cfg.runtime.n_ex);
    bench->add_option("--t_1q", cfg.runtime.t_1q);
    bench->add_option("--t_2q", cfg.runtime.t_2q);
    bench->add_option("--t_meas_reset", cfg.runtime.t_meas_reset);
    bench->add_option("--output_dir", cfg.output_dir);
    bench->add_option("--external_csv", cfg.external_csv);
    bench->add_option("--external_cap_s", cfg.external_cap_s);

    auto* rt = app.add_subcommand("runtime-model", "Quantum and classical run-time model values");
    RuntimeParams rp;
    int rt_n = 0, rt_p = 1;
    std::string rt_manifest;
    rt->add_option("--n", rt_n, "Circuit width for point values");
    rt->add_option("--p", rt_p);
    rt->add_option("--M", rp.M);
    rt->add_option("--n-ex", rp.n_ex);
    rt->add_option("--t1q", rp.t_1q);
    rt->add_option("--t2q", rp.t_2q);
    rt->add_option("--tmr", rp.t_meas_reset);
    rt->add_option("--manifest", rt_manifest, "Per-instance t_Q");

    auto* emu = app.add_subcommand("emulate-class", "Exact and sampled anchor correlation per isomorphism class");
    std::string emu_manifest, emu_cache, emu_out = "classes.csv";
    int emu_p = 1;
    std::int64_t emu_nex = 10000;
    emu->add_option("--manifest", emu_manifest);
    emu->add_option("--cache", emu_cache, "Class database JSONL (written with --manifest, read otherwise)");
    emu->add_option("--p", emu_p);
    emu->add_option("--n-ex", emu_nex);
    emu->add_option("--seed", seed);
    emu->add_option("--out", emu_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gen) return cmd_generate(gen_sizes, gen_count, seed, gen_out);
        if (*est) {
            oracle.seed = seed;
            return cmd_estimate_optimum(est_manifest, oracle, est_out);
        }
        if (*solve) {
            if (seeds.empty()) {
                if (runs < 1) throw InvalidArgument("--runs must be >= 1");
                for (int r = 0; r < runs; ++r) seeds.push_back(Rng(seed).at(static_cast<std::uint64_t>(r)));
            }
            return cmd_solve(solve_manifest, solver, parse_params(kv), seeds, solve_best, solve_out, !no_assignment);
        }
        if (*bench) {
            cfg.timing = parse_timing_mode(timing);
            auto s = run_campaign(cfg);
            for (const auto& f : s.files) std::cout << f << "\n";
            if (s.failed_rows) std::cerr << s.failed_rows << " rows failed; see errors.csv\n";
            return kOk;
        }
        if (*rt) return cmd_runtime_model(rp, rt_n, rt_p, rt_manifest);
        if (*emu) return cmd_emulate_class(emu_manifest, emu_p, emu_nex, seed, emu_out, emu_cache);
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
