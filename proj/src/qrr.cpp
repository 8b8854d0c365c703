#include "qrr/qrr.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

CorrelationMatrix::CorrelationMatrix(int n, std::vector<Entry> entries) : n_(n), entries_(std::move(entries)) {
    for (auto& e : entries_) {
        if (e.i == e.j) throw InvalidArgument("correlation matrix: diagonal entries are implicitly zero");
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) throw InvalidArgument("correlation matrix: index out of range");
        if (e.i > e.j) std::swap(e.i, e.j);
        if (!(std::abs(e.v) <= 1.0 + 1e-12)) throw InvalidArgument("correlation matrix: |entry| > 1");
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < entries_.size(); ++k)
        if (entries_[k].i == entries_[k - 1].i && entries_[k].j == entries_[k - 1].j)
            throw InvalidArgument("correlation matrix: duplicate entry");
}

double CorrelationMatrix::get(int i, int j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{i, j},
                               [](const Entry& e, const std::pair<int, int>& k) { return e.i != k.first ? e.i < k.first : e.j < k.second; });
    if (it != entries_.end() && it->i == i && it->j == j) return it->v;
    return 0.0;
}

double CorrelationMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.v));
    return m;
}

CorrelationMatrix CorrelationMatrix::scaled(double f) const {
    CorrelationMatrix c = *this;
    for (auto& e : c.entries_) e.v *= f;
    return c;
}

SparseMatrix CorrelationMatrix::to_sparse() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * entries_.size());
    for (const auto& e : entries_) {
        t.emplace_back(e.i, e.j, e.v);
        t.emplace_back(e.j, e.i, e.v);
    }
    SparseMatrix s(n_, n_);
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

Eigen::MatrixXd CorrelationMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto& e : entries_) d(e.i, e.j) = d(e.j, e.i) = e.v;
    return d;
}

CorrelationMatrix apply_depolarizing(const CorrelationMatrix& z, double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw InvalidArgument("apply_depolarizing: fidelity must lie in [0, 1]");
    return z.scaled(fidelity);
}

std::string Backend::name() const {
    switch (kind) {
        case Kind::Exact: return "exact";
        case Kind::AnalyticP1: return "analytic_p1";
        case Kind::Sampled: return "sampled";
        case Kind::Infinite: return "infinite";
    }
    return "?";
}

Json Backend::to_json() const {
    Json j;
    j["backend"] = name();
    if (kind == Kind::Sampled) {
        j["n_ex"] = n_ex;
        j["sample_seed"] = seed;
        if (readout_p01 > 0 || readout_p10 > 0) {
            j["readout_p01"] = readout_p01;
            j["readout_p10"] = readout_p10;
        }
        if (mitigate) j["ibu_iters"] = ibu_iters;
    }
    if (fidelity != 1.0) j["fidelity"] = fidelity;
    return j;
}

Backend::Kind parse_backend_kind(const std::string& s) {
    if (s == "exact") return Backend::Kind::Exact;
    if (s == "analytic_p1" || s == "analytic") return Backend::Kind::AnalyticP1;
    if (s == "sampled") return Backend::Kind::Sampled;
    throw InvalidArgument("unknown backend '" + s + "' (expected exact, analytic_p1 or sampled)");
}

CorrelationEngine::CorrelationEngine(int p, Backend backend)
    : CorrelationEngine(p, backend, backend.kind == Backend::Kind::Infinite ? QaoaAngles{} : fixed_angles(p)) {}

CorrelationEngine::CorrelationEngine(int p, Backend backend, QaoaAngles angles)
    : p_(p), backend_(std::move(backend)), angles_(std::move(angles)) {
    if (backend_.kind == Backend::Kind::Infinite) return;
    if (p < 1) throw InvalidArgument("CorrelationEngine: p must be >= 1");
    if (angles_.p != p) throw InvalidArgument("CorrelationEngine: angle depth does not match p");
    if (backend_.kind == Backend::Kind::AnalyticP1 && p != 1) throw InvalidArgument("analytic_p1 backend requires p = 1");
    if (!(backend_.fidelity >= 0.0 && backend_.fidelity <= 1.0)) throw InvalidArgument("fidelity must lie in [0, 1]");
    if (backend_.kind == Backend::Kind::Sampled && backend_.n_ex < 1) throw InvalidArgument("sampled backend needs n_ex >= 1");
}

namespace {

std::uint64_t key_digest(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

}  // namespace

double CorrelationEngine::evaluate(const IsoClass& c) const {
    const auto& t = c.canonical_task;
    if (backend_.kind == Backend::Kind::AnalyticP1)
        return zz_analytic_p1(t.graph(), t.anchor_a, t.anchor_b, angles_.gammas[0], angles_.betas[0]);
    StateVector s = qaoa_state(t.sub_edges, t.size, angles_);
    if (backend_.kind == Backend::Kind::Exact) return zz_expectation_exact(s, t.anchor_a, t.anchor_b);

    const std::uint64_t base = hash_combine(backend_.seed, key_digest(c.key));
    Samples smp = sample_bitstrings(s, backend_.n_ex, base);
    const bool noisy = backend_.readout_p01 > 0 || backend_.readout_p10 > 0;
    if (!noisy) return estimate_zz(smp, t.anchor_a, t.anchor_b);
    auto model = ConfusionModel::asymmetric(t.size, backend_.readout_p01, backend_.readout_p10);
    smp = apply_readout_noise(smp, model, hash_combine(base, 1));
    if (!backend_.mitigate) return estimate_zz(smp, t.anchor_a, t.anchor_b);
    auto m = ibu_mitigate(marginal(smp, t.anchor_a, t.anchor_b), model, t.anchor_a, t.anchor_b, backend_.ibu_iters);
    return zz_from_marginal(m);
}

CorrelationMatrix CorrelationEngine::build(const Graph& g, const std::string& instance_id) {
    const int n = g.n();
    std::vector<CorrelationMatrix::Entry> entries;
    if (backend_.kind == Backend::Kind::Infinite) {
        // Z = I - z z^T: off-diagonal -z_i z_j.
        if (static_cast<int>(backend_.z_ref.size()) != n) throw InvalidArgument("infinite backend: reference assignment length mismatch");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                entries.push_back({i, j, -static_cast<double>(backend_.z_ref[i] * backend_.z_ref[j]) * backend_.fidelity});
        last_unique_ = 0;
        return CorrelationMatrix(n, std::move(entries));
    }

    const auto pairs = correlated_pairs(g, p_);
    const std::int64_t np = static_cast<std::int64_t>(pairs.size());
    std::vector<SubcircuitTask> tasks(np);
    std::vector<std::uint64_t> hashes(np);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t k = 0; k < np; ++k) {
        tasks[k] = subproblem(g, pairs[k].first, pairs[k].second, p_, instance_id);
        hashes[k] = wl_hash(tasks[k]);
    }

    std::vector<std::size_t> cls(np);
    for (std::int64_t k = 0; k < np; ++k) cls[k] = db_.insert(tasks[k], hashes[k]).cls;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    value_.resize(db_.size(), nan);
    std::vector<std::size_t> todo;
    for (std::size_t c = 0; c < db_.size(); ++c) {
        if (!std::isnan(value_[c])) continue;
        if (backend_.kind != Backend::Kind::AnalyticP1 && db_[c].canonical_task.size > kMaxQubits)
            throw CapacityError("subcircuit of " + std::to_string(db_[c].canonical_task.size) + " qubits exceeds the statevector cap of " +
                                std::to_string(kMaxQubits) + " (p = " + std::to_string(p_) + ")");
        todo.push_back(c);
    }

    std::exception_ptr err;
    const std::int64_t nt = static_cast<std::int64_t>(todo.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < nt; ++k) {
        try {
            value_[todo[k]] = evaluate(db_[todo[k]]);
        } catch (...) {
#pragma omp critical(qrr_engine_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    evaluations_ += todo.size();

    entries.reserve(np);
    std::vector<std::size_t> seen = cls;
    std::sort(seen.begin(), seen.end());
    last_unique_ = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    for (std::int64_t k = 0; k < np; ++k) {
        double v = -value_[cls[k]] * backend_.fidelity;
        entries.push_back({pairs[k].first, pairs[k].second, std::clamp(v, -1.0, 1.0)});
    }
    return CorrelationMatrix(n, std::move(entries));
}

CorrelationMatrix build_correlation_matrix(const Graph& g, int p, const Backend& backend) {
    CorrelationEngine e(p, backend);
    return e.build(g);
}

Assignment sign_of(const Eigen::VectorXd& v) {
    Assignment z(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) z[i] = (v[i] < -kZeroTol) ? -1 : 1;
    return z;
}

RoundResult sign_round(const Graph& g, const std::vector<RelaxedVector>& vectors) {
    if (vectors.empty()) throw InvalidArgument("sign_round: no vectors");
    RoundResult best;
    best.cut = -1;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        Assignment z = sign_of(vectors[k].coords);
        int c = cut_value(g, z);
        if (c > best.cut) best = {std::move(z), c, k};
    }
    return best;
}

Assignment greedy_enhance(const Graph& g, Assignment z, const std::vector<double>& scores, double f, std::uint64_t seed) {
    const int n = g.n();
    if (static_cast<int>(scores.size()) != n) throw InvalidArgument("greedy_enhance: scores length must equal n");
    if (static_cast<int>(z.size()) != n) throw InvalidArgument("greedy_enhance: assignment length must equal n");
    if (!(f > 0)) throw InvalidArgument("greedy_enhance: f must be positive");
    if (n == 0) return z;
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += 1.0 / std::max(std::abs(scores[i]), 1e-12);
        cdf[i] = acc;
    }
    const auto visits = static_cast<std::int64_t>(std::ceil(f * n));
    Rng rng(seed);
    for (std::int64_t k = 0; k < visits; ++k) {
        double u = rng.uniform() * acc;
        int i = std::min<int>(static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), n - 1);
        if (flip_gain(g, z, i) > 0) z[i] = -z[i];
    }
    return z;
}

RelaxRoundResult relax_and_round(const Graph& g, const SparseMatrix& m, int k) {
    double scale = 0.0;
    for (int c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) scale = std::max(scale, std::abs(it.value()));
    SparseMatrix a = scale > 0 ? SparseMatrix(m / scale) : m;
    RelaxRoundResult r;
    r.vectors = extremal_eigenpairs(a, std::min(k, g.n()));
    r.round = sign_round(g, r.vectors);
    return r;
}

namespace {

SolverReport run_qrr(const Graph& g, CorrelationEngine& engine, bool greedy, double f, std::uint64_t seed) {
    SolverReport rep;
    rep.solver = greedy ? "qrr_star" : "qrr";
    rep.seed = seed;
    rep.params["p"] = engine.p();
    rep.params.update(engine.backend().to_json());
    rep.params["k"] = kRoundVectors;
    if (greedy) rep.params["f"] = f;

    Stopwatch total, stage;
    CorrelationMatrix z = engine.build(g);
    rep.stage_times.emplace_back("correlations", stage.ms());
    stage.reset();
    auto rr = relax_and_round(g, z.to_sparse());
    rep.stage_times.emplace_back("eigen_round", stage.ms());
    rep.z = rr.round.z;
    if (greedy) {
        stage.reset();
        const auto& v = rr.vectors[rr.round.index].coords;
        rep.z = greedy_enhance(g, rep.z, std::vector<double>(v.data(), v.data() + v.size()), f, seed);
        rep.stage_times.emplace_back("greedy", stage.ms());
    }
    rep.time_ms = total.ms();
    rep.cut = cut_value(g, rep.z);
    rep.extra["nnz"] = z.nnz();
    rep.extra["unique_classes"] = engine.last_unique_classes();
    rep.extra["rounded_cut"] = rr.round.cut;
    return rep;
}

}  // namespace

SolverReport qrr_solve(const Graph& g, CorrelationEngine& engine, std::uint64_t seed) { return run_qrr(g, engine, false, 0.0, seed); }

SolverReport qrr_star_solve(const Graph& g, CorrelationEngine& engine, double f, std::uint64_t seed) {
    return run_qrr(g, engine, true, f, seed);
}

SolverReport qrr_solve(const Graph& g, int p, const Backend& backend, std::uint64_t seed) {
    CorrelationEngine e(p, backend);
    return qrr_solve(g, e, seed);
}

SolverReport qrr_star_solve(const Graph& g, int p, const Backend& backend, double f, std::uint64_t seed) {
    CorrelationEngine e(p, backend);
    return qrr_star_solve(g, e, f, seed);
}

SparseMatrix adjacency_matrix(const Graph& g) {
    std::vector<Eigen::Triplet<double>> t;
    for (auto [u, v] : g.edges()) {
        t.emplace_back(u, v, 1.0);
        t.emplace_back(v, u, 1.0);
    }
    SparseMatrix w(g.n(), g.n());
    w.setFromTriplets(t.begin(), t.end());
    return w;
}

SolverReport classical_rr_solve(const Graph& g) {
    SolverReport rep;
    rep.solver = "classical_rr";
    rep.params["k"] = kRoundVectors;
    Stopwatch sw;
    auto rr = relax_and_round(g, adjacency_matrix(g));
    rep.time_ms = sw.ms();
    rep.z = rr.round.z;
    rep.cut = rr.round.cut;
    return rep;
}

namespace {

RelaxedVector top_pair(const SparseMatrix& m) {
    if (m.rows() <= 64) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(m)};
        if (es.info() != Eigen::Success) throw NumericalError("GW: dense eigensolver failed");
        const auto last = m.rows() - 1;
        return {es.eigenvectors().col(last), es.eigenvalues()[last]};
    }
    return lanczos_extremal(m, 0, 1).front();
}

}  // namespace

GwResult gw_solve(const SparseMatrix& a, const Graph& g, int iters, double step) {
    const int n = g.n();
    if (a.rows() != n || a.cols() != n) throw InvalidArgument("gw_solve: matrix dimension must match the graph");
    if (iters < 0 || !(step > 0)) throw InvalidArgument("gw_solve: iters >= 0 and step > 0 required");
    GwResult res;
    Stopwatch sw;

    double scale = 0.0;
    for (int c = 0; c < a.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) scale = std::max(scale, std::abs(it.value()));
    if (scale == 0.0) scale = 1.0;
    SparseMatrix an = a / scale;
    Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < an.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(an, c); it; ++it) deg[it.row()] += it.value();
    SparseMatrix lap = -an;
    for (int i = 0; i < n; ++i) lap.coeffRef(i, i) += deg[i];
    lap.makeCompressed();

    auto shifted = [&](const Eigen::VectorXd& u) {
        SparseMatrix m = lap;
        for (int i = 0; i < n; ++i) m.coeffRef(i, i) += u[i];
        return m;
    };

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n), best_u = u;
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t <= iters; ++t) {
        RelaxedVector top = top_pair(shifted(u));
        if (top.eigenvalue < best) {
            best = top.eigenvalue;
            best_u = u;
        }
        res.best_history.push_back(best);
        if (t == iters) break;
        Eigen::VectorXd grad = top.coords.cwiseAbs2().array() - 1.0 / n;
        u -= (step / std::sqrt(static_cast<double>(t + 1))) * grad;
        u.array() -= u.mean();
    }
    auto rr = relax_and_round(g, shifted(best_u));

    res.u = best_u;
    res.bound = n * best * scale / 4.0;
    auto& rep = res.report;
    rep.solver = "gw";
    rep.params["iters"] = iters;
    rep.params["step"] = step;
    rep.params["k"] = kRoundVectors;
    rep.z = rr.round.z;
    rep.cut = rr.round.cut;
    rep.time_ms = sw.ms();
    rep.extra["bound"] = res.bound;
    return res;
}

double commutator_norm(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z) {
    if (w.rows() != z.rows() || w.cols() != z.cols() || w.rows() != w.cols())
        throw InvalidArgument("commutator_norm: matrices must be square and the same size");
    Eigen::MatrixXd c = w * z - z * w;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(c);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace qrr
