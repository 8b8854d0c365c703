#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrr/eigen.hpp"
#include "qrr/emulator.hpp"
#include "qrr/graph.hpp"
#include "qrr/lightcone.hpp"
#include "qrr/report.hpp"

namespace qrr {

// Symmetric matrix with zero diagonal, stored as its strict upper triangle.
class CorrelationMatrix {
public:
    struct Entry {
        int i, j;  // i < j
        double v;
    };

    explicit CorrelationMatrix(int n = 0) : n_(n) {}
    CorrelationMatrix(int n, std::vector<Entry> entries);

    int n() const { return n_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    double get(int i, int j) const;
    double max_abs() const;

    CorrelationMatrix scaled(double f) const;
    SparseMatrix to_sparse() const;
    Eigen::MatrixXd to_dense() const;

private:
    int n_;
    std::vector<Entry> entries_;
};

CorrelationMatrix apply_depolarizing(const CorrelationMatrix& z, double fidelity);

struct Backend {
    enum class Kind { Exact, AnalyticP1, Sampled, Infinite };
    Kind kind = Kind::Exact;
    // Sampled backend.
    std::int64_t n_ex = 10000;
    std::uint64_t seed = 0;
    double readout_p01 = 0.0, readout_p10 = 0.0;  // per-qubit readout error rates
    bool mitigate = false;                         // IBU on each anchored marginal
    int ibu_iters = 50;
    // Depolarizing fidelity applied to every entry.
    double fidelity = 1.0;
    // Infinite-depth test hook: the reference optimum.
    Assignment z_ref;

    static Backend exact() { return {}; }
    static Backend analytic_p1() {
        Backend b;
        b.kind = Kind::AnalyticP1;
        return b;
    }
    static Backend sampled(std::int64_t n_ex, std::uint64_t seed) {
        Backend b;
        b.kind = Kind::Sampled;
        b.n_ex = n_ex;
        b.seed = seed;
        return b;
    }
    static Backend infinite(Assignment z) {
        Backend b;
        b.kind = Kind::Infinite;
        b.z_ref = std::move(z);
        return b;
    }
    std::string name() const;
    Json to_json() const;
};

Backend::Kind parse_backend_kind(const std::string& s);

// Builds correlation matrices for a fixed (p, angles, backend), keeping the isomorphism
// database and per-class values across calls so repeated instances reuse work.
class CorrelationEngine {
public:
    CorrelationEngine(int p, Backend backend);
    CorrelationEngine(int p, Backend backend, QaoaAngles angles);

    // Entries Z_ij = -<Z_i Z_j> for every correlated pair.
    CorrelationMatrix build(const Graph& g, const std::string& instance_id = "");

    int p() const { return p_; }
    const Backend& backend() const { return backend_; }
    const IsoDatabase& database() const { return db_; }
    // <Z_a Z_b> at the anchors of class k (before depolarizing).
    double class_value(std::size_t k) const { return value_.at(k); }
    std::size_t evaluations() const { return evaluations_; }
    // Distinct classes touched by the last build().
    std::size_t last_unique_classes() const { return last_unique_; }

private:
    double evaluate(const IsoClass& c) const;

    int p_;
    Backend backend_;
    QaoaAngles angles_;
    IsoDatabase db_;
    std::vector<double> value_;
    std::size_t evaluations_ = 0;
    std::size_t last_unique_ = 0;
};

CorrelationMatrix build_correlation_matrix(const Graph& g, int p, const Backend& backend);

struct RoundResult {
    Assignment z;
    int cut = 0;
    std::size_t index = 0;  // winning vector
};

// Entries with |v_i| <= kZeroTol round to +1.
constexpr double kZeroTol = 1e-12;
Assignment sign_of(const Eigen::VectorXd& v);
RoundResult sign_round(const Graph& g, const std::vector<RelaxedVector>& vectors);

// ceil(f n) visits drawn with replacement from p_i ~ 1/|score_i|; a flip is kept only if it
// strictly increases the cut.
Assignment greedy_enhance(const Graph& g, Assignment z, const std::vector<double>& scores, double f, std::uint64_t seed);

constexpr int kRoundVectors = 8;
constexpr double kGreedyF = 10.0;

// Shared tail of the relax-and-round solvers: normalize, extremal pairs, round.
struct RelaxRoundResult {
    RoundResult round;
    std::vector<RelaxedVector> vectors;
};
RelaxRoundResult relax_and_round(const Graph& g, const SparseMatrix& m, int k = kRoundVectors);

SolverReport qrr_solve(const Graph& g, CorrelationEngine& engine, std::uint64_t seed = 0);
SolverReport qrr_star_solve(const Graph& g, CorrelationEngine& engine, double f, std::uint64_t seed);
SolverReport qrr_solve(const Graph& g, int p, const Backend& backend, std::uint64_t seed = 0);
SolverReport qrr_star_solve(const Graph& g, int p, const Backend& backend, double f, std::uint64_t seed);

SparseMatrix adjacency_matrix(const Graph& g);
SolverReport classical_rr_solve(const Graph& g);

struct GwResult {
    SolverReport report;
    double bound = 0.0;                // n lambda_max / 4 at the best u
    std::vector<double> best_history;  // best-so-far lambda_max per iteration
    Eigen::VectorXd u;
};

constexpr int kGwIters = 200;

// Eigenvalue Goemans-Williamson: min over trace-zero u of lambda_max(L + diag u), L = D - A,
// by projected subgradient descent, then round k extremal vectors at the best u.
GwResult gw_solve(const SparseMatrix& a, const Graph& g, int iters = kGwIters, double step = 1.0);

// Largest singular value of WZ - ZW.
double commutator_norm(const Eigen::MatrixXd& w, const Eigen::MatrixXd& z);

}  // namespace qrr
