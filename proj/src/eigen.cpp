#include "qrr/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qrr/errors.hpp"
#include "qrr/rng.hpp"

namespace qrr {

namespace {

void canonicalize(RelaxedVector& r) {
    r.coords.normalize();
    for (Eigen::Index i = 0; i < r.coords.size(); ++i) {
        if (std::abs(r.coords[i]) > 1e-10) {
            if (r.coords[i] < 0) r.coords = -r.coords;
            break;
        }
    }
}

void split_k(int n, int k, int& k_low, int& k_high) {
    if (k < 1) throw InvalidArgument("extremal_eigenpairs: k must be >= 1");
    k = std::min(k, n);
    k_high = k / 2;
    k_low = k - k_high;
}

}  // namespace

std::vector<RelaxedVector> extremal_eigenpairs_dense(const Eigen::MatrixXd& a, int k) {
    const int n = static_cast<int>(a.rows());
    int k_low, k_high;
    split_k(n, k, k_low, k_high);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolver failed");
    std::vector<RelaxedVector> out;
    for (int i = 0; i < k_low; ++i) out.push_back({es.eigenvectors().col(i), es.eigenvalues()[i]});
    for (int i = n - k_high; i < n; ++i) out.push_back({es.eigenvectors().col(i), es.eigenvalues()[i]});
    for (auto& r : out) canonicalize(r);
    return out;
}

double residual_norm(const SparseMatrix& a, const RelaxedVector& v) {
    return (a * v.coords - v.eigenvalue * v.coords).norm();
}

std::vector<RelaxedVector> lanczos_extremal(const SparseMatrix& a, int k_low, int k_high, std::uint64_t seed,
                                            int max_iters) {
    const int n = static_cast<int>(a.rows());
    if (k_low < 0 || k_high < 0 || k_low + k_high < 1 || k_low + k_high > n)
        throw InvalidArgument("lanczos_extremal: bad number of wanted pairs");
    if (max_iters <= 0) max_iters = 10 * n;
    const int max_dim = std::min(n, max_iters);
    Rng rng(seed);

    auto random_unit = [&](const Eigen::MatrixXd& q, int m) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
        for (int pass = 0; pass < 2; ++pass) v -= q.leftCols(m) * (q.leftCols(m).transpose() * v);
        return Eigen::VectorXd(v.normalized());
    };

    int chunk = std::min(max_dim, std::max(64, 4 * (k_low + k_high)));
    Eigen::MatrixXd q(n, chunk);
    std::vector<double> alpha, beta;  // beta[i] couples q_i and q_{i+1}
    q.col(0) = random_unit(q, 0);
    Eigen::VectorXd w(n);

    double worst = 0.0;
    int m = 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    std::vector<int> wanted;

    auto ritz = [&](int dim) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        es.compute(t);
        wanted.clear();
        for (int i = 0; i < std::min(k_low, dim); ++i) wanted.push_back(i);
        for (int i = std::max(dim - k_high, std::min(k_low, dim)); i < dim; ++i) wanted.push_back(i);
    };

    for (m = 1; m <= max_dim; ++m) {
        w = a * q.col(m - 1);
        alpha.push_back(q.col(m - 1).dot(w));
        // Full reorthogonalization, applied twice.
        for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(m) * (q.leftCols(m).transpose() * w);
        double b = w.norm();
        bool done = m == max_dim;
        if (!done && (m >= k_low + k_high) && (m % 8 == 0 || b < 1e-12)) {
            ritz(m);
            worst = 0.0;
            for (int i : wanted) worst = std::max(worst, std::abs(b * es.eigenvectors()(m - 1, i)));
            if (static_cast<int>(wanted.size()) == k_low + k_high && worst < 1e-10) done = true;
        }
        if (done) break;
        if (m == q.cols()) q.conservativeResize(Eigen::NoChange, std::min(max_dim, 2 * static_cast<int>(q.cols())));
        if (b < 1e-12) {
            // Invariant subspace found: continue in its orthogonal complement.
            beta.push_back(0.0);
            q.col(m) = random_unit(q, m);
        } else {
            beta.push_back(b);
            q.col(m) = w / b;
        }
    }
    m = std::min(m, max_dim);
    ritz(m);

    std::vector<RelaxedVector> out;
    for (int i : wanted) {
        RelaxedVector r{q.leftCols(m) * es.eigenvectors().col(i), es.eigenvalues()[i]};
        canonicalize(r);
        out.push_back(std::move(r));
    }
    double scale = std::max(1.0, std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[m - 1])));
    for (const auto& r : out) {
        double res = residual_norm(a, r);
        if (res > kEigenResidualTol * scale || static_cast<int>(out.size()) != k_low + k_high) {
            std::ostringstream os;
            os << "Lanczos did not converge: n=" << n << " krylov_dim=" << m << " residual=" << res
               << " ritz_estimate=" << worst << " wanted=" << k_low + k_high << " got=" << out.size();
            throw NumericalError(os.str());
        }
    }
    return out;
}

std::vector<RelaxedVector> extremal_eigenpairs(const SparseMatrix& a, int k) {
    if (a.rows() != a.cols()) throw InvalidArgument("extremal_eigenpairs: matrix must be square");
    const int n = static_cast<int>(a.rows());
    if (k > n) throw InvalidArgument("extremal_eigenpairs: k exceeds dimension");
    if (n <= kDenseEigenMaxN) return extremal_eigenpairs_dense(Eigen::MatrixXd(a), k);
    int k_low, k_high;
    split_k(n, k, k_low, k_high);
    return lanczos_extremal(a, k_low, k_high);
}

}  // namespace qrr
