#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qrr {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct RelaxedVector {
    Eigen::VectorXd coords;  // unit norm, first non-negligible entry positive
    double eigenvalue = 0.0;
};

constexpr int kDenseEigenMaxN = 512;
constexpr double kEigenResidualTol = 1e-6;

// k eigenpairs in total: k - k/2 from the bottom of the spectrum and k/2 from the top,
// returned in ascending eigenvalue order. Dense solve up to kDenseEigenMaxN, Lanczos above.
std::vector<RelaxedVector> extremal_eigenpairs(const SparseMatrix& a, int k);
std::vector<RelaxedVector> extremal_eigenpairs_dense(const Eigen::MatrixXd& a, int k);

// Lanczos with full reorthogonalization. Throws NumericalError if the wanted pairs do not
// reach the residual tolerance within max_iters (default 10 n) steps.
std::vector<RelaxedVector> lanczos_extremal(const SparseMatrix& a, int k_low, int k_high, std::uint64_t seed = 1,
                                            int max_iters = 0);

double residual_norm(const SparseMatrix& a, const RelaxedVector& v);

}  // namespace qrr
