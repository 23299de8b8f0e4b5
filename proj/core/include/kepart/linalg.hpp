#pragma once

// Small dense linear algebra used throughout kepart: Frobenius products,
// a deterministic one-sided Jacobi SVD, a cyclic Jacobi symmetric
// eigensolver and Haar-distributed random orthogonal matrices.
//
// Matrices are Eigen dynamic matrices. A d×n position matrix is indexed
// (i, alpha) with i over spatial axes and alpha over particles.

#include <Eigen/Dense>

namespace kepart {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

class RandomStream;

/// Tr[a·bᵀ]. Throws std::invalid_argument when the shapes differ.
double frobenius_inner(const Mat& a, const Mat& b);

double frobenius_norm(const Mat& a);

bool all_finite(const Mat& a);

/// Throws std::invalid_argument naming `what` if `a` holds NaN or Inf.
void require_finite(const Mat& a, const char* what);

/// Z = D·Υ·Xᵀ with Υ the d×n matrix carrying xi on its diagonal.
///
/// `xi` has m = min(d, n) entries in descending order. `D` is always the
/// full d×d factor. `X` is n×n for svd() and n×m for thin_svd().
/// The largest-magnitude entry of every column of D is positive.
struct SvdFactors {
  Mat D;
  Vec xi;
  Mat X;
};

/// Full SVD with explicit orthogonal factors.
///
/// One-sided (Hestenes) Jacobi with a fixed cyclic sweep order, so the
/// result is bit-reproducible for identical input. Throws
/// std::invalid_argument on non-finite input and std::runtime_error if the
/// sweeps fail to converge.
SvdFactors svd(const Mat& z);

/// Same as svd() but X only carries the first min(d, n) right singular
/// vectors. This is the path used by the partition fast path: it costs
/// O(d²·n) instead of O(n³) for wide matrices.
SvdFactors thin_svd(const Mat& z);

struct SymEigen {
  Vec values;   // descending
  Mat vectors;  // columns are unit eigenvectors
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
/// Throws std::invalid_argument if |S − Sᵀ| exceeds 1e-12·max(1, max|S|).
SymEigen sym_eigen(const Mat& s);

/// Haar-distributed element of O(dim): Gaussian matrix followed by
/// modified Gram-Schmidt, so the implied R factor has a positive diagonal.
Mat random_orthogonal(Index dim, RandomStream& rng);

/// Returns a dim×dim orthogonal matrix whose leading columns are the
/// (orthonormal) columns of `basis`. The remaining columns are picked
/// greedily from the standard basis, largest residual first.
Mat complete_orthonormal(const Mat& basis, Index dim);

}  // namespace kepart
