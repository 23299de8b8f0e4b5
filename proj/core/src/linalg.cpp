#include "kepart/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kepart/random.hpp"

namespace kepart {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 80;

// Rotation (c, s) applied to column pair (i, j): ci − s·cj, s·ci + c·cj.
void rotate_columns(Mat& m, Index i, Index j, double c, double s) {
  for (Index r = 0; r < m.rows(); ++r) {
    const double a = m(r, i);
    const double b = m(r, j);
    m(r, i) = c * a - s * b;
    m(r, j) = s * a + c * b;
  }
}

// Hestenes one-sided Jacobi on a tall matrix (rows ≥ cols). On return the
// columns of `a` are mutually orthogonal and a_in·v == a.
void hestenes(Mat& a, Mat& v) {
  const Index q = a.cols();
  v = Mat::Identity(q, q);
  const double tol = 4.0 * kEps;
  // Columns at roundoff level carry no direction; rotating them never settles.
  const double negligible = tol * tol * a.squaredNorm();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i + 1 < q; ++i) {
      for (Index j = i + 1; j < q; ++j) {
        const double alpha = a.col(i).squaredNorm();
        const double beta = a.col(j).squaredNorm();
        const double gamma = a.col(i).dot(a.col(j));
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        if (std::min(alpha, beta) <= negligible) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_columns(a, i, j, c, s);
        rotate_columns(v, i, j, c, s);
      }
    }
    if (!rotated) return;
  }
  throw std::runtime_error("svd: one-sided Jacobi did not converge after " +
                           std::to_string(kMaxSweeps) + " sweeps");
}

// Indices sorting `values` descending; ties keep index order.
std::vector<Index> descending_order(const Vec& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  return order;
}

// Index of the largest-magnitude entry; first one wins on ties.
Index argmax_abs(const Eigen::Ref<const Vec>& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  return best;
}

bool needs_flip(const Eigen::Ref<const Vec>& v) { return v(argmax_abs(v)) < 0.0; }

SvdFactors svd_impl(const Mat& z, bool full) {
  require_finite(z, "svd input");
  const Index d = z.rows();
  const Index n = z.cols();
  if (d == 0 || n == 0) throw std::invalid_argument("svd: empty matrix");
  const Index m = std::min(d, n);
  const bool wide = n >= d;

  // a = U·diag(sig)·vᵀ with a tall: a = Zᵀ when wide, Z otherwise.
  Mat a = wide ? Mat(z.transpose()) : z;
  Mat v;
  hestenes(a, v);
  const Index p = a.rows();

  Vec sig(m);
  for (Index j = 0; j < m; ++j) sig(j) = a.col(j).norm();
  const auto order = descending_order(sig);
  const double smax = sig(order.front());
  // Covers the columns hestenes() leaves unrotated as negligible.
  const double zero_cut = 4.0 * smax * kEps * static_cast<double>(std::max(p, m));

  Vec xi(m);
  Mat vs(m, m);
  Index rank = 0;
  for (Index k = 0; k < m; ++k) {
    xi(k) = sig(order[static_cast<std::size_t>(k)]);
    vs.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    if (xi(k) > zero_cut && smax > 0.0) ++rank;
  }
  Mat u(p, rank);
  for (Index k = 0; k < rank; ++k) u.col(k) = a.col(order[static_cast<std::size_t>(k)]) / xi(k);

  const Index u_cols = (wide && !full) ? m : p;
  Mat u_full = rank == u_cols ? std::move(u) : Mat(complete_orthonormal(u, p).leftCols(u_cols));

  SvdFactors f;
  f.xi = xi;
  if (wide) {
    f.D = vs;
    f.X = u_full;
  } else {
    f.D = u_full;  // p == d
    f.X = vs;
  }

  for (Index k = 0; k < d; ++k) {
    if (!needs_flip(f.D.col(k))) continue;
    f.D.col(k) *= -1.0;
    if (k < m) f.X.col(k) *= -1.0;
  }
  for (Index k = m; k < f.X.cols(); ++k) {
    if (needs_flip(f.X.col(k))) f.X.col(k) *= -1.0;
  }
  return f;
}

}  // namespace

double frobenius_inner(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_inner: shape mismatch");
  }
  return a.cwiseProduct(b).sum();
}

double frobenius_norm(const Mat& a) { return a.norm(); }

bool all_finite(const Mat& a) { return a.allFinite(); }

void require_finite(const Mat& a, const char* what) {
  if (!a.allFinite()) throw std::invalid_argument(std::string(what) + " contains NaN or Inf");
}

Mat complete_orthonormal(const Mat& basis, Index dim) {
  if (basis.rows() != dim || basis.cols() > dim) {
    throw std::invalid_argument("complete_orthonormal: basis does not fit dimension");
  }
  Mat q(dim, dim);
  Index filled = basis.cols();
  q.leftCols(filled) = basis;
  while (filled < dim) {
    Index best = -1;
    double best_norm = -1.0;
    Vec best_vec;
    for (Index e = 0; e < dim; ++e) {
      Vec r = Vec::Unit(dim, e);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index c = 0; c < filled; ++c) r -= q.col(c).dot(r) * q.col(c);
      }
      const double nr = r.norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = e;
        best_vec = r;
      }
    }
    if (best < 0 || best_norm <= 0.0) {
      throw std::runtime_error("complete_orthonormal: basis is not orthonormal");
    }
    q.col(filled++) = best_vec / best_norm;
  }
  return q;
}

SvdFactors svd(const Mat& z) { return svd_impl(z, true); }

SvdFactors thin_svd(const Mat& z) { return svd_impl(z, false); }

SymEigen sym_eigen(const Mat& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("sym_eigen: matrix is not square");
  require_finite(s, "sym_eigen input");
  const Index n = s.rows();
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("sym_eigen: matrix is not symmetric");
  }

  Mat a = 0.5 * (s + s.transpose());
  Mat v = Mat::Identity(n, n);
  const double floor = kEps * kEps * a.norm();
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= floor ||
            std::abs(apq) <= kEps * std::sqrt(std::abs(a(p, p))) * std::sqrt(std::abs(a(q, q)))) {
          continue;
        }
        rotated = true;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        // a ← Jᵀ a J with J the (p, q) rotation [[c, sn], [−sn, c]].
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        rotate_columns(v, p, q, c, sn);
      }
    }
    converged = !rotated;
  }
  if (!converged) throw std::runtime_error("sym_eigen: Jacobi sweeps did not converge");

  const Vec diag = a.diagonal();
  const auto order = descending_order(diag);
  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = diag(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    if (needs_flip(out.vectors.col(k))) out.vectors.col(k) *= -1.0;
  }
  return out;
}

Mat random_orthogonal(Index dim, RandomStream& rng) {
  if (dim < 1) throw std::invalid_argument("random_orthogonal: dim must be positive");
  Mat q(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    for (Index r = 0; r < dim; ++r) q(r, c) = rng.normal();
  }
  for (Index c = 0; c < dim; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index k = 0; k < c; ++k) q.col(c) -= q.col(k).dot(q.col(c)) * q.col(k);
    }
    const double nrm = q.col(c).norm();
    if (nrm == 0.0) throw std::runtime_error("random_orthogonal: degenerate Gaussian draw");
    q.col(c) /= nrm;
  }
  return q;
}

}  // namespace kepart
