#include "kepart/oracle.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace kepart {

namespace {

// Singular values of a generator matrix below this fraction of the largest
// are treated as zero. Structural null directions sit near 1e-16; a looser
// cut would silently drop genuine directions of nearly degenerate systems.
constexpr double kRankCut = 1e-8;

struct Projection {
  Vec coeffs;  // minimum-norm least-squares coefficients
  Vec image;   // G·coeffs, the orthogonal projection of b
  Index rank = 0;
};

Projection project(const Mat& g, const Vec& b) {
  Projection p;
  p.coeffs = Vec::Zero(g.cols());
  p.image = Vec::Zero(g.rows());
  if (g.cols() == 0) return p;
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return p;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) < kRankCut * s(0)) break;
    const double ub = svd.matrixU().col(i).dot(b);
    p.image += ub * svd.matrixU().col(i);
    p.coeffs += (ub / s(i)) * svd.matrixV().col(i);
    ++p.rank;
  }
  return p;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

void check_inputs(double total_mass, const Mat& z, const Mat& zdot) {
  if (!(total_mass > 0.0)) throw std::invalid_argument("oracle: total mass must be positive");
  if (z.rows() != zdot.rows() || z.cols() != zdot.cols()) {
    throw std::invalid_argument("oracle: Z and Zdot shapes differ");
  }
  require_finite(z, "Z");
  require_finite(zdot, "Zdot");
  if (z.squaredNorm() == 0.0) throw std::invalid_argument("oracle: zero hyperradius");
}

}  // namespace

OracleResult project_oracle(double total_mass, const Mat& z, const Mat& zdot) {
  check_inputs(total_mass, z, zdot);
  const Index d = z.rows();
  const Index n = z.cols();
  const Index pr = d * (d - 1) / 2;
  const Index pq = n * (n - 1) / 2;

  Mat g(d * n, pr + pq);
  Index col = 0;
  for (Index p = 0; p < d; ++p) {
    for (Index q = p + 1; q < d; ++q) {
      Mat gen = Mat::Zero(d, d);
      gen(p, q) = 1.0;
      gen(q, p) = -1.0;
      g.col(col++) = flatten(gen * z);
    }
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      Mat gen = Mat::Zero(n, n);
      gen(a, b) = 1.0;
      gen(b, a) = -1.0;
      g.col(col++) = flatten(z * gen);
    }
  }

  const Vec rhs = flatten(zdot);
  const double half_m = 0.5 * total_mass;
  const Projection ext = project(g.leftCols(pr), rhs);
  const Projection in = project(g.rightCols(pq), rhs);
  const Projection rot = project(g, rhs);

  OracleResult r;
  r.T_ext = half_m * ext.image.squaredNorm();
  r.T_int = half_m * in.image.squaredNorm();
  r.T_rot = half_m * rot.image.squaredNorm();
  r.split_valid = rot.rank == ext.rank + in.rank;
  if (r.split_valid) {
    const Vec z_out = g.leftCols(pr) * rot.coeffs.head(pr);
    const Vec z_in = g.rightCols(pq) * rot.coeffs.tail(pq);
    r.E_out = half_m * z_out.squaredNorm();
    r.E_in = half_m * z_in.squaredNorm();
  }
  return r;
}

namespace {

struct SideTerms {
  double unbounded = 0.0;
  double bounded = 0.0;
  bool valid = true;
};

// Eigenvector rates of S = Y·Yᵀ along Ẏ from first-order perturbation:
// u̇_i = Σ_{j≠i} u_j (u_jᵀ Ṡ u_i)/(λ_i − λ_j), Ṡ = Ẏ·Yᵀ + Y·Ẏᵀ.
SideTerms side_terms(const Mat& y, const Mat& ydot) {
  const SymEigen eig = sym_eigen(y * y.transpose());
  const Mat sdot = ydot * y.transpose() + y * ydot.transpose();
  const Index dim = eig.values.size();
  const double lmax = std::max(eig.values(0), 0.0);
  Index k = 0;
  while (k < dim && eig.values(k) > 1e-12 * lmax) ++k;

  SideTerms out;
  for (Index i = 0; i + 1 < k; ++i) {
    if (eig.values(i) - eig.values(i + 1) <= 1e-9 * lmax) out.valid = false;
  }
  if (!out.valid) return out;

  const Mat coupling = eig.vectors.transpose() * sdot * eig.vectors;
  for (Index i = 0; i < k; ++i) {
    const double li = eig.values(i);
    for (Index j = 0; j < k; ++j) {
      if (j == i) continue;
      const double c = coupling(j, i) / (li - eig.values(j));
      out.unbounded += li * c * c;
    }
    for (Index j = k; j < dim; ++j) {
      const double c = coupling(j, i) / li;
      out.bounded += li * c * c;
    }
  }
  return out;
}

}  // namespace

EigenFormResult eigen_form_oracle(double total_mass, const Mat& z, const Mat& zdot) {
  check_inputs(total_mass, z, zdot);
  const SideTerms outer = side_terms(z, zdot);
  const SideTerms inner = side_terms(z.transpose(), zdot.transpose());
  EigenFormResult r;
  r.valid = outer.valid && inner.valid;
  if (!r.valid) return r;
  const double half_m = 0.5 * total_mass;
  r.E_outA = half_m * outer.unbounded;
  r.E_outB = half_m * outer.bounded;
  r.E_inA = half_m * inner.unbounded;
  r.E_inB = half_m * inner.bounded;
  return r;
}

}  // namespace kepart
