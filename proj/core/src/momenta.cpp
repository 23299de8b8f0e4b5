#include "kepart/momenta.hpp"

#include <algorithm>
#include <stdexcept>

namespace kepart {

namespace {

void check_shapes(const Mat& z, const Mat& zdot, const Vec& xi, const Vec& xidot) {
  if (z.rows() != zdot.rows() || z.cols() != zdot.cols()) {
    throw std::invalid_argument("momenta: Z and Zdot shapes differ");
  }
  const Index m = std::min(z.rows(), z.cols());
  if (xi.size() != m || xidot.size() != m) {
    throw std::invalid_argument("momenta: singular value vectors must have min(d, n) entries");
  }
}

}  // namespace

double singular_momentum_sq(double total_mass, const Vec& xi, const Vec& xidot) {
  double sum = 0.0;
  for (Index s = 0; s < xi.size(); ++s) {
    for (Index t = s + 1; t < xi.size(); ++t) {
      const double l = xi(s) * xidot(t) - xi(t) * xidot(s);
      sum += l * l;
    }
  }
  return total_mass * total_mass * sum;
}

MomentaResult momenta_direct(double total_mass, const Mat& z, const Mat& zdot, const Vec& xi,
                             const Vec& xidot) {
  check_shapes(z, zdot, xi, xidot);
  const Index d = z.rows();
  const Index n = z.cols();
  const double m2 = total_mass * total_mass;
  MomentaResult r;

  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      double jij = 0.0;
      for (Index a = 0; a < n; ++a) jij += z(i, a) * zdot(j, a) - z(j, a) * zdot(i, a);
      r.J2 += m2 * jij * jij;
    }
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      double kab = 0.0;
      for (Index i = 0; i < d; ++i) kab += z(i, a) * zdot(i, b) - z(i, b) * zdot(i, a);
      r.K2 += m2 * kab * kab;
    }
  }
  // Minors over ordered index pairs (i, α) < (j, β): i < j, or i = j and α < β.
  for (Index i = 0; i < d; ++i) {
    for (Index a = 0; a < n; ++a) {
      for (Index j = i; j < d; ++j) {
        for (Index b = (j == i ? a + 1 : 0); b < n; ++b) {
          const double minor = z(i, a) * zdot(j, b) - z(j, b) * zdot(i, a);
          r.Lambda2 += m2 * minor * minor;
        }
      }
    }
  }
  r.L2 = singular_momentum_sq(total_mass, xi, xidot);
  return r;
}

MomentaResult momenta_fast(double total_mass, const Mat& z, const Mat& zdot, const Vec& xi,
                           const Vec& xidot) {
  check_shapes(z, zdot, xi, xidot);
  const Index d = z.rows();
  const double m2 = total_mass * total_mass;

  const Mat delta1 = z * z.transpose();
  const Mat delta2 = z * zdot.transpose();
  const Mat delta3 = zdot * zdot.transpose();

  MomentaResult r;
  double k2 = 0.0;
  double j2 = 0.0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      k2 += delta1(i, j) * delta3(i, j) - delta2(i, j) * delta2(j, i);
      if (j > i) {
        const double a = delta2(i, j) - delta2(j, i);
        j2 += a * a;
      }
    }
  }
  r.J2 = m2 * j2;
  r.K2 = std::max(0.0, m2 * k2);

  const double zz = z.squaredNorm();
  const double dd = zdot.squaredNorm();
  const double zd = z.cwiseProduct(zdot).sum();
  r.Lambda2 = std::max(0.0, m2 * (zz * dd - zd * zd));
  r.L2 = singular_momentum_sq(total_mass, xi, xidot);
  return r;
}

double j2_gram_sum(double total_mass, const Mat& z, const Mat& zdot) {
  if (z.rows() != zdot.rows() || z.cols() != zdot.cols()) {
    throw std::invalid_argument("j2_gram_sum: Z and Zdot shapes differ");
  }
  const Mat g1 = z.transpose() * z;
  const Mat g2 = z.transpose() * zdot;
  const Mat g3 = zdot.transpose() * zdot;
  double sum = 0.0;
  for (Index a = 0; a < z.cols(); ++a) {
    for (Index b = 0; b < z.cols(); ++b) sum += g1(a, b) * g3(a, b) - g2(a, b) * g2(b, a);
  }
  return total_mass * total_mass * sum;
}

}  // namespace kepart
