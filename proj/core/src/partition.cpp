#include "kepart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kepart {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate_system(const Mat& z, const Mat& zdot) {
  if (z.rows() != zdot.rows() || z.cols() != zdot.cols()) {
    throw std::invalid_argument("partition: Z and Zdot shapes differ");
  }
  if (z.rows() == 0 || z.cols() == 0) throw std::invalid_argument("partition: empty matrix");
  require_finite(z, "Z");
  require_finite(zdot, "Zdot");
  if (z.squaredNorm() == 0.0) throw std::invalid_argument("partition: zero hyperradius");
}

// ξ with values at or below zero_tol replaced by exact zeros.
Vec clipped(const Vec& xi, double zero_tol) {
  Vec out = xi;
  for (Index s = 0; s < out.size(); ++s) {
    if (out(s) <= zero_tol) out(s) = 0.0;
  }
  return out;
}

}  // namespace

SvdFrame svd_rates(const Mat& z, const Mat& zdot, const ToleranceConfig& cfg) {
  validate_system(z, zdot);
  const Index d = z.rows();
  const Index n = z.cols();
  const Index m = std::min(d, n);

  SvdFactors f = thin_svd(z);
  SvdFrame fr;
  fr.D = std::move(f.D);
  fr.xi = std::move(f.xi);
  fr.X = std::move(f.X);

  const double xi1 = fr.xi(0);
  fr.gap_tol = cfg.gap_rel * xi1 * xi1;
  fr.zero_tol = cfg.zero_rel * xi1;
  const Vec xs = clipped(fr.xi, fr.zero_tol);
  fr.k = (xs.array() > 0.0).count();

  const Mat p = fr.D.transpose() * zdot;  // d×n
  fr.W = p * fr.X;                         // d×m
  fr.tail_sq = Vec::Zero(m);
  if (n > m) {
    const Mat rest = p - fr.W * fr.X.transpose();
    for (Index s = 0; s < m; ++s) {
      const double t = rest.row(s).norm();
      // Anything below the rounding level of the row is noise.
      fr.tail_sq(s) = t <= 32.0 * kEps * p.row(s).norm() ? 0.0 : t * t;
    }
  }

  fr.xidot = fr.W.diagonal().head(m);
  fr.A = Mat::Zero(d, d);
  fr.B = Mat::Zero(m, m);
  fr.B_tail_sq = Vec::Zero(m);

  for (Index s = 0; s < m; ++s) {
    for (Index t = s + 1; t < m; ++t) {
      const double xs_s = xs(s);
      const double xs_t = xs(t);
      if (xs_s == 0.0 && xs_t == 0.0) continue;
      if (xs_s > 0.0 && xs_t > 0.0 && std::abs(xs_s * xs_s - xs_t * xs_t) <= fr.gap_tol) {
        fr.degenerate = true;
        continue;
      }
      const double den = xs_t * xs_t - xs_s * xs_s;
      const double a = (xs_t * fr.W(s, t) + xs_s * fr.W(t, s)) / den;
      const double b = (xs_s * fr.W(s, t) + xs_t * fr.W(t, s)) / den;
      fr.A(s, t) = a;
      fr.A(t, s) = -a;
      fr.B(s, t) = b;
      fr.B(t, s) = -b;
    }
  }
  for (Index i = m; i < d; ++i) {
    for (Index s = 0; s < m; ++s) {
      if (xs(s) == 0.0) continue;
      fr.A(i, s) = fr.W(i, s) / xs(s);
      fr.A(s, i) = -fr.A(i, s);
    }
  }
  for (Index s = 0; s < m; ++s) {
    if (xs(s) > 0.0) fr.B_tail_sq(s) = fr.tail_sq(s) / (xs(s) * xs(s));
  }
  return fr;
}

PartitionResult compute_partition(double total_mass, const Mat& z, const Mat& zdot,
                                  const ToleranceConfig& cfg) {
  if (!(total_mass > 0.0) || !std::isfinite(total_mass)) {
    throw std::invalid_argument("partition: total mass must be positive");
  }
  const SvdFrame fr = svd_rates(z, zdot, cfg);
  const Index d = z.rows();
  const Index m = fr.xi.size();
  const double half_m = 0.5 * total_mass;
  const Vec xs = clipped(fr.xi, fr.zero_tol);
  const Mat& w = fr.W;

  PartitionResult r;
  r.total_mass = total_mass;
  r.degenerate = fr.degenerate;

  const double zz = z.squaredNorm();
  const double zd = z.cwiseProduct(zdot).sum();
  r.rho = std::sqrt(zz);
  r.T = half_m * zdot.squaredNorm();
  r.T_rho = half_m * zd * zd / zz;

  r.momenta = momenta_fast(total_mass, z, zdot, fr.xi, fr.xidot);
  const double two_m_rho2 = 2.0 * total_mass * zz;
  r.T_Lambda = r.momenta.Lambda2 / two_m_rho2;
  r.T_xi = r.momenta.L2 / two_m_rho2;
  r.T_J = r.momenta.J2 / two_m_rho2;
  r.T_K = r.momenta.K2 / two_m_rho2;

  // Component of W normal to the tangent space {A·Υ − Υ·B}.
  double normal_sq = 0.0;
  for (Index s = 0; s < m; ++s) {
    normal_sq += w(s, s) * w(s, s);
    for (Index t = s + 1; t < m; ++t) {
      if (xs(s) == 0.0 && xs(t) == 0.0) {
        normal_sq += w(s, t) * w(s, t) + w(t, s) * w(t, s);
      } else if (xs(s) > 0.0 && xs(t) > 0.0 &&
                 std::abs(xs(s) * xs(s) - xs(t) * xs(t)) <= fr.gap_tol) {
        const double sym = w(s, t) + w(t, s);
        normal_sq += 0.5 * sym * sym;
      }
    }
    if (xs(s) == 0.0) {
      normal_sq += fr.tail_sq(s);
      for (Index i = m; i < d; ++i) normal_sq += w(i, s) * w(i, s);
    }
  }
  r.T_I = half_m * normal_sq;
  r.T_rot = r.T - r.T_I;

  // Projections onto {ℛ·Z} and {Z·𝒬}, decoupled pair by pair in the SVD frame.
  double ext_sq = 0.0;
  for (Index i = 0; i < d; ++i) {
    const double xi_i = i < m ? xs(i) : 0.0;
    for (Index j = i + 1; j < d; ++j) {
      const double xi_j = j < m ? xs(j) : 0.0;
      const double den = xi_i * xi_i + xi_j * xi_j;
      if (den == 0.0) continue;
      const double w_ij = xi_j > 0.0 ? w(i, j) : 0.0;
      const double w_ji = xi_i > 0.0 ? w(j, i) : 0.0;
      const double num = w_ij * xi_j - w_ji * xi_i;
      ext_sq += num * num / den;
    }
  }
  double int_sq = 0.0;
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double den = xs(a) * xs(a) + xs(b) * xs(b);
      if (den == 0.0) continue;
      const double num = w(a, b) * xs(a) - w(b, a) * xs(b);
      int_sq += num * num / den;
    }
    if (xs(a) > 0.0) int_sq += fr.tail_sq(a);
  }
  r.T_ext = half_m * ext_sq;
  r.T_int = half_m * int_sq;
  r.T_res = r.T_rot - r.T_ext - r.T_int;
  r.T_ac = r.T_rot - r.T_J - r.T_K;

  // Singular value expansion from the A and B blocks.
  const Index k = fr.k;
  double out_a = 0.0;
  double out_b = 0.0;
  for (Index s = 0; s < k; ++s) {
    double inner = 0.0;
    double outer = 0.0;
    for (Index j = 0; j < d; ++j) (j < k ? inner : outer) += fr.A(j, s) * fr.A(j, s);
    out_a += xs(s) * xs(s) * inner;
    out_b += xs(s) * xs(s) * outer;
  }
  double in_a = 0.0;
  double in_b = 0.0;
  for (Index s = 0; s < k; ++s) {
    double inner = 0.0;
    double outer = fr.B_tail_sq(s);
    for (Index b = 0; b < m; ++b) (b < k ? inner : outer) += fr.B(b, s) * fr.B(b, s);
    in_a += xs(s) * xs(s) * inner;
    in_b += xs(s) * xs(s) * outer;
  }
  r.E_outA = half_m * out_a;
  r.E_outB = half_m * out_b;
  r.E_inA = half_m * in_a;
  r.E_inB = half_m * in_b;
  r.E_out = r.E_outA + r.E_outB;
  r.E_in = r.E_inA + r.E_inB;
  r.E_c = r.T_rot - r.E_out - r.E_in;
  return r;
}

std::string check_partition_identities(const PartitionResult& r, double tol) {
  const double scale = std::max(1.0, r.T);
  const double eps = tol * scale;
  std::ostringstream err;
  auto eq = [&](const char* what, double a, double b) {
    if (std::abs(a - b) > eps && err.tellp() == 0) err << what << ": " << a << " vs " << b;
  };
  auto le = [&](const char* what, double a, double b) {
    if (a > b + eps && err.tellp() == 0) err << what << ": " << a << " > " << b;
  };

  eq("T = T_Lambda + T_rho", r.T, r.T_Lambda + r.T_rho);
  eq("T = T_rot + T_I", r.T, r.T_rot + r.T_I);
  eq("T_rot = T_ext + T_int + T_res", r.T_rot, r.T_ext + r.T_int + r.T_res);
  eq("T_rot = T_J + T_K + T_ac", r.T_rot, r.T_J + r.T_K + r.T_ac);
  le("0 <= T_J", 0.0, r.T_J);
  le("T_J <= T_ext", r.T_J, r.T_ext);
  le("T_ext <= T_rot", r.T_ext, r.T_rot);
  le("0 <= T_K", 0.0, r.T_K);
  le("T_K <= T_int", r.T_K, r.T_int);
  le("T_int <= T_rot", r.T_int, r.T_rot);
  le("T_res <= T_ac", r.T_res, r.T_ac);
  le("T_rot <= T_Lambda", r.T_rot, r.T_Lambda);
  le("T_Lambda <= T", r.T_Lambda, r.T);
  le("T_rho <= T_I", r.T_rho, r.T_I);
  if (!r.degenerate) {
    // Singular value rates are basis dependent inside a repeated pair.
    eq("T_Lambda - T_rot = T_xi", r.T_Lambda - r.T_rot, r.T_xi);
    eq("T_I - T_rho = T_xi", r.T_I - r.T_rho, r.T_xi);
    le("T_J + T_xi <= T_Lambda", r.T_J + r.T_xi, r.T_Lambda);
    le("T_K + T_xi <= T_Lambda", r.T_K + r.T_xi, r.T_Lambda);
    const auto& mo = r.momenta;
    const double lscale = std::max(1.0, mo.Lambda2);
    if (mo.J2 + mo.L2 > mo.Lambda2 + tol * lscale && err.tellp() == 0) err << "J^2 + L^2 > Lambda^2";
    if (mo.K2 + mo.L2 > mo.Lambda2 + tol * lscale && err.tellp() == 0) err << "K^2 + L^2 > Lambda^2";
    eq("T_rot = E_out + E_in + E_c", r.T_rot, r.E_out + r.E_in + r.E_c);
    eq("E_out = E_outA + E_outB", r.E_out, r.E_outA + r.E_outB);
    eq("E_in = E_inA + E_inB", r.E_in, r.E_inA + r.E_inB);
    le("E_outB <= T_rot", r.E_outB, r.T_rot);
    le("E_inB <= T_rot", r.E_inB, r.T_rot);
    le("0 <= E_outB", 0.0, r.E_outB);
    le("0 <= E_inB", 0.0, r.E_inB);
  }
  return err.str();
}

}  // namespace kepart
