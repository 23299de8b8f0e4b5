#pragma once

#include "kepart/linalg.hpp"

namespace kepart {

/// Brute-force tangent-space projections of Ż, used to check the SVD-frame
/// fast path. Intended for small shapes only: the generator matrix has
/// d·n rows and d(d−1)/2 + n(n−1)/2 columns.
struct OracleResult {
  double T_ext = 0.0;
  double T_int = 0.0;
  double T_rot = 0.0;
  double E_out = 0.0;
  double E_in = 0.0;
  /// False when {ℛ·Z} and {Z·𝒬} intersect beyond {0}, i.e. the split
  /// Z_rot = Z_out + Z_in is not unique. E_out and E_in are then zero.
  bool split_valid = false;
};

/// Projects Ż onto span{(E_pq − E_qp)·Z}, span{Z·(E_αβ − E_βα)} and their
/// sum through a rank-revealing pseudo-inverse (singular values of the
/// generator matrix below 1e-8 of the largest are dropped).
OracleResult project_oracle(double total_mass, const Mat& z, const Mat& zdot);

struct EigenFormResult {
  double E_outA = 0.0;
  double E_outB = 0.0;
  double E_inA = 0.0;
  double E_inB = 0.0;
  /// False when two positive eigenvalues of Z·Zᵀ coincide.
  bool valid = false;
};

/// The refined singular-expansion terms from eigenvector derivatives of
/// Z·Zᵀ and Zᵀ·Z (first-order perturbation theory), independent of the
/// SVD frame.
EigenFormResult eigen_form_oracle(double total_mass, const Mat& z, const Mat& zdot);

}  // namespace kepart
