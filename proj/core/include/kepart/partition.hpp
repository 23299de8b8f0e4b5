#pragma once

#include <string>

#include "kepart/linalg.hpp"
#include "kepart/momenta.hpp"

namespace kepart {

/// Thresholds deciding when singular values count as zero or as equal.
/// Both are relative to the largest singular value ξ₁.
struct ToleranceConfig {
  /// Positive singular values σ, τ are "distinct" iff |ξ_σ² − ξ_τ²| > gap_rel·ξ₁².
  double gap_rel = 1e-9;
  /// ξ_σ counts as zero iff ξ_σ ≤ zero_rel·ξ₁.
  double zero_rel = 1e-12;
};

/// Singular value decomposition of Z together with its rate of change
/// along Ż, expressed in the SVD frame.
///
/// With Z = D·Υ·Xᵀ, A = Dᵀ·Ḋ (d×d, skew) and B = Xᵀ·Ẋ (skew), the rate
/// matrix W = Dᵀ·Ż·X satisfies W = A·Υ + Υ̇ − Υ·B. Only the first
/// m = min(d, n) columns of X are kept: entries of W and B that involve
/// columns beyond m enter every energy only through the per-row sums
/// `tail_sq` (Σ_{α>m} W_σα²), so the frame costs O(d²·n).
struct SvdFrame {
  Mat D;            // d×d
  Vec xi;           // m, descending
  Mat X;            // n×m
  Vec xidot;        // m, ξ̇_σ = W_σσ
  Mat W;            // d×m, leading columns of Dᵀ·Ż·X
  Vec tail_sq;      // m, Σ_{α>m} W_σα² (zero when n ≤ d)
  Mat A;            // d×d skew
  Mat B;            // m×m skew, leading block of Xᵀ·Ẋ
  Vec B_tail_sq;    // m, Σ_{α>m} B_ασ²
  Index k = 0;      // number of singular values above zero_tol
  double gap_tol = 0.0;
  double zero_tol = 0.0;
  bool degenerate = false;  // some pair of positive ξ closer than gap_tol
};

/// Builds the SVD frame and solves the rate equations for A, B and ξ̇.
///
/// For σ < τ < m with distinct squared singular values the pair
///   W_στ = A_στ·ξ_τ − ξ_σ·B_στ,   W_τσ = −A_στ·ξ_σ + ξ_τ·B_στ
/// is solved exactly; rows i ≥ m (d > n) give A_iσ = W_iσ/ξ_σ and columns
/// α ≥ m (n > d) give B_ασ² = W_σα²/ξ_σ². Pairs of equal positive singular
/// values are left at zero and mark the frame degenerate. Throws
/// std::invalid_argument for mismatched shapes, non-finite input or Z = 0.
SvdFrame svd_rates(const Mat& z, const Mat& zdot, const ToleranceConfig& cfg = {});

/// All energy terms of the five partitions for one system, plus the
/// squared hyperangular momenta.
struct PartitionResult {
  double T = 0.0;
  double T_Lambda = 0.0;
  double T_rho = 0.0;
  double T_rot = 0.0;
  double T_I = 0.0;
  double T_xi = 0.0;
  double T_ext = 0.0;
  double T_int = 0.0;
  double T_res = 0.0;
  double T_J = 0.0;
  double T_K = 0.0;
  double T_ac = 0.0;
  double E_out = 0.0;
  double E_outA = 0.0;
  double E_outB = 0.0;
  double E_in = 0.0;
  double E_inA = 0.0;
  double E_inB = 0.0;
  double E_c = 0.0;
  MomentaResult momenta;
  double rho = 0.0;
  double total_mass = 0.0;
  /// Set when two positive singular values are closer than the gap
  /// tolerance. The singular-expansion terms (E_*) are then computed with
  /// the unresolved pairs dropped and should not be trusted.
  bool degenerate = false;
};

/// Computes every partition term from the total mass M, the position
/// matrix Z and its rate Ż.
///
///   T = M/2·‖Ż‖²,  T = T_Λ + T_ρ,  T = T_rot + T_I
///   T_rot = T_ext + T_int + T_res = T_J + T_K + T_ac = E_out + E_in + E_c
///   E_out = E_outA + E_outB,  E_in = E_inA + E_inB
///
/// T_ext and T_int are the energies of the least-squares projections of Ż
/// onto {ℛ·Z} and {Z·𝒬} (ℛ, 𝒬 skew), solved in closed form in the SVD frame.
/// Throws std::invalid_argument for M ≤ 0, mismatched shapes, non-finite
/// input or a zero hyperradius.
PartitionResult compute_partition(double total_mass, const Mat& z, const Mat& zdot,
                                  const ToleranceConfig& cfg = {});

/// The partition identities and inequalities a result must satisfy, checked
/// with absolute tolerance `tol` scaled by max(1, T). Returns an empty
/// string when everything holds, otherwise a description of the first
/// violation. For degenerate results only the relations that do not
/// involve singular value rates or the singular expansion are checked.
std::string check_partition_identities(const PartitionResult& r, double tol = 1e-9);

}  // namespace kepart
