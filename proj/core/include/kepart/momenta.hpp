#pragma once

#include "kepart/linalg.hpp"

namespace kepart {

/// Squared hyperangular momenta of one system.
///
///   J  physical angular momentum (rotations in the d-dimensional space)
///   K  kinematic angular momentum (rotations among the n columns)
///   Λ  grand angular momentum (all 2×2 minors of (Z, Ż))
///   L  singular angular momentum (rotation of the singular-value vector)
///
/// All four are invariant under (Z, Ż) → (R·Z·Qᵀ, R·Ż·Qᵀ) and under appending
/// a zero column, and satisfy J² + L² ≤ Λ², K² + L² ≤ Λ².
struct MomentaResult {
  double J2 = 0.0;
  double K2 = 0.0;
  double Lambda2 = 0.0;
  double L2 = 0.0;
};

/// Reference implementation straight from the component sums. Costs
/// O(d²n + dn²) for J, K and O((dn)²) for Λ; use it to check momenta_fast.
MomentaResult momenta_direct(double total_mass, const Mat& z, const Mat& zdot, const Vec& xi,
                             const Vec& xidot);

/// O(d²·n) evaluation through d×d Gram matrices:
///   Λ² = M²(‖Z‖²‖Ż‖² − ⟨Z, Ż⟩²)
///   K² = M² Σ_ij [Δ¹_ij Δ³_ij − Δ²_ij Δ²_ji]
///   J² = M² Σ_αβ [Γ¹_αβ Γ³_αβ − Γ²_αβ Γ²_βα]
/// with Δ¹ = Z·Zᵀ, Δ² = Z·Żᵀ, Δ³ = Ż·Żᵀ and Γ the n×n analogues. The Γ sum
/// is reduced by cyclic trace identities to ‖Δ²‖² − Tr(Δ²Δ²), evaluated as
/// Σ_{i<j} (Δ²_ij − Δ²_ji)². Cancellation noise in K² and Λ² is clamped at 0.
///
/// L² uses the singular values `xi` and their rates `xidot` supplied by the
/// caller (normally the SVD frame of the partition module).
MomentaResult momenta_fast(double total_mass, const Mat& z, const Mat& zdot, const Vec& xi,
                           const Vec& xidot);

/// J² from the literal n×n Γ double sum. Test helper for momenta_fast.
double j2_gram_sum(double total_mass, const Mat& z, const Mat& zdot);

/// Σ_{σ<τ} M²(ξ_σ·ξ̇_τ − ξ_τ·ξ̇_σ)².
double singular_momentum_sq(double total_mass, const Vec& xi, const Vec& xidot);

}  // namespace kepart
