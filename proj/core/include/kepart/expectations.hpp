#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kepart/ensemble.hpp"
#include "kepart/terms.hpp"

namespace kepart {

/// Reduced fraction num/den with den > 0.
struct Fraction {
  long long num = 0;
  long long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Closed-form mean values of the bounded terms for one (d, N).
struct ExpectationSet {
  int d = 0;
  int N = 0;
  int nu = 0;     // N − 1
  int omega = 0;  // min(d, ν)
  std::vector<std::pair<Term, Fraction>> entries;

  std::optional<Fraction> exact(Term t) const;
  std::optional<double> value(Term t) const;
};

/// Mean values of the 13 bounded terms for equal masses, with ν = N − 1
/// and ω = min(d, ν):
///   E[T_Λ] = 1 − 1/(dν)            E[T_ρ] = 1/(dν)
///   E[T_rot] = 1 − ω/(dν)          E[T_I] = ω/(dν)
///   E[T_ξ] = (ω − 1)/(dν)
///   E[T_ext] = ω(2d − ω − 1)/(2dν) E[T_int] = ω(2ν − ω − 1)/(2dν)
///   E[T_res] = 0
///   E[T_J] = (d − 1)/(dν)          E[T_K] = (ν − 1)/(dν)
///   E[T_ac] = 1 − (d + ν + ω − 2)/(dν)
///   E[E_outB] = 1 − ω/d            E[E_inB] = 1 − ω/ν
/// Evaluated in exact rational arithmetic. Throws std::invalid_argument for
/// d < 1 or N < 2.
ExpectationSet conjecture_means(int d, int N);

/// The subset of conjecture_means that is expected to hold for the given
/// mass mode. Equal masses: all 13 terms. Random masses: E[T_res] = 0,
/// E[E_outB] = 0 when ν ≥ d, E[E_inB] = 0 when ν ≤ d, and the full set for
/// N = 2 where the masses are irrelevant.
ExpectationSet expectations_for(int d, int N, MassMode mode);

/// Large-N approximation of E|T_res| for equal masses: 5(d − 1)/(8dν).
double residual_magnitude_approx(int d, int N);

/// Descriptive large-N fit (a·N + b)/(2ν) of random-mass means for d = 2,
/// valid roughly for 50 ≤ N ≤ 100. Defined for T_Lambda, T_rho, T_rot, T_I,
/// T_xi, T_ext, T_J, T_int, T_res_pos, T_res_neg, T_K, T_ac and E_inB.
/// Throws std::invalid_argument for other terms or N < 2.
double random_mass_fit(Term t, int N);

}  // namespace kepart
