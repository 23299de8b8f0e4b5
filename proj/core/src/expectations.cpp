#include "kepart/expectations.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <stdexcept>
#include <string>

namespace kepart {

namespace {

using Rational = boost::rational<long long>;

Fraction to_fraction(const Rational& r) { return {r.numerator(), r.denominator()}; }

struct FitCoefficients {
  Term term;
  double a;
  double b;
};

// The two signed parts of T_res were fitted with b = 0.78 and 0.80; both
// use the average.
constexpr FitCoefficients kFits[] = {
    {Term::T_Lambda, 1.88, -4.04}, {Term::T_rho, 0.12, 2.04},     {Term::T_rot, 1.83, -5.2},
    {Term::T_I, 0.17, 3.2},        {Term::T_xi, 0.05, 1.15},      {Term::T_ext, 0.12, 2.05},
    {Term::T_J, 0.12, 2.05},       {Term::T_int, 1.71, -7.22},    {Term::T_res_pos, 0.03, 0.79},
    {Term::T_res_neg, 0.03, 0.79}, {Term::T_K, 0.88, -3.03},      {Term::T_ac, 0.83, -4.22},
    {Term::E_inB, 1.66, -8.39},
};

}  // namespace

std::optional<Fraction> ExpectationSet::exact(Term t) const {
  for (const auto& [term, frac] : entries) {
    if (term == t) return frac;
  }
  return std::nullopt;
}

std::optional<double> ExpectationSet::value(Term t) const {
  const auto f = exact(t);
  if (!f) return std::nullopt;
  return f->value();
}

ExpectationSet conjecture_means(int d, int N) {
  if (d < 1) throw std::invalid_argument("conjecture_means: d must be positive");
  if (N < 2) throw std::invalid_argument("conjecture_means: N must be at least 2");
  ExpectationSet e;
  e.d = d;
  e.N = N;
  e.nu = N - 1;
  e.omega = std::min(d, e.nu);

  const long long dd = d;
  const long long nu = e.nu;
  const long long om = e.omega;
  const Rational one(1);
  const Rational dnu(dd * nu);

  auto add = [&](Term t, const Rational& r) { e.entries.emplace_back(t, to_fraction(r)); };
  add(Term::T_Lambda, one - one / dnu);
  add(Term::T_rho, one / dnu);
  add(Term::T_rot, one - Rational(om) / dnu);
  add(Term::T_I, Rational(om) / dnu);
  add(Term::T_xi, Rational(om - 1) / dnu);
  add(Term::T_ext, Rational(om * (2 * dd - om - 1)) / (2 * dnu));
  add(Term::T_int, Rational(om * (2 * nu - om - 1)) / (2 * dnu));
  add(Term::T_res, Rational(0));
  add(Term::T_J, Rational(dd - 1) / dnu);
  add(Term::T_K, Rational(nu - 1) / dnu);
  add(Term::T_ac, one - Rational(dd + nu + om - 2) / dnu);
  add(Term::E_outB, one - Rational(om, dd));
  add(Term::E_inB, one - Rational(om, nu));
  return e;
}

ExpectationSet expectations_for(int d, int N, MassMode mode) {
  ExpectationSet all = conjecture_means(d, N);
  if (mode == MassMode::Equal || N == 2) return all;
  ExpectationSet e = all;
  e.entries.clear();
  for (const auto& entry : all.entries) {
    const Term t = entry.first;
    if (t == Term::T_res || (t == Term::E_outB && e.nu >= d) || (t == Term::E_inB && e.nu <= d)) {
      e.entries.push_back(entry);
    }
  }
  return e;
}

double residual_magnitude_approx(int d, int N) {
  if (d < 1 || N < 2) throw std::invalid_argument("residual_magnitude_approx: need d >= 1, N >= 2");
  const double nu = N - 1;
  return 5.0 * (d - 1) / (8.0 * d * nu);
}

double random_mass_fit(Term t, int N) {
  if (N < 2) throw std::invalid_argument("random_mass_fit: N must be at least 2");
  for (const auto& f : kFits) {
    if (f.term == t) return (f.a * N + f.b) / (2.0 * (N - 1));
  }
  throw std::invalid_argument("random_mass_fit: no fit for term " + std::string(term_name(t)));
}

}  // namespace kepart
