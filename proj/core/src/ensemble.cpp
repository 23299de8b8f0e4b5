#include "kepart/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kepart {

namespace {

constexpr double kTiny = 1e-300;

}  // namespace

std::string to_string(MassMode mode) { return mode == MassMode::Equal ? "equal" : "random"; }

MassMode parse_mass_mode(std::string_view text) {
  if (text == "equal") return MassMode::Equal;
  if (text == "random") return MassMode::Random;
  throw std::invalid_argument("unknown mass mode '" + std::string(text) +
                              "' (expected equal or random)");
}

Vec sample_sphere(Index d, RandomStream& rng) {
  if (d < 1) throw std::invalid_argument("sample_sphere: d must be positive");
  Vec s(d);
  if (d == 1) {
    s(0) = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return s;
  }
  if (d == 2) {
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    s << std::cos(phi), std::sin(phi);
    return s;
  }
  for (;;) {
    for (Index i = 0; i < d; ++i) s(i) = rng.normal();
    const double len = s.norm();
    if (len >= kTiny) return s / len;
  }
}

Vec sample_ball(Index d, RandomStream& rng) {
  Vec s = sample_sphere(d, rng);
  const double kappa = rng.uniform();
  return std::pow(kappa, 1.0 / static_cast<double>(d)) * s;
}

ParticleSystem sample_system(Index d, Index N, MassMode mode, RandomStream& rng) {
  if (d < 1) throw std::invalid_argument("sample_system: d must be positive");
  if (N < 2) throw std::invalid_argument("sample_system: N must be at least 2");

  ParticleSystem sys;
  sys.d = d;
  sys.N = N;
  sys.masses.resize(N);
  if (mode == MassMode::Equal) {
    sys.masses.setConstant(2.0 / static_cast<double>(N));
  } else {
    for (Index a = 0; a < N; ++a) {
      double eta = 0.0;
      do {
        eta = rng.uniform();
      } while (eta < kTiny);
      sys.masses(a) = eta;
    }
    sys.masses *= 2.0 / sys.masses.sum();
  }

  // Coincident draws leave nothing to normalize; they have probability zero.
  for (;;) {
    Mat w(d, N);
    Mat wdot(d, N);
    for (Index a = 0; a < N; ++a) w.col(a) = sample_ball(d, rng);
    for (Index a = 0; a < N; ++a) wdot.col(a) = sample_ball(d, rng);
    w.colwise() -= w.rowwise().mean();
    wdot.colwise() -= wdot.rowwise().mean();
    if (mode == MassMode::Random) {
      for (Index a = 0; a < N; ++a) {
        const double scale = 1.0 / std::sqrt(sys.masses(a));
        w.col(a) *= scale;
        wdot.col(a) *= scale;
      }
    }
    const double c1 = w.norm();
    const double c2 = wdot.norm();
    if (c1 < kTiny || c2 < kTiny) continue;
    sys.Z = w / c1;
    sys.Zdot = wdot / c2;
    return sys;
  }
}

ParticleSystem system_from_raw(const Vec& masses, const Mat& positions, const Mat& velocities) {
  const Index n = masses.size();
  if (n < 1) throw std::invalid_argument("system: no particles");
  if (positions.cols() != n || velocities.cols() != n) {
    throw std::invalid_argument("system: positions and velocities need one column per mass");
  }
  if (positions.rows() != velocities.rows() || positions.rows() < 1) {
    throw std::invalid_argument("system: positions and velocities must share a positive dimension");
  }
  require_finite(masses, "masses");
  require_finite(positions, "positions");
  require_finite(velocities, "velocities");
  if ((masses.array() <= 0.0).any()) throw std::invalid_argument("system: masses must be positive");

  ParticleSystem sys;
  sys.d = positions.rows();
  sys.N = n;
  sys.masses = masses;
  const double total = masses.sum();
  sys.Z = positions;
  sys.Zdot = velocities;
  for (Index a = 0; a < n; ++a) {
    const double w = std::sqrt(masses(a) / total);
    sys.Z.col(a) *= w;
    sys.Zdot.col(a) *= w;
  }
  return sys;
}

}  // namespace kepart
