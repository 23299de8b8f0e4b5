#pragma once

#include <string>
#include <string_view>

#include "kepart/linalg.hpp"
#include "kepart/random.hpp"

namespace kepart {

enum class MassMode { Equal, Random };

std::string to_string(MassMode mode);

/// Parses "equal" or "random". Throws std::invalid_argument otherwise.
MassMode parse_mass_mode(std::string_view text);

/// An N-particle system in R^d with its center of mass at the origin.
/// Z and Zdot hold the mass-scaled coordinates q_α = (m_α/M)^{1/2}·r_α and
/// their rates as columns.
struct ParticleSystem {
  Index d = 0;
  Index N = 0;
  Vec masses;
  Mat Z;
  Mat Zdot;

  double total_mass() const { return masses.sum(); }
};

/// Uniform point on the unit sphere S^{d−1}: normalized Gaussian vector,
/// (cos φ, sin φ) for d = 2 and ±1 for d = 1.
Vec sample_sphere(Index d, RandomStream& rng);

/// Uniform point in the unit ball: κ^{1/d}·s with s from sample_sphere and
/// κ uniform on [0, 1].
Vec sample_ball(Index d, RandomStream& rng);

/// Draws 2N independent ball points for positions and velocities, removes
/// their centroids and rescales so that M = 2 and ‖Z‖ = ‖Ż‖ = 1 (ρ = T = 1).
/// Random masses are m_α = 2η_α/Ση with η_α uniform on [0, 1) (exact
/// underflow-level draws are redrawn); columns are
/// then weighted by m_α^{−1/2} before rescaling. Throws
/// std::invalid_argument for d < 1 or N < 2.
ParticleSystem sample_system(Index d, Index N, MassMode mode, RandomStream& rng);

/// Builds the mass-scaled system from raw masses, positions and velocities
/// (d×N, one particle per column). Positions and velocities are used as
/// given, without moving to the center-of-mass frame.
ParticleSystem system_from_raw(const Vec& masses, const Mat& positions, const Mat& velocities);

}  // namespace kepart
