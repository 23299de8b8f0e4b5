#include <gtest/gtest.h>

#include <cmath>

#include "kepart/ensemble.hpp"
#include "kepart/oracle.hpp"
#include "kepart/partition.hpp"
#include "kepart/terms.hpp"
#include "test_support.hpp"

using namespace kepart;
using kepart::testing::gaussian;
using kepart::testing::max_abs;
using kepart::testing::rel;

namespace {

constexpr std::size_t kPartitionTerms = static_cast<std::size_t>(Term::E_c) + 1;

Mat two_body_z() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat z(2, 2);
  z << s, -s, 0.0, 0.0;
  return z;
}

Mat two_body_zdot() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat zd(2, 2);
  zd << 0.0, 0.0, s, -s;
  return zd;
}

double max_term_rel(const PartitionResult& a, const PartitionResult& b, bool with_expansion) {
  double worst = 0.0;
  for (std::size_t k = 0; k < kPartitionTerms; ++k) {
    const Term t = static_cast<Term>(k);
    if (!with_expansion && is_expansion_term(t)) continue;
    worst = std::max(worst, rel(term_value(a, t), term_value(b, t)));
  }
  return worst;
}

// Orthogonal symmetric Q (a Householder reflection) whose last row is
// (m_α/M)^{1/2}.
Mat reduction_matrix(const Vec& masses) {
  const Index n = masses.size();
  const Vec w = (masses / masses.sum()).cwiseSqrt();
  Vec v = w;
  v(n - 1) -= 1.0;
  const double vv = v.squaredNorm();
  if (vv == 0.0) return Mat::Identity(n, n);
  return Mat::Identity(n, n) - 2.0 * v * v.transpose() / vv;
}

}  // namespace

TEST(SvdRates, DiagonalRatesOnly) {
  Mat z(2, 2);
  z << 2, 0, 0, 1;
  Mat zd(2, 2);
  zd << 0.3, 0, 0, -0.1;
  const SvdFrame fr = svd_rates(z, zd);
  EXPECT_NEAR(fr.xidot(0), 0.3, 1e-15);
  EXPECT_NEAR(fr.xidot(1), -0.1, 1e-15);
  EXPECT_LE(max_abs(fr.A), 1e-15);
  EXPECT_LE(max_abs(fr.B), 1e-15);
}

TEST(SvdRates, HandSolvedPair) {
  Mat z(2, 2);
  z << 2, 0, 0, 1;
  Mat zd(2, 2);
  zd << 0, 1, 0, 0;
  const SvdFrame fr = svd_rates(z, zd);
  EXPECT_LE(max_abs(fr.W - zd), 1e-15);
  EXPECT_NEAR(fr.A(0, 1), -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(fr.B(0, 1), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(fr.A(1, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(fr.B(1, 0), 2.0 / 3.0, 1e-15);
}

TEST(SvdRates, ReconstructsRate) {
  RandomStream rng(1, 0);
  for (Index d = 1; d <= 5; ++d) {
    for (Index n = 1; n <= 7; ++n) {
      const Mat z = gaussian(d, n, rng);
      const Mat zd = gaussian(d, n, rng);
      const SvdFrame fr = svd_rates(z, zd);
      ASSERT_FALSE(fr.degenerate);
      EXPECT_LE(max_abs(fr.A + fr.A.transpose()), 0.0);
      EXPECT_LE(max_abs(fr.B + fr.B.transpose()), 0.0);
      const Index m = fr.xi.size();
      Mat ups = Mat::Zero(d, m);
      for (Index k = 0; k < m; ++k) ups(k, k) = fr.xi(k);
      // Leading block: W = A·Υ + Υ̇ − Υ·B.
      Mat rebuilt = fr.A * ups - ups * fr.B;
      for (Index k = 0; k < m; ++k) rebuilt(k, k) += fr.xidot(k);
      EXPECT_LE(max_abs(rebuilt - fr.W), 1e-10 * zd.norm()) << d << "x" << n;
      // Remaining columns (n > d) carry the tail: Σ W_σα² = ξ_σ²·Σ B_ασ².
      for (Index s = 0; s < m; ++s) {
        EXPECT_NEAR(fr.B_tail_sq(s) * fr.xi(s) * fr.xi(s), fr.tail_sq(s), 1e-10);
      }
      // Total energy is conserved in the frame.
      EXPECT_NEAR(fr.W.squaredNorm() + fr.tail_sq.sum(), zd.squaredNorm(), 1e-10);
    }
  }
}

TEST(SvdRates, ZeroMatrixThrows) {
  EXPECT_THROW(svd_rates(Mat::Zero(2, 3), Mat::Ones(2, 3)), std::invalid_argument);
  EXPECT_THROW(svd_rates(Mat::Ones(2, 3), Mat::Ones(3, 2)), std::invalid_argument);
}

TEST(Partition, TwoBodyPerpendicular) {
  const PartitionResult r = compute_partition(2.0, two_body_z(), two_body_zdot());
  EXPECT_NEAR(r.T, 1.0, 1e-14);
  EXPECT_NEAR(r.T_rho, 0.0, 1e-14);
  for (double v : {r.T_Lambda, r.T_rot, r.T_ext, r.T_J, r.E_out, r.E_outB}) EXPECT_NEAR(v, 1.0, 1e-14);
  for (double v : {r.T_xi, r.T_int, r.T_K, r.E_in, r.E_c}) EXPECT_NEAR(v, 0.0, 1e-14);
  EXPECT_FALSE(r.degenerate);
}

TEST(Partition, PureDilation) {
  const Mat z = two_body_z();
  const PartitionResult r = compute_partition(2.0, z, z);
  EXPECT_NEAR(r.T, 1.0, 1e-14);
  EXPECT_NEAR(r.T_rho, 1.0, 1e-14);
  EXPECT_NEAR(r.T_I, 1.0, 1e-14);
  for (double v : {r.T_Lambda, r.T_rot, r.T_ext, r.T_int, r.T_J, r.T_K, r.E_out, r.E_in, r.E_c}) {
    EXPECT_NEAR(v, 0.0, 1e-14);
  }
}

TEST(Partition, OneByOne) {
  const Mat one = Mat::Ones(1, 1);
  const PartitionResult r = compute_partition(1.0, one, one);
  EXPECT_EQ(r.T_ext, 0.0);
  EXPECT_EQ(r.T_int, 0.0);
  EXPECT_NEAR(r.T_rot, 0.0, 1e-15);
  const OracleResult o = project_oracle(1.0, one, one);
  EXPECT_EQ(o.T_ext, 0.0);
  EXPECT_EQ(o.T_int, 0.0);
  EXPECT_EQ(o.T_rot, 0.0);
}

TEST(Partition, Errors) {
  EXPECT_THROW(compute_partition(2.0, Mat::Zero(2, 2), Mat::Ones(2, 2)), std::invalid_argument);
  EXPECT_THROW(compute_partition(0.0, Mat::Ones(2, 2), Mat::Ones(2, 2)), std::invalid_argument);
  Mat bad = Mat::Ones(2, 2);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(compute_partition(2.0, Mat::Ones(2, 2), bad), std::invalid_argument);
}

TEST(Partition, IdentitiesOnSampledSystems) {
  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    for (Index d : {1, 2, 3, 5}) {
      for (Index n = 2; n <= 8; ++n) {
        for (std::uint64_t i = 0; i < 10000; ++i) {
          RandomStream rng(11 + static_cast<std::uint64_t>(d), i * 16 + static_cast<std::uint64_t>(n));
          const ParticleSystem s = sample_system(d, n, mode, rng);
          const PartitionResult r = compute_partition(s.total_mass(), s.Z, s.Zdot);
          const std::string err = check_partition_identities(r);
          ASSERT_TRUE(err.empty()) << "d=" << d << " N=" << n << " sample " << i << ": " << err;
        }
      }
    }
  }
}

TEST(Partition, PlanarSpecialCases) {
  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    for (Index n = 3; n <= 8; ++n) {
      for (std::uint64_t i = 0; i < 500; ++i) {
        RandomStream rng(12, i * 16 + static_cast<std::uint64_t>(n));
        const ParticleSystem s = sample_system(2, n, mode, rng);
        const PartitionResult r = compute_partition(s.total_mass(), s.Z, s.Zdot);
        EXPECT_NEAR(r.T_J, r.T_ext, 1e-9);
        EXPECT_NEAR(r.E_outB, 0.0, 1e-12);
        if (n == 3) {
          EXPECT_NEAR(r.T_K, r.T_int, 1e-9);
          EXPECT_NEAR(r.E_inB, 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(Partition, OrthogonalInvariance) {
  RandomStream outer(13, 0);
  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    for (Index d : {1, 2, 3, 5}) {
      for (Index n = 2; n <= 8; ++n) {
        for (std::uint64_t i = 0; i < 20; ++i) {
          RandomStream rng(14, i * 16 + static_cast<std::uint64_t>(n));
          const ParticleSystem s = sample_system(d, n, mode, rng);
          const Mat rot = random_orthogonal(d, outer);
          const Mat q = random_orthogonal(n, outer);
          const PartitionResult a = compute_partition(2.0, s.Z, s.Zdot);
          const PartitionResult b =
              compute_partition(2.0, rot * s.Z * q.transpose(), rot * s.Zdot * q.transpose());
          EXPECT_LE(max_term_rel(a, b, !a.degenerate && !b.degenerate), 1e-8)
              << "d=" << d << " N=" << n;
        }
      }
    }
  }
}

TEST(Partition, ZeroColumnAugmentation) {
  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    for (Index d : {1, 2, 3, 5}) {
      for (Index n = 2; n <= 8; ++n) {
        for (std::uint64_t i = 0; i < 20; ++i) {
          RandomStream rng(15, i * 16 + static_cast<std::uint64_t>(n));
          const ParticleSystem s = sample_system(d, n, mode, rng);
          Mat z = Mat::Zero(d, n + 1);
          Mat zd = Mat::Zero(d, n + 1);
          z.leftCols(n) = s.Z;
          zd.leftCols(n) = s.Zdot;
          const PartitionResult a = compute_partition(2.0, s.Z, s.Zdot);
          const PartitionResult b = compute_partition(2.0, z, zd);
          EXPECT_LE(max_term_rel(a, b, !a.degenerate), 1e-10) << "d=" << d << " N=" << n;
        }
      }
    }
  }
}

TEST(Partition, ReductionConsistency) {
  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    for (Index d : {1, 2, 3, 5}) {
      for (Index n = 2; n <= 8; ++n) {
        for (std::uint64_t i = 0; i < 20; ++i) {
          RandomStream rng(16, i * 16 + static_cast<std::uint64_t>(n));
          const ParticleSystem s = sample_system(d, n, mode, rng);
          const Mat q = reduction_matrix(s.masses);
          ASSERT_LE(max_abs(q * q.transpose() - Mat::Identity(n, n)), 1e-14);
          const Mat zq = s.Z * q.transpose();
          const Mat zdq = s.Zdot * q.transpose();
          ASSERT_LE(zq.col(n - 1).norm(), 1e-14);
          ASSERT_LE(zdq.col(n - 1).norm(), 1e-14);
          const PartitionResult full = compute_partition(2.0, s.Z, s.Zdot);
          const PartitionResult reduced =
              compute_partition(2.0, zq.leftCols(n - 1), zdq.leftCols(n - 1));
          EXPECT_LE(max_term_rel(full, reduced, !full.degenerate), 1e-9) << "d=" << d << " N=" << n;
        }
      }
    }
  }
}

TEST(Partition, SingularMomentumEnergyMatchesNormalExcess) {
  RandomStream rng(17, 0);
  for (int t = 0; t < 200; ++t) {
    const Index d = 1 + t % 5;
    const Index n = 1 + (t / 5) % 7;
    const PartitionResult r = compute_partition(2.0, gaussian(d, n, rng), gaussian(d, n, rng));
    EXPECT_NEAR(r.T_xi, r.T_I - r.T_rho, 1e-9);
    EXPECT_NEAR(r.T_xi, r.T_Lambda - r.T_rot, 1e-9);
  }
}

TEST(Partition, FastPathMatchesProjectionOracle) {
  std::uint64_t compared_split = 0;
  for (MassMode mode : {MassMode::Equal, MassMode::Random}) {
    for (Index d : {1, 2, 3}) {
      for (Index n = 2; n <= 6; ++n) {
        for (std::uint64_t i = 0; i < 7; ++i) {
          RandomStream rng(18, i * 16 + static_cast<std::uint64_t>(n));
          const ParticleSystem s = sample_system(d, n, mode, rng);
          const PartitionResult r = compute_partition(2.0, s.Z, s.Zdot);
          const OracleResult o = project_oracle(2.0, s.Z, s.Zdot);
          EXPECT_LE(rel(r.T_ext, o.T_ext), 1e-8);
          EXPECT_LE(rel(r.T_int, o.T_int), 1e-8);
          EXPECT_LE(rel(r.T_rot, o.T_rot), 1e-8);
          if (!r.degenerate && o.split_valid) {
            EXPECT_LE(rel(r.E_out, o.E_out), 1e-8);
            EXPECT_LE(rel(r.E_in, o.E_in), 1e-8);
            ++compared_split;
          }
        }
      }
    }
  }
  EXPECT_GT(compared_split, 150u);
}

TEST(Partition, FrameMatchesEigenvectorForm) {
  RandomStream rng(19, 0);
  for (Index d = 1; d <= 5; ++d) {
    for (Index n = 1; n <= 7; ++n) {
      const Mat z = gaussian(d, n, rng);
      const Mat zd = gaussian(d, n, rng);
      const PartitionResult r = compute_partition(2.0, z, zd);
      const EigenFormResult e = eigen_form_oracle(2.0, z, zd);
      ASSERT_TRUE(e.valid);
      EXPECT_LE(rel(r.E_outA, e.E_outA), 1e-8) << d << "x" << n;
      EXPECT_LE(rel(r.E_outB, e.E_outB), 1e-8) << d << "x" << n;
      EXPECT_LE(rel(r.E_inA, e.E_inA), 1e-8) << d << "x" << n;
      EXPECT_LE(rel(r.E_inB, e.E_inB), 1e-8) << d << "x" << n;
    }
  }
}

TEST(Partition, TwoBodyOracle) {
  const OracleResult o = project_oracle(2.0, two_body_z(), two_body_zdot());
  EXPECT_NEAR(o.T_ext, 1.0, 1e-14);
  EXPECT_NEAR(o.T_int, 0.0, 1e-14);
}

TEST(Partition, RepeatedSingularValuesAreFlagged) {
  Mat z = Mat::Zero(2, 3);
  z(0, 0) = 1.0 / std::sqrt(2.0);
  z(1, 1) = 1.0 / std::sqrt(2.0);
  RandomStream rng(20, 0);
  const Mat zd = gaussian(2, 3, rng);
  const PartitionResult r = compute_partition(2.0, z, zd);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.T, r.T_Lambda + r.T_rho, 1e-12);
  EXPECT_NEAR(r.T, r.T_rot + r.T_I, 1e-12);
  EXPECT_NEAR(r.T_rot, project_oracle(2.0, z, zd).T_rot, 1e-10);
  EXPECT_NEAR(r.T_ext, project_oracle(2.0, z, zd).T_ext, 1e-10);
  EXPECT_FALSE(project_oracle(2.0, z, zd).split_valid);
  EXPECT_TRUE(check_partition_identities(r).empty()) << check_partition_identities(r);
}

TEST(Partition, CheckerReportsViolations) {
  PartitionResult r = compute_partition(2.0, two_body_z(), two_body_zdot());
  EXPECT_TRUE(check_partition_identities(r).empty());
  r.T_rho += 0.1;
  EXPECT_FALSE(check_partition_identities(r).empty());
}
