#include <gtest/gtest.h>

#include <cstring>

#include "kepart/linalg.hpp"
#include "kepart/random.hpp"
#include "test_support.hpp"

using namespace kepart;
using kepart::testing::gaussian;
using kepart::testing::max_abs;

namespace {

void expect_valid_svd(const Mat& z, const SvdFactors& f, bool thin) {
  const Index d = z.rows();
  const Index n = z.cols();
  const Index m = std::min(d, n);
  ASSERT_EQ(f.D.rows(), d);
  ASSERT_EQ(f.D.cols(), d);
  ASSERT_EQ(f.xi.size(), m);
  ASSERT_EQ(f.X.rows(), n);
  ASSERT_EQ(f.X.cols(), thin ? m : n);
  EXPECT_LE(max_abs(f.D.transpose() * f.D - Mat::Identity(d, d)), 1e-12);
  EXPECT_LE(max_abs(f.X.transpose() * f.X - Mat::Identity(f.X.cols(), f.X.cols())), 1e-12);
  for (Index k = 0; k + 1 < m; ++k) EXPECT_GE(f.xi(k), f.xi(k + 1));
  EXPECT_GE(f.xi(m - 1), 0.0);
  Mat ups = Mat::Zero(d, f.X.cols());
  for (Index k = 0; k < m; ++k) ups(k, k) = f.xi(k);
  EXPECT_LE((f.D * ups * f.X.transpose() - z).norm(), 1e-12 * std::max(1.0, z.norm()));
}

}  // namespace

TEST(Frobenius, IdentityInnerProductIsTrace) {
  EXPECT_DOUBLE_EQ(frobenius_inner(Mat::Identity(2, 2), Mat::Identity(2, 2)), 2.0);
}

TEST(Frobenius, MatchesDoubleLoop) {
  RandomStream rng(1, 0);
  const Mat a = gaussian(3, 4, rng);
  const Mat b = gaussian(3, 4, rng);
  double sum = 0.0;
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 4; ++j) sum += a(i, j) * b(i, j);
  }
  EXPECT_NEAR(frobenius_inner(a, b), sum, 1e-14);
}

TEST(Frobenius, ShapeMismatchThrows) {
  EXPECT_THROW(frobenius_inner(Mat::Zero(2, 3), Mat::Zero(3, 2)), std::invalid_argument);
}

TEST(Frobenius, NormSquaredIsSumOfSquaredSingularValues) {
  RandomStream rng(2, 0);
  for (int t = 0; t < 50; ++t) {
    const Mat z = gaussian(1 + t % 4, 1 + t % 7, rng);
    const double fn = frobenius_norm(z);
    EXPECT_NEAR(fn * fn, svd(z).xi.squaredNorm(), 1e-10 * fn * fn);
  }
}

TEST(Svd, DiagonalInput) {
  Mat z(2, 2);
  z << 3, 0, 0, 1;
  const SvdFactors f = svd(z);
  EXPECT_NEAR(f.xi(0), 3.0, 1e-15);
  EXPECT_NEAR(f.xi(1), 1.0, 1e-15);
  EXPECT_LE(max_abs(f.D.cwiseAbs() - Mat::Identity(2, 2)), 1e-15);
  EXPECT_LE(max_abs(f.X.cwiseAbs() - Mat::Identity(2, 2)), 1e-15);
  expect_valid_svd(z, f, false);
}

TEST(Svd, PermutationHasUnitSingularValues) {
  Mat z(2, 2);
  z << 0, 1, 1, 0;
  const SvdFactors f = svd(z);
  EXPECT_NEAR(f.xi(0), 1.0, 1e-15);
  EXPECT_NEAR(f.xi(1), 1.0, 1e-15);
  expect_valid_svd(z, f, false);
}

TEST(Svd, WideMatchesEigenvaluesOfGram) {
  RandomStream rng(3, 0);
  const Mat z = gaussian(2, 9, rng);
  const SvdFactors f = svd(z);
  const SymEigen e = sym_eigen(z * z.transpose());
  for (Index k = 0; k < 2; ++k) EXPECT_NEAR(f.xi(k) * f.xi(k), e.values(k), 1e-10);
}

TEST(Svd, RandomShapesSatisfyInvariants) {
  RandomStream rng(4, 0);
  for (Index d = 1; d <= 6; ++d) {
    for (Index n = 1; n <= 9; ++n) {
      const Mat z = gaussian(d, n, rng);
      expect_valid_svd(z, svd(z), false);
      expect_valid_svd(z, thin_svd(z), true);
    }
  }
}

TEST(Svd, RankDeficientInputs) {
  RandomStream rng(5, 0);
  for (Index d = 1; d <= 5; ++d) {
    for (Index n = 1; n <= 6; ++n) {
      for (Index r = 0; r <= std::min(d, n); ++r) {
        const Mat z = r == 0 ? Mat(Mat::Zero(d, n)) : Mat(gaussian(d, r, rng) * gaussian(r, n, rng));
        const SvdFactors f = svd(z);
        expect_valid_svd(z, f, false);
        expect_valid_svd(z, thin_svd(z), true);
        for (Index k = r; k < f.xi.size(); ++k) EXPECT_LE(f.xi(k), 1e-13 * std::max(1.0, z.norm()));
      }
    }
  }
}

TEST(Svd, CenteredColumnsHaveAnExactNullDirection) {
  // Mass-centered two-particle configurations are rank one.
  RandomStream rng(6, 0);
  for (int t = 0; t < 200; ++t) {
    Mat z = gaussian(3, 2, rng);
    z.col(1) = -rng.uniform() * z.col(0);
    expect_valid_svd(z, svd(z), false);
    expect_valid_svd(z.transpose(), svd(z.transpose()), false);
  }
}

TEST(Svd, LargestEntryOfEachLeftVectorIsPositive) {
  RandomStream rng(7, 0);
  const SvdFactors f = svd(gaussian(4, 6, rng));
  for (Index k = 0; k < 4; ++k) {
    Index best = 0;
    f.D.col(k).cwiseAbs().maxCoeff(&best);
    EXPECT_GT(f.D(best, k), 0.0);
  }
}

TEST(Svd, BitReproducible) {
  RandomStream rng(8, 0);
  const Mat z = gaussian(3, 7, rng);
  const SvdFactors a = svd(z);
  const SvdFactors b = svd(z);
  EXPECT_EQ(std::memcmp(a.D.data(), b.D.data(), sizeof(double) * a.D.size()), 0);
  EXPECT_EQ(std::memcmp(a.X.data(), b.X.data(), sizeof(double) * a.X.size()), 0);
  EXPECT_EQ(std::memcmp(a.xi.data(), b.xi.data(), sizeof(double) * a.xi.size()), 0);
}

TEST(Svd, RejectsNonFinite) {
  Mat z = Mat::Ones(2, 2);
  z(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(z), std::invalid_argument);
}

TEST(SymEigen, Identity) {
  const SymEigen e = sym_eigen(Mat::Identity(3, 3));
  for (Index k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(e.values(k), 1.0);
}

TEST(SymEigen, DiagonalWithZero) {
  Mat s(2, 2);
  s << 4, 0, 0, 0;
  const SymEigen e = sym_eigen(s);
  EXPECT_DOUBLE_EQ(e.values(0), 4.0);
  EXPECT_DOUBLE_EQ(e.values(1), 0.0);
  EXPECT_LE(max_abs(e.vectors - Mat::Identity(2, 2)), 0.0);
}

TEST(SymEigen, GramOfWideMatrixMatchesPaddedSingularValues) {
  RandomStream rng(9, 0);
  const Mat z = gaussian(3, 5, rng);
  const SymEigen e = sym_eigen(z.transpose() * z);
  const SvdFactors f = svd(z);
  for (Index k = 0; k < 5; ++k) {
    const double expected = k < 3 ? f.xi(k) * f.xi(k) : 0.0;
    EXPECT_NEAR(e.values(k), expected, 1e-10);
  }
}

TEST(SymEigen, ResidualAndOrthogonality) {
  RandomStream rng(10, 0);
  for (Index n = 1; n <= 8; ++n) {
    const Mat g = gaussian(n, n, rng);
    const Mat s = g + g.transpose();
    const SymEigen e = sym_eigen(s);
    EXPECT_LE(max_abs(e.vectors.transpose() * e.vectors - Mat::Identity(n, n)), 1e-12);
    EXPECT_LE(max_abs(s * e.vectors - e.vectors * e.values.asDiagonal()),
              1e-10 * max_abs(s));
  }
}

TEST(SymEigen, RejectsAsymmetric) {
  Mat s(2, 2);
  s << 1, 2, 0, 1;
  EXPECT_THROW(sym_eigen(s), std::invalid_argument);
}

TEST(RandomOrthogonal, DimensionOneIsSign) {
  RandomStream rng(11, 0);
  for (int t = 0; t < 20; ++t) EXPECT_DOUBLE_EQ(std::abs(random_orthogonal(1, rng)(0, 0)), 1.0);
}

TEST(RandomOrthogonal, IsOrthogonal) {
  RandomStream rng(12, 0);
  for (Index n = 1; n <= 10; ++n) {
    const Mat q = random_orthogonal(n, rng);
    EXPECT_LE(max_abs(q.transpose() * q - Mat::Identity(n, n)), 1e-12);
  }
}

TEST(RandomOrthogonal, FirstColumnUniformOnSphere) {
  // E[Q₁₁²] = 1/dim for a uniform unit vector.
  RandomStream rng(13, 0);
  const int draws = 10000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double q = random_orthogonal(4, rng)(0, 0);
    sum += q * q;
    sum2 += q * q * q * q;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
  EXPECT_NEAR(mean, 0.25, 3.0 * se);
}

TEST(RandomOrthogonal, RejectsZeroDimension) {
  RandomStream rng(14, 0);
  EXPECT_THROW(random_orthogonal(0, rng), std::invalid_argument);
}

TEST(CompleteOrthonormal, ExtendsBasis) {
  Mat basis(3, 1);
  basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  const Mat q = complete_orthonormal(basis, 3);
  EXPECT_LE(max_abs(q.transpose() * q - Mat::Identity(3, 3)), 1e-15);
  EXPECT_LE(max_abs(q.col(0) - basis), 0.0);
}
