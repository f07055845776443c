#include <cmath>

#include "coupled/eigen.hpp"
#include "coupled/errors.hpp"
#include "coupled/finite_diff.hpp"
#include "coupled/generate.hpp"
#include "coupled/rules_svd.hpp"
#include "coupled/stability.hpp"
#include "support.hpp"

namespace coupled {
namespace {

using testing::mat_near;
using testing::real_values;
using testing::spectrum_near;

/// True when every value of `want` can be matched to a distinct value of `got`.
::testing::AssertionResult contains(std::vector<Complex> got, const std::vector<Complex>& want, double tol) {
  for (const auto& w : want) {
    auto best = got.end();
    double dist = tol;
    for (auto it = got.begin(); it != got.end(); ++it)
      if (std::abs(*it - w) <= dist) {
        dist = std::abs(*it - w);
        best = it;
      }
    if (best == got.end()) return ::testing::AssertionFailure() << "missing " << w;
    got.erase(best);
  }
  return ::testing::AssertionSuccess();
}

Mat fd_sum_mod_jacobian(const Mat& a, const SvdState& q) {
  auto f = [&](const Vec& z) {
    return svd_rhs(SvdRuleKind::SUM_MOD, a, SvdState::unpack(z, a.rows(), a.cols(), true)).pack();
  };
  return fd_jacobian(f, q.pack());
}

TEST(StationaryQuadruple, SatisfiesAllSixEquations) {
  Mat a = make_cross({10, 2, 1}, 4, 3, 5);
  for (std::size_t i = 1; i <= 3; ++i) {
    SvdState q = stationary_quadruple(a, i);
    auto [viol, which] = stationarity_violation(a, q);
    EXPECT_LT(viol, 1e-12 * (1 + frobenius_norm(a))) << "triple " << i << " equation " << which;
    const double mu = dot(q.u, a * q.v) / (norm(q.u) * norm(q.v));
    EXPECT_NEAR(q.sigma * *q.rho, mu * mu, 1e-9 * mu * mu);
    EXPECT_NEAR(std::abs(mu), svd_factor(a).singular_values[i - 1], 1e-10);
  }
}

TEST(AnalyticJacobian, DiagonalPrincipalExample) {
  Mat a{{3, 0}, {0, 1}};
  SvdState q{Vec{1, 0}, Vec{1, 0}, 3, 3};
  Mat j = analytic_jacobian_at_stationary(a, q);
  // σ⁻¹(A - u𝟙ᵀA) = [[0, -1/3], [0, 1/3]]; the same for the ρ block.
  Mat want{{-1, 0, 0, -1.0 / 3, 0, 0},
           {0, -1, 0, 1.0 / 3, 0, 0},
           {0, -1.0 / 3, -1, 0, 0, 0},
           {0, 1.0 / 3, 0, -1, 0, 0},
           {0, 0, 3, 1, -1, 0},
           {3, 1, 0, 0, 0, -1}};
  EXPECT_TRUE(mat_near(j, want, 1e-15));
  EXPECT_TRUE(mat_near(fd_sum_mod_jacobian(a, q), want, 1e-5));
}

TEST(AnalyticJacobian, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 2 + seed % 3, m = n + seed % 2;
    std::vector<double> sv{6, 2, 1, 0.4};
    sv.resize(n);
    Mat a = make_cross(sv, m, n, seed);
    for (std::size_t i = 1; i <= n; ++i) {
      SvdState q = stationary_quadruple(a, i);
      Mat ja = analytic_jacobian_at_stationary(a, q);
      Mat jf = fd_sum_mod_jacobian(a, q);
      EXPECT_LT(max_abs_diff(ja, jf), 1e-5 * (1 + max_abs(Vec(ja.values())))) << "seed " << seed << " triple " << i;
    }
  }
}

TEST(AnalyticJacobian, PermutationEquivariance) {
  Mat a = make_cross({5, 2, 1}, 3, 3, 7);
  // Reverse rows, rotate columns.
  const std::size_t pr[] = {2, 1, 0};
  const std::size_t pc[] = {1, 2, 0};
  Mat b(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b(i, j) = a(pr[i], pc[j]);
  SvdState q = stationary_quadruple(a, 1);
  SvdState qb{Vec(3), Vec(3), q.sigma, q.rho};
  for (std::size_t i = 0; i < 3; ++i) {
    qb.u[i] = q.u[pr[i]];
    qb.v[i] = q.v[pc[i]];
  }
  Mat ja = analytic_jacobian_at_stationary(a, q);
  Mat jb = analytic_jacobian_at_stationary(b, qb);
  // Packed index map from b's coordinates to a's.
  std::size_t map[8];
  for (std::size_t i = 0; i < 3; ++i) {
    map[i] = pr[i];
    map[3 + i] = 3 + pc[i];
  }
  map[6] = 6;
  map[7] = 7;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(jb(i, j), ja(map[i], map[j]), 1e-12);
}

TEST(AnalyticJacobian, RejectsNonStationaryInput) {
  Mat a{{3, 0}, {0, 1}};
  try {
    analytic_jacobian_at_stationary(a, SvdState{Vec{1, 0}, Vec{1, 0}, 2.5, 3});
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma"), std::string::npos) << e.what();
  }
  EXPECT_THROW(analytic_jacobian_at_stationary(a, SvdState{Vec{0.5, 0.5}, Vec{1, 0}, 3, 3}), PreconditionError);
}

TEST(PredictedSpectrum, PrincipalTwoByTwo) {
  Mat a = make_cross({10, 1}, 2, 2, 3);
  EXPECT_TRUE(spectrum_near(predicted_spectrum(a, 1), real_values({-1, -1, -1, -1, -0.9, -1.1}), 1e-9));
  EXPECT_TRUE(spectrum_near(triple_aligned_spectrum(a, 1), real_values({-1, -1, -1, -1, -0.9, -1.1}), 1e-12));
}

TEST(PredictedSpectrum, PublishedSecondTripleFormula) {
  Mat a = make_cross({10, 1}, 2, 2, 3);
  SvdResult f = svd_factor(a);
  SvdState q2 = stationary_quadruple(a, 2);
  Vec u1 = f.left_vector(0), v1 = f.right_vector(0);
  double s1 = std::abs(sum(u1)), r1 = std::abs(sum(v1));
  const double rad = (1 - s1 * norm(q2.u)) * (1 - r1 * norm(q2.v));
  std::vector<Complex> want{{-2, 0}, {0, 0}};
  if (rad >= 0) {
    want.emplace_back(-1 + 10 * std::sqrt(rad), 0);
    want.emplace_back(-1 - 10 * std::sqrt(rad), 0);
  } else {
    want.emplace_back(-1, 10 * std::sqrt(-rad));
    want.emplace_back(-1, -10 * std::sqrt(-rad));
  }
  auto got = predicted_spectrum(a, 2);
  EXPECT_EQ(got.size(), 6u);
  EXPECT_TRUE(contains(got, want, 1e-8));
}

TEST(PredictedSpectrum, MinorTripleContainsUnstablePair) {
  Mat a = make_cross({10, 2, 1}, 3, 3, 4);
  EXPECT_TRUE(contains(predicted_spectrum(a, 3), real_values({1, -3}), 1e-9));
  EXPECT_EQ(classify(numeric_spectrum(a, stationary_quadruple(a, 3))), Classification::saddle);
}

TEST(PredictedSpectrum, RejectsWideMatrices) {
  Mat a = make_cross({3, 1}, 2, 3, 1);
  EXPECT_THROW(predicted_spectrum(a, 1), UnsupportedError);
  EXPECT_THROW(triple_aligned_spectrum(a, 1), UnsupportedError);
  EXPECT_THROW(analyze_triple(a, 1), UnsupportedError);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(real_values({-1, -1, -1.0000001})), Classification::attractor);
  EXPECT_EQ(classify(real_values({-1, 1, -2})), Classification::saddle);
  EXPECT_EQ(classify(real_values({-1, 0, -2})), Classification::non_hyperbolic);
  EXPECT_EQ(classify({Complex(-1, 0), Complex(1e-9, 2), Complex(1e-9, -2)}), Classification::non_hyperbolic);
  EXPECT_EQ(to_string(Classification::non_hyperbolic), "non-hyperbolic");
}

TEST(MatchDistance, GreedyPairing) {
  EXPECT_NEAR(match_distance(real_values({1, 2, 3}), real_values({3.1, 1, 2})), 0.1, 1e-15);
  EXPECT_NEAR(match_distance({Complex(0, 1), Complex(0, -1)}, {Complex(0, -1.5), Complex(0, 1)}), 0.5, 1e-15);
  EXPECT_THROW(match_distance(real_values({1}), real_values({1, 2})), DimensionError);
}

TEST(StabilityProperties, PrincipalPredictionMatchesNumerics) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      std::vector<double> sv{20, 2, 1, 0.5};
      sv.resize(n);
      Mat a = make_cross(sv, n, n, 10 * n + seed);
      StabilityReport r = analyze_triple(a, 1);
      EXPECT_EQ(r.predicted.size(), 2 * n + 2);
      EXPECT_EQ(r.numeric.size(), 2 * n + 2);
      EXPECT_LT(r.match_distance, 1e-4) << "n=" << n << " seed " << seed;
      EXPECT_EQ(r.classification, Classification::attractor);
      for (const auto& lam : r.numeric) EXPECT_LT(std::abs(lam + 1.0), 0.15);
      EXPECT_LT(r.sigma_rho_gap, 1e-9 * r.mu * r.mu);
      EXPECT_LT(r.jacobian_gap, 1e-5);
    }
  }
}

TEST(StabilityProperties, MinorTriplesAreSaddles) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Mat a = make_cross({10, 3, 1, 0.5}, 5, 4, seed);
    SvdResult f = svd_factor(a);
    for (std::size_t i = 3; i <= 4; ++i) {
      StabilityReport r = analyze_triple(a, i);
      EXPECT_EQ(r.classification, Classification::saddle);
      const double bound = 0.5 * (f.singular_values[1] / f.singular_values[i - 1] - 1);
      double top = -1e300;
      for (const auto& lam : r.numeric) top = std::max(top, lam.real());
      EXPECT_GT(top, bound) << "seed " << seed << " triple " << i;
    }
  }
}

TEST(StabilityProperties, NumericSpectrumFollowsTheAlignedFormulaAtEveryTriple) {
  // The linearization at triple i has the same structure as at the principal
  // triple with the basis reordered so that i comes first.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Mat a = make_cross({10, 3, 1}, 4, 3, seed);
    for (std::size_t i = 1; i <= 3; ++i) {
      StabilityReport r = analyze_triple(a, i);
      EXPECT_LT(r.aligned_match_distance, 1e-6) << "seed " << seed << " triple " << i;
    }
  }
}

TEST(StabilityProperties, SecondTripleIsASaddleWithoutTheZeroPair) {
  Mat a = make_cross({10, 1}, 2, 2, 3);
  StabilityReport r = analyze_triple(a, 2);
  EXPECT_EQ(r.classification, Classification::saddle);
  EXPECT_FALSE(contains(r.numeric, real_values({-2, 0}), 1e-4));
  EXPECT_TRUE(contains(r.numeric, real_values({9, -11}), 1e-6));
}

}  // namespace
}  // namespace coupled
