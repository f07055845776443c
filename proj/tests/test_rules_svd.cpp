#include <cmath>

#include "coupled/criteria.hpp"
#include "coupled/dynamics.hpp"
#include "coupled/eigen.hpp"
#include "coupled/errors.hpp"
#include "coupled/finite_diff.hpp"
#include "coupled/generate.hpp"
#include "coupled/random.hpp"
#include "coupled/rules_svd.hpp"
#include "support.hpp"

namespace coupled {
namespace {

using testing::vec_near;

const SvdRuleKind kAllKinds[] = {SvdRuleKind::L2, SvdRuleKind::L2_SIMPLE, SvdRuleKind::SUM_FULL, SvdRuleKind::SUM_MOD};

const Vec e1{1, 0};
const Vec e2{0, 1};
const Mat diag31{{3, 0}, {0, 1}};

SvdState l2(Vec u, Vec v, double s) { return {std::move(u), std::move(v), s, std::nullopt}; }
SvdState cs(Vec u, Vec v, double s, double r) { return {std::move(u), std::move(v), s, r}; }

TEST(SvdKind, NamesRoundTrip) {
  for (auto k : kAllKinds) EXPECT_EQ(parse_svd_kind(to_string(k)), k);
  EXPECT_EQ(parse_svd_kind("l2_simple"), SvdRuleKind::L2_SIMPLE);
  EXPECT_THROW(parse_svd_kind("SUM"), ParseError);
  EXPECT_TRUE(is_sum(SvdRuleKind::SUM_FULL));
  EXPECT_FALSE(is_sum(SvdRuleKind::L2_SIMPLE));
}

TEST(SvdState, PackLayout) {
  EXPECT_EQ(cs(Vec{1, 2, 3}, Vec{4, 5}, 6, 7).pack(), (Vec{1, 2, 3, 4, 5, 6, 7}));
  SvdState s = SvdState::unpack(Vec{1, 2, 3, 4, 5, 6}, 3, 2, false);
  EXPECT_EQ(s.u, (Vec{1, 2, 3}));
  EXPECT_EQ(s.v, (Vec{4, 5}));
  EXPECT_EQ(s.sigma, 6.0);
  EXPECT_FALSE(s.rho.has_value());
  EXPECT_THROW(SvdState::unpack(Vec{1, 2, 3}, 3, 2, false), DimensionError);
}

TEST(SvdResidual, Examples) {
  EXPECT_TRUE(vec_near(svd_residual(SvdRuleKind::L2, diag31, l2(e1, e1, 3)), Vec(5), 0.0));
  EXPECT_TRUE(vec_near(svd_residual(SvdRuleKind::SUM_MOD, diag31, cs(e1, e1, 3, 3)), Vec(6), 0.0));
  // Av - σu = (3,0) - (0,1); Aᵀu - σv = (0,1) - (1,0); ½(uᵀu - 1) = 0.
  EXPECT_TRUE(vec_near(svd_residual(SvdRuleKind::L2, diag31, l2(e2, e1, 1)), Vec{3, -1, -1, 1, 0}, 0.0));
}

TEST(SvdResidual, RhoMustMatchKind) {
  EXPECT_THROW(svd_residual(SvdRuleKind::L2, diag31, cs(e1, e1, 3, 3)), DimensionError);
  EXPECT_THROW(svd_residual(SvdRuleKind::SUM_MOD, diag31, l2(e1, e1, 3)), DimensionError);
  EXPECT_THROW(svd_residual(SvdRuleKind::L2, diag31, l2(Vec{1, 0, 0}, e1, 3)), DimensionError);
}

TEST(SvdRhs, Examples) {
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::L2, diag31, l2(e1, e1, 3)).pack(), Vec(5), 0.0));
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::SUM_MOD, diag31, cs(e1, e1, 3, 3)).pack(), Vec(6), 0.0));
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::L2, diag31, l2(e1, e1, 1)).pack(), Vec{0, 0, 0, 0, 2}, 0.0));
}

TEST(SvdRhs, HandEvaluationAwayFromStationarity) {
  // u = (1,1), v = e₁, σ = ρ = 2, A = diag(3,1):
  // Av = (3,0), Aᵀu = (3,1), uᵀAv = 3, 𝟙ᵀAv = 3, 𝟙ᵀAᵀu = 4, uᵀu = 2, vᵀv = 1.
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::L2, diag31, l2(Vec{1, 1}, e1, 2)).pack(),
                       Vec{0.5 * (3 - 3) + 0.5, 0.5 * (0 - 3) + 0.5, 0.5 * (3 - 3), 0.5 * 1, 3 - 0.5 * 2 * 3}, 1e-15));
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::L2_SIMPLE, diag31, l2(Vec{1, 1}, e1, 2)).pack(),
                       Vec{0, -1.5, 0, 0.5, 1}, 1e-15));
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::SUM_MOD, diag31, cs(Vec{1, 1}, e1, 2, 2)).pack(),
                       Vec{0.5 * (3 - 3), 0.5 * (0 - 3), 0.5 * (3 - 4), 0.5 * 1, 3 - 2, 4 - 2}, 1e-15));
  // SUM_FULL adds μ = 3/√2, ‖u‖‖v‖ = √2:
  //   σ̇ -= μ/(ρ√2)·(vᵀv·𝟙ᵀAᵀu - vᵀAᵀu) = (3/2)/2·(4 - 3)
  //   ρ̇ -= μ/(σ√2)·(uᵀu·𝟙ᵀAv - uᵀAv) = (3/2)/2·(6 - 3)
  EXPECT_TRUE(vec_near(svd_rhs(SvdRuleKind::SUM_FULL, diag31, cs(Vec{1, 1}, e1, 2, 2)).pack(),
                       Vec{0, -1.5, -0.5, 0.5, 1 - 0.75, 2 - 2.25}, 1e-14));
}

TEST(SvdRhs, ScalarFloorsAreGuarded) {
  for (auto k : kAllKinds) {
    const bool sum_kind = is_sum(k);
    auto make = [&](double s, double r) { return sum_kind ? cs(e1, e1, s, r) : l2(e1, e1, s); };
    EXPECT_THROW(svd_rhs(k, diag31, make(0.0, 1.0)), GuardedScalarError);
    EXPECT_THROW(svd_rhs(k, diag31, make(1e-9, 1.0)), GuardedScalarError);
    EXPECT_NO_THROW(svd_rhs(k, diag31, make(-1.0, -1.0)));
    if (sum_kind) EXPECT_THROW(svd_rhs(k, diag31, make(1.0, 0.0)), GuardedScalarError);
  }
  EXPECT_THROW(svd_rhs(SvdRuleKind::SUM_FULL, diag31, cs(Vec{0, 0}, e1, 1, 1)), GuardedScalarError);
}

TEST(SvdOnlineRhs, Examples) {
  EXPECT_TRUE(vec_near(svd_online_rhs(SvdRuleKind::L2, Vec{0, 0}, Vec{0, 0}, l2(e1, e1, 3)).pack(),
                       Vec{0, 0, 0, 0, -3}, 0.0));
  EXPECT_TRUE(vec_near(svd_online_rhs(SvdRuleKind::L2_SIMPLE, 3.0 * e1, e1, l2(e1, e1, 3)).pack(), Vec(5), 0.0));
  EXPECT_TRUE(vec_near(svd_online_rhs(SvdRuleKind::SUM_MOD, Vec{1, 1}, e1, cs(e1, e1, 1, 1)).pack(),
                       Vec{-1, 1, 0, 0, 1, 0}, 0.0));
  EXPECT_THROW(svd_online_rhs(SvdRuleKind::SUM_FULL, e1, e1, cs(e1, e1, 1, 1)), UnsupportedError);
}

std::vector<double> singulars_for(std::size_t n, SplitMix64& rng) {
  std::vector<double> sv;
  double x = 1.0 + 9.0 * rng.uniform();
  for (std::size_t k = 0; k < n; ++k) {
    sv.push_back(x);
    x *= 0.2 + 0.6 * rng.uniform();
  }
  return sv;
}

TEST(SvdProperties, FixedPointEquivalence) {
  SplitMix64 rng(31);
  for (std::size_t trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const std::size_t m = n + trial % 3;
    if (m > 8) continue;
    Mat a = make_cross(singulars_for(n, rng), m, n, 700 + trial);
    SvdResult f = svd_factor(a);
    for (std::size_t i = 0; i < n; ++i) {
      Vec u = f.left_vector(i), v = f.right_vector(i);
      const double s = f.singular_values[i];
      for (double sign : {1.0, -1.0}) {
        SvdState st = l2(sign * u, sign * v, s);
        EXPECT_NEAR(dot(st.u, a * st.v), s, 1e-10);
        for (auto k : {SvdRuleKind::L2, SvdRuleKind::L2_SIMPLE}) {
          EXPECT_LT(max_abs(svd_rhs(k, a, st).pack()), 1e-10);
          EXPECT_LT(max_abs(svd_residual(k, a, st)), 1e-10);
        }
      }
      const double su = sum(u), sv = sum(v);
      if (std::abs(su) < 1e-3 || std::abs(sv) < 1e-3) continue;
      Vec uc = (1.0 / su) * u, vc = (1.0 / sv) * v;
      SvdState st = cs(uc, vc, sum(a * vc), sum(transpose_times(a, uc)));
      const double scale = (1.0 + norm(uc)) * (1.0 + norm(vc)) * (1.0 + std::abs(*st.rho) + std::abs(st.sigma));
      for (auto k : {SvdRuleKind::SUM_MOD, SvdRuleKind::SUM_FULL}) {
        EXPECT_LT(max_abs(svd_rhs(k, a, st).pack()), 1e-10 * scale) << to_string(k);
        EXPECT_LT(max_abs(svd_residual(k, a, st)), 1e-10 * scale);
      }
      const double mu = dot(uc, a * vc) / (norm(uc) * norm(vc));
      EXPECT_NEAR(st.sigma * *st.rho, mu * mu, 1e-9 * (1 + mu * mu));
    }
  }
}

TEST(SvdProperties, ConstraintPreservation) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 4, m = n + trial % 3;
    Mat a = make_cross(singulars_for(n, rng), m, n, 40 + trial);
    Vec u = rng.gaussian_vec(m), v = rng.gaussian_vec(n);
    u = u + ((1.0 - sum(u)) / static_cast<double>(m)) * Vec::ones(m);
    v = v + ((1.0 - sum(v)) / static_cast<double>(n)) * Vec::ones(n);
    SvdState st = cs(u, v, 0.5 + rng.uniform(), 0.5 + rng.uniform());
    const double tol = 1e-12 * 16 * (1 + frobenius_norm(a)) * (1 + norm(u)) * (1 + norm(v));
    for (auto k : {SvdRuleKind::SUM_MOD, SvdRuleKind::SUM_FULL}) {
      SvdState d = svd_rhs(k, a, st);
      EXPECT_LT(std::abs(sum(d.u)), tol);
      EXPECT_LT(std::abs(sum(d.v)), tol);
    }
    Vec y = rng.gaussian_vec(m), x = rng.gaussian_vec(n);
    SvdState d = svd_online_rhs(SvdRuleKind::SUM_MOD, y, x, st);
    EXPECT_LT(std::abs(sum(d.u)), tol * (1 + norm(y)) * (1 + norm(x)));
    EXPECT_LT(std::abs(sum(d.v)), tol * (1 + norm(y)) * (1 + norm(x)));
  }
}

TEST(SvdProperties, ExpectationConsistency) {
  Mat a = make_cross({3, 1}, 3, 2, 12);
  auto pairs = sample_pairs(a, 99, 100000, 0.3);
  for (auto k : {SvdRuleKind::L2, SvdRuleKind::L2_SIMPLE, SvdRuleKind::SUM_MOD}) {
    SvdState st = is_sum(k) ? cs(Vec{0.5, 0.2, 0.3}, Vec{0.7, 0.3}, 1.2, 0.8) : l2(Vec{0.5, 0.2, 0.3}, Vec{0.7, 0.3}, 1.2);
    Vec want = svd_rhs(k, a, st).pack();
    const std::size_t dim = want.size();
    Vec mean(dim), sq(dim);
    for (const auto& [y, x] : pairs) {
      Vec d = svd_online_rhs(k, y, x, st).pack();
      for (std::size_t j = 0; j < dim; ++j) {
        mean[j] += d[j];
        sq[j] += d[j] * d[j];
      }
    }
    const double count = static_cast<double>(pairs.size());
    for (std::size_t j = 0; j < dim; ++j) {
      const double mj = mean[j] / count;
      const double se = std::sqrt((sq[j] / count - mj * mj) / count);
      EXPECT_LE(std::abs(mj - want[j]), 3 * se + 1e-12) << to_string(k) << " component " << j;
    }
  }
}

TEST(SvdProperties, NewtonDirectionAgreementTightensWithRadius) {
  Mat a = make_cross({1, 1e-3, 5e-4}, 3, 3, 9);
  SvdResult f = svd_factor(a);
  SvdState p = l2(f.left_vector(0), f.right_vector(0), f.singular_values[0]);
  Vec z0 = p.pack();
  auto unpack = [&](const Vec& z) { return SvdState::unpack(z, 3, 3, false); };
  auto res = [&](const Vec& z) { return svd_residual(SvdRuleKind::L2, a, unpack(z)); };
  Vec dir = l2(f.left_vector(1), f.right_vector(2), 0.0).pack();
  dir = (1.0 / norm(dir)) * dir;
  double prev = 0.0;
  for (double r : {0.05, 0.025, 0.0125, 0.00625}) {
    Vec z = z0 + r * dir;
    Vec nf = newton_zero_field(res, z);
    Vec cf = svd_rhs(SvdRuleKind::L2, a, unpack(z)).pack();
    const double err = norm(cf - nf) / norm(nf);
    if (prev > 0.0) EXPECT_LT(err, prev / 1.5) << "r=" << r;
    prev = err;
  }
  EXPECT_LT(prev, 2e-2);
}

TEST(SvdInit, DefaultInitialization) {
  Mat a = make_cross({4, 2, 1}, 4, 3, 2);
  for (auto k : kAllKinds) {
    SvdState s = svd_default_init(k, a, 6, false);
    const Vec bu = 0.25 * Vec::ones(4), bv = (1.0 / 3.0) * Vec::ones(3);
    EXPECT_NEAR(norm(s.u - bu), 0.1 * norm(bu), 1e-12);
    EXPECT_NEAR(norm(s.v - bv), 0.1 * norm(bv), 1e-12);
    if (is_sum(k)) {
      EXPECT_NEAR(sum(s.u), 1.0, 1e-14);
      EXPECT_NEAR(sum(s.v), 1.0, 1e-14);
      EXPECT_NEAR(s.sigma, sum(a * s.v), 1e-14);
      ASSERT_TRUE(s.rho.has_value());
      EXPECT_NEAR(*s.rho, sum(transpose_times(a, s.u)), 1e-14);
    } else {
      const double proj = dot(s.u, a * s.v);
      EXPECT_NEAR(std::abs(s.sigma), norm(s.u) * norm(a * s.v), 1e-14);
      EXPECT_GT(s.sigma * proj, 0.0);
      EXPECT_FALSE(s.rho.has_value());
    }
    SvdState o = svd_default_init(k, a, 6, true);
    EXPECT_EQ(o.sigma, 1.0);
    if (is_sum(k)) EXPECT_EQ(*o.rho, 1.0);
  }
}

TEST(SvdInit, SmallScalarsAreLiftedToTheFloor) {
  Mat tiny{{1e-12, 0}, {0, 1e-13}};
  SvdState s = svd_default_init(SvdRuleKind::L2, tiny, 1, false);
  EXPECT_EQ(std::abs(s.sigma), kScalarFloor);
}

}  // namespace
}  // namespace coupled
