#include "coupled/criteria.hpp"

#include <cmath>
#include <sstream>

#include "coupled/eigen.hpp"
#include "coupled/errors.hpp"
#include "coupled/generate.hpp"
#include "coupled/random.hpp"

namespace coupled {

namespace {

constexpr double kConditionLimit = 1e12;

void require_nonzero(const Vec& x, const char* what) {
  if (norm(x) == 0.0) throw DegeneracyError(std::string(what) + ": zero vector");
}

void require_positive(const char* name, double value) {
  if (!(value > 0.0)) throw GuardedScalarError(name, value, 0.0);
}

double one_norm(const Mat& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::P_PCA1: return "P_PCA1";
    case CriterionKind::P_PCA2: return "P_PCA2";
    case CriterionKind::P_SVD1: return "P_SVD1";
  }
  return "?";
}

double eval_criterion(CriterionKind kind, const Mat& c, const PcaState& s) {
  const double wcw = dot(s.w, c * s.w);
  const double ww = dot(s.w, s.w);
  switch (kind) {
    case CriterionKind::P_PCA1:
      require_positive("lambda", s.lambda);
      return wcw / s.lambda - ww + std::log(s.lambda);
    case CriterionKind::P_PCA2:
      return wcw - ww * s.lambda + s.lambda;
    case CriterionKind::P_SVD1:
      break;
  }
  throw UnsupportedError("criterion " + std::string(to_string(kind)) + " takes an SVD state");
}

double eval_criterion(CriterionKind kind, const Mat& a, const SvdState& s) {
  if (kind != CriterionKind::P_SVD1)
    throw UnsupportedError("criterion " + std::string(to_string(kind)) + " takes a PCA state");
  require_positive("sigma", s.sigma);
  return dot(s.u, a * s.v) / s.sigma - 0.5 * dot(s.u, s.u) - 0.5 * dot(s.v, s.v) + std::log(s.sigma);
}

Vec criterion_gradient(CriterionKind kind, const Mat& c, const PcaState& s) {
  Vec cw = c * s.w;
  const double wcw = dot(s.w, cw);
  const double ww = dot(s.w, s.w);
  PcaState g;
  switch (kind) {
    case CriterionKind::P_PCA1:
      require_positive("lambda", s.lambda);
      g.w = (2.0 / s.lambda) * cw - 2.0 * s.w;
      g.lambda = -wcw / (s.lambda * s.lambda) + 1.0 / s.lambda;
      break;
    case CriterionKind::P_PCA2:
      g.w = 2.0 * cw - 2.0 * s.lambda * s.w;
      g.lambda = 1.0 - ww;
      break;
    case CriterionKind::P_SVD1:
      throw UnsupportedError("criterion P_SVD1 takes an SVD state");
  }
  return g.pack();
}

Vec criterion_gradient(CriterionKind kind, const Mat& a, const SvdState& s) {
  if (kind != CriterionKind::P_SVD1)
    throw UnsupportedError("criterion " + std::string(to_string(kind)) + " takes a PCA state");
  require_positive("sigma", s.sigma);
  Vec av = a * s.v;
  SvdState g;
  g.u = av / s.sigma - s.u;
  g.v = transpose_times(a, s.u) / s.sigma - s.v;
  g.sigma = -dot(s.u, av) / (s.sigma * s.sigma) + 1.0 / s.sigma;
  return g.pack();
}

double rayleigh_quotient(const Mat& c, const Vec& w) {
  require_nonzero(w, "rayleigh_quotient");
  return dot(w, c * w) / dot(w, w);
}

Vec rayleigh_gradient(const Mat& c, const Vec& w) {
  require_nonzero(w, "rayleigh_gradient");
  Vec cw = c * w;
  const double ww = dot(w, w);
  return (2.0 / ww) * (cw - (dot(w, cw) / ww) * w);
}

Vec unit_scalar_gradient(const Vec& a, const Vec& x) {
  require_nonzero(x, "unit_scalar_gradient");
  const double nx = norm(x);
  return (nx * a - (dot(a, x) / nx) * x) / dot(x, x);
}

double condition_number(const Mat& a) {
  if (!a.square()) throw DimensionError("condition_number: matrix is not square");
  const std::size_t n = a.rows();
  Mat inv(n, n);
  try {
    for (std::size_t j = 0; j < n; ++j) inv.set_col(j, solve(a, Vec::unit(n, j)));
  } catch (const SingularityError&) {
    return INFINITY;
  }
  if (!inv.all_finite()) return INFINITY;
  return one_norm(a) * one_norm(inv);
}

Vec newton_zero_field(const VecFunction& f, const Vec& z) {
  Mat j = fd_jacobian(f, z);
  if (!j.square()) throw DimensionError("newton_zero_field: Jacobian is not square");
  const double cond = condition_number(j);
  if (!(cond < kConditionLimit)) {
    std::ostringstream os;
    os << "newton_zero_field: Jacobian is singular or ill-conditioned (condition " << cond << ")";
    throw SingularityError(os.str(), cond);
  }
  Vec fz = f(z);
  if (!fz.all_finite()) throw EvaluationError("newton_zero_field: non-finite function value");
  return -solve(j, fz);
}

Mat lagrange_hessian(std::size_t n) {
  if (n < 1) throw DimensionError("lagrange_hessian: n must be at least 1");
  Mat h(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = 1.0;
    h(i, n) = h(n, i) = 1.0;
  }
  return h;
}

std::vector<std::complex<double>> lagrange_hessian_eigenvalues(std::size_t n) {
  return gen_eig(lagrange_hessian(n));
}

namespace {

double relative_error(const Vec& approx, const Vec& exact) {
  const double scale = norm(exact);
  const double diff = norm(approx - exact);
  return scale > 0.0 ? diff / scale : diff;
}

std::vector<double> random_spectrum(SplitMix64& rng, std::size_t n) {
  // Descending values in (0.1, 10) with comfortable gaps.
  std::vector<double> out(n);
  double x = 1.0 + 9.0 * rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x;
    x *= 0.3 + 0.5 * rng.uniform();
  }
  return out;
}

}  // namespace

DerivativeCheck check_derivatives(std::size_t samples, std::size_t max_dim, std::uint64_t seed) {
  if (max_dim < 2) throw DimensionError("check_derivatives: max_dim must be at least 2");
  DerivativeCheck out;
  out.samples = samples;
  SplitMix64 rng(seed);
  auto draw_dim = [&] { return 2 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_dim - 1)); };

  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t n = draw_dim();
    Mat c = make_spd(random_spectrum(rng, n), rng.next_u64());
    Vec w = rng.gaussian_vec(n);
    Vec grad = rayleigh_gradient(c, w);
    Vec fd = fd_gradient([&c](const Vec& x) { return rayleigh_quotient(c, x); }, w);
    out.rayleigh_gradient = std::max(out.rayleigh_gradient, relative_error(grad, fd));

    Vec a = rng.gaussian_vec(n);
    Vec x = rng.gaussian_vec(n);
    grad = unit_scalar_gradient(a, x);
    fd = fd_gradient([&a](const Vec& y) { return dot(a, y) / norm(y); }, x);
    out.unit_scalar_gradient = std::max(out.unit_scalar_gradient, relative_error(grad, fd));

    PcaState s{rng.gaussian_vec(n), 0.5 + 2.0 * rng.uniform()};
    for (auto kind : {CriterionKind::P_PCA1, CriterionKind::P_PCA2}) {
      Vec g = criterion_gradient(kind, c, s);
      Vec f = fd_gradient([&](const Vec& z) { return eval_criterion(kind, c, PcaState::unpack(z)); }, s.pack());
      double& slot = kind == CriterionKind::P_PCA1 ? out.p_pca1_gradient : out.p_pca2_gradient;
      slot = std::max(slot, relative_error(g, f));
    }
    Spectrum eig = sym_eig(c);
    PcaState principal{eig.vector(0), eig.values[0]};
    for (auto kind : {CriterionKind::P_PCA1, CriterionKind::P_PCA2}) {
      Vec f = fd_gradient([&](const Vec& z) { return eval_criterion(kind, c, PcaState::unpack(z)); },
                          principal.pack());
      double& slot = kind == CriterionKind::P_PCA1 ? out.p_pca1_stationary : out.p_pca2_stationary;
      slot = std::max(slot, norm(f));
    }

    const std::size_t m = draw_dim();
    const std::size_t nn = std::min(m, draw_dim());
    Mat ac = make_cross(random_spectrum(rng, nn), m, nn, rng.next_u64());
    SvdState t{rng.gaussian_vec(m), rng.gaussian_vec(nn), 0.5 + 2.0 * rng.uniform(), std::nullopt};
    auto p_svd1 = [&](const Vec& z) {
      return eval_criterion(CriterionKind::P_SVD1, ac, SvdState::unpack(z, m, nn, false));
    };
    out.p_svd1_gradient = std::max(
        out.p_svd1_gradient, relative_error(criterion_gradient(CriterionKind::P_SVD1, ac, t), fd_gradient(p_svd1, t.pack())));
    SvdResult svd = svd_factor(ac);
    SvdState triple{svd.left_vector(0), svd.right_vector(0), svd.singular_values[0], std::nullopt};
    out.p_svd1_stationary = std::max(out.p_svd1_stationary, norm(fd_gradient(p_svd1, triple.pack())));
  }
  return out;
}

}  // namespace coupled
