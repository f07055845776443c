#include "coupled/finite_diff.hpp"

#include <cmath>

#include "coupled/errors.hpp"

namespace coupled {

namespace {

double resolve_step(const Vec& z, std::optional<double> h) {
  double step = h ? *h : default_step(z);
  if (!(step > 0.0) || !std::isfinite(step)) throw DimensionError("finite difference step must be positive");
  return step;
}

Vec checked(const VecFunction& f, const Vec& z) {
  Vec y = f(z);
  if (!y.all_finite()) throw EvaluationError("function returned a non-finite value during differentiation");
  return y;
}

}  // namespace

double default_step(const Vec& z) { return 1e-5 * (1.0 + norm(z)); }

Mat fd_jacobian(const VecFunction& f, const Vec& z, std::optional<double> h) {
  const double step = resolve_step(z, h);
  Mat jac;
  Vec zp = z;
  for (std::size_t j = 0; j < z.size(); ++j) {
    // Divide by the span actually representable in floating point, not 2h.
    const double hi = z[j] + step;
    const double lo = z[j] - step;
    const double span = hi - lo;
    zp[j] = hi;
    Vec fp = checked(f, zp);
    zp[j] = lo;
    Vec fm = checked(f, zp);
    zp[j] = z[j];
    if (j == 0) jac = Mat(fp.size(), z.size());
    if (fp.size() != jac.rows() || fm.size() != jac.rows())
      throw DimensionError("fd_jacobian: function output size changed");
    for (std::size_t i = 0; i < fp.size(); ++i) jac(i, j) = (fp[i] - fm[i]) / span;
  }
  return jac;
}

Vec fd_gradient(const ScalarFunction& g, const Vec& z, std::optional<double> h) {
  const double step = resolve_step(z, h);
  Vec grad(z.size());
  Vec zp = z;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double hi = z[j] + step;
    const double lo = z[j] - step;
    zp[j] = hi;
    double gp = g(zp);
    zp[j] = lo;
    double gm = g(zp);
    zp[j] = z[j];
    if (!std::isfinite(gp) || !std::isfinite(gm))
      throw EvaluationError("function returned a non-finite value during differentiation");
    grad[j] = (gp - gm) / (hi - lo);
  }
  return grad;
}

}  // namespace coupled
