#include "coupled/problems.hpp"

#include <cmath>

#include "coupled/errors.hpp"

namespace coupled {

double unsigned_angle(const Vec& a, const Vec& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw DegeneracyError("angle with a zero vector");
  Vec ua = a / na;
  Vec ub = b / nb;
  const double c = std::abs(dot(ua, ub));
  // atan2 of the orthogonal and parallel parts keeps precision near zero.
  Vec perp = ua - dot(ua, ub) * ub;
  return std::atan2(norm(perp), c);
}

PcaProblem::PcaProblem(Mat c, PcaRuleKind kind) : c_(std::move(c)), kind_(kind), eig_(sym_eig(c_)) {
  if (c_.rows() < 2) throw DimensionError("PCA problems need dimension >= 2");
}

Vec PcaProblem::field(const Vec& z) const { return pca_rhs(kind_, c_, PcaState::unpack(z)).pack(); }

Vec PcaProblem::residual(const Vec& z) const { return pca_residual(kind_, c_, PcaState::unpack(z)); }

Diagnostics PcaProblem::diagnose(const Vec& z) const {
  PcaState s = PcaState::unpack(z);
  Diagnostics d;
  d.residual = norm(residual(z));
  d.constraint_u = is_sum(kind_) ? sum(s.w) - 1.0 : dot(s.w, s.w) - 1.0;
  d.angle = unsigned_angle(s.w, eig_.vector(0));
  return d;
}

std::vector<std::string> PcaProblem::state_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c_.rows(); ++i) out.push_back("w" + std::to_string(i));
  out.push_back("lambda");
  return out;
}

PcaState PcaProblem::stationary_point(std::size_t i) const {
  if (i >= c_.rows()) throw DimensionError("eigenpair index out of range");
  Vec w = eig_.vector(i);
  if (is_sum(kind_)) w = constraint_map_sum(w);
  return {w, eig_.values[i]};
}

Field PcaProblem::as_field() const {
  return [this](const Vec& z) { return field(z); };
}

Probe PcaProblem::as_probe() const {
  return [this](const Vec& z) { return diagnose(z); };
}

SvdProblem::SvdProblem(Mat a, SvdRuleKind kind) : a_(std::move(a)), kind_(kind), svd_(svd_factor(a_)) {
  if (a_.rows() < 2 || a_.cols() < 2) throw DimensionError("SVD problems need at least 2 rows and 2 columns");
}

Vec SvdProblem::field(const Vec& z) const { return svd_rhs(kind_, a_, unpack(z)).pack(); }

Vec SvdProblem::residual(const Vec& z) const { return svd_residual(kind_, a_, unpack(z)); }

Diagnostics SvdProblem::diagnose(const Vec& z) const {
  SvdState s = unpack(z);
  Diagnostics d;
  d.residual = norm(residual(z));
  if (is_sum(kind_)) {
    d.constraint_u = sum(s.u) - 1.0;
    d.constraint_v = sum(s.v) - 1.0;
  } else {
    d.constraint_u = dot(s.u, s.u) - 1.0;
    d.constraint_v = dot(s.v, s.v) - 1.0;
  }
  d.angle = std::max(unsigned_angle(s.u, svd_.left_vector(0)), unsigned_angle(s.v, svd_.right_vector(0)));
  return d;
}

std::vector<std::string> SvdProblem::state_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows(); ++i) out.push_back("u" + std::to_string(i));
  for (std::size_t j = 0; j < cols(); ++j) out.push_back("v" + std::to_string(j));
  out.push_back("sigma");
  if (is_sum(kind_)) out.push_back("rho");
  return out;
}

SvdState SvdProblem::stationary_point(std::size_t i) const {
  if (i >= svd_.singular_values.size()) throw DimensionError("singular triple index out of range");
  Vec u = svd_.left_vector(i);
  Vec v = svd_.right_vector(i);
  if (!is_sum(kind_)) return {u, v, svd_.singular_values[i], std::nullopt};
  u = constraint_map_sum(u);
  v = constraint_map_sum(v);
  SvdState s{u, v, sum(a_ * v), std::nullopt};
  s.rho = sum(transpose_times(a_, u));
  return s;
}

Field SvdProblem::as_field() const {
  return [this](const Vec& z) { return field(z); };
}

Probe SvdProblem::as_probe() const {
  return [this](const Vec& z) { return diagnose(z); };
}

}  // namespace coupled
