#include "coupled/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "coupled/eigen.hpp"
#include "coupled/matrix_io.hpp"

namespace coupled {

namespace {

Record make_record(std::size_t step, double t, const Vec& z, const Probe& probe) {
  Record r{step, t, z, {}};
  if (probe) r.diag = probe(z);
  return r;
}

void check_state(const Vec& z, std::size_t step, double t, const Probe& probe, Trajectory& traj) {
  const double nz = norm(z);
  if (std::isfinite(nz) && nz <= kDivergenceThreshold) return;
  Record r{step, t, z, {}};
  // The probe may itself fail on a non-finite state; the record keeps NaNs then.
  try {
    if (probe && z.all_finite()) r.diag = probe(z);
  } catch (const Error&) {
  }
  traj.records.push_back(std::move(r));
  std::ostringstream os;
  os << "state diverged at step " << step << " (norm " << nz << ", threshold " << kDivergenceThreshold << ")";
  throw DivergenceError(os.str(), std::move(traj));
}

template <typename Step>
Trajectory run_steps(const Vec& z0, std::size_t steps, std::size_t thin, double dt, const Probe& probe, Step step) {
  if (thin == 0) throw DimensionError("thinning interval must be at least 1");
  Trajectory traj;
  check_state(z0, 0, 0.0, probe, traj);
  traj.records.push_back(make_record(0, 0.0, z0, probe));
  Vec z = z0;
  for (std::size_t k = 1; k <= steps; ++k) {
    z = step(z, k - 1);
    const double t = dt * static_cast<double>(k);
    check_state(z, k, t, probe, traj);
    if (k % thin == 0 || k == steps) traj.records.push_back(make_record(k, t, z, probe));
  }
  return traj;
}

std::vector<std::string> names_for(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

void Trajectory::write_csv(std::ostream& os) const {
  os << "step,t";
  for (const auto& name : state_names) os << ',' << name;
  os << ",residual,constraint_u,constraint_v,angle\n";
  for (const auto& r : records) {
    os << r.step << ',' << format_double(r.t);
    for (double x : r.state) os << ',' << format_double(x);
    os << ',' << format_double(r.diag.residual) << ',' << format_double(r.diag.constraint_u) << ','
       << format_double(r.diag.constraint_v) << ',' << format_double(r.diag.angle) << '\n';
  }
}

Trajectory integrate(const Field& field, const Vec& z0, const IntegratorOptions& opts, const Probe& probe) {
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt)) throw DimensionError("integration step dt must be positive");
  const double dt = opts.dt;
  if (opts.method == Method::euler) {
    return run_steps(z0, opts.steps, opts.thin, dt, probe,
                     [&](const Vec& z, std::size_t) { return z + dt * field(z); });
  }
  return run_steps(z0, opts.steps, opts.thin, dt, probe, [&](const Vec& z, std::size_t) {
    Vec k1 = field(z);
    Vec k2 = field(z + (0.5 * dt) * k1);
    Vec k3 = field(z + (0.5 * dt) * k2);
    Vec k4 = field(z + dt * k3);
    return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  });
}

GaussianStream::GaussianStream(const Mat& c, std::uint64_t seed) : rng_(seed) {
  Spectrum eig = sym_eig(c);
  const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  for (double l : eig.values)
    if (l < -1e-12 * scale) throw DegeneracyError("sample_gaussian: covariance matrix is not positive semidefinite");
  const std::size_t n = c.rows();
  factor_ = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::sqrt(std::max(eig.values[j], 0.0));
    for (std::size_t i = 0; i < n; ++i) factor_(i, j) = eig.vectors(i, j) * s;
  }
}

Vec GaussianStream::next() { return factor_ * rng_.gaussian_vec(factor_.cols()); }

PairStream::PairStream(const Mat& a, std::uint64_t seed, double noise) : a_(a), noise_(noise), rng_(seed) {
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw DimensionError("sample_pairs: noise must be >= 0");
  if (!a.all_finite()) throw DimensionError("sample_pairs: non-finite matrix");
}

std::pair<Vec, Vec> PairStream::next() {
  Vec x = rng_.gaussian_vec(a_.cols());
  Vec y = a_ * x;
  if (noise_ > 0.0) y += noise_ * rng_.gaussian_vec(a_.rows());
  return {std::move(y), std::move(x)};
}

std::vector<Vec> sample_gaussian(const Mat& c, std::uint64_t seed, std::size_t count) {
  GaussianStream stream(c, seed);
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(stream.next());
  return out;
}

std::vector<std::pair<Vec, Vec>> sample_pairs(const Mat& a, std::uint64_t seed, std::size_t count, double noise) {
  PairStream stream(a, seed, noise);
  std::vector<std::pair<Vec, Vec>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(stream.next());
  return out;
}

double RateSchedule::rate(std::size_t t) const {
  if (kind == Kind::constant) return gamma0;
  return gamma0 * t0 / (t0 + static_cast<double>(t));
}

void RateSchedule::validate() const {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw DimensionError("learning rate gamma0 must be positive");
  if (kind == Kind::inverse_time && (!(t0 > 0.0) || !std::isfinite(t0)))
    throw DimensionError("schedule offset t0 must be positive");
}

Trajectory train_online(PcaRuleKind kind, GaussianStream& stream, const PcaState& z0, const OnlineOptions& opts,
                        const Probe& probe) {
  opts.schedule.validate();
  Trajectory traj = run_steps(z0.pack(), opts.steps, opts.thin, 1.0, probe, [&](const Vec& z, std::size_t t) {
    PcaState s = PcaState::unpack(z);
    PcaState d = pca_online_rhs(kind, stream.next(), s);
    return z + opts.schedule.rate(t) * d.pack();
  });
  traj.state_names = names_for("w", z0.w.size());
  traj.state_names.push_back("lambda");
  return traj;
}

Trajectory train_online(SvdRuleKind kind, PairStream& stream, const SvdState& z0, const OnlineOptions& opts,
                        const Probe& probe) {
  opts.schedule.validate();
  const std::size_t m = z0.u.size();
  const std::size_t n = z0.v.size();
  const bool has_rho = z0.rho.has_value();
  Trajectory traj = run_steps(z0.pack(), opts.steps, opts.thin, 1.0, probe, [&](const Vec& z, std::size_t t) {
    SvdState s = SvdState::unpack(z, m, n, has_rho);
    auto [y, x] = stream.next();
    SvdState d = svd_online_rhs(kind, y, x, s);
    return z + opts.schedule.rate(t) * d.pack();
  });
  traj.state_names = names_for("u", m);
  auto vn = names_for("v", n);
  traj.state_names.insert(traj.state_names.end(), vn.begin(), vn.end());
  traj.state_names.push_back("sigma");
  if (has_rho) traj.state_names.push_back("rho");
  return traj;
}

}  // namespace coupled
