#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "coupled/errors.hpp"
#include "coupled/linalg.hpp"
#include "coupled/random.hpp"
#include "coupled/rules_pca.hpp"
#include "coupled/rules_svd.hpp"

namespace coupled {

using Field = std::function<Vec(const Vec&)>;

/// Per-record scalar diagnostics.
struct Diagnostics {
  double residual = 0.0;      // ‖f(z)‖
  double constraint_u = 0.0;  // constraint value of the (left) vector
  double constraint_v = 0.0;  // constraint value of the right vector, 0 for PCA
  double angle = 0.0;         // radians to the oracle direction
};

using Probe = std::function<Diagnostics(const Vec&)>;

struct Record {
  std::size_t step = 0;
  double t = 0.0;  // integration time, or sample count for online runs
  Vec state;
  Diagnostics diag;
};

struct Trajectory {
  std::vector<std::string> state_names;
  std::vector<Record> records;

  const Record& back() const { return records.back(); }
  /// Header `step,t,<state names>,residual,constraint_u,constraint_v,angle`.
  void write_csv(std::ostream& os) const;
};

/// The state left the finite range or exceeded the divergence threshold.
/// Carries the records collected so far, including the offending state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }
  const char* category() const noexcept override { return "divergence"; }

 private:
  Trajectory partial_;
};

inline constexpr double kDivergenceThreshold = 1e12;

enum class Method { euler, rk4 };

struct IntegratorOptions {
  double dt = 0.05;
  std::size_t steps = 1000;
  Method method = Method::rk4;
  std::size_t thin = 1;  // record every thin-th step; step 0 and the last step always
};

/// Fixed-step explicit integration of ż = field(z).
/// Guarded-scalar errors raised by the field propagate unchanged.
Trajectory integrate(const Field& field, const Vec& z0, const IntegratorOptions& opts, const Probe& probe = {});

/// x = W Λ^½ g with C = W Λ Wᵀ and g standard normal.
class GaussianStream {
 public:
  GaussianStream(const Mat& c, std::uint64_t seed);
  Vec next();
  std::size_t dim() const noexcept { return factor_.rows(); }

 private:
  Mat factor_;
  SplitMix64 rng_;
};

/// x ~ N(0, I), y = A x + noise·g' with independent g'; E{yxᵀ} = A.
class PairStream {
 public:
  PairStream(const Mat& a, std::uint64_t seed, double noise = 0.0);
  /// Returns (y, x).
  std::pair<Vec, Vec> next();

 private:
  Mat a_;
  double noise_;
  SplitMix64 rng_;
};

std::vector<Vec> sample_gaussian(const Mat& c, std::uint64_t seed, std::size_t count);
std::vector<std::pair<Vec, Vec>> sample_pairs(const Mat& a, std::uint64_t seed, std::size_t count,
                                              double noise = 0.0);

struct RateSchedule {
  enum class Kind { constant, inverse_time };
  Kind kind = Kind::inverse_time;
  double gamma0 = 0.05;
  double t0 = 100.0;

  /// γ₀ for constant, γ₀·t₀/(t₀ + t) for inverse-time.
  double rate(std::size_t t) const;
  void validate() const;
};

struct OnlineOptions {
  RateSchedule schedule;
  std::size_t steps = 100000;
  std::size_t thin = 1;
};

/// z_{t+1} = z_t + γ_t · online_rhs(sample_t, z_t).
Trajectory train_online(PcaRuleKind kind, GaussianStream& stream, const PcaState& z0, const OnlineOptions& opts,
                        const Probe& probe = {});
Trajectory train_online(SvdRuleKind kind, PairStream& stream, const SvdState& z0, const OnlineOptions& opts,
                        const Probe& probe = {});

}  // namespace coupled
