#pragma once

#include <functional>
#include <optional>

#include "coupled/linalg.hpp"

namespace coupled {

using VecFunction = std::function<Vec(const Vec&)>;
using ScalarFunction = std::function<double(const Vec&)>;

/// Default central-difference step, 1e-5·(1 + ‖z‖).
double default_step(const Vec& z);

/// Central-difference Jacobian; column j is (f(z + h e_j) - f(z - h e_j)) / 2h.
/// Throws EvaluationError if f returns a non-finite value.
Mat fd_jacobian(const VecFunction& f, const Vec& z, std::optional<double> h = std::nullopt);

/// Central-difference gradient of a scalar function.
Vec fd_gradient(const ScalarFunction& g, const Vec& z, std::optional<double> h = std::nullopt);

}  // namespace coupled
