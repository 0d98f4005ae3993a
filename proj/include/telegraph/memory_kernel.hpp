#pragma once

// Scalar memory-kernel equations
//
//     dL/dt = lambda * int_0^t k(t - t') L(t') dt',   L(0) = 1,
//
// which is what each damping-basis component of a kernel master equation
// reduces to. Vector/matrix evolution is always routed through the damping
// basis by the caller.

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "telegraph/linalg.hpp"

namespace telegraph {

struct ExponentialKernel {
  double tau;  // memory time, k(dt) = exp(-dt / tau)
};

/// Markov limit k(dt) = strength * delta(dt). Only meaningful analytically.
struct DeltaKernel {
  double strength;
};

/// Kernel tabulated on ascending abscissae, linearly interpolated.
struct SampledKernel {
  std::vector<double> times;
  std::vector<double> values;
};

class KernelFunction {
 public:
  enum class Kind { exponential, delta, sampled };

  static KernelFunction exponential(double tau);
  static KernelFunction delta(double strength);
  static KernelFunction sampled(std::vector<double> times, std::vector<double> values);

  Kind kind() const;

  /// k(elapsed). Throws UnsupportedKernel for the delta kernel and
  /// KernelRangeError outside a sampled kernel's table.
  double operator()(double elapsed) const;

  const std::variant<ExponentialKernel, DeltaKernel, SampledKernel>& representation() const {
    return repr_;
  }

 private:
  explicit KernelFunction(std::variant<ExponentialKernel, DeltaKernel, SampledKernel> r)
      : repr_(std::move(r)) {}

  std::variant<ExponentialKernel, DeltaKernel, SampledKernel> repr_;
};

struct ScalarEvolution {
  std::vector<double> grid;    // ascending times, grid[0] = 0
  std::vector<double> values;  // L(grid[k]); values[0] = 1 exactly
  double eigenvalue = 0.0;     // lambda (rate^2)
  KernelFunction kernel = KernelFunction::exponential(1.0);
};

enum class VolterraScheme {
  /// Trapezoidal memory integral with Heun predictor-corrector steps.
  /// Second order in the step size.
  heun_trapezoid,
  /// Two Richardson levels over heun_trapezoid runs with steps, steps/2 and
  /// steps/4 (cancels the h^2 and h^3 error terms). The result lives on the
  /// steps/4 grid; steps must be divisible by 4.
  richardson,
};

/// Both roots of s^2 + s/tau - lambda = 0, the poles of the Laplace-domain
/// solution (s + 1/tau) / (s (s + 1/tau) - lambda). Root [0] is the one
/// closer to zero. Throws InvalidArgument for tau <= 0.
std::array<Complex, 2> laplace_poles_exponential(double lambda, double tau);

/// Integrates the scalar memory-kernel equation on `steps` uniform steps of
/// [0, t_max]. Throws InvalidArgument for steps < 2 or t_max <= 0,
/// UnsupportedKernel for the delta kernel, NumericalBlowup on non-finite values.
ScalarEvolution solve_volterra(const KernelFunction& kernel, double lambda, double t_max,
                               std::size_t steps,
                               VolterraScheme scheme = VolterraScheme::heun_trapezoid);

/// Least-squares polynomial fit y ~ sum_k c_k (x - x0)^k over the samples;
/// returns c_0..c_degree. Used to read off initial power-series coefficients.
std::vector<double> fit_power_series(std::span<const double> x, std::span<const double> y,
                                     int degree, double x0 = 0.0);

}  // namespace telegraph
