#include "telegraph/memory_kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "telegraph/errors.hpp"

namespace telegraph {

KernelFunction KernelFunction::exponential(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("exponential kernel needs tau > 0");
  return KernelFunction(ExponentialKernel{tau});
}

KernelFunction KernelFunction::delta(double strength) {
  if (!std::isfinite(strength)) throw InvalidArgument("delta kernel strength must be finite");
  return KernelFunction(DeltaKernel{strength});
}

KernelFunction KernelFunction::sampled(std::vector<double> times, std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size())
    throw InvalidArgument("sampled kernel needs at least two (time, value) pairs");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw InvalidArgument("sampled kernel entries must be finite");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw InvalidArgument("sampled kernel times must be strictly ascending");
  }
  if (times.front() < 0.0) throw InvalidArgument("sampled kernel times must be >= 0");
  return KernelFunction(SampledKernel{std::move(times), std::move(values)});
}

KernelFunction::Kind KernelFunction::kind() const {
  switch (repr_.index()) {
    case 0:
      return Kind::exponential;
    case 1:
      return Kind::delta;
    default:
      return Kind::sampled;
  }
}

namespace {

struct KernelEvaluator {
  double elapsed;

  double operator()(const ExponentialKernel& k) const { return std::exp(-elapsed / k.tau); }
  double operator()(const DeltaKernel&) const {
    throw UnsupportedKernel("the delta kernel cannot be evaluated pointwise");
  }
  double operator()(const SampledKernel& k) const {
    if (elapsed < k.times.front() || elapsed > k.times.back())
      throw KernelRangeError("elapsed time " + std::to_string(elapsed) +
                             " lies outside the sampled kernel range");
    auto hi = std::upper_bound(k.times.begin(), k.times.end(), elapsed);
    if (hi == k.times.end()) return k.values.back();
    const std::size_t j = static_cast<std::size_t>(hi - k.times.begin());
    const double w = (elapsed - k.times[j - 1]) / (k.times[j] - k.times[j - 1]);
    return (1.0 - w) * k.values[j - 1] + w * k.values[j];
  }
};

std::vector<double> heun_trapezoid(const KernelFunction& kernel, double lambda, double h,
                                   std::size_t steps) {
  std::vector<double> values(steps + 1);
  values[0] = 1.0;
  if (lambda == 0.0) {
    std::fill(values.begin(), values.end(), 1.0);
    return values;
  }

  const bool exponential = kernel.kind() == KernelFunction::Kind::exponential;

  // Kernel on the lag grid: lag[j] = k(j h).
  std::vector<double> lag;
  double decay = 0.0;
  if (exponential) {
    decay = std::exp(-h / std::get<ExponentialKernel>(kernel.representation()).tau);
  } else {
    lag.resize(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) lag[j] = kernel(static_cast<double>(j) * h);
  }
  const double k0 = exponential ? 1.0 : lag[0];

  double memory = 0.0;  // trapezoid of k(t_n - s) L(s) over [0, t_n]
  for (std::size_t n = 0; n < steps; ++n) {
    // Trapezoid over [0, t_{n+1}] without the (still unknown) endpoint term.
    double history;
    if (exponential) {
      history = decay * (memory + 0.5 * h * values[n]);
    } else {
      history = 0.5 * h * lag[n + 1] * values[0];
      for (std::size_t j = 1; j <= n; ++j) history += h * lag[n + 1 - j] * values[j];
    }

    const double slope = lambda * memory;
    const double predicted = values[n] + h * slope;
    const double predicted_slope = lambda * (history + 0.5 * h * k0 * predicted);
    const double next = values[n] + 0.5 * h * (slope + predicted_slope);
    if (!std::isfinite(next))
      throw NumericalBlowup("Volterra solution became non-finite", static_cast<double>(n + 1) * h);
    values[n + 1] = next;
    memory = history + 0.5 * h * k0 * next;
  }
  return values;
}

}  // namespace

double KernelFunction::operator()(double elapsed) const {
  if (elapsed < 0.0) throw InvalidArgument("kernel argument must be >= 0");
  return std::visit(KernelEvaluator{elapsed}, repr_);
}

std::array<Complex, 2> laplace_poles_exponential(double lambda, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("laplace_poles_exponential needs tau > 0");
  // s^2 + b s + c = 0 with b = 1/tau, c = -lambda, solved without cancellation.
  const double b = 1.0 / tau;
  const Complex root_disc = std::sqrt(Complex(b * b + 4.0 * lambda, 0.0));
  const Complex q = -0.5 * (b + root_disc);
  const Complex far = q;
  const Complex near = (q == Complex(0.0)) ? Complex(0.0) : Complex(-lambda) / q;
  return {near, far};
}

ScalarEvolution solve_volterra(const KernelFunction& kernel, double lambda, double t_max,
                               std::size_t steps, VolterraScheme scheme) {
  if (steps < 2) throw InvalidArgument("solve_volterra needs at least 2 steps");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("solve_volterra needs t_max > 0");
  if (!std::isfinite(lambda)) throw InvalidArgument("solve_volterra needs a finite eigenvalue");
  if (kernel.kind() == KernelFunction::Kind::delta)
    throw UnsupportedKernel("delta kernel: use the Markov propagator instead of quadrature");
  if (kernel.kind() == KernelFunction::Kind::sampled) {
    const auto& s = std::get<SampledKernel>(kernel.representation());
    if (s.times.front() > 0.0 || s.times.back() < t_max)
      throw KernelRangeError("sampled kernel must cover [0, t_max]");
  }

  ScalarEvolution out;
  out.eigenvalue = lambda;
  out.kernel = kernel;

  if (scheme == VolterraScheme::heun_trapezoid) {
    out.values = heun_trapezoid(kernel, lambda, t_max / static_cast<double>(steps), steps);
  } else {
    if (steps % 4 != 0 || steps / 4 < 2)
      throw InvalidArgument("richardson scheme needs steps divisible by 4 and >= 8");
    const std::size_t coarse_steps = steps / 4;
    const auto fine = heun_trapezoid(kernel, lambda, t_max / static_cast<double>(steps), steps);
    const auto mid = heun_trapezoid(kernel, lambda, t_max / static_cast<double>(steps / 2), steps / 2);
    const auto coarse = heun_trapezoid(kernel, lambda, t_max / static_cast<double>(coarse_steps),
                                       coarse_steps);
    out.values.resize(coarse_steps + 1);
    for (std::size_t k = 0; k <= coarse_steps; ++k) {
      const double fine_mid = (4.0 * fine[4 * k] - mid[2 * k]) / 3.0;
      const double mid_coarse = (4.0 * mid[2 * k] - coarse[k]) / 3.0;
      out.values[k] = (8.0 * fine_mid - mid_coarse) / 7.0;
    }
    out.values[0] = 1.0;
    steps = coarse_steps;
  }

  out.grid.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    out.grid[k] = t_max * static_cast<double>(k) / static_cast<double>(steps);
  return out;
}

std::vector<double> fit_power_series(std::span<const double> x, std::span<const double> y,
                                     int degree, double x0) {
  if (degree < 0) throw InvalidArgument("fit_power_series needs degree >= 0");
  if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree) + 1)
    throw InvalidArgument("fit_power_series needs at least degree + 1 matching samples");

  double scale = 0.0;
  for (double xi : x) scale = std::max(scale, std::abs(xi - x0));
  if (scale == 0.0) throw InvalidArgument("fit_power_series needs distinct abscissae");

  const auto rows = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd vandermonde(rows, degree + 1);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double u = (x[static_cast<std::size_t>(r)] - x0) / scale;
    double p = 1.0;
    for (int c = 0; c <= degree; ++c, p *= u) vandermonde(r, c) = p;
    rhs(r) = y[static_cast<std::size_t>(r)];
  }
  const Eigen::VectorXd scaled = vandermonde.colPivHouseholderQr().solve(rhs);

  std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
  double s = 1.0;
  for (int c = 0; c <= degree; ++c, s *= scale) coeffs[static_cast<std::size_t>(c)] = scaled(c) / s;
  return coeffs;
}

}  // namespace telegraph
