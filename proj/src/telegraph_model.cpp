#include "telegraph/telegraph_model.hpp"

#include <cmath>
#include <string>

#include "telegraph/errors.hpp"

namespace telegraph {

namespace {

void check_component(int i) {
  if (i < 1 || i > 3) throw InvalidArgument("component index must be in 1..3, got " + std::to_string(i));
}

constexpr double kCriticalSeriesWidth = 1e-6;

}  // namespace

ModelParams ModelParams::create(std::array<double, 3> couplings, double tau) {
  for (double a : couplings)
    if (!std::isfinite(a) || a < 0.0) throw InvalidArgument("couplings must be finite and >= 0");
  if (!std::isfinite(tau) || !(tau > 0.0)) throw InvalidArgument("tau must be finite and > 0");
  return ModelParams(couplings, tau);
}

double ModelParams::kappa(int i) const {
  check_component(i);
  const auto j = static_cast<std::size_t>(i % 3);
  const auto k = static_cast<std::size_t>((i + 1) % 3);
  return std::hypot(a_[j], a_[k]);
}

double ModelParams::mu_squared(int i) const {
  const double x = 4.0 * kappa_tau(i);
  return x * x - 1.0;
}

std::complex<double> ModelParams::mu(int i) const {
  return std::sqrt(std::complex<double>(mu_squared(i), 0.0));
}

double ModelParams::eigenvalue(int i) const {
  if (i == 0) return 0.0;
  const double k = kappa(i);
  return -4.0 * k * k;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::overdamped:
      return "overdamped";
    case Regime::critical:
      return "critical";
    case Regime::underdamped:
      return "underdamped";
  }
  return "unknown";
}

std::array<double, 4> damping_spectrum(const ModelParams& params) {
  return {0.0, params.eigenvalue(1), params.eigenvalue(2), params.eigenvalue(3)};
}

double response(double nu, double kappa_tau) {
  if (nu == 0.0) return 1.0;
  const double x = 4.0 * kappa_tau;
  const double mu2 = (x - 1.0) * (x + 1.0);

  if (std::abs(x - 1.0) < kCriticalSeriesWidth) {
    // cos(mu nu) + sin(mu nu)/mu = (1 + nu) - mu^2 (nu^2/2 + nu^3/6) + O(mu^4)
    const double nu2 = nu * nu;
    return std::exp(-nu) * ((1.0 + nu) - mu2 * (0.5 * nu2 + nu2 * nu / 6.0));
  }
  if (mu2 > 0.0) {
    const double mu = std::sqrt(mu2);
    return std::exp(-nu) * (std::cos(mu * nu) + std::sin(mu * nu) / mu);
  }
  // Overdamped: the two real poles are -(1 -+ m) in units of 1/(2 tau).
  // e^{-nu}[cosh(m nu) + sinh(m nu)/m] split into decaying exponentials so
  // large nu does not overflow; 1 - m is formed without cancellation.
  const double m = std::sqrt(-mu2);
  const double slow = (x * x) / (1.0 + m);  // 1 - m
  const double fast = 1.0 + m;
  return 0.5 * ((1.0 + 1.0 / m) * std::exp(-slow * nu) + (1.0 - 1.0 / m) * std::exp(-fast * nu));
}

Propagator propagator(const ModelParams& params, double nu) {
  if (!(nu >= 0.0)) throw InvalidArgument("dimensionless time must be >= 0");
  Propagator p;
  p.nu = nu;
  for (int i = 1; i <= 3; ++i) p.lambda[static_cast<std::size_t>(i)] = response(nu, params.kappa_tau(i));
  return p;
}

DensityMatrix propagate(const DensityMatrix& rho0, double nu, const ModelParams& params) {
  const Propagator p = propagator(params, nu);
  BlochVector b = density_to_bloch(rho0);
  for (std::size_t i = 0; i < 3; ++i) b[i] *= p.lambda[i + 1];
  return bloch_to_density(b);
}

DensityMatrix propagate_time(const DensityMatrix& rho0, double t, const ModelParams& params) {
  return propagate(rho0, t / (2.0 * params.tau()), params);
}

ComplexMat2 apply_map(const ComplexMat2& op, const Propagator& prop) {
  ComplexMat2 out;
  for (int i = 0; i < 4; ++i) {
    const ComplexMat2 s = pauli(i);
    const Complex coeff = 0.5 * (s * op).trace() * prop.lambda[static_cast<std::size_t>(i)];
    out += coeff * s;
  }
  return out;
}

std::array<double, 3> markov_rates(const ModelParams& params) {
  std::array<double, 3> g{};
  for (int i = 1; i <= 3; ++i) {
    const double k = params.kappa(i);
    g[static_cast<std::size_t>(i - 1)] = 4.0 * k * k * params.tau();
  }
  return g;
}

DensityMatrix markov_propagate(const DensityMatrix& rho0, double t, const ModelParams& params) {
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
  const auto g = markov_rates(params);
  BlochVector b = density_to_bloch(rho0);
  for (std::size_t i = 0; i < 3; ++i) b[i] *= std::exp(-g[i] * t);
  return bloch_to_density(b);
}

Regime classify_regime(double kappa_tau) {
  if (std::abs(kappa_tau - 0.25) <= 1e-12) return Regime::critical;
  return kappa_tau < 0.25 ? Regime::overdamped : Regime::underdamped;
}

std::array<Regime, 3> classify_regime(const ModelParams& params) {
  return {classify_regime(params.kappa_tau(1)), classify_regime(params.kappa_tau(2)),
          classify_regime(params.kappa_tau(3))};
}

}  // namespace telegraph
