#pragma once

// Closed-form dynamics of a qubit driven along x, y, z by three independent
// random telegraph signals with amplitudes a_i and a shared flip time tau.
//
// In the Pauli (damping) basis the averaged map is diagonal: the Bloch
// component i is multiplied by
//
//     Lambda_i(nu) = e^{-nu} [cos(mu_i nu) + sin(mu_i nu) / mu_i],
//     mu_i = sqrt((4 kappa_i tau)^2 - 1),  kappa_i^2 = a_j^2 + a_k^2,
//
// with dimensionless time nu = t / (2 tau). For kappa_i tau < 1/4 the
// frequency is imaginary and the trigonometric functions become hyperbolic.

#include <array>
#include <complex>

#include "telegraph/linalg.hpp"

namespace telegraph {

class ModelParams {
 public:
  /// Throws InvalidArgument unless every a_i is finite and >= 0 and tau > 0.
  static ModelParams create(std::array<double, 3> couplings, double tau);

  const std::array<double, 3>& couplings() const { return a_; }
  double tau() const { return tau_; }

  /// kappa_i for component i in 1..3.
  double kappa(int i) const;
  double kappa_tau(int i) const { return kappa(i) * tau_; }
  /// mu_i^2 = (4 kappa_i tau)^2 - 1; negative in the overdamped regime.
  double mu_squared(int i) const;
  /// mu_i as a complex number (purely imaginary when overdamped).
  std::complex<double> mu(int i) const;
  /// lambda_0 = 0, lambda_i = -4 kappa_i^2.
  double eigenvalue(int i) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelParams(std::array<double, 3> a, double tau) : a_(a), tau_(tau) {}

  std::array<double, 3> a_;
  double tau_;
};

enum class Regime { overdamped, critical, underdamped };

const char* to_string(Regime r);

/// Values Lambda_0..Lambda_3 at one dimensionless time.
struct Propagator {
  double nu = 0.0;
  std::array<double, 4> lambda{1.0, 1.0, 1.0, 1.0};
};

/// {0, -4(a2^2+a3^2), -4(a1^2+a3^2), -4(a1^2+a2^2)} for the eigenoperators
/// {I, sigma_1, sigma_2, sigma_3}.
std::array<double, 4> damping_spectrum(const ModelParams& params);

/// Lambda(nu) for a single component with fluctuation parameter kappa*tau.
/// Within |4 kappa tau - 1| < 1e-6 the critical-limit series is used.
double response(double nu, double kappa_tau);

Propagator propagator(const ModelParams& params, double nu);

/// rho(nu) = 1/2 sum_i Tr{sigma_i rho0} Lambda_i(nu) sigma_i.
DensityMatrix propagate(const DensityMatrix& rho0, double nu, const ModelParams& params);

/// Same as propagate, with physical time t = 2 tau nu.
DensityMatrix propagate_time(const DensityMatrix& rho0, double t, const ModelParams& params);

/// Pauli-diagonal linear action on an arbitrary 2x2 operator.
ComplexMat2 apply_map(const ComplexMat2& op, const Propagator& prop);

/// White-noise inverse lifetimes gamma_i = 4 kappa_i^2 tau.
std::array<double, 3> markov_rates(const ModelParams& params);

/// Bloch components scale by exp(-gamma_i t).
DensityMatrix markov_propagate(const DensityMatrix& rho0, double t, const ModelParams& params);

std::array<Regime, 3> classify_regime(const ModelParams& params);

/// Regime of a single fluctuation parameter kappa*tau.
Regime classify_regime(double kappa_tau);

}  // namespace telegraph
