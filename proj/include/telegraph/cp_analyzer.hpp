#pragma once

// Complete-positivity analysis of the telegraph map. The Choi matrix
// (Phi (x) I)(|b00><b00|) of a Pauli-diagonal qubit map has the spectrum
//
//     4 xi_1 = 1 + L1 - L2 - L3      4 xi_2 = 1 - L1 + L2 - L3
//     4 xi_3 = 1 - L1 - L2 + L3      4 xi_4 = 1 + L1 + L2 + L3
//
// so the map is CP at time nu iff all four xi_j(nu) >= 0, and CP for all
// time iff their infimum over nu >= 0.

#include <array>
#include <cstddef>
#include <optional>

#include "telegraph/linalg.hpp"
#include "telegraph/parallel.hpp"
#include "telegraph/telegraph_model.hpp"

namespace telegraph {

struct XiVector {
  double nu = 0.0;
  std::array<double, 4> values{};

  double operator[](std::size_t j) const { return values[j]; }
  double sum() const { return values[0] + values[1] + values[2] + values[3]; }
};

struct XiWitness {
  double nu = 0.0;
  int component = 4;  // 1..4
  double value = 0.0;
};

struct CpVerdict {
  bool is_cp = true;
  std::optional<XiWitness> witness;  // most negative violation, set iff !is_cp
  XiWitness lowest;                  // refined minimum over all components
  double horizon = 0.0;
  std::size_t grid_points = 0;
};

struct CpScanOptions {
  static constexpr double kDefaultTolerance = 1e-10;

  std::optional<double> nu_max;  // defaults to scan_horizon(params)
  std::size_t grid_points = 2000;
  double tolerance = kDefaultTolerance;
  double refine_below = 1e-6;
  Execution exec{};
};

/// Coefficients of the four linear combinations above.
XiVector xi_from_propagator(const Propagator& prop);

XiVector xi(double nu, const ModelParams& params);

/// (Phi_nu (x) I)(|b00><b00|), first tensor factor carries the map.
ComplexMat4 choi_matrix(const ModelParams& params, double nu);

/// Time beyond which every xi_j is certified positive: the smallest nu with
/// sum_i env_i(nu) <= 1/e, where env_i bounds |Lambda_i| from above. For
/// underdamped components env_i = e^{-nu} sqrt(1 + 1/mu_i^2), which gives
/// ln(3 max_i sqrt(1 + 1/mu_i^2)) + 1 when all three are underdamped.
double scan_horizon(const ModelParams& params);

/// Grid scan of xi_j over [0, horizon] with golden-section refinement of
/// local minima below `refine_below`.
CpVerdict is_cp(const ModelParams& params, const CpScanOptions& options = {});

/// Boundary in a*tau along a coupling direction (normalized so that its
/// largest component is 1, i.e. a is the largest coupling), found by
/// bisection to `tolerance`. Returns nullopt when the map stays CP up to
/// a*tau = 1e4. Throws InvalidArgument for a zero or negative direction.
std::optional<double> critical_flip_parameter(const std::array<double, 3>& direction, double tau,
                                              double tolerance = 1e-3,
                                              const CpScanOptions& options = {});

/// pi / ln 3, the largest common frequency at which xi_4(pi/mu) >= 0.
double sufficient_frequency_bound();

/// max over underdamped components of mu_i <= pi / ln 3. Overdamped and
/// critical components satisfy it trivially.
bool sufficient_condition(const ModelParams& params);

/// Triangle conditions gamma_i <= gamma_j + gamma_k (relative slack 1e-12).
/// Throws InvalidArgument for negative rates.
bool markov_cp_check(const std::array<double, 3>& gamma);

}  // namespace telegraph
