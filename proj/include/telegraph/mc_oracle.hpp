#pragma once

// Brute-force reference for the averaged telegraph dynamics: sample random
// telegraph signals, evolve each realization exactly under
// H(t) = sum_k Gamma_k(t) sigma_k, and average the Bloch vectors.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "telegraph/linalg.hpp"
#include "telegraph/parallel.hpp"
#include "telegraph/telegraph_model.hpp"

namespace telegraph {

/// Counter-based generator: output n of stream (seed, stream) is a SplitMix64
/// finalizer applied to key + n * golden, so any trajectory's numbers depend
/// only on (seed, trajectory index).
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double exponential(double mean);
  bool coin();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct TelegraphPath {
  double amplitude = 0.0;           // signed initial value, +-a
  std::vector<double> flip_times;   // strictly increasing, within [0, t_max]
  double tau = 1.0;
  double t_max = 0.0;

  std::size_t flips_until(double t) const;
  /// amplitude * (-1)^{number of flips in [0, t]}
  double value_at(double t) const;
};

/// Fair-coin initial sign; waiting times between flips are exponential with
/// mean 2 tau (so the flip count up to t is Poisson with mean t / (2 tau)).
TelegraphPath sample_path(double tau, double amplitude, double t_max, StreamRng& rng);

/// Bloch vectors of one realization on a grid of dimensionless times
/// nu = t / (2 tau). Between flips H is constant and the Bloch vector is
/// rotated exactly about Gamma by the angle 2 |Gamma| dt.
std::vector<BlochVector> evolve_trajectory(const std::array<TelegraphPath, 3>& paths,
                                           const DensityMatrix& rho0,
                                           std::span<const double> nu_grid);

/// Samples the three signals for trajectory `index` and evolves it.
std::vector<BlochVector> simulate_trajectory(const ModelParams& params, const DensityMatrix& rho0,
                                             std::span<const double> nu_grid, std::uint64_t seed,
                                             std::uint64_t index);

struct EnsembleResult {
  std::vector<double> grid;
  std::vector<std::array<double, 3>> mean;
  std::vector<std::array<double, 3>> standard_error;  // sample stddev / sqrt(N)
  std::size_t trajectories = 0;
  std::uint64_t seed = 0;
  /// Largest |Tr rho(nu)^2 - Tr rho0^2| seen along any single trajectory.
  double max_purity_drift = 0.0;
};

/// Averages N >= 2 trajectories. Per-trajectory results are reduced in
/// trajectory-index order, so the result is bit-identical for any thread count.
EnsembleResult ensemble_average(const ModelParams& params, const DensityMatrix& rho0,
                                std::span<const double> nu_grid, std::size_t trajectories,
                                std::uint64_t seed, Execution exec = {});

struct CorrelationEstimate {
  double t0 = 0.0;
  std::vector<double> lags;
  std::vector<double> mean;            // <Gamma(t0) Gamma(t0 + lag)>
  std::vector<double> standard_error;
  double signal_mean = 0.0;            // <Gamma(t0)>
  double signal_mean_error = 0.0;
  std::size_t paths = 0;
};

/// Sample autocorrelation of the telegraph signal; the exact value is
/// a^2 exp(-|lag| / tau).
CorrelationEstimate telegraph_autocorrelation(double tau, double amplitude, double t0,
                                              std::span<const double> lags, std::size_t paths,
                                              std::uint64_t seed, Execution exec = {});

}  // namespace telegraph
