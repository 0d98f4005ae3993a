#include "telegraph/mc_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "telegraph/errors.hpp"

namespace telegraph {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void rotate_bloch(BlochVector& b, const std::array<double, 3>& field, double dt) {
  const double g = std::hypot(field[0], field[1], field[2]);
  if (g == 0.0 || dt == 0.0) return;
  const std::array<double, 3> n{field[0] / g, field[1] / g, field[2] / g};
  const double angle = 2.0 * g * dt;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double along = n[0] * b[0] + n[1] * b[1] + n[2] * b[2];
  const std::array<double, 3> cross{n[1] * b[2] - n[2] * b[1], n[2] * b[0] - n[0] * b[2],
                                    n[0] * b[1] - n[1] * b[0]};
  for (std::size_t i = 0; i < 3; ++i) {
    const double parallel = along * n[i];
    b[i] = parallel + c * (b[i] - parallel) + s * cross[i];
  }
}

double purity_of(const BlochVector& b) {
  return 0.5 * (1.0 + b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

void check_grid(std::span<const double> nu_grid) {
  if (nu_grid.empty()) throw InvalidArgument("time grid must not be empty");
  for (std::size_t k = 0; k < nu_grid.size(); ++k) {
    if (!std::isfinite(nu_grid[k]) || nu_grid[k] < 0.0) throw InvalidArgument("grid times must be >= 0");
    if (k > 0 && nu_grid[k] < nu_grid[k - 1]) throw InvalidArgument("grid must be ascending");
  }
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + mix64(stream ^ 0x632BE59BD9B4E019ULL))) {}

StreamRng::result_type StreamRng::operator()() { return mix64(key_ + (++counter_) * kGolden); }

double StreamRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double StreamRng::exponential(double mean) { return -mean * std::log1p(-uniform()); }

bool StreamRng::coin() { return ((*this)() >> 63) != 0; }

std::size_t TelegraphPath::flips_until(double t) const {
  return static_cast<std::size_t>(std::upper_bound(flip_times.begin(), flip_times.end(), t) -
                                  flip_times.begin());
}

double TelegraphPath::value_at(double t) const {
  return flips_until(t) % 2 == 0 ? amplitude : -amplitude;
}

TelegraphPath sample_path(double tau, double amplitude, double t_max, StreamRng& rng) {
  if (!(tau > 0.0)) throw InvalidArgument("sample_path needs tau > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("sample_path needs t_max > 0");
  if (!std::isfinite(amplitude)) throw InvalidArgument("sample_path needs a finite amplitude");

  TelegraphPath path;
  path.tau = tau;
  path.t_max = t_max;
  const double a = std::abs(amplitude);
  path.amplitude = rng.coin() ? a : -a;
  double t = rng.exponential(2.0 * tau);
  while (t <= t_max) {
    if (path.flip_times.empty() || t > path.flip_times.back()) path.flip_times.push_back(t);
    t += rng.exponential(2.0 * tau);
  }
  return path;
}

std::vector<BlochVector> evolve_trajectory(const std::array<TelegraphPath, 3>& paths,
                                           const DensityMatrix& rho0,
                                           std::span<const double> nu_grid) {
  check_grid(nu_grid);
  const double tau = paths[0].tau;
  const double t_max = paths[0].t_max;
  for (const auto& p : paths)
    if (p.tau != tau || p.t_max != t_max)
      throw InvalidArgument("the three telegraph paths must share tau and t_max");
  if (2.0 * tau * nu_grid.back() > t_max) throw InvalidArgument("grid exceeds the paths' t_max");

  std::array<double, 3> field{paths[0].amplitude, paths[1].amplitude, paths[2].amplitude};
  std::array<std::size_t, 3> next{0, 0, 0};
  BlochVector b = density_to_bloch(rho0);
  double now = 0.0;

  std::vector<BlochVector> out;
  out.reserve(nu_grid.size());
  for (double nu : nu_grid) {
    const double target = 2.0 * tau * nu;
    for (;;) {
      // Earliest pending flip among the three signals (ties: lowest axis).
      std::size_t axis = 3;
      double flip = target;
      for (std::size_t k = 0; k < 3; ++k)
        if (next[k] < paths[k].flip_times.size() && paths[k].flip_times[next[k]] < flip) {
          flip = paths[k].flip_times[next[k]];
          axis = k;
        }
      if (axis == 3) break;
      rotate_bloch(b, field, flip - now);
      now = flip;
      field[axis] = -field[axis];
      ++next[axis];
    }
    rotate_bloch(b, field, target - now);
    now = target;
    out.push_back(b);
  }
  return out;
}

std::vector<BlochVector> simulate_trajectory(const ModelParams& params, const DensityMatrix& rho0,
                                             std::span<const double> nu_grid, std::uint64_t seed,
                                             std::uint64_t index) {
  check_grid(nu_grid);
  const double tau = params.tau();
  const double t_max = std::max(2.0 * tau * nu_grid.back(), tau);
  StreamRng rng(seed, index);
  std::array<TelegraphPath, 3> paths;
  for (std::size_t k = 0; k < 3; ++k) paths[k] = sample_path(tau, params.couplings()[k], t_max, rng);
  return evolve_trajectory(paths, rho0, nu_grid);
}

EnsembleResult ensemble_average(const ModelParams& params, const DensityMatrix& rho0,
                                std::span<const double> nu_grid, std::size_t trajectories,
                                std::uint64_t seed, Execution exec) {
  if (trajectories < 2) throw InvalidArgument("ensemble_average needs at least 2 trajectories");
  check_grid(nu_grid);

  const std::size_t points = nu_grid.size();
  // samples[(traj * points + k) * 3 + i]
  std::vector<double> samples(trajectories * points * 3);
  std::vector<double> drift(trajectories, 0.0);
  const double purity0 = rho0.purity();

  parallel_chunks(trajectories, exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const auto traj = simulate_trajectory(params, rho0, nu_grid, seed, n);
      double worst = 0.0;
      for (std::size_t k = 0; k < points; ++k) {
        for (std::size_t i = 0; i < 3; ++i) samples[(n * points + k) * 3 + i] = traj[k][i];
        worst = std::max(worst, std::abs(purity_of(traj[k]) - purity0));
      }
      drift[n] = worst;
    }
  });

  EnsembleResult result;
  result.grid.assign(nu_grid.begin(), nu_grid.end());
  result.mean.resize(points);
  result.standard_error.resize(points);
  result.trajectories = trajectories;
  result.seed = seed;
  result.max_purity_drift = *std::max_element(drift.begin(), drift.end());

  const auto count = static_cast<double>(trajectories);
  parallel_chunks(points, exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
      for (std::size_t i = 0; i < 3; ++i) {
        const auto at = [&](std::size_t n) { return samples[(n * points + k) * 3 + i]; };
        const double mean = pairwise_sum(0, trajectories, at) / count;
        const double ss = pairwise_sum(0, trajectories, [&](std::size_t n) {
          const double d = at(n) - mean;
          return d * d;
        });
        result.mean[k][i] = mean;
        result.standard_error[k][i] = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
      }
  });
  return result;
}

CorrelationEstimate telegraph_autocorrelation(double tau, double amplitude, double t0,
                                              std::span<const double> lags, std::size_t paths,
                                              std::uint64_t seed, Execution exec) {
  if (paths < 2) throw InvalidArgument("telegraph_autocorrelation needs at least 2 paths");
  if (lags.empty()) throw InvalidArgument("telegraph_autocorrelation needs at least one lag");
  if (!(t0 >= 0.0)) throw InvalidArgument("t0 must be >= 0");
  double max_lag = 0.0;
  for (double lag : lags) {
    if (!(lag >= 0.0) || !std::isfinite(lag)) throw InvalidArgument("lags must be finite and >= 0");
    max_lag = std::max(max_lag, lag);
  }
  const double t_max = std::max(t0 + max_lag, tau);
  const std::size_t columns = lags.size() + 1;  // column 0: Gamma(t0)

  std::vector<double> samples(paths * columns);
  parallel_chunks(paths, exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      StreamRng rng(seed, n);
      const TelegraphPath path = sample_path(tau, amplitude, t_max, rng);
      const double g0 = path.value_at(t0);
      samples[n * columns] = g0;
      for (std::size_t l = 0; l < lags.size(); ++l)
        samples[n * columns + l + 1] = g0 * path.value_at(t0 + lags[l]);
    }
  });

  const auto count = static_cast<double>(paths);
  const auto summarize = [&](std::size_t col, double& mean, double& se) {
    const auto at = [&](std::size_t n) { return samples[n * columns + col]; };
    mean = pairwise_sum(0, paths, at) / count;
    const double ss = pairwise_sum(0, paths, [&](std::size_t n) {
      const double d = at(n) - mean;
      return d * d;
    });
    se = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  };

  CorrelationEstimate est;
  est.t0 = t0;
  est.paths = paths;
  est.lags.assign(lags.begin(), lags.end());
  est.mean.resize(lags.size());
  est.standard_error.resize(lags.size());
  summarize(0, est.signal_mean, est.signal_mean_error);
  for (std::size_t l = 0; l < lags.size(); ++l) summarize(l + 1, est.mean[l], est.standard_error[l]);
  return est;
}

}  // namespace telegraph
