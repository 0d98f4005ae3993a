#include "telegraph/cp_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "telegraph/errors.hpp"

namespace telegraph {

namespace {

constexpr double kMaxHorizon = 1e7;
constexpr std::size_t kMaxGridPoints = 4'000'000;
constexpr double kSamplesPerPeriod = 32.0;

// Upper bound on |Lambda(nu)| that decreases monotonically in nu.
double envelope(double nu, double kappa_tau) {
  const double x = 4.0 * kappa_tau;
  const double mu2 = (x - 1.0) * (x + 1.0);
  if (mu2 > 0.0) {
    // |cos + sin/mu| <= sqrt(1 + 1/mu^2) and also <= 1 + nu.
    return std::exp(-nu) * std::min(std::sqrt(1.0 + 1.0 / mu2), 1.0 + nu);
  }
  if (mu2 == 0.0 || std::abs(x - 1.0) < 1e-6) return std::exp(-nu) * (1.0 + nu) * (1.0 + 1e-9);
  const double m = std::sqrt(-mu2);
  const double slow = (x * x) / (1.0 + m);
  return std::min(1.0, 0.5 * (1.0 + 1.0 / m) * std::exp(-slow * nu));
}

bool better(const XiWitness& a, const XiWitness& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.nu != b.nu) return a.nu < b.nu;
  return a.component < b.component;
}

XiWitness golden_section(const ModelParams& params, int component, double lo, double hi) {
  const auto f = [&](double nu) { return xi(nu, params)[static_cast<std::size_t>(component - 1)]; };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  XiWitness best{c, component, fc};
  const XiWitness other{d, component, fd};
  if (better(other, best)) best = other;
  return best;
}

}  // namespace

XiVector xi_from_propagator(const Propagator& prop) {
  const double l1 = prop.lambda[1];
  const double l2 = prop.lambda[2];
  const double l3 = prop.lambda[3];
  // Grouped so that equal Lambdas cancel exactly.
  const double minus3 = 1.0 - l3;
  const double plus3 = 1.0 + l3;
  const double diff12 = l1 - l2;
  const double sum12 = l1 + l2;
  return XiVector{prop.nu,
                  {0.25 * (minus3 + diff12), 0.25 * (minus3 - diff12), 0.25 * (plus3 - sum12),
                   0.25 * (plus3 + sum12)}};
}

XiVector xi(double nu, const ModelParams& params) { return xi_from_propagator(propagator(params, nu)); }

ComplexMat4 choi_matrix(const ModelParams& params, double nu) {
  const Propagator prop = propagator(params, nu);
  ComplexMat4 out;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      ComplexMat2 unit;
      unit(a, b) = 1.0;
      out += 0.5 * kron(apply_map(unit, prop), unit);
    }
  return out;
}

double scan_horizon(const ModelParams& params) {
  std::vector<double> active;
  for (int i = 1; i <= 3; ++i)
    if (params.kappa(i) > 0.0) active.push_back(params.kappa_tau(i));
  if (active.empty()) return 1.0;

  const double target = std::exp(-1.0);
  const auto total = [&](double nu) {
    double s = 0.0;
    for (double kt : active) s += envelope(nu, kt);
    return s;
  };
  double hi = 1.0;
  while (total(hi) > target && hi < kMaxHorizon) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

CpVerdict is_cp(const ModelParams& params, const CpScanOptions& options) {
  CpVerdict verdict;
  verdict.horizon = options.nu_max.value_or(scan_horizon(params));
  if (!(verdict.horizon > 0.0)) throw InvalidArgument("scan horizon must be > 0");

  double max_mu = 0.0;
  for (int i = 1; i <= 3; ++i)
    if (params.mu_squared(i) > 0.0) max_mu = std::max(max_mu, std::sqrt(params.mu_squared(i)));
  const double resolved =
      std::ceil(verdict.horizon * max_mu / (2.0 * std::numbers::pi) * kSamplesPerPeriod) + 1.0;
  const std::size_t n = std::clamp<std::size_t>(
      std::max(options.grid_points, static_cast<std::size_t>(std::min(resolved, 1e12))), 3,
      kMaxGridPoints);
  verdict.grid_points = n;

  const auto node = [&](std::size_t k) {
    return verdict.horizon * static_cast<double>(k) / static_cast<double>(n - 1);
  };
  std::vector<XiVector> grid(n);
  parallel_chunks(n, options.exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) grid[k] = xi(node(k), params);
  });

  struct Candidate {
    std::size_t k;
    int component;
  };
  std::vector<Candidate> candidates;
  XiWitness lowest{0.0, 4, grid[0][3]};
  for (int j = 1; j <= 4; ++j) {
    const auto c = static_cast<std::size_t>(j - 1);
    for (std::size_t k = 0; k < n; ++k) {
      const double v = grid[k][c];
      const XiWitness here{grid[k].nu, j, v};
      if (better(here, lowest)) lowest = here;
      const bool left_ok = k == 0 || v <= grid[k - 1][c];
      const bool right_ok = k + 1 == n || v <= grid[k + 1][c];
      const bool strict = (k > 0 && v < grid[k - 1][c]) || (k + 1 < n && v < grid[k + 1][c]);
      if (left_ok && right_ok && strict && v < options.refine_below) candidates.push_back({k, j});
    }
  }

  std::vector<XiWitness> refined(candidates.size());
  parallel_chunks(candidates.size(), options.exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const auto [k, j] = candidates[m];
      const double lo = node(k == 0 ? 0 : k - 1);
      const double hi = node(std::min(k + 1, n - 1));
      refined[m] = golden_section(params, j, lo, hi);
    }
  });
  for (const auto& w : refined)
    if (better(w, lowest)) lowest = w;

  verdict.lowest = lowest;
  verdict.is_cp = !(lowest.value < -options.tolerance);
  if (!verdict.is_cp) verdict.witness = lowest;
  return verdict;
}

std::optional<double> critical_flip_parameter(const std::array<double, 3>& direction, double tau,
                                              double tolerance, const CpScanOptions& options) {
  double largest = 0.0;
  for (double d : direction) {
    if (!std::isfinite(d) || d < 0.0) throw InvalidArgument("direction components must be finite and >= 0");
    largest = std::max(largest, d);
  }
  if (largest == 0.0) throw InvalidArgument("direction must have a nonzero component");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");

  const auto cp_at = [&](double a_tau) {
    std::array<double, 3> a{};
    for (std::size_t i = 0; i < 3; ++i) a[i] = direction[i] / largest * a_tau / tau;
    return is_cp(ModelParams::create(a, tau), options).is_cp;
  };

  double lo = 0.01;
  double hi = 10.0;
  if (!cp_at(lo)) throw InvalidArgument("map is not CP at the lower bracket a*tau = 0.01");
  while (cp_at(hi)) {
    if (hi >= 1e4) return std::nullopt;
    lo = hi;
    hi *= 10.0;
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (cp_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sufficient_frequency_bound() { return std::numbers::pi / std::log(3.0); }

bool sufficient_condition(const ModelParams& params) {
  double max_mu = 0.0;
  for (int i = 1; i <= 3; ++i)
    if (params.mu_squared(i) > 0.0) max_mu = std::max(max_mu, std::sqrt(params.mu_squared(i)));
  return max_mu <= sufficient_frequency_bound();
}

bool markov_cp_check(const std::array<double, 3>& gamma) {
  for (double g : gamma)
    if (!std::isfinite(g) || g < 0.0) throw InvalidArgument("rates must be finite and >= 0");
  for (std::size_t i = 0; i < 3; ++i) {
    const double others = gamma[(i + 1) % 3] + gamma[(i + 2) % 3];
    if (gamma[i] > others * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace telegraph
