#pragma once

// Exact ensemble average for three independent telegraph signals: the joint
// process (signal signs, Bloch vector) is Markov, so the sign-conditioned
// Bloch vectors b_s obey a closed linear system
//   db_s/dt = 2 Gamma_s x b_s + (1 / 2 tau) sum_k (b_{s with sign k flipped} - b_s).
// The mean Bloch vector is sum_s b_s. Integrated with classical RK4.

#include <array>
#include <cmath>
#include <vector>

namespace telegraph::testing {

using SignState = std::array<std::array<double, 3>, 8>;

inline SignState liouville_rhs(const SignState& x, const std::array<double, 3>& a, double tau) {
  SignState out{};
  const double rate = 1.0 / (2.0 * tau);
  for (int s = 0; s < 8; ++s) {
    const std::array<double, 3> g{(s & 1 ? -1.0 : 1.0) * a[0], (s & 2 ? -1.0 : 1.0) * a[1],
                                  (s & 4 ? -1.0 : 1.0) * a[2]};
    const auto& b = x[static_cast<std::size_t>(s)];
    auto& o = out[static_cast<std::size_t>(s)];
    o[0] = 2.0 * (g[1] * b[2] - g[2] * b[1]);
    o[1] = 2.0 * (g[2] * b[0] - g[0] * b[2]);
    o[2] = 2.0 * (g[0] * b[1] - g[1] * b[0]);
    for (int k = 0; k < 3; ++k) {
      const auto& f = x[static_cast<std::size_t>(s ^ (1 << k))];
      for (std::size_t i = 0; i < 3; ++i) o[i] += rate * (f[i] - b[i]);
    }
  }
  return out;
}

/// Mean Bloch vector at each dimensionless time nu in `grid` (ascending, from 0).
inline std::vector<std::array<double, 3>> liouville_average(const std::array<double, 3>& a, double tau,
                                                            const std::array<double, 3>& b0,
                                                            const std::vector<double>& grid,
                                                            int substeps = 400) {
  SignState x{};
  for (auto& b : x)
    for (std::size_t i = 0; i < 3; ++i) b[i] = b0[i] / 8.0;

  auto axpy = [](const SignState& u, double h, const SignState& v) {
    SignState r = u;
    for (std::size_t s = 0; s < 8; ++s)
      for (std::size_t i = 0; i < 3; ++i) r[s][i] += h * v[s][i];
    return r;
  };

  std::vector<std::array<double, 3>> out;
  double t = 0.0;
  for (double nu : grid) {
    const double target = 2.0 * tau * nu;
    const int n = std::max(1, static_cast<int>(std::ceil((target - t) * substeps)));
    const double h = (target - t) / n;
    for (int step = 0; step < n && h > 0; ++step) {
      const auto k1 = liouville_rhs(x, a, tau);
      const auto k2 = liouville_rhs(axpy(x, h / 2, k1), a, tau);
      const auto k3 = liouville_rhs(axpy(x, h / 2, k2), a, tau);
      const auto k4 = liouville_rhs(axpy(x, h, k3), a, tau);
      for (std::size_t s = 0; s < 8; ++s)
        for (std::size_t i = 0; i < 3; ++i) x[s][i] += h / 6 * (k1[s][i] + 2 * k2[s][i] + 2 * k3[s][i] + k4[s][i]);
    }
    t = target;
    std::array<double, 3> mean{};
    for (const auto& b : x)
      for (std::size_t i = 0; i < 3; ++i) mean[i] += b[i];
    out.push_back(mean);
  }
  return out;
}

}  // namespace telegraph::testing
