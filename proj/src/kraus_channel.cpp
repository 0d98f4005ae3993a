#include "telegraph/kraus_channel.hpp"

#include <array>
#include <cmath>
#include <string>

namespace telegraph {

namespace {

std::string describe(const XiVector& xi) {
  std::string s = "map is not completely positive at nu = " + std::to_string(xi.nu) + ": xi = (";
  for (std::size_t j = 0; j < 4; ++j) s += (j ? ", " : "") + std::to_string(xi[j]);
  return s + ")";
}

}  // namespace

NotCompletelyPositive::NotCompletelyPositive(const XiVector& xi)
    : std::runtime_error(describe(xi)), xi_(xi) {}

ComplexMat2 KrausSet::completeness() const {
  ComplexMat2 sum;
  for (const auto& op : operators) sum += op.matrix * op.matrix.adjoint();
  return sum;
}

KrausSet KrausSet::identity() { return KrausSet{{KrausOperator{0, 1.0, ComplexMat2::identity()}}}; }

KrausSet kraus_from_xi(const XiVector& xi) {
  for (std::size_t j = 0; j < 4; ++j)
    if (xi[j] < -CpScanOptions::kDefaultTolerance) throw NotCompletelyPositive(xi);

  // Roundoff-level negatives are clamped to zero; the remaining weights are
  // rescaled so that completeness still holds exactly.
  std::array<double, 4> w{};
  bool clamped = false;
  double total = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    clamped = clamped || xi[j] < 0.0;
    w[j] = std::max(0.0, xi[j]);
    total += w[j];
  }
  if (clamped)
    for (double& v : w) v /= total;

  constexpr int kPauliFor[4] = {1, 2, 3, 0};
  KrausSet set;
  for (std::size_t j = 0; j < 4; ++j) {
    if (w[j] == 0.0) continue;
    set.operators.push_back({kPauliFor[j], w[j], std::sqrt(w[j]) * pauli(kPauliFor[j])});
  }
  return set;
}

KrausSet kraus_from_params(const ModelParams& params, double nu) { return kraus_from_xi(xi(nu, params)); }

DensityMatrix apply(const KrausSet& kraus, const DensityMatrix& rho) {
  ComplexMat2 out;
  for (const auto& op : kraus.operators) out += op.matrix * rho.matrix() * op.matrix.adjoint();
  return DensityMatrix::from_matrix(out);
}

ComplexMat2 apply_adjoint_ordering(const KrausSet& kraus, const ComplexMat2& rho) {
  ComplexMat2 out;
  for (const auto& op : kraus.operators) out += op.matrix.adjoint() * rho * op.matrix;
  return out;
}

DensityMatrix dephasing_steady_state(const DensityMatrix& rho) {
  const ComplexMat2 z = pauli(3);
  return DensityMatrix::from_matrix(0.5 * (rho.matrix() + z * rho.matrix() * z));
}

}  // namespace telegraph
