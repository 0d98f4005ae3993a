#pragma once

// Kraus form of the telegraph map: A_1..A_3 = sqrt(xi_j) sigma_j and
// A_4 = sqrt(xi_4) I. All operators are Hermitian, so the orderings
// A^dagger rho A and A rho A^dagger coincide.

#include <stdexcept>
#include <vector>

#include "telegraph/cp_analyzer.hpp"
#include "telegraph/linalg.hpp"
#include "telegraph/telegraph_model.hpp"

namespace telegraph {

/// Thrown when some xi_j < -1e-10, i.e. the map has no Kraus decomposition.
class NotCompletelyPositive : public std::runtime_error {
 public:
  explicit NotCompletelyPositive(const XiVector& xi);
  const XiVector& xi() const noexcept { return xi_; }

 private:
  XiVector xi_;
};

struct KrausOperator {
  int pauli_index = 0;  // 0 = identity, 1..3 = sigma_i
  double weight = 0.0;  // xi_j after clamping
  ComplexMat2 matrix;   // sqrt(weight) * pauli(pauli_index)
};

struct KrausSet {
  /// Operators with a strictly positive weight, ordered sigma_1, sigma_2, sigma_3, I.
  std::vector<KrausOperator> operators;

  /// sum_k A_k A_k^dagger.
  ComplexMat2 completeness() const;

  static KrausSet identity();
};

KrausSet kraus_from_xi(const XiVector& xi);

KrausSet kraus_from_params(const ModelParams& params, double nu);

/// sum_k A_k rho A_k^dagger.
DensityMatrix apply(const KrausSet& kraus, const DensityMatrix& rho);

/// sum_k A_k^dagger rho A_k, the ordering written in the Kraus sum of the
/// original model. Identical here because every A_k is Hermitian.
ComplexMat2 apply_adjoint_ordering(const KrausSet& kraus, const ComplexMat2& rho);

/// (rho + sigma_3 rho sigma_3) / 2, the long-time limit of z-axis telegraph
/// dephasing (a phase-flip channel with colored noise).
DensityMatrix dephasing_steady_state(const DensityMatrix& rho);

}  // namespace telegraph
