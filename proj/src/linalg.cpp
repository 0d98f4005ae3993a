#include "telegraph/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "telegraph/errors.hpp"

namespace telegraph {

ComplexMat4 kron(const ComplexMat2& a, const ComplexMat2& b) {
  ComplexMat4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMat2 pauli(int index) {
  ComplexMat2 m;
  switch (index) {
    case 0:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case 3:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw InvalidArgument("pauli index must be in 0..3, got " + std::to_string(index));
  }
  return m;
}

double BlochVector::norm() const { return std::hypot(b[0], b[1], b[2]); }

DensityMatrix DensityMatrix::from_matrix(const ComplexMat2& m) {
  if (hermiticity_defect(m) > kTolerance) throw NotAState("matrix is not Hermitian");
  if (std::abs(m.trace() - 1.0) > kTolerance) throw NotAState("matrix does not have unit trace");
  if (hermitian_eigenvalues(m)[0] < -kTolerance) throw NotAState("matrix has a negative eigenvalue");
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed() { return bloch_to_density(BlochVector{}); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix bloch_to_density(const BlochVector& bloch) {
  if (!(bloch.norm() <= 1.0 + DensityMatrix::kTolerance))
    throw NotAState("Bloch vector lies outside the unit ball");
  const auto [x, y, z] = bloch.b;
  ComplexMat2 m;
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = Complex(0.5 * x, -0.5 * y);
  m(1, 0) = Complex(0.5 * x, 0.5 * y);
  return DensityMatrix(m);
}

BlochVector bloch_coordinates(const ComplexMat2& m) {
  // Tr{sigma_i m} written out entrywise.
  return BlochVector{{(m(0, 1) + m(1, 0)).real(), (Complex(0.0, 1.0) * (m(0, 1) - m(1, 0))).real(),
                      (m(0, 0) - m(1, 1)).real()}};
}

BlochVector density_to_bloch(const DensityMatrix& rho) { return bloch_coordinates(rho.matrix()); }

std::array<double, 2> hermitian_eigenvalues(const ComplexMat2& m) {
  const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
  const double half_gap = 0.5 * (m(0, 0).real() - m(1, 1).real());
  const double r = std::hypot(half_gap, std::abs(m(0, 1)));
  return {mean - r, mean + r};
}

namespace {

double off_diagonal_norm(const ComplexMat4& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double frobenius_norm(const ComplexMat4& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary G = W P, where W rephases column q so that
// a(p,q) becomes real and P is a real Jacobi rotation.
void rotate(ComplexMat4& a, ComplexMat4& v, std::size_t p, std::size_t q) {
  const double r = std::abs(a(p, q));
  if (r == 0.0) return;
  const Complex phase = a(p, q) / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double zeta = (aqq - app) / (2.0 * r);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex g_pp = c;
  const Complex g_pq = s;
  const Complex g_qp = -s * std::conj(phase);
  const Complex g_qq = c * std::conj(phase);

  // a <- a G
  for (std::size_t k = 0; k < 4; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * g_pp + akq * g_qp;
    a(k, q) = akp * g_pq + akq * g_qq;
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * g_pp + vkq * g_qp;
    v(k, q) = vkp * g_pq + vkq * g_qq;
  }
  // a <- G^dagger a
  for (std::size_t k = 0; k < 4; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

HermitianEigen4 hermitian_eigen(const ComplexMat4& m) {
  if (hermiticity_defect(m) > 1e-10) throw InvalidArgument("matrix is not Hermitian");

  // Symmetrize so that the rotations act on an exactly Hermitian matrix.
  ComplexMat4 a = (m + m.adjoint()) * Complex(0.5);
  ComplexMat4 v = ComplexMat4::identity();
  const double threshold = 1e-14 * std::max(1.0, frobenius_norm(a));

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > threshold; ++sweep)
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t q = p + 1; q < 4; ++q) rotate(a, v, p, q);

  std::array<std::size_t, 4> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen4 out;
  for (std::size_t k = 0; k < 4; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t row = 0; row < 4; ++row) out.vectors(row, k) = v(row, order[k]);
  }
  return out;
}

std::array<double, 4> hermitian_eigenvalues(const ComplexMat4& m) { return hermitian_eigen(m).values; }

}  // namespace telegraph
