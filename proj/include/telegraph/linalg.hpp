#pragma once

// Small fixed-size complex linear algebra for one qubit (2x2) and a qubit
// pair (4x4): Pauli algebra, Bloch coordinates and a Jacobi eigensolver.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>

namespace telegraph {

using Complex = std::complex<double>;

template <std::size_t N>
class SquareMatrix {
 public:
  static constexpr std::size_t dim = N;

  constexpr SquareMatrix() = default;

  static SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * N + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * N + col];
  }

  SquareMatrix adjoint() const {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  SquareMatrix& operator+=(const SquareMatrix& rhs) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += rhs.data_[k];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& rhs) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= rhs.data_[k];
    return *this;
  }
  SquareMatrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend SquareMatrix operator+(SquareMatrix lhs, const SquareMatrix& rhs) { return lhs += rhs; }
  friend SquareMatrix operator-(SquareMatrix lhs, const SquareMatrix& rhs) { return lhs -= rhs; }
  friend SquareMatrix operator*(SquareMatrix m, Complex s) { return m *= s; }
  friend SquareMatrix operator*(Complex s, SquareMatrix m) { return m *= s; }

  friend SquareMatrix operator*(const SquareMatrix& lhs, const SquareMatrix& rhs) {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex l = lhs(i, k);
        for (std::size_t j = 0; j < N; ++j) out(i, j) += l * rhs(k, j);
      }
    return out;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::array<Complex, N * N> data_{};
};

using ComplexMat2 = SquareMatrix<2>;
using ComplexMat4 = SquareMatrix<4>;

/// Largest entrywise modulus of `a - b`.
template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

template <std::size_t N>
double hermiticity_defect(const SquareMatrix<N>& m) {
  return max_abs_diff(m, m.adjoint());
}

/// Kronecker product; the first factor indexes the high bit.
ComplexMat4 kron(const ComplexMat2& a, const ComplexMat2& b);

/// I, sigma_x, sigma_y, sigma_z for index 0..3.
ComplexMat2 pauli(int index);

struct BlochVector {
  std::array<double, 3> b{};

  double norm() const;
  double operator[](std::size_t i) const { return b[i]; }
  double& operator[](std::size_t i) { return b[i]; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Hermitian, unit-trace, positive-semidefinite 2x2 matrix.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  /// Validates the three state conditions; throws NotAState on failure.
  static DensityMatrix from_matrix(const ComplexMat2& m);

  static DensityMatrix maximally_mixed();

  const ComplexMat2& matrix() const { return m_; }
  double purity() const;

 private:
  explicit DensityMatrix(const ComplexMat2& m) : m_(m) {}
  friend DensityMatrix bloch_to_density(const BlochVector& bloch);

  ComplexMat2 m_;
};

/// (I + b.sigma)/2. Throws NotAState when |b| > 1 + 1e-12.
DensityMatrix bloch_to_density(const BlochVector& bloch);

/// b_i = Tr{sigma_i rho}.
BlochVector density_to_bloch(const DensityMatrix& rho);

/// Bloch coordinates of an arbitrary 2x2 matrix, Tr{sigma_i m} (real parts).
BlochVector bloch_coordinates(const ComplexMat2& m);

/// Closed-form eigenvalues of a Hermitian 2x2 matrix, ascending.
std::array<double, 2> hermitian_eigenvalues(const ComplexMat2& m);

struct HermitianEigen4 {
  std::array<double, 4> values{};  // ascending
  ComplexMat4 vectors;             // column k belongs to values[k]
};

/// Cyclic complex Jacobi rotations, stopped once the off-diagonal Frobenius
/// norm falls below 1e-14 (relative to the matrix norm when that exceeds 1).
/// Throws InvalidArgument when |M - M^dagger|_max > 1e-10.
HermitianEigen4 hermitian_eigen(const ComplexMat4& m);

std::array<double, 4> hermitian_eigenvalues(const ComplexMat4& m);

}  // namespace telegraph
