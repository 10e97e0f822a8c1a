#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace bilocal {

using Complex = std::complex<double>;

/// Inputs whose anti-Hermitian part exceeds this (max abs entry) are rejected.
inline constexpr double kHermiticityTolerance = 1e-10;

class LinalgError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense square complex matrix, row-major. Qubit registers use big-endian
/// ordering: qubit 0 is the most significant bit of the basis index.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  /// |v><v|
  static ComplexMatrix projector(std::span<const Complex> ket);

  std::size_t dim() const { return dim_; }
  std::span<const Complex> entries() const { return entries_; }

  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  ComplexMatrix adjoint() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

/// Largest entrywise modulus of (a - b). Dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |M - M^dagger| entrywise.
double hermiticity_defect(const ComplexMatrix& m);

/// (M + M^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Tr[A B] without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out the listed qubits of a 2^k-dimensional operator. The remaining
/// qubits keep their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> traced_qubits);
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::initializer_list<int> traced_qubits);

/// Eigenvalues of a Hermitian matrix in ascending order, computed by cyclic
/// complex Jacobi rotations. The input is symmetrized first; it must be
/// Hermitian within kHermiticityTolerance.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// Pauli matrices and the single-qubit identity.
const ComplexMatrix& pauli_identity();
const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
/// axis 0, 1, 2 -> x, y, z
const ComplexMatrix& pauli(int axis);

/// n . sigma for a real 3-vector n.
ComplexMatrix bloch_observable(const std::array<double, 3>& n);

/// Real symmetric 3x3 matrix stored by its upper triangle.
struct RealSym3 {
  double xx = 0.0, xy = 0.0, xz = 0.0;
  double yy = 0.0, yz = 0.0;
  double zz = 0.0;

  static RealSym3 gram(const std::array<std::array<double, 3>, 3>& t);  // t^T t
  double at(int row, int col) const;
};

/// Ascending eigenvalues via the trigonometric solution of the characteristic cubic.
std::array<double, 3> sym3_eigenvalues(const RealSym3& s);

/// det(S - lambda I); used to check eigenvalues.
double sym3_characteristic(const RealSym3& s, double lambda);

}  // namespace bilocal
