#include "bilocal/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace bilocal {
namespace {

constexpr double kJacobiOffDiagonalTolerance = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw LinalgError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()) + ")");
  }
}

int qubit_count(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw LinalgError("partial_trace: dimension " + std::to_string(dim) +
                      " is not a power of two");
  }
  return std::countr_zero(dim);
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      if (r != c) sum += std::norm(a(r, c));
    }
  }
  return std::sqrt(sum);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw LinalgError("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                      " entries, got " + std::to_string(entries_.size()));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw LinalgError("ComplexMatrix: rows must form a square matrix");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> ket) {
  ComplexMatrix m(ket.size());
  for (std::size_t r = 0; r < ket.size(); ++r) {
    for (std::size_t c = 0; c < ket.size(); ++c) m(r, c) = ket[r] * std::conj(ket[c]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

double hermiticity_defect(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = r; c < m.dim(); ++c) {
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    }
  }
  return worst;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix out = m + m.adjoint();
  out *= 0.5;
  return out;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_of_product");
  Complex sum = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t k = 0; k < a.dim(); ++k) sum += a(r, k) * b(k, r);
  }
  return sum;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> traced_qubits) {
  const int n_qubits = qubit_count(rho.dim());
  std::vector<bool> traced(n_qubits, false);
  for (int q : traced_qubits) {
    if (q < 0 || q >= n_qubits) {
      throw LinalgError("partial_trace: qubit index " + std::to_string(q) +
                        " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    traced[q] = true;
  }
  std::vector<int> kept_bits;    // bit shifts of kept qubits, most significant first
  std::vector<int> traced_bits;  // bit shifts of traced qubits
  for (int q = 0; q < n_qubits; ++q) {
    (traced[q] ? traced_bits : kept_bits).push_back(n_qubits - 1 - q);
  }

  const std::size_t kept_dim = std::size_t{1} << kept_bits.size();
  const std::size_t env_dim = std::size_t{1} << traced_bits.size();
  auto scatter = [](std::size_t compact, const std::vector<int>& shifts) {
    std::size_t full = 0;
    const std::size_t width = shifts.size();
    for (std::size_t b = 0; b < width; ++b) {
      if ((compact >> (width - 1 - b)) & 1U) full |= std::size_t{1} << shifts[b];
    }
    return full;
  };

  ComplexMatrix out(kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r) {
    const std::size_t r_full = scatter(r, kept_bits);
    for (std::size_t c = 0; c < kept_dim; ++c) {
      const std::size_t c_full = scatter(c, kept_bits);
      Complex sum = 0.0;
      for (std::size_t e = 0; e < env_dim; ++e) {
        const std::size_t e_full = scatter(e, traced_bits);
        sum += rho(r_full | e_full, c_full | e_full);
      }
      out(r, c) = sum;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::initializer_list<int> traced_qubits) {
  return partial_trace(rho, std::span<const int>(traced_qubits.begin(), traced_qubits.size()));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (const double defect = hermiticity_defect(m); defect > kHermiticityTolerance) {
    throw LinalgError("hermitian_eigenvalues: input is not Hermitian (defect " +
                      std::to_string(defect) + ")");
  }
  ComplexMatrix a = hermitian_part(m);
  const std::size_t n = a.dim();

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiOffDiagonalTolerance) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        // Phase e^{-i arg a_pq} on q makes the pivot real; then a real rotation.
        const Complex phase = std::conj(a(p, q)) / g;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex u_pp = c, u_pq = s, u_qp = -s * phase, u_qq = c * phase;

        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p), arq = a(r, q);
          a(r, p) = arp * u_pp + arq * u_qp;
          a(r, q) = arp * u_pq + arq * u_qq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const Complex apc = a(p, col), aqc = a(q, col);
          a(p, col) = std::conj(u_pp) * apc + std::conj(u_qp) * aqc;
          a(q, col) = std::conj(u_pq) * apc + std::conj(u_qq) * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<double> eigenvalues(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a(i, i).real();
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return eigenvalues;
}

const ComplexMatrix& pauli_identity() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, 1.0}};
  return m;
}

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

const ComplexMatrix& pauli(int axis) {
  switch (axis) {
    case 0: return pauli_x();
    case 1: return pauli_y();
    case 2: return pauli_z();
    default: throw LinalgError("pauli: axis must be 0, 1 or 2");
  }
}

ComplexMatrix bloch_observable(const std::array<double, 3>& n) {
  return ComplexMatrix{{n[2], Complex(n[0], -n[1])}, {Complex(n[0], n[1]), -n[2]}};
}

RealSym3 RealSym3::gram(const std::array<std::array<double, 3>, 3>& t) {
  auto dot_cols = [&](int i, int j) {
    return t[0][i] * t[0][j] + t[1][i] * t[1][j] + t[2][i] * t[2][j];
  };
  return RealSym3{dot_cols(0, 0), dot_cols(0, 1), dot_cols(0, 2),
                  dot_cols(1, 1), dot_cols(1, 2), dot_cols(2, 2)};
}

double RealSym3::at(int row, int col) const {
  if (row > col) std::swap(row, col);
  const double upper[3][3] = {{xx, xy, xz}, {0.0, yy, yz}, {0.0, 0.0, zz}};
  return upper[row][col];
}

std::array<double, 3> sym3_eigenvalues(const RealSym3& s) {
  const double off = s.xy * s.xy + s.xz * s.xz + s.yz * s.yz;
  std::array<double, 3> eig{};
  if (off == 0.0) {
    eig = {s.xx, s.yy, s.zz};
  } else {
    const double mean = (s.xx + s.yy + s.zz) / 3.0;
    const double dxx = s.xx - mean, dyy = s.yy - mean, dzz = s.zz - mean;
    const double scale = std::sqrt((dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * off) / 6.0);
    // det((S - mean I) / scale) / 2
    const double det = dxx * (dyy * dzz - s.yz * s.yz) - s.xy * (s.xy * dzz - s.yz * s.xz) +
                       s.xz * (s.xy * s.yz - dyy * s.xz);
    const double r = std::clamp(det / (2.0 * scale * scale * scale), -1.0, 1.0);
    const double angle = std::acos(r) / 3.0;
    const double largest = mean + 2.0 * scale * std::cos(angle);
    const double smallest = mean + 2.0 * scale * std::cos(angle + 2.0 * std::numbers::pi / 3.0);
    eig = {largest, 3.0 * mean - largest - smallest, smallest};
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

double sym3_characteristic(const RealSym3& s, double lambda) {
  const double a = s.xx - lambda, d = s.yy - lambda, f = s.zz - lambda;
  return a * (d * f - s.yz * s.yz) - s.xy * (s.xy * f - s.yz * s.xz) +
         s.xz * (s.xy * s.yz - d * s.xz);
}

}  // namespace bilocal
