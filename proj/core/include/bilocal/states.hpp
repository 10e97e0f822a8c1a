#pragma once

#include <array>
#include <optional>
#include <string>

#include "bilocal/linalg.hpp"
#include "bilocal/verdict.hpp"

namespace bilocal {

/// Two-qubit X state: populations on the computational basis plus the two
/// real anti-diagonal coherences.
///
///   | pop00    0       0      coh0011 |
///   |   0    pop01  coh0110     0     |
///   |   0   coh0110  pop10      0     |
///   | coh0011  0       0      pop11   |
struct XParams {
  double pop00 = 0.0;
  double pop01 = 0.0;
  double pop10 = 0.0;
  double pop11 = 0.0;
  double coh0011 = 0.0;  ///< <00|chi|11>
  double coh0110 = 0.0;  ///< <01|chi|10>

  /// pop00 - pop01 - pop10 + pop11, the zz correlation.
  double zz_weight() const { return pop00 - pop01 - pop10 + pop11; }
};

/// Correlation coefficients of a T state (Bell-diagonal state), i.e. the
/// diagonal of its correlation tensor.
struct TParams {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
};

/// Returns a description of the first violated constraint, or nullopt.
std::optional<std::string> x_params_violation(const XParams& x);
std::optional<std::string> t_params_violation(const TParams& t);

/// Throw InvalidParameters on violation.
void validate(const XParams& x);
void validate(const TParams& t);

ComplexMatrix x_state_matrix(const XParams& x);

XParams t_to_x(const TParams& t);

/// alpha |psi-><psi-| + (1 - alpha) I/4.
TParams werner(double visibility);

/// alpha |phi+><phi+| + (1 - alpha)/2 (|01><01| + |10><10|).
XParams alpha_state(double alpha);
TParams alpha_state_t(double alpha);

/// Fully general density-matrix validity: Hermitian, unit trace, PSD within tol.
bool is_density_matrix(const ComplexMatrix& rho, double tol = 1e-10);

struct CorrelationTensor {
  /// t[i][j] = Tr[rho sigma_i (x) sigma_j], i, j over x, y, z.
  std::array<std::array<double, 3>, 3> t{};
};

CorrelationTensor correlation_tensor(const ComplexMatrix& rho);

struct HorodeckiResult {
  double m = 0.0;          ///< sqrt of the two largest eigenvalues of t^T t
  double chsh_max = 0.0;   ///< 2 m
  Verdict nonlocal = Verdict::Below;  ///< m compared with 1
};

HorodeckiResult horodecki(const ComplexMatrix& rho);
double horodecki_m(const ComplexMatrix& rho);

/// Horodecki quantities of an X state expressed through its parameters.
struct LocalityVars {
  std::array<double, 3> theta{};  ///< 8(p^2+q^2), E^2 + 4(p+q)^2, E^2 + 4(p-q)^2
  double epsilon = 0.0;           ///< 1 - theta[0]
  double delta = 0.0;             ///< 1 - theta[1]
  double xi = 0.0;                ///< 1 - theta[2]
};

LocalityVars locality_vars(const XParams& x);
LocalityVars locality_vars_from(double epsilon, double delta, double xi);

/// Closed-form concurrence of a T state.
double concurrence_t(const TParams& t);
/// |cx| + |cy| + |cz| <= 1
bool is_separable_t(const TParams& t);

/// 2 max{0, |coh0011| - sqrt(pop01 pop10), |coh0110| - sqrt(pop00 pop11)}.
double concurrence_x(const XParams& x);

}  // namespace bilocal
