#include "bilocal/states.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace bilocal {
namespace {

constexpr double kParamTolerance = 1e-12;

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidParameters(fmt::format("{} must lie in [0,1], got {}", name, v));
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Below: return "below";
    case Verdict::Boundary: return "boundary";
    case Verdict::Above: return "above";
  }
  return "?";
}

double checked_sqrt(double radicand, std::string_view what, bool* clamped) {
  if (radicand >= 0.0) return std::sqrt(radicand);
  if (radicand >= -kRadicandNoise) {
    if (clamped) *clamped = true;
    return 0.0;
  }
  throw InvalidParameters(fmt::format("negative radicand {} in {}", radicand, what));
}

std::optional<std::string> x_params_violation(const XParams& x) {
  const double pops[] = {x.pop00, x.pop01, x.pop10, x.pop11};
  const char* names[] = {"pop00", "pop01", "pop10", "pop11"};
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(pops[i]) || pops[i] < -kParamTolerance) {
      return fmt::format("populations must be nonnegative: {} = {}", names[i], pops[i]);
    }
  }
  if (!std::isfinite(x.coh0011) || !std::isfinite(x.coh0110)) {
    return std::string("coherences must be finite");
  }
  const double total = x.pop00 + x.pop01 + x.pop10 + x.pop11;
  if (std::abs(total - 1.0) > kParamTolerance) {
    return fmt::format("populations must sum to 1 (ς+κ+ζ+d=1 violated): sum = {}", total);
  }
  if (x.coh0011 * x.coh0011 > x.pop00 * x.pop11 + kParamTolerance) {
    return fmt::format("p²≤ςd violated: coh0011^2 = {} exceeds pop00*pop11 = {}",
                       x.coh0011 * x.coh0011, x.pop00 * x.pop11);
  }
  if (x.coh0110 * x.coh0110 > x.pop01 * x.pop10 + kParamTolerance) {
    return fmt::format("q²≤κζ violated: coh0110^2 = {} exceeds pop01*pop10 = {}",
                       x.coh0110 * x.coh0110, x.pop01 * x.pop10);
  }
  return std::nullopt;
}

std::optional<std::string> t_params_violation(const TParams& t) {
  for (double c : {t.cx, t.cy, t.cz}) {
    if (!std::isfinite(c) || std::abs(c) > 1.0 + kParamTolerance) {
      return fmt::format("|c_j| <= 1 violated: ({}, {}, {})", t.cx, t.cy, t.cz);
    }
  }
  if (std::abs(t.cx + t.cy) > 1.0 - t.cz + kParamTolerance) {
    return fmt::format("|c1+c2| <= 1-c3 violated: |{}| > {}", t.cx + t.cy, 1.0 - t.cz);
  }
  if (std::abs(t.cx - t.cy) > 1.0 + t.cz + kParamTolerance) {
    return fmt::format("|c1-c2| <= 1+c3 violated: |{}| > {}", t.cx - t.cy, 1.0 + t.cz);
  }
  return std::nullopt;
}

void validate(const XParams& x) {
  if (auto v = x_params_violation(x)) throw InvalidParameters(*v);
}

void validate(const TParams& t) {
  if (auto v = t_params_violation(t)) throw InvalidParameters(*v);
}

ComplexMatrix x_state_matrix(const XParams& x) {
  validate(x);
  return ComplexMatrix{{x.pop00, 0.0, 0.0, x.coh0011},
                       {0.0, x.pop01, x.coh0110, 0.0},
                       {0.0, x.coh0110, x.pop10, 0.0},
                       {x.coh0011, 0.0, 0.0, x.pop11}};
}

XParams t_to_x(const TParams& t) {
  validate(t);
  XParams x;
  x.pop00 = x.pop11 = (1.0 + t.cz) / 4.0;
  x.pop01 = x.pop10 = (1.0 - t.cz) / 4.0;
  x.coh0011 = (t.cx - t.cy) / 4.0;
  x.coh0110 = (t.cx + t.cy) / 4.0;
  return x;
}

TParams werner(double visibility) {
  require_unit_interval(visibility, "Werner visibility");
  return TParams{-visibility, -visibility, -visibility};
}

XParams alpha_state(double alpha) {
  require_unit_interval(alpha, "alpha-state parameter");
  XParams x;
  x.pop00 = x.pop11 = alpha / 2.0;
  x.pop01 = x.pop10 = (1.0 - alpha) / 2.0;
  x.coh0011 = alpha / 2.0;
  x.coh0110 = 0.0;
  return x;
}

TParams alpha_state_t(double alpha) {
  require_unit_interval(alpha, "alpha-state parameter");
  return TParams{alpha, -alpha, 2.0 * alpha - 1.0};
}

bool is_density_matrix(const ComplexMatrix& rho, double tol) {
  if (rho.dim() == 0 || hermiticity_defect(rho) > tol) return false;
  if (std::abs(rho.trace() - Complex(1.0)) > tol) return false;
  const auto eig = hermitian_eigenvalues(rho);
  return eig.front() >= -tol;
}

CorrelationTensor correlation_tensor(const ComplexMatrix& rho) {
  if (rho.dim() != 4) {
    throw InvalidParameters(fmt::format("correlation_tensor: expected 4x4, got {}x{}", rho.dim(),
                                        rho.dim()));
  }
  if (hermiticity_defect(rho) > kHermiticityTolerance ||
      std::abs(rho.trace() - Complex(1.0)) > kHermiticityTolerance) {
    throw InvalidParameters("correlation_tensor: input is not a normalized Hermitian matrix");
  }
  CorrelationTensor out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.t[i][j] = trace_of_product(rho, kron(pauli(i), pauli(j))).real();
    }
  }
  return out;
}

HorodeckiResult horodecki(const ComplexMatrix& rho) {
  const auto tensor = correlation_tensor(rho);
  const auto eig = sym3_eigenvalues(RealSym3::gram(tensor.t));
  HorodeckiResult r;
  r.m = std::sqrt(std::max(0.0, eig[1] + eig[2]));
  r.chsh_max = 2.0 * r.m;
  r.nonlocal = compare_to_threshold(r.m, 1.0);
  return r;
}

double horodecki_m(const ComplexMatrix& rho) { return horodecki(rho).m; }

LocalityVars locality_vars(const XParams& x) {
  validate(x);
  const double e = x.zz_weight();
  const double p = x.coh0011, q = x.coh0110;
  LocalityVars v;
  v.theta = {8.0 * (p * p + q * q), e * e + 4.0 * (p + q) * (p + q),
             e * e + 4.0 * (p - q) * (p - q)};
  v.epsilon = 1.0 - v.theta[0];
  v.delta = 1.0 - v.theta[1];
  v.xi = 1.0 - v.theta[2];
  return v;
}

LocalityVars locality_vars_from(double epsilon, double delta, double xi) {
  LocalityVars v;
  v.epsilon = epsilon;
  v.delta = delta;
  v.xi = xi;
  v.theta = {1.0 - epsilon, 1.0 - delta, 1.0 - xi};
  return v;
}

double concurrence_t(const TParams& t) {
  validate(t);
  const double a = (std::abs(t.cx - t.cy) - std::abs(1.0 - t.cz)) / 2.0;
  const double b = (std::abs(t.cx + t.cy) - std::abs(1.0 + t.cz)) / 2.0;
  return std::max({0.0, a, b});
}

bool is_separable_t(const TParams& t) {
  return std::abs(t.cx) + std::abs(t.cy) + std::abs(t.cz) <= 1.0;
}

double concurrence_x(const XParams& x) {
  validate(x);
  const double a = std::abs(x.coh0011) - std::sqrt(std::max(0.0, x.pop01 * x.pop10));
  const double b = std::abs(x.coh0110) - std::sqrt(std::max(0.0, x.pop00 * x.pop11));
  return 2.0 * std::max({0.0, a, b});
}

}  // namespace bilocal
