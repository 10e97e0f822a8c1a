#pragma once

#include <array>
#include <optional>
#include <string>

#include "bilocal/linalg.hpp"
#include "bilocal/optimize.hpp"
#include "bilocal/states.hpp"
#include "bilocal/verdict.hpp"

namespace bilocal {

/// Projective qubit measurement along the unit vector with the given polar
/// and azimuthal angles (radians).
struct BlochSetting {
  double polar = 0.0;    ///< [0, pi]
  double azimuth = 0.0;  ///< [0, 2 pi)

  std::array<double, 3> direction() const;
  /// Same direction with angles folded into the canonical ranges.
  BlochSetting normalized() const;

  friend auto operator<=>(const BlochSetting&, const BlochSetting&) = default;
};

/// Two settings each for Alice (x = 0, 1) and Charlie (z = 0, 1).
struct MeasurementSettings {
  std::array<BlochSetting, 2> alice{};
  std::array<BlochSetting, 2> charlie{};

  /// All polar angles equal to `polar`; azimuths 0 for the first setting and
  /// pi for the second, on both sides.
  static MeasurementSettings symmetric(double polar);
  /// symmetric(pi / 4)
  static MeasurementSettings canonical();

  std::array<double, 8> flatten() const;  ///< (polar, azimuth) pairs: A0 A1 C0 C1
  static MeasurementSettings unflatten(std::span<const double> angles);
  MeasurementSettings normalized() const;

  friend auto operator<=>(const MeasurementSettings&, const MeasurementSettings&) = default;
};

/// Bob's two output bits; b0 is the first written bit of the labels 00..11.
struct BellLabel {
  int b0 = 0;
  int b1 = 0;
  std::string text() const;
};

struct BellProjector {
  BellLabel label;
  std::string name;  ///< phi+, phi-, psi+, psi-
  std::array<Complex, 4> ket{};
  ComplexMatrix projector;
};

/// |phi+>, |phi->, |psi+>, |psi-> labeled 00, 01, 10, 11.
const std::array<BellProjector, 4>& bell_projectors();

/// Branches less likely than this carry no conditional state.
inline constexpr double kNullBranchProbability = 1e-14;

struct SwapOutcome {
  BellLabel label;
  double probability = 0.0;
  /// Normalized Alice-Charlie state; empty for a null branch.
  std::optional<ComplexMatrix> conditional_state;
};

using SwapOutcomes = std::array<SwapOutcome, 4>;

/// Bell measurement on the middle qubits of (A,B1) (x) (B2,C), qubit order A, B1, B2, C.
SwapOutcomes entanglement_swap(const ComplexMatrix& source1, const ComplexMatrix& source2);
SwapOutcomes entanglement_swap(const XParams& source1, const XParams& source2);

/// correlators[x][y][z] = <A_x B^y C_z>.
using Correlators = std::array<std::array<std::array<double, 2>, 2>, 2>;

Correlators tripartite_correlators(const SwapOutcomes& outcomes, const MeasurementSettings& s);
Correlators tripartite_correlators(const XParams& source1, const XParams& source2,
                                   const MeasurementSettings& s);

/// Correlation tensors of sum_b (-1)^{b^y} P(b) rho_AC|b for y = 0, 1, so that
/// <A_x B^y C_z> = a_x . T_y . c_z. Equivalent to tripartite_correlators but
/// cheap to re-evaluate for new settings.
struct SignedSwapTensors {
  std::array<std::array<std::array<double, 3>, 3>, 2> tensor{};
  int null_branches = 0;
};
SignedSwapTensors signed_swap_tensors(const SwapOutcomes& outcomes);
Correlators correlators_from_tensors(const SignedSwapTensors& tensors, const MeasurementSettings& s);

struct IJ {
  double i = 0.0;
  double j = 0.0;
};

IJ ij_from_correlators(const Correlators& c);
/// sqrt|I| + sqrt|J|
double bilocal_b(const IJ& ij);

/// Closed-form I and J for X-state sources.
IJ closed_form_ij(const XParams& source1, const XParams& source2, const MeasurementSettings& s);

struct AnalyticBound {
  double value = 0.0;            ///< sqrt(radicand), or 0 when the radicand is negative
  double radicand = 0.0;         ///< zz_product + 4 |coherence_product|
  double zz_product = 0.0;       ///< prod_i (pop00 - pop01 - pop10 + pop11)
  double coherence_product = 0.0;  ///< prod_i (coh0011 + coh0110)
  bool radicand_negative = false;
};

AnalyticBound analytic_bound_b1(const XParams& source1, const XParams& source2);

struct BilocalAssessment {
  double i = 0.0;
  double j = 0.0;
  double b = 0.0;  ///< sqrt|i| + sqrt|j|
  AnalyticBound analytic_bound;
  MeasurementSettings settings;
  Verdict verdict = Verdict::Below;  ///< Above means nonbilocal
  int null_branches = 0;             ///< branches excluded from correlator sums
};

/// I, J and B at the given settings from the simulated swap.
BilocalAssessment bilocal_ijb(const XParams& source1, const XParams& source2,
                              const MeasurementSettings& s);

struct MaximizeOptions {
  CoordinateAscentOptions ascent{};
  int workers = 1;  ///< starts evaluated concurrently; result independent of this
};

/// Deterministic multi-start maximization of B over the eight measurement
/// angles, evaluated through the simulated swap.
BilocalAssessment maximize_b(const XParams& source1, const XParams& source2,
                             const MaximizeOptions& options = {});

/// The 16 lattice starts followed by the canonical point.
std::vector<MeasurementSettings> maximize_b_starts();

}  // namespace bilocal
