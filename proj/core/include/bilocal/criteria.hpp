#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "bilocal/network.hpp"
#include "bilocal/states.hpp"
#include "bilocal/verdict.hpp"

namespace bilocal {

// ---------------------------------------------------------------------------
// T-state pairs in the swapping network

struct ScalarCriterion {
  double value = 0.0;
  bool holds = false;
  bool clamped = false;  ///< radicand was clamped to zero
};

/// Largest sqrt(c_i1^2 c_i2^2 + c_j1^2 c_j2^2) over axis pairs i != j.
/// `holds` means the conditional Alice-Charlie correlations are CHSH-local
/// (value <= 1).
ScalarCriterion t_local_condition(const TParams& t1, const TParams& t2);

/// sqrt(|cx1 cx2| + cz1 cz2); `holds` means nonbilocal (value > 1).
/// Coincides with analytic_bound_b1 on the corresponding X states.
ScalarCriterion t_nonbilocal_condition(const TParams& t1, const TParams& t2);

// ---------------------------------------------------------------------------
// Werner-visibility trade-off

inline constexpr double kBilocalVisibilityThreshold = 0.5;
inline constexpr double kLocalVisibilityThreshold = 0.70710678118654752;  // 1/sqrt(2)

/// One Werner copy below the CHSH threshold by `local_deficit` and the other
/// above it by `nonlocal_excess`.
struct VisibilityTradeoff {
  double visibility_local = 0.0;     ///< 1/sqrt(2) - local_deficit
  double visibility_nonlocal = 0.0;  ///< 1/sqrt(2) + nonlocal_excess
  double tradeoff = 0.0;             ///< deficit - excess + sqrt(2) deficit excess
  bool nonbilocal = false;           ///< tradeoff < 0
  double bilocal_threshold = kBilocalVisibilityThreshold;
  double local_threshold = kLocalVisibilityThreshold;
};

VisibilityTradeoff visibility_analysis(double local_deficit, double nonlocal_excess);

// ---------------------------------------------------------------------------
// Steering versus nonbilocality for identical X-state copies

enum class SteeringVerdict { Guaranteed, NotGuaranteed };
std::string_view to_string(SteeringVerdict v);

struct SteeringReport {
  std::array<double, 3> r{};        ///< 2(p+q), 2(p-q), zz weight
  std::array<double, 3> r_swapped{};  ///< same quantities after the psi+ swap branch
  double w = 0.0;                   ///< twice the psi+ branch probability
  SteeringVerdict pre = SteeringVerdict::NotGuaranteed;
  SteeringVerdict post = SteeringVerdict::NotGuaranteed;
  double nonbilocal_value = 0.0;    ///< sqrt(4 r0^2 + r2^2)
  bool nonbilocal = false;
};

/// Linear steering criterion max|r_k| < (2/3) sum r_k^2.
SteeringVerdict steering_criterion(const std::array<double, 3>& r);

SteeringReport steering_report(const XParams& x);

// ---------------------------------------------------------------------------
// Local filtering and hidden nonlocality

/// Local filters diag(l1, 1) (x) diag(l2, 1) that attenuate |0> on each side.
struct FilterParams {
  double l1 = 1.0;
  double l2 = 1.0;
};

double filter_normalization(const XParams& x, const FilterParams& f);

/// Parameters of N^-1 F rho F^dagger.
XParams filter_state(const XParams& x, const FilterParams& f);

/// F = diag(l1, 1) (x) diag(l2, 1) as a 4x4 matrix.
ComplexMatrix filter_operator(const FilterParams& f);

struct TableBranch {
  double coherence_term = 0.0;  ///< 8 sqrt(2 (p^2+q^2) (l1 l2)^2) / N
  double zz_term = 0.0;         ///< 2 sqrt(4 (p +- q)^2 (l1 l2)^2 + (...)^2) / N
  double value() const;         ///< max of the two
};

struct FilteredChsh {
  XParams filtered;
  double normalization = 0.0;
  double chsh = 0.0;             ///< 2 * Horodecki m of the filtered state (ground truth)
  TableBranch positive_product;  ///< tabulated row for pq > 0
  TableBranch negative_product;  ///< tabulated row for pq < 0
  /// Row matching the sign of pq; the pq > 0 row when pq == 0.
  const TableBranch& selected() const;
  bool pq_nonnegative = true;
};

FilteredChsh filtered_chsh_bound(const XParams& x, const FilterParams& f);

/// alpha |psi-><psi-| + (1 - alpha)/2 (|00><00| + |01><01|).
XParams hidden_nonlocality_state(double alpha);

/// Filter pair (eps, eps / sqrt(alpha)).
FilterParams hidden_nonlocality_filters(double alpha, double eps);

/// The eps -> 0 limit of the filtered hidden-nonlocality state.
XParams hidden_nonlocality_limit_state(double alpha);

// ---------------------------------------------------------------------------
// Bilocality in terms of the locality variables

struct EdxResult {
  double value = 0.0;  ///< compared against sqrt(2)
  Verdict verdict = Verdict::Below;  ///< Above means the inequality is violated
};

/// Requires 1 - delta_i >= |xi_i - epsilon_i| for both copies.
EdxResult edx_inequality(const LocalityVars& v1, const LocalityVars& v2);

struct MaximalPlaneReport {
  double product = 0.0;  ///< (1 - delta1)(1 - delta2)
  Verdict verdict = Verdict::Below;  ///< Above: nonbilocal-capable
  /// Copy 2 must satisfy delta2 < this bound for the product to exceed 1.
  double delta2_bound = 0.0;
  double max_admissible_delta = 0.5;
  bool both_positive_possible = false;
};

MaximalPlaneReport maximal_plane_condition(double delta1, double delta2);

// ---------------------------------------------------------------------------
// Sufficient criteria for T-state pairs

/// Sign patterns of (cx + cy, cx - cy, cy, cx, cz) that select the
/// inequality pair used in the derivation.
enum class SignPair { Pair1, Pair2, Pair3, Pair4, Unclassified };
std::string_view to_string(SignPair p);

SignPair classify_sign_pair(const TParams& t);

/// Which restriction of condition (iii) applies.
enum class ThirdCondition { FBound, GSumBound, GBound, None };
std::string_view to_string(ThirdCondition c);

enum class PairScenario {
  LocalNonlocal,                ///< copy 1 local, delta1 in [0,1/2); copy 2 nonlocal, delta2 in (-1,0)
  BothNonlocalDelta1NonNeg,     ///< both nonlocal, delta1 in [0,1/2)
  BothNonlocalDelta1Negative,   ///< both nonlocal, delta1 < 0
  NotCovered,
};
std::string_view to_string(PairScenario s);

enum class RestrictionKind { C1, C2, C3, C4, NonlocalFirstCopy, None };
std::string_view to_string(RestrictionKind k);

struct CopyRestriction {
  RestrictionKind kind = RestrictionKind::None;
  double lower = 0.0;  ///< bounds on epsilon
  double upper = 0.0;
  bool holds = false;
};

struct CopySufficiency {
  LocalityVars vars;
  double f = 0.0, g = 0.0, h = 0.0;
  /// 2 sqrt2 p, 2 sqrt2 q, 2(p+q), 2(p-q), zz weight
  std::array<double, 5> derivation{};
  bool condition_i = false;
  bool condition_ii = true;
  ThirdCondition third = ThirdCondition::None;
  bool condition_iii = false;
  SignPair pair = SignPair::Unclassified;
  Verdict horodecki = Verdict::Below;
  CopyRestriction restriction;
};

struct SufficiencyReport {
  std::array<CopySufficiency, 2> copies{};
  PairScenario scenario = PairScenario::NotCovered;
  bool roles_swapped = false;  ///< copy 2 took the local role
  EdxResult edx;
  bool sufficient = false;  ///< every applicable condition holds and edx is violated
};

SufficiencyReport sufficiency_report(const TParams& t1, const TParams& t2);

/// Upper bound on epsilon used by restrictions C1 and C3.
double c1_epsilon_upper(double delta);

// ---------------------------------------------------------------------------
// Alpha states and entanglement necessity

ScalarCriterion alpha_nonbilocal(double alpha1, double alpha2);

/// True unless the pair is flagged nonbilocal while one copy has zero concurrence.
bool entanglement_necessity_check(const TParams& t1, const TParams& t2);

}  // namespace bilocal
