#include "bilocal/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace bilocal {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kConditionTolerance = 1e-12;
constexpr double kDegenerateWeight = 1e-14;

double clamped_sqrt(double radicand, bool* clamped) {
  if (radicand >= 0.0) return std::sqrt(radicand);
  if (clamped) *clamped = true;
  return 0.0;
}

// Zero matches either sign.
int sign_of(double v) { return (v > 0.0) - (v < 0.0); }
bool same_sign(double u, double v) {
  return sign_of(u) == 0 || sign_of(v) == 0 || sign_of(u) == sign_of(v);
}
bool opposite_sign(double u, double v) {
  return sign_of(u) == 0 || sign_of(v) == 0 || sign_of(u) != sign_of(v);
}

bool is_local(const LocalityVars& v) {
  return std::min({v.epsilon, v.delta, v.xi}) >= -kThresholdBand;
}

void require_closed_interval(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi)) {
    throw InvalidParameters(fmt::format("{} must lie in [{},{}], got {}", name, lo, hi, v));
  }
}

CopyRestriction nonlocal_copy_restriction(const CopySufficiency& c) {
  const double eps = c.vars.epsilon, delta = c.vars.delta;
  CopyRestriction r;
  if (c.pair == SignPair::Pair1) {
    r.kind = RestrictionKind::C3;
    r.lower = delta;
    r.upper = c1_epsilon_upper(delta);
  } else if (c.pair == SignPair::Pair4) {
    r.kind = RestrictionKind::C4;
    r.lower = (delta - 1.0) / 2.0;
    r.upper = delta;
  } else {
    return r;
  }
  r.holds = eps >= r.lower - kConditionTolerance && eps <= r.upper + kConditionTolerance;
  return r;
}

CopyRestriction local_copy_restriction(const CopySufficiency& c) {
  const double eps = c.vars.epsilon, delta = c.vars.delta;
  CopyRestriction r;
  if (c.pair == SignPair::Pair1) {
    r.kind = RestrictionKind::C1;
    r.lower = delta;
    r.upper = c1_epsilon_upper(delta);
  } else if (c.pair == SignPair::Pair4) {
    r.kind = RestrictionKind::C2;
    r.lower = 0.0;
    r.upper = delta;
  } else {
    return r;
  }
  r.holds = delta >= -kConditionTolerance && eps >= r.lower - kConditionTolerance &&
            eps <= r.upper + kConditionTolerance;
  return r;
}

CopyRestriction nonlocal_first_copy_restriction(const CopySufficiency& c) {
  CopyRestriction r;
  if (c.pair != SignPair::Pair4) return r;
  r.kind = RestrictionKind::NonlocalFirstCopy;
  r.lower = (c.vars.delta - 1.0) / 2.0;
  r.upper = 0.0;
  r.holds = c.vars.epsilon >= r.lower - kConditionTolerance && c.vars.epsilon < r.upper;
  return r;
}

CopySufficiency evaluate_copy(const TParams& t) {
  const XParams x = t_to_x(t);
  CopySufficiency c;
  c.vars = locality_vars(x);
  const double eps = c.vars.epsilon, delta = c.vars.delta, xi = c.vars.xi;

  c.f = checked_sqrt(1.0 - eps + xi - delta, "F radicand");
  c.g = checked_sqrt(1.0 - eps - xi + delta, "G radicand");
  c.h = checked_sqrt(1.0 + eps - xi - delta, "H radicand");
  const double p = x.coh0011, q = x.coh0110;
  c.derivation = {2.0 * kSqrt2 * p, 2.0 * kSqrt2 * q, 2.0 * (p + q), 2.0 * (p - q),
                  x.zz_weight()};

  c.condition_i = 1.0 - eps >= std::abs(xi - delta) - kConditionTolerance;
  c.condition_ii = (delta - xi) * (delta - xi) >= 0.0;
  c.pair = classify_sign_pair(t);
  switch (c.pair) {
    case SignPair::Pair1:
      c.third = ThirdCondition::FBound;
      c.condition_iii = c.f <= kSqrt2 + std::abs(c.g - c.h) + kConditionTolerance;
      break;
    case SignPair::Pair2:
    case SignPair::Pair3:
      c.third = ThirdCondition::GSumBound;
      c.condition_iii = c.g <= kSqrt2 - (c.f + c.h) + kConditionTolerance;
      break;
    case SignPair::Pair4:
      c.third = ThirdCondition::GBound;
      c.condition_iii = c.g <= kSqrt2 + std::abs(c.f - c.h) + kConditionTolerance;
      break;
    case SignPair::Unclassified:
      break;
  }
  c.horodecki = is_local(c.vars) ? Verdict::Below : Verdict::Above;
  return c;
}

}  // namespace

ScalarCriterion t_local_condition(const TParams& t1, const TParams& t2) {
  validate(t1);
  validate(t2);
  const std::array<double, 3> products = {t1.cx * t2.cx, t1.cy * t2.cy, t1.cz * t2.cz};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      worst = std::max(worst, std::sqrt(products[i] * products[i] + products[j] * products[j]));
    }
  }
  ScalarCriterion out;
  out.value = worst;
  out.holds = compare_to_threshold(worst, 1.0) != Verdict::Above;
  return out;
}

ScalarCriterion t_nonbilocal_condition(const TParams& t1, const TParams& t2) {
  validate(t1);
  validate(t2);
  ScalarCriterion out;
  out.value = clamped_sqrt(std::abs(t1.cx * t2.cx) + t1.cz * t2.cz, &out.clamped);
  out.holds = compare_to_threshold(out.value, 1.0) == Verdict::Above;
  return out;
}

VisibilityTradeoff visibility_analysis(double local_deficit, double nonlocal_excess) {
  VisibilityTradeoff out;
  out.visibility_local = kLocalVisibilityThreshold - local_deficit;
  out.visibility_nonlocal = kLocalVisibilityThreshold + nonlocal_excess;
  require_closed_interval(out.visibility_local, 0.0, 1.0, "local-copy visibility");
  require_closed_interval(out.visibility_nonlocal, 0.0, 1.0, "nonlocal-copy visibility");
  out.tradeoff = local_deficit - nonlocal_excess + kSqrt2 * local_deficit * nonlocal_excess;
  out.nonbilocal = out.tradeoff < 0.0;
  return out;
}

std::string_view to_string(SteeringVerdict v) {
  return v == SteeringVerdict::Guaranteed ? "steerable-guaranteed" : "not-guaranteed";
}

SteeringVerdict steering_criterion(const std::array<double, 3>& r) {
  const double largest = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
  const double squares = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
  return largest < (2.0 / 3.0) * squares ? SteeringVerdict::Guaranteed
                                         : SteeringVerdict::NotGuaranteed;
}

SteeringReport steering_report(const XParams& x) {
  validate(x);
  const double p = x.coh0011, q = x.coh0110;
  const double s = x.pop00, k = x.pop01, z = x.pop10, d = x.pop11;
  SteeringReport out;
  out.r = {2.0 * (p + q), 2.0 * (p - q), x.zz_weight()};
  out.w = (k + z) + 2.0 * (s * d - k * z);
  if (out.w <= kDegenerateWeight) {
    throw InvalidParameters(fmt::format("psi+ swap branch is degenerate (W = {})", out.w));
  }
  out.r_swapped = {2.0 * (p + q) * (p + q) / out.w, 2.0 * (p - q) * (p - q) / out.w,
                   ((k + z) * out.r[2] + 2.0 * (k * z - s * d)) / out.w};
  out.pre = steering_criterion(out.r);
  out.post = steering_criterion(out.r_swapped);
  out.nonbilocal_value = std::sqrt(4.0 * out.r[0] * out.r[0] + out.r[2] * out.r[2]);
  out.nonbilocal = compare_to_threshold(out.nonbilocal_value, 1.0) == Verdict::Above;
  return out;
}

double filter_normalization(const XParams& x, const FilterParams& f) {
  const double l1s = f.l1 * f.l1, l2s = f.l2 * f.l2;
  return x.pop00 * l1s * l2s + x.pop01 * l1s + x.pop10 * l2s + x.pop11;
}

XParams filter_state(const XParams& x, const FilterParams& f) {
  validate(x);
  if (!(f.l1 > 0.0 && f.l1 <= 1.0) || !(f.l2 > 0.0 && f.l2 <= 1.0)) {
    throw InvalidParameters(
        fmt::format("filter attenuations must lie in (0,1], got ({}, {})", f.l1, f.l2));
  }
  const double n = filter_normalization(x, f);
  if (n <= kDegenerateWeight) {
    throw InvalidParameters(fmt::format("filtered state has vanishing norm (N = {})", n));
  }
  const double l1s = f.l1 * f.l1, l2s = f.l2 * f.l2, both = f.l1 * f.l2;
  XParams out;
  out.pop00 = x.pop00 * l1s * l2s / n;
  out.pop01 = x.pop01 * l1s / n;
  out.pop10 = x.pop10 * l2s / n;
  out.pop11 = x.pop11 / n;
  out.coh0011 = x.coh0011 * both / n;
  out.coh0110 = x.coh0110 * both / n;
  return out;
}

ComplexMatrix filter_operator(const FilterParams& f) {
  const std::array<Complex, 2> a{f.l1, 1.0};
  const std::array<Complex, 2> b{f.l2, 1.0};
  return kron(ComplexMatrix::diagonal(a), ComplexMatrix::diagonal(b));
}

double TableBranch::value() const { return std::max(coherence_term, zz_term); }

const TableBranch& FilteredChsh::selected() const {
  return pq_nonnegative ? positive_product : negative_product;
}

FilteredChsh filtered_chsh_bound(const XParams& x, const FilterParams& f) {
  FilteredChsh out;
  out.filtered = filter_state(x, f);
  out.normalization = filter_normalization(x, f);
  out.chsh = 2.0 * horodecki_m(x_state_matrix(out.filtered));

  const double n = out.normalization;
  const double p = x.coh0011, q = x.coh0110;
  const double ll = f.l1 * f.l2;
  const double zz = x.pop11 - x.pop10 * f.l2 * f.l2 - x.pop01 * f.l1 * f.l1 + x.pop00 * ll * ll;
  const double coherence_term = 8.0 * std::sqrt(2.0 * (p * p + q * q) * ll * ll) / n;
  out.positive_product = {coherence_term,
                          2.0 * std::sqrt(4.0 * (p + q) * (p + q) * ll * ll + zz * zz) / n};
  out.negative_product = {coherence_term,
                          2.0 * std::sqrt(4.0 * (p - q) * (p - q) * ll * ll + zz * zz) / n};
  out.pq_nonnegative = p * q >= 0.0;
  return out;
}

XParams hidden_nonlocality_state(double alpha) {
  require_closed_interval(alpha, 0.0, 1.0, "hidden-nonlocality alpha");
  XParams x;
  x.pop00 = (1.0 - alpha) / 2.0;
  x.pop01 = 0.5;
  x.pop10 = alpha / 2.0;
  x.pop11 = 0.0;
  x.coh0011 = 0.0;
  x.coh0110 = -alpha / 2.0;
  return x;
}

FilterParams hidden_nonlocality_filters(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParameters(fmt::format("hidden-nonlocality filters need alpha in (0,1], got {}", alpha));
  }
  return FilterParams{eps, eps / std::sqrt(alpha)};
}

XParams hidden_nonlocality_limit_state(double alpha) {
  require_closed_interval(alpha, 0.0, 1.0, "hidden-nonlocality alpha");
  XParams x;
  x.pop01 = 0.5;
  x.pop10 = 0.5;
  x.coh0110 = -std::sqrt(alpha) / 2.0;
  return x;
}

EdxResult edx_inequality(const LocalityVars& v1, const LocalityVars& v2) {
  for (const LocalityVars* v : {&v1, &v2}) {
    if (1.0 - v->delta < std::abs(v->xi - v->epsilon) - kConditionTolerance) {
      throw InvalidParameters(fmt::format(
          "inconsistent locality variables: 1 - delta = {} < |xi - epsilon| = {}", 1.0 - v->delta,
          std::abs(v->xi - v->epsilon)));
    }
  }
  auto minus = [](const LocalityVars& v) {
    return std::max(0.0, 1.0 - v.delta + v.epsilon - v.xi);
  };
  auto plus = [](const LocalityVars& v) {
    return std::max(0.0, 1.0 - v.delta - v.epsilon + v.xi);
  };
  EdxResult out;
  out.value = std::sqrt(std::sqrt(minus(v1) * minus(v2)) + std::sqrt(plus(v1) * plus(v2)));
  out.verdict = compare_to_threshold(out.value, kSqrt2);
  return out;
}

MaximalPlaneReport maximal_plane_condition(double delta1, double delta2) {
  require_closed_interval(delta1, -1.0, 1.0, "delta1");
  require_closed_interval(delta2, -1.0, 1.0, "delta2");
  MaximalPlaneReport out;
  out.product = (1.0 - delta1) * (1.0 - delta2);
  out.verdict = compare_to_threshold(out.product, 1.0);
  out.delta2_bound = delta1 < 1.0 ? 1.0 - 1.0 / (1.0 - delta1)
                                  : -std::numeric_limits<double>::infinity();
  return out;
}

std::string_view to_string(SignPair p) {
  switch (p) {
    case SignPair::Pair1: return "1a/1b";
    case SignPair::Pair2: return "2a/2b";
    case SignPair::Pair3: return "3a/3b";
    case SignPair::Pair4: return "4a/4b";
    case SignPair::Unclassified: return "unclassified";
  }
  return "?";
}

SignPair classify_sign_pair(const TParams& t) {
  const double sum = t.cx + t.cy, diff = t.cx - t.cy;
  const bool cz_pos = t.cz >= 0.0, cz_neg = t.cz <= 0.0;
  const bool sum_diff_same = same_sign(sum, diff);
  const bool cy_opposite = opposite_sign(t.cy, sum) && opposite_sign(t.cy, diff);
  const bool cy_same = same_sign(t.cy, sum) && same_sign(t.cy, diff);
  const bool diff_with_cx = same_sign(diff, t.cx) && opposite_sign(sum, t.cx);
  const bool sum_with_cx = same_sign(sum, t.cx) && opposite_sign(diff, t.cx);

  if ((sum_diff_same && cy_opposite && cz_pos) || (sum_diff_same && cy_same && cz_neg)) {
    return SignPair::Pair1;
  }
  if ((sum_diff_same && cy_opposite && cz_neg) || (sum_diff_same && cy_same && cz_pos)) {
    return SignPair::Pair2;
  }
  if ((diff_with_cx && cz_neg) || (sum_with_cx && cz_pos)) return SignPair::Pair3;
  if ((diff_with_cx && cz_pos) || (sum_with_cx && cz_neg)) return SignPair::Pair4;
  return SignPair::Unclassified;
}

std::string_view to_string(ThirdCondition c) {
  switch (c) {
    case ThirdCondition::FBound: return "F<=sqrt2+|G-H|";
    case ThirdCondition::GSumBound: return "G<=sqrt2-(F+H)";
    case ThirdCondition::GBound: return "G<=sqrt2+|F-H|";
    case ThirdCondition::None: return "none";
  }
  return "?";
}

std::string_view to_string(PairScenario s) {
  switch (s) {
    case PairScenario::LocalNonlocal: return "local+nonlocal";
    case PairScenario::BothNonlocalDelta1NonNeg: return "both-nonlocal,delta1>=0";
    case PairScenario::BothNonlocalDelta1Negative: return "both-nonlocal,delta1<0";
    case PairScenario::NotCovered: return "not-covered";
  }
  return "?";
}

std::string_view to_string(RestrictionKind k) {
  switch (k) {
    case RestrictionKind::C1: return "C1";
    case RestrictionKind::C2: return "C2";
    case RestrictionKind::C3: return "C3";
    case RestrictionKind::C4: return "C4";
    case RestrictionKind::NonlocalFirstCopy: return "nonlocal-first-copy";
    case RestrictionKind::None: return "none";
  }
  return "?";
}

double c1_epsilon_upper(double delta) {
  return (4.0 * std::sqrt(2.0 * (1.0 - delta)) + 5.0 * (delta - 1.0)) / 2.0;
}

SufficiencyReport sufficiency_report(const TParams& t1, const TParams& t2) {
  SufficiencyReport out;
  out.copies = {evaluate_copy(t1), evaluate_copy(t2)};
  out.edx = edx_inequality(out.copies[0].vars, out.copies[1].vars);

  const bool local1 = out.copies[0].horodecki != Verdict::Above;
  const bool local2 = out.copies[1].horodecki != Verdict::Above;
  std::size_t first = 0, second = 1;
  if (!local1 && local2) {
    std::swap(first, second);
    out.roles_swapped = true;
  }
  CopySufficiency& a = out.copies[first];
  CopySufficiency& b = out.copies[second];
  const double d1 = a.vars.delta, d2 = b.vars.delta;
  const bool d1_small = d1 >= 0.0 && d1 < 0.5;

  if (local1 != local2) {
    if (d1_small && d2 > -1.0 && d2 < 0.0) {
      out.scenario = PairScenario::LocalNonlocal;
      a.restriction = local_copy_restriction(a);
      b.restriction = nonlocal_copy_restriction(b);
    }
  } else if (!local1 && !local2) {
    if (d1_small) {
      out.scenario = PairScenario::BothNonlocalDelta1NonNeg;
      a.restriction = nonlocal_first_copy_restriction(a);
      b.restriction = nonlocal_copy_restriction(b);
    } else if (d1 < 0.0) {
      out.scenario = PairScenario::BothNonlocalDelta1Negative;
      a.restriction = nonlocal_copy_restriction(a);
      b.restriction = nonlocal_copy_restriction(b);
    }
  }

  bool all_hold = out.scenario != PairScenario::NotCovered;
  for (const CopySufficiency& c : out.copies) {
    all_hold = all_hold && c.condition_i && c.condition_ii && c.condition_iii && c.restriction.holds;
  }
  out.sufficient = all_hold && out.edx.verdict == Verdict::Above;
  return out;
}

ScalarCriterion alpha_nonbilocal(double alpha1, double alpha2) {
  require_closed_interval(alpha1, 0.0, 1.0, "alpha1");
  require_closed_interval(alpha2, 0.0, 1.0, "alpha2");
  ScalarCriterion out;
  out.value = clamped_sqrt((2.0 * alpha1 - 1.0) * (2.0 * alpha2 - 1.0) + alpha1 * alpha2,
                           &out.clamped);
  out.holds = compare_to_threshold(out.value, 1.0) == Verdict::Above;
  return out;
}

bool entanglement_necessity_check(const TParams& t1, const TParams& t2) {
  if (!t_nonbilocal_condition(t1, t2).holds) return true;
  return concurrence_t(t1) > 0.0 && concurrence_t(t2) > 0.0;
}

}  // namespace bilocal
