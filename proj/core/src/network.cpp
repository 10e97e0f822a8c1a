#include "bilocal/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace bilocal {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_two_pi(double angle) {
  double a = std::fmod(angle, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

double bilinear(const std::array<double, 3>& a, const std::array<std::array<double, 3>, 3>& t,
                const std::array<double, 3>& c) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) sum += a[i] * t[i][j] * c[j];
  }
  return sum;
}

BilocalAssessment assessment_from(const IJ& ij, const XParams& x1, const XParams& x2,
                                  const MeasurementSettings& s, int null_branches) {
  BilocalAssessment out;
  out.i = ij.i;
  out.j = ij.j;
  out.b = bilocal_b(ij);
  out.analytic_bound = analytic_bound_b1(x1, x2);
  out.settings = s;
  out.verdict = compare_to_threshold(out.b, 1.0);
  out.null_branches = null_branches;
  return out;
}

}  // namespace

std::array<double, 3> BlochSetting::direction() const {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
          std::cos(polar)};
}

BlochSetting BlochSetting::normalized() const {
  double theta = wrap_two_pi(polar);
  double phi = azimuth;
  if (theta > kPi) {
    theta = 2.0 * kPi - theta;
    phi += kPi;
  }
  return BlochSetting{theta, wrap_two_pi(phi)};
}

MeasurementSettings MeasurementSettings::symmetric(double polar) {
  MeasurementSettings s;
  s.alice = {BlochSetting{polar, 0.0}, BlochSetting{polar, kPi}};
  s.charlie = {BlochSetting{polar, 0.0}, BlochSetting{polar, kPi}};
  return s;
}

MeasurementSettings MeasurementSettings::canonical() { return symmetric(kPi / 4.0); }

std::array<double, 8> MeasurementSettings::flatten() const {
  return {alice[0].polar,   alice[0].azimuth,   alice[1].polar,   alice[1].azimuth,
          charlie[0].polar, charlie[0].azimuth, charlie[1].polar, charlie[1].azimuth};
}

MeasurementSettings MeasurementSettings::unflatten(std::span<const double> a) {
  MeasurementSettings s;
  s.alice = {BlochSetting{a[0], a[1]}, BlochSetting{a[2], a[3]}};
  s.charlie = {BlochSetting{a[4], a[5]}, BlochSetting{a[6], a[7]}};
  return s;
}

MeasurementSettings MeasurementSettings::normalized() const {
  MeasurementSettings s;
  s.alice = {alice[0].normalized(), alice[1].normalized()};
  s.charlie = {charlie[0].normalized(), charlie[1].normalized()};
  return s;
}

std::string BellLabel::text() const { return std::to_string(b0) + std::to_string(b1); }

const std::array<BellProjector, 4>& bell_projectors() {
  static const std::array<BellProjector, 4> projectors = [] {
    const double h = 1.0 / std::numbers::sqrt2;
    std::array<BellProjector, 4> out;
    out[0] = {BellLabel{0, 0}, "phi+", {h, 0.0, 0.0, h}, {}};
    out[1] = {BellLabel{0, 1}, "phi-", {h, 0.0, 0.0, -h}, {}};
    out[2] = {BellLabel{1, 0}, "psi+", {0.0, h, h, 0.0}, {}};
    out[3] = {BellLabel{1, 1}, "psi-", {0.0, h, -h, 0.0}, {}};
    for (auto& p : out) p.projector = ComplexMatrix::projector(p.ket);
    return out;
  }();
  return projectors;
}

SwapOutcomes entanglement_swap(const ComplexMatrix& source1, const ComplexMatrix& source2) {
  const ComplexMatrix joint = kron(source1, source2);
  const ComplexMatrix& id2 = pauli_identity();
  SwapOutcomes out;
  for (std::size_t k = 0; k < 4; ++k) {
    const BellProjector& bell = bell_projectors()[k];
    const ComplexMatrix measure = kron(kron(id2, bell.projector), id2);
    out[k].label = bell.label;
    out[k].probability = std::max(0.0, trace_of_product(measure, joint).real());
    if (out[k].probability < kNullBranchProbability) continue;
    ComplexMatrix post = partial_trace(measure * joint * measure, {1, 2});
    post *= 1.0 / out[k].probability;
    out[k].conditional_state = hermitian_part(post);
  }
  return out;
}

SwapOutcomes entanglement_swap(const XParams& source1, const XParams& source2) {
  return entanglement_swap(x_state_matrix(source1), x_state_matrix(source2));
}

Correlators tripartite_correlators(const SwapOutcomes& outcomes, const MeasurementSettings& s) {
  Correlators c{};
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      const ComplexMatrix observable = kron(bloch_observable(s.alice[x].direction()),
                                            bloch_observable(s.charlie[z].direction()));
      for (const SwapOutcome& branch : outcomes) {
        if (!branch.conditional_state) continue;
        const double local =
            branch.probability * trace_of_product(observable, *branch.conditional_state).real();
        c[x][0][z] += branch.label.b0 ? -local : local;
        c[x][1][z] += branch.label.b1 ? -local : local;
      }
    }
  }
  return c;
}

Correlators tripartite_correlators(const XParams& source1, const XParams& source2,
                                   const MeasurementSettings& s) {
  return tripartite_correlators(entanglement_swap(source1, source2), s);
}

SignedSwapTensors signed_swap_tensors(const SwapOutcomes& outcomes) {
  SignedSwapTensors out;
  for (const SwapOutcome& branch : outcomes) {
    if (!branch.conditional_state) {
      ++out.null_branches;
      continue;
    }
    const CorrelationTensor t = correlation_tensor(*branch.conditional_state);
    const double sign[2] = {branch.label.b0 ? -1.0 : 1.0, branch.label.b1 ? -1.0 : 1.0};
    for (int y = 0; y < 2; ++y) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out.tensor[y][i][j] += sign[y] * branch.probability * t.t[i][j];
      }
    }
  }
  return out;
}

Correlators correlators_from_tensors(const SignedSwapTensors& tensors,
                                     const MeasurementSettings& s) {
  const std::array<std::array<double, 3>, 2> a = {s.alice[0].direction(), s.alice[1].direction()};
  const std::array<std::array<double, 3>, 2> c = {s.charlie[0].direction(),
                                                  s.charlie[1].direction()};
  Correlators out{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) out[x][y][z] = bilinear(a[x], tensors.tensor[y], c[z]);
    }
  }
  return out;
}

IJ ij_from_correlators(const Correlators& c) {
  IJ ij;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      ij.i += c[x][0][z];
      ij.j += ((x + z) % 2 ? -1.0 : 1.0) * c[x][1][z];
    }
  }
  ij.i /= 4.0;
  ij.j /= 4.0;
  return ij;
}

double bilocal_b(const IJ& ij) { return std::sqrt(std::abs(ij.i)) + std::sqrt(std::abs(ij.j)); }

IJ closed_form_ij(const XParams& x1, const XParams& x2, const MeasurementSettings& s) {
  validate(x1);
  validate(x2);
  const double zz = x1.zz_weight() * x2.zz_weight();
  const double coh = (x1.coh0011 + x1.coh0110) * (x2.coh0011 + x2.coh0110);
  auto cos_sum = [](const std::array<BlochSetting, 2>& side) {
    return std::cos(side[0].polar) + std::cos(side[1].polar);
  };
  auto x_diff = [](const std::array<BlochSetting, 2>& side) {
    return std::sin(side[0].polar) * std::cos(side[0].azimuth) -
           std::sin(side[1].polar) * std::cos(side[1].azimuth);
  };
  return IJ{zz * cos_sum(s.alice) * cos_sum(s.charlie) / 4.0,
            coh * x_diff(s.alice) * x_diff(s.charlie)};
}

AnalyticBound analytic_bound_b1(const XParams& x1, const XParams& x2) {
  validate(x1);
  validate(x2);
  AnalyticBound b;
  b.zz_product = x1.zz_weight() * x2.zz_weight();
  b.coherence_product = (x1.coh0011 + x1.coh0110) * (x2.coh0011 + x2.coh0110);
  b.radicand = b.zz_product + 4.0 * std::abs(b.coherence_product);
  if (b.radicand >= 0.0) {
    b.value = std::sqrt(b.radicand);
  } else {
    b.radicand_negative = true;
  }
  return b;
}

BilocalAssessment bilocal_ijb(const XParams& x1, const XParams& x2, const MeasurementSettings& s) {
  const SwapOutcomes outcomes = entanglement_swap(x1, x2);
  int null_branches = 0;
  for (const auto& o : outcomes) null_branches += o.conditional_state ? 0 : 1;
  return assessment_from(ij_from_correlators(tripartite_correlators(outcomes, s)), x1, x2, s,
                         null_branches);
}

std::vector<MeasurementSettings> maximize_b_starts() {
  std::vector<MeasurementSettings> starts;
  for (double alice_polar : {kPi / 4.0, 3.0 * kPi / 4.0}) {
    for (double charlie_polar : {kPi / 4.0, 3.0 * kPi / 4.0}) {
      for (double alice_phase : {0.0, kPi}) {
        for (double charlie_phase : {0.0, kPi}) {
          MeasurementSettings s;
          s.alice = {BlochSetting{alice_polar, alice_phase},
                     BlochSetting{alice_polar, kPi - alice_phase}};
          s.charlie = {BlochSetting{charlie_polar, charlie_phase},
                       BlochSetting{charlie_polar, kPi - charlie_phase}};
          starts.push_back(s);
        }
      }
    }
  }
  starts.push_back(MeasurementSettings::canonical());
  return starts;
}

BilocalAssessment maximize_b(const XParams& x1, const XParams& x2, const MaximizeOptions& options) {
  const SwapOutcomes outcomes = entanglement_swap(x1, x2);
  const SignedSwapTensors tensors = signed_swap_tensors(outcomes);
  auto objective = [&tensors](std::span<const double> angles) {
    return bilocal_b(
        ij_from_correlators(correlators_from_tensors(tensors, MeasurementSettings::unflatten(angles))));
  };

  const std::vector<MeasurementSettings> starts = maximize_b_starts();
  std::vector<CoordinateAscentResult> results(starts.size());
  auto run = [&](std::size_t k) {
    const auto flat = starts[k].flatten();
    results[k] = coordinate_ascent(objective, std::vector<double>(flat.begin(), flat.end()),
                                   options.ascent);
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.workers)), 1, starts.size());
  if (workers == 1) {
    for (std::size_t k = 0; k < starts.size(); ++k) run(k);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < starts.size(); k += workers) run(k);
      });
    }
  }

  // Max by value; ties go to the lexicographically smallest normalized settings.
  std::size_t best = 0;
  MeasurementSettings best_settings = MeasurementSettings::unflatten(results[0].x).normalized();
  for (std::size_t k = 1; k < results.size(); ++k) {
    const MeasurementSettings candidate = MeasurementSettings::unflatten(results[k].x).normalized();
    if (results[k].value > results[best].value ||
        (results[k].value == results[best].value && candidate < best_settings)) {
      best = k;
      best_settings = candidate;
    }
  }

  const IJ ij = ij_from_correlators(correlators_from_tensors(tensors, best_settings));
  return assessment_from(ij, x1, x2, best_settings, tensors.null_branches);
}

}  // namespace bilocal
