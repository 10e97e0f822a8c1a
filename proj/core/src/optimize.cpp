#include "bilocal/optimize.hpp"

#include <cmath>
#include <numbers>

namespace bilocal {

LineMaximum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                    double tolerance) {
  constexpr double inv_phi = 0.6180339887498949;  // 1/golden ratio
  LineMaximum best;
  auto track = [&](double x, double v) {
    ++best.evaluations;
    if (best.evaluations == 1 || v > best.value) {
      best.x = x;
      best.value = v;
    }
    return v;
  };

  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = track(c, f(c));
  double fd = track(d, f(d));
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = track(c, f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = track(d, f(d));
    }
  }
  const double mid = 0.5 * (a + b);
  track(mid, f(mid));
  return best;
}

CoordinateAscentResult coordinate_ascent(const std::function<double(std::span<const double>)>& f,
                                         std::vector<double> start,
                                         const CoordinateAscentOptions& options) {
  const double period = options.period > 0.0 ? options.period : 2.0 * std::numbers::pi;
  const double cell = period / options.coarse_points;

  CoordinateAscentResult result;
  result.x = std::move(start);
  result.value = f(result.x);
  result.evaluations = 1;

  std::vector<double> probe = result.x;
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const double sweep_start_value = result.value;
    for (std::size_t i = 0; i < result.x.size(); ++i) {
      probe = result.x;
      auto along = [&](double xi) {
        probe[i] = xi;
        ++result.evaluations;
        return f(probe);
      };

      const double origin = result.x[i];
      double best_x = origin;
      double best_value = result.value;
      for (int k = 1; k < options.coarse_points; ++k) {
        const double xi = origin - 0.5 * period + k * cell;
        if (const double v = along(xi); v > best_value) {
          best_value = v;
          best_x = xi;
        }
      }
      const LineMaximum refined =
          golden_section_maximize(along, best_x - cell, best_x + cell, options.line_tolerance);
      if (refined.value > best_value) {
        best_value = refined.value;
        best_x = refined.x;
      }
      if (best_value > result.value) {
        result.value = best_value;
        result.x[i] = best_x;
      }
    }
    result.sweeps = sweep + 1;
    if (result.value - sweep_start_value < options.min_sweep_gain) break;
  }
  return result;
}

}  // namespace bilocal
