#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bilocal {

/// Maximizes f on [lo, hi] by golden-section search until the bracket is
/// narrower than `tolerance`. Assumes f is unimodal on the bracket; returns
/// the best abscissa evaluated.
struct LineMaximum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};
LineMaximum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                    double tolerance);

struct CoordinateAscentOptions {
  int coarse_points = 16;         ///< per-coordinate scan over one full period
  double line_tolerance = 1e-8;   ///< golden-section bracket width
  int max_sweeps = 400;
  double min_sweep_gain = 1e-15;  ///< stop when a sweep improves less than this
  double period = 0.0;            ///< coordinate period; 0 means 2*pi
};

struct CoordinateAscentResult {
  std::vector<double> x;
  double value = 0.0;
  int sweeps = 0;
  long evaluations = 0;
};

/// Derivative-free cyclic coordinate ascent over periodic coordinates. Each
/// coordinate step scans a coarse lattice over one period around the current
/// point, then refines the best lattice cell by golden section. Moves are
/// accepted only if they strictly improve the objective, so the returned value
/// is never below f(start).
CoordinateAscentResult coordinate_ascent(const std::function<double(std::span<const double>)>& f,
                                         std::vector<double> start,
                                         const CoordinateAscentOptions& options = {});

}  // namespace bilocal
