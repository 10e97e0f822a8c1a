#include "bilocal/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bilocal {

Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

TParams random_t_params(Rng& rng) {
  for (;;) {
    TParams t{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    if (!t_params_violation(t)) return t;
  }
}

TParams random_separable_t_params(Rng& rng) {
  for (;;) {
    TParams t = random_t_params(rng);
    if (is_separable_t(t)) return t;
  }
}

XParams random_x_params(Rng& rng) {
  // Sorted uniforms give a uniform point on the 3-simplex.
  std::array<double, 5> cuts{0.0, uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0),
                             uniform(rng, 0.0, 1.0), 1.0};
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  XParams x;
  x.pop00 = cuts[1] - cuts[0];
  x.pop01 = cuts[2] - cuts[1];
  x.pop10 = cuts[3] - cuts[2];
  x.pop11 = cuts[4] - cuts[3];
  const double outer = std::sqrt(x.pop00 * x.pop11);
  const double inner = std::sqrt(x.pop01 * x.pop10);
  x.coh0011 = uniform(rng, -outer, outer);
  x.coh0110 = uniform(rng, -inner, inner);
  return x;
}

}  // namespace bilocal
