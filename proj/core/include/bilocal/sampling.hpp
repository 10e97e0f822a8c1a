#pragma once

#include <cstdint>
#include <random>

#include "bilocal/states.hpp"

namespace bilocal {

using Rng = std::mt19937_64;

/// Derives an independent stream for worker `index` from a master seed.
Rng make_stream(std::uint64_t master_seed, std::uint64_t index);

/// Uniform on the cube [-1,1]^3 conditioned on T-state validity (rejection).
TParams random_t_params(Rng& rng);

/// random_t_params further conditioned on |cx| + |cy| + |cz| <= 1.
TParams random_separable_t_params(Rng& rng);

/// Populations uniform on the simplex, each coherence uniform over its
/// positivity interval.
XParams random_x_params(Rng& rng);

double uniform(Rng& rng, double lo, double hi);

}  // namespace bilocal
