#pragma once

#include <random>

#include "pxbih/grid.hpp"

namespace pxbih {

using Rng = std::mt19937_64;

/// Random combination of the lowest sine modes (vanishes on the boundary);
/// mode k gets amplitude U(-1, 1) / k^2. Scaled so that max |u| = amplitude.
ScalarField random_smooth_field(const GridPtr& grid, Rng& rng, int modes = 6,
                                double amplitude = 1.0);

/// Independent U(lo, hi) nodal values.
ScalarField random_nodal_field(const GridPtr& grid, Rng& rng, double lo, double hi);

/// Smooth random exponent with values in [lo, hi].
ScalarField random_exponent(const GridPtr& grid, Rng& rng, double lo, double hi);

/// Bump [4 x (L - x) / L^2]^2 per axis (product in 2D): values in [0, 1],
/// zero with zero slope on the boundary.
ScalarField bump_profile(const GridPtr& grid);

}  // namespace pxbih
