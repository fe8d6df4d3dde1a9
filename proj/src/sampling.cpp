#include "pxbih/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace pxbih {

ScalarField random_smooth_field(const GridPtr& grid, Rng& rng, int modes, double amplitude) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double pi = std::numbers::pi;
  const double lx = grid->extent(0);
  const double ly = grid->dim() == 2 ? grid->extent(1) : 1.0;
  std::vector<double> values(grid->size(), 0.0);
  if (grid->dim() == 1) {
    for (int m = 1; m <= modes; ++m) {
      const double a = coef(rng) / (m * m);
      for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] += a * std::sin(m * pi * grid->coords(k)[0] / lx);
      }
    }
  } else {
    for (int i = 1; i <= modes; ++i) {
      for (int j = 1; i + j <= modes + 1; ++j) {
        const double a = coef(rng) / (i * i + j * j);
        for (std::size_t k = 0; k < values.size(); ++k) {
          const auto [x, y] = grid->coords(k);
          values[k] += a * std::sin(i * pi * x / lx) * std::sin(j * pi * y / ly);
        }
      }
    }
  }
  double peak = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (grid->is_boundary(k)) values[k] = 0.0;
    peak = std::max(peak, std::abs(values[k]));
  }
  if (peak > 0.0) {
    for (double& v : values) v *= amplitude / peak;
  }
  return ScalarField(grid, std::move(values));
}

ScalarField random_nodal_field(const GridPtr& grid, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> values(grid->size());
  for (double& v : values) v = dist(rng);
  return ScalarField(grid, std::move(values));
}

ScalarField random_exponent(const GridPtr& grid, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> freq(1, 3);
  const double ph = phase(rng);
  const int fx = freq(rng);
  const int fy = freq(rng);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  return ScalarField::sample(grid, [&](double x, double y) {
    const double sx = x / grid->extent(0);
    const double sy = grid->dim() == 2 ? y / grid->extent(1) : 0.0;
    return mid + half * std::sin(ph + std::numbers::pi * (fx * sx + fy * sy));
  });
}

ScalarField bump_profile(const GridPtr& grid) {
  std::vector<double> values(grid->size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    double v = 1.0;
    const auto c = grid->coords(k);
    for (int a = 0; a < grid->dim(); ++a) {
      const double l = grid->extent(a);
      const double s = 4.0 * c[a] * (l - c[a]) / (l * l);
      v *= s * s;
    }
    values[k] = grid->is_boundary(k) ? 0.0 : std::clamp(v, 0.0, 1.0);
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace pxbih
