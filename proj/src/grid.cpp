#include "pxbih/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pxbih/error.hpp"

namespace pxbih {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGrid: return "invalid grid";
    case ErrorKind::kInvalidField: return "invalid field";
    case ErrorKind::kGridMismatch: return "grid mismatch";
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kHypothesisFailure: return "hypothesis failure";
    case ErrorKind::kOutOfRegime: return "out of regime";
    case ErrorKind::kUndefinedBranch: return "undefined branch";
    case ErrorKind::kValleyNotFound: return "valley not found";
    case ErrorKind::kNumerical: return "numerical failure";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

Grid::Grid(int dim, std::vector<std::size_t> counts, std::vector<double> extents) : dim_(dim) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorKind::kInvalidGrid, "dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (counts.size() != static_cast<std::size_t>(dim) ||
      extents.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::kInvalidGrid, "counts and extents must have one entry per axis");
  }
  for (int a = 0; a < dim; ++a) {
    if (counts[a] < 3) {
      throw Error(ErrorKind::kInvalidGrid, "need at least 3 nodes per axis");
    }
    if (!(extents[a] > 0.0) || !std::isfinite(extents[a])) {
      throw Error(ErrorKind::kInvalidGrid, "extents must be positive and finite");
    }
    counts_[a] = counts[a];
    extents_[a] = extents[a];
    spacing_[a] = extents[a] / static_cast<double>(counts[a] - 1);
  }

  const std::size_t n = size();
  boundary_.assign(n, 0);
  weights_.assign(n, 0.0);
  auto axis_weight = [this](int a, std::size_t i) {
    const bool end = i == 0 || i + 1 == counts_[a];
    return end ? 0.5 * spacing_[a] : spacing_[a];
  };
  for (std::size_t node = 0; node < n; ++node) {
    const auto [i, j] = multi_index(node);
    bool on_edge = i == 0 || i + 1 == counts_[0];
    double w = axis_weight(0, i);
    if (dim_ == 2) {
      on_edge = on_edge || j == 0 || j + 1 == counts_[1];
      w *= axis_weight(1, j);
    }
    boundary_[node] = on_edge ? 1 : 0;
    weights_[node] = w;
    if (!on_edge) interior_.push_back(node);
  }
}

GridPtr Grid::line(std::size_t n, double length) {
  return std::make_shared<const Grid>(1, std::vector<std::size_t>{n}, std::vector<double>{length});
}

GridPtr Grid::rectangle(std::size_t nx, std::size_t ny, double lx, double ly) {
  return std::make_shared<const Grid>(2, std::vector<std::size_t>{nx, ny},
                                      std::vector<double>{lx, ly});
}

std::array<double, 2> Grid::coords(std::size_t node) const noexcept {
  const auto [i, j] = multi_index(node);
  return {static_cast<double>(i) * spacing_[0],
          dim_ == 2 ? static_cast<double>(j) * spacing_[1] : 0.0};
}

double Grid::measure() const noexcept {
  return dim_ == 1 ? extents_[0] : extents_[0] * extents_[1];
}

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept {
  if (a == b) return true;
  return a && b && *a == *b;
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (!same_grid(a, b)) {
    throw Error(ErrorKind::kGridMismatch, std::string(what) + ": fields live on different grids");
  }
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::kInvalidField, "field has no grid");
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::kInvalidField, "expected " + std::to_string(grid_->size()) +
                                              " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error(ErrorKind::kInvalidField, "non-finite value at node " + std::to_string(k));
    }
  }
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
  const std::size_t n = grid ? grid->size() : 0;
  return ScalarField(std::move(grid), std::vector<double>(n, value));
}

ScalarField ScalarField::sample(GridPtr grid, const std::function<double(double, double)>& f) {
  std::vector<double> values(grid->size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto [x, y] = grid->coords(k);
    values[k] = f(x, y);
  }
  return ScalarField(std::move(grid), std::move(values));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

ScalarField ScalarField::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return ScalarField(grid_, std::move(out));
}

ScalarField ScalarField::plus(const ScalarField& other, double factor) const {
  require_same_grid(grid_, other.grid_, "plus");
  std::vector<double> out(values_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += factor * other.values_[k];
  return ScalarField(grid_, std::move(out));
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), f);
  return ScalarField(grid_, std::move(out));
}

bool ScalarField::operator==(const ScalarField& other) const {
  return same_grid(grid_, other.grid_) && values_ == other.values_;
}

}  // namespace pxbih
