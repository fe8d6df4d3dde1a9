#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace pxbih {

/// Uniform tensor grid on (0, L) or (0, Lx) x (0, Ly).
///
/// Nodes are stored row-major: axis 0 varies slowest, so in 2D the node
/// (i, j) has index i * count(1) + j. A 1D grid reports count(1) == 1.
class Grid {
 public:
  Grid(int dim, std::vector<std::size_t> counts, std::vector<double> extents);

  static std::shared_ptr<const Grid> line(std::size_t n, double length = 1.0);
  static std::shared_ptr<const Grid> rectangle(std::size_t nx, std::size_t ny, double lx = 1.0,
                                               double ly = 1.0);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return counts_[0] * counts_[1]; }
  std::size_t count(int axis) const { return counts_.at(axis); }
  double extent(int axis) const { return extents_.at(axis); }
  double spacing(int axis) const { return spacing_.at(axis); }

  std::size_t index(std::size_t i, std::size_t j = 0) const noexcept { return i * counts_[1] + j; }
  std::array<std::size_t, 2> multi_index(std::size_t node) const noexcept {
    return {node / counts_[1], node % counts_[1]};
  }
  /// Physical coordinates; the second entry is 0 on a 1D grid.
  std::array<double, 2> coords(std::size_t node) const noexcept;

  bool is_boundary(std::size_t node) const noexcept { return boundary_[node] != 0; }
  bool is_interior(std::size_t node) const noexcept { return boundary_[node] == 0; }
  std::size_t interior_count() const noexcept { return interior_.size(); }
  /// Node indices of all interior nodes in ascending order.
  std::span<const std::size_t> interior_nodes() const noexcept { return interior_; }

  /// Composite trapezoidal weights, tensorized in 2D.
  std::span<const double> weights() const noexcept { return weights_; }
  double measure() const noexcept;

  bool operator==(const Grid& other) const noexcept {
    return dim_ == other.dim_ && counts_ == other.counts_ && extents_ == other.extents_;
  }

 private:
  int dim_;
  std::array<std::size_t, 2> counts_{1, 1};
  std::array<double, 2> extents_{0.0, 0.0};
  std::array<double, 2> spacing_{0.0, 0.0};
  std::vector<char> boundary_;
  std::vector<std::size_t> interior_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;
void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what);

/// Finite real values on the nodes of a grid.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);

  static ScalarField constant(GridPtr grid, double value);
  /// Samples f(x, y) at every node; y is 0 on a 1D grid.
  static ScalarField sample(GridPtr grid, const std::function<double(double, double)>& f);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t node) const noexcept { return values_[node]; }

  double min() const;
  double max() const;
  double max_abs() const;
  bool is_zero() const;

  ScalarField scaled(double factor) const;
  ScalarField plus(const ScalarField& other, double factor = 1.0) const;
  ScalarField map(const std::function<double(double)>& f) const;

  bool operator==(const ScalarField& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace pxbih
