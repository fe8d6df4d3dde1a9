#pragma once

#include <span>
#include <vector>

#include "pxbih/grid.hpp"
#include "pxbih/phi.hpp"

namespace pxbih {

/// Pairwise (tree) summation; the order depends only on the length.
double pairwise_sum(std::span<const double> values);

/// Composite trapezoidal rule over the grid.
double integrate(const Grid& grid, std::span<const double> values);
double integrate(const ScalarField& f);

/// Weighted nodal inner product sum_k w_k a_k b_k.
double inner_product(const Grid& grid, std::span<const double> a, std::span<const double> b);

/// Second-order centered Laplacian with Navier conditions imposed strongly:
/// boundary inputs are read as 0 and boundary outputs are set to 0.
class NavierOperator {
 public:
  explicit NavierOperator(GridPtr grid);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  ScalarField apply(const ScalarField& u) const;
  /// Raw form for hot loops. `out` must not alias `in`.
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  GridPtr grid_;
  double inv_h2_[2];
};

ScalarField laplacian(const NavierOperator& op, const ScalarField& u);

/// u with its boundary values replaced by 0.
ScalarField project_boundary(const ScalarField& u);

/// Quadrature of phi(x, |Lu|) Lu Lv.
double weak_pairing(const NavierOperator& op, const PhiModel& model, const ScalarField& u,
                    const ScalarField& v);

}  // namespace pxbih
