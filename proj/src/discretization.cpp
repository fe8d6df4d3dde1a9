#include "pxbih/discretization.hpp"

#include <cmath>

#include "pxbih/error.hpp"

namespace pxbih {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double integrate(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::kGridMismatch, "integrand length does not match grid");
  }
  std::vector<double> terms(values.size());
  const auto w = grid.weights();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw Error(ErrorKind::kInvalidField, "non-finite integrand at node " + std::to_string(k));
    }
    terms[k] = w[k] * values[k];
  }
  return pairwise_sum(terms);
}

double integrate(const ScalarField& f) { return integrate(f.grid(), f.values()); }

double inner_product(const Grid& grid, std::span<const double> a, std::span<const double> b) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw Error(ErrorKind::kGridMismatch, "inner product operands do not match grid");
  }
  std::vector<double> terms(a.size());
  const auto w = grid.weights();
  for (std::size_t k = 0; k < a.size(); ++k) terms[k] = w[k] * a[k] * b[k];
  return pairwise_sum(terms);
}

NavierOperator::NavierOperator(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorKind::kInvalidGrid, "operator needs a grid");
  for (int a = 0; a < 2; ++a) {
    inv_h2_[a] = a < grid_->dim() ? 1.0 / (grid_->spacing(a) * grid_->spacing(a)) : 0.0;
  }
}

void NavierOperator::apply(std::span<const double> in, std::span<double> out) const {
  const Grid& g = *grid_;
  if (in.size() != g.size() || out.size() != g.size()) {
    throw Error(ErrorKind::kGridMismatch, "laplacian operand does not match grid");
  }
  auto value = [&](std::size_t node) { return g.is_boundary(node) ? 0.0 : in[node]; };
  const std::size_t ny = g.dim() == 2 ? g.count(1) : 1;
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = 0.0;
  for (std::size_t k : g.interior_nodes()) {
    const double c = in[k];
    double lap = (value(k - ny) - 2.0 * c + value(k + ny)) * inv_h2_[0];
    if (g.dim() == 2) lap += (value(k - 1) - 2.0 * c + value(k + 1)) * inv_h2_[1];
    out[k] = lap;
  }
}

ScalarField NavierOperator::apply(const ScalarField& u) const {
  require_same_grid(grid_, u.grid_ptr(), "laplacian");
  std::vector<double> out(u.size());
  apply(u.values(), out);
  return ScalarField(grid_, std::move(out));
}

ScalarField laplacian(const NavierOperator& op, const ScalarField& u) { return op.apply(u); }

ScalarField project_boundary(const ScalarField& u) {
  std::vector<double> out(u.values().begin(), u.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (u.grid().is_boundary(k)) out[k] = 0.0;
  }
  return ScalarField(u.grid_ptr(), std::move(out));
}

double weak_pairing(const NavierOperator& op, const PhiModel& model, const ScalarField& u,
                    const ScalarField& v) {
  require_same_grid(op.grid_ptr(), u.grid_ptr(), "weak pairing");
  require_same_grid(op.grid_ptr(), v.grid_ptr(), "weak pairing");
  require_same_grid(op.grid_ptr(), model.grid_ptr(), "weak pairing model");
  const std::size_t n = u.size();
  std::vector<double> lu(n), lv(n), integrand(n, 0.0);
  op.apply(u.values(), lu);
  op.apply(v.values(), lv);
  for (std::size_t k = 0; k < n; ++k) {
    const double xi = std::abs(lu[k]);
    if (xi == 0.0) continue;
    // phi(|Lu|) Lu = flux(|Lu|) sign(Lu)
    integrand[k] = std::copysign(model.flux(k, xi), lu[k]) * lv[k];
  }
  return integrate(op.grid(), integrand);
}

}  // namespace pxbih
