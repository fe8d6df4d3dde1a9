#include "pxbih/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pxbih/error.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/sampling.hpp"

namespace pxbih {

double smoothed_magnitude(double u, double eps) noexcept {
  if (eps == 0.0) return std::abs(u);
  return u * u / (std::hypot(u, eps) + eps);
}

double singular_derivative(double u, double q, double eps) noexcept {
  if (u == 0.0) return 0.0;
  const double rho = std::hypot(u, eps);
  const double m = smoothed_magnitude(u, eps);
  return std::pow(m, -q) * (u / rho);
}

namespace {

// -(d^2/du^2) of m_eps(u)^(1-q) / (1-q), floored away from u = 0.
double singular_curvature(double u, double q, double eps) {
  const double a = std::max(std::abs(u), 1e-12);
  const double rho = std::hypot(a, eps);
  const double m = smoothed_magnitude(a, eps);
  const double s = a / rho;
  return q * std::pow(m, -q - 1.0) * s * s - std::pow(m, -q) * eps * eps / (rho * rho * rho);
}

double signed_power(double u, double e) {
  return u == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(u), e), u);
}

}  // namespace

EnergyModel::EnergyModel(const ProblemSpec& spec)
    : spec_(spec), op_(spec.grid_ptr()) {
  validate_for_energy(spec_);
  const std::size_t n = spec_.grid().size();
  lu_.resize(n);
  terms_.resize(n);
  flux_.resize(n);
}

EnergyBreakdown EnergyModel::evaluate(std::span<const double> u, double eps) const {
  if (!(eps >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be nonnegative");
  const Grid& g = spec_.grid();
  const auto& q = spec_.exponents.q();
  const auto& r = spec_.exponents.r();
  op_.apply(u, lu_);

  EnergyBreakdown e;
  e.eps = eps;
  e.lambda = spec_.lambda;
  for (std::size_t k = 0; k < g.size(); ++k) {
    terms_[k] = g.is_interior(k) ? spec_.model.big_phi(k, std::abs(lu_[k])) : 0.0;
  }
  e.phi_part = integrate(g, terms_);
  if (spec_.include_singular) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double m = g.is_interior(k) ? smoothed_magnitude(u[k], eps) : 0.0;
      terms_[k] = m == 0.0 ? 0.0 : std::pow(m, 1.0 - q[k]) / (1.0 - q[k]);
    }
    e.singular_part = integrate(g, terms_);
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = g.is_interior(k) ? std::abs(u[k]) : 0.0;
    terms_[k] = a == 0.0 ? 0.0 : std::pow(a, r[k]) / r[k];
  }
  e.reaction_part = integrate(g, terms_);
  e.total = e.phi_part - e.singular_part - e.lambda * e.reaction_part;
  if (!std::isfinite(e.total)) throw Error(ErrorKind::kNumerical, "energy is not finite");
  return e;
}

EnergyBreakdown EnergyModel::gradient(std::span<const double> u, double eps,
                                      std::span<double> grad) const {
  if (!(eps > 0.0)) throw Error(ErrorKind::kInvalidArgument, "gradient needs eps > 0");
  const EnergyBreakdown e = evaluate(u, eps);  // leaves L u in lu_
  const Grid& g = spec_.grid();
  const auto w = g.weights();
  const auto& q = spec_.exponents.q();
  const auto& r = spec_.exponents.r();
  for (std::size_t k = 0; k < g.size(); ++k) {
    flux_[k] = g.is_interior(k) && lu_[k] != 0.0
                   ? w[k] * std::copysign(spec_.model.flux(k, std::abs(lu_[k])), lu_[k])
                   : 0.0;
  }
  // The interior block of the stencil is symmetric, so L^T flux = L flux.
  op_.apply(flux_, terms_);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) {
      grad[k] = 0.0;
      continue;
    }
    double gk = terms_[k] / w[k];
    if (spec_.include_singular) gk -= singular_derivative(u[k], q[k], eps);
    gk -= spec_.lambda * signed_power(u[k], r[k] - 1.0);
    grad[k] = gk;
  }
  return e;
}

EnergyModel::Curvature EnergyModel::curvature(std::span<const double> u, double eps,
                                              double xi_floor_ratio) const {
  const Grid& g = spec_.grid();
  const auto& q = spec_.exponents.q();
  const auto& r = spec_.exponents.r();
  op_.apply(u, lu_);
  double xi_max = 0.0;
  for (std::size_t k : g.interior_nodes()) xi_max = std::max(xi_max, std::abs(lu_[k]));
  const double floor = std::max(xi_floor_ratio * xi_max, 1e-12);

  Curvature c;
  c.phi.assign(g.size(), 0.0);
  c.lower_order.assign(g.size(), 0.0);
  for (std::size_t k : g.interior_nodes()) {
    c.phi[k] = spec_.model.flux_derivative(k, std::max(std::abs(lu_[k]), floor));
    double lo = 0.0;
    if (spec_.include_singular) lo += singular_curvature(u[k], q[k], eps);
    const double a = std::max(std::abs(u[k]), 1e-12);
    lo -= spec_.lambda * (r[k] - 1.0) * std::pow(a, r[k] - 2.0);
    c.lower_order[k] = lo;
  }
  return c;
}

EnergyBreakdown energy(const ScalarField& u, const ProblemSpec& spec, double eps) {
  require_same_grid(u.grid_ptr(), spec.grid_ptr(), "energy");
  return EnergyModel(spec).evaluate(u.values(), eps);
}

ScalarField energy_gradient(const ScalarField& u, const ProblemSpec& spec, double eps) {
  require_same_grid(u.grid_ptr(), spec.grid_ptr(), "energy_gradient");
  std::vector<double> g(u.size());
  EnergyModel(spec).gradient(u.values(), eps, g);
  return ScalarField(u.grid_ptr(), std::move(g));
}

double stationarity_residual(const ScalarField& u, const ProblemSpec& spec, double eps,
                             const std::vector<ScalarField>& probes) {
  const ScalarField g = energy_gradient(u, spec, eps);
  const NavierOperator op(spec.grid_ptr());
  double worst = 0.0;
  for (const auto& v : probes) {
    const double pairing = inner_product(spec.grid(), g.values(), v.values());
    const double vnorm = luxemburg_norm(op.apply(v), spec.exponents.p()).value;
    worst = std::max(worst, std::abs(pairing) / (1.0 + vnorm));
  }
  return worst;
}

std::vector<ScalarField> probe_basis(const GridPtr& grid, std::size_t count) {
  std::vector<std::pair<int, int>> modes;
  if (grid->dim() == 1) {
    for (int m = 1; modes.size() < count; ++m) modes.emplace_back(m, 0);
  } else {
    // Order by i^2 + j^2, then i.
    for (int s = 2; modes.size() < count; ++s) {
      std::vector<std::pair<int, int>> shell;
      for (int i = 1; i < s; ++i) {
        for (int j = 1; j < s; ++j) {
          if (i * i + j * j > (s - 1) * (s - 1) && i * i + j * j <= s * s) shell.emplace_back(i, j);
        }
      }
      std::sort(shell.begin(), shell.end(), [](auto a, auto b) {
        const int na = a.first * a.first + a.second * a.second;
        const int nb = b.first * b.first + b.second * b.second;
        return na != nb ? na < nb : a.first < b.first;
      });
      for (auto m : shell) {
        if (modes.size() < count) modes.push_back(m);
      }
    }
  }
  const double pi = std::numbers::pi;
  std::vector<ScalarField> out;
  for (auto [i, j] : modes) {
    out.push_back(project_boundary(ScalarField::sample(grid, [&](double x, double y) {
      double v = std::sin(i * pi * x / grid->extent(0));
      if (grid->dim() == 2) v *= std::sin(j * pi * y / grid->extent(1));
      return v;
    })));
  }
  return out;
}

double embedding_ratio(const ScalarField& u, const ProblemSpec& spec) {
  const auto& e = spec.exponents;
  const NavierOperator op(spec.grid_ptr());
  const double norm = luxemburg_norm(op.apply(u), e.p()).value;
  if (norm == 0.0) throw Error(ErrorKind::kInvalidArgument, "embedding ratio of a zero field");
  std::vector<double> mixed(e.p().size());
  for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k] = (1.0 - e.q()[k]) * e.p()[k];
  const ScalarField mixed_exp(e.grid_ptr(), std::move(mixed));
  const double a = luxemburg_norm(u, mixed_exp).value;
  const double b = luxemburg_norm(u, e.r()).value;
  return std::max(a, b) / norm;
}

double estimate_embedding_constant(const ProblemSpec& spec,
                                   const std::vector<ScalarField>& probes) {
  double c0 = 0.0;
  for (const auto& u : probes) c0 = std::max(c0, embedding_ratio(u, spec));
  if (!(c0 > 0.0)) throw Error(ErrorKind::kInvalidArgument, "empty probe set");
  return c0;
}

CoercivityBound coercivity_bound(const ScalarField& u, const ProblemSpec& spec, double c0) {
  validate_for_energy(spec);
  require_same_grid(u.grid_ptr(), spec.grid_ptr(), "coercivity_bound");
  const NavierOperator op(spec.grid_ptr());
  CoercivityBound b;
  b.norm = luxemburg_norm(op.apply(project_boundary(u)), spec.exponents.p()).value;
  if (!(b.norm > 1.0)) {
    throw Error(ErrorKind::kOutOfRegime, "coercivity bound needs |Lu|_p > 1");
  }
  const auto rep = verify_hypotheses(spec.model);
  if (!(spec.model.c() <= rep.c_max * (1.0 + 1e-9))) {
    throw Error(ErrorKind::kHypothesisFailure,
                "claimed H3 constant exceeds the verified maximum " + std::to_string(rep.c_max));
  }
  b.c = spec.model.c();
  b.c0 = c0;
  b.p_inf = spec.exponents.p_bounds().inf;
  b.p_sup = spec.exponents.p_bounds().sup;
  b.q_sup = spec.exponents.q_bounds().sup;
  b.r_inf = spec.exponents.r_bounds().inf;
  b.leading = b.c / b.p_sup * std::pow(b.norm, b.p_inf);
  b.singular = c0 / (1.0 - b.q_sup) * std::pow(b.norm, 1.0 - b.q_sup);
  b.reaction = spec.lambda * c0 / b.r_inf * std::pow(b.norm, b.r_inf);
  b.lower = b.leading - b.singular - b.reaction;
  return b;
}

CoercivityBound coercivity_bound(const ScalarField& u, const ProblemSpec& spec) {
  Rng rng(spec.seed);
  std::vector<ScalarField> probes;
  for (int i = 0; i < 200; ++i) probes.push_back(random_smooth_field(spec.grid_ptr(), rng));
  return coercivity_bound(u, spec, estimate_embedding_constant(spec, probes));
}

double ValleyConstants::bound(double t) const {
  return c1 * t + c2 * std::pow(t, p_inf) - c3 * std::pow(t, 1.0 - q_inf);
}

ValleyConstants valley_constants(const ScalarField& v, const ProblemSpec& spec) {
  validate_for_energy(spec);
  require_same_grid(v.grid_ptr(), spec.grid_ptr(), "valley_constants");
  const Grid& g = spec.grid();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0.0 || v[k] > 1.0) {
      throw Error(ErrorKind::kInvalidArgument, "valley profile must satisfy 0 <= v <= 1");
    }
    if (g.is_boundary(k) && v[k] != 0.0) {
      throw Error(ErrorKind::kInvalidArgument, "valley profile must vanish on the boundary");
    }
  }
  if (v.is_zero()) throw Error(ErrorKind::kInvalidArgument, "valley profile is identically 0");

  const auto& e = spec.exponents;
  const NavierOperator op(spec.grid_ptr());
  const ScalarField lv = op.apply(v);
  const auto rep = verify_hypotheses(spec.model);
  if (!rep.h2_bounded) {
    throw Error(ErrorKind::kHypothesisFailure, "H2 growth bound is not confirmed for this model");
  }
  const ScalarField a(spec.grid_ptr(), rep.a);

  ValleyConstants c;
  c.p_inf = e.p_bounds().inf;
  c.q_inf = e.q_bounds().inf;
  const double a_norm = luxemburg_norm(a, conjugate_exponent(e.p())).value;
  c.c1 = 2.0 * a_norm * luxemburg_norm(lv, e.p()).value;
  c.c2 = rep.b / c.p_inf * modular(lv, e.p());
  std::vector<double> terms(v.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] > 0.0) terms[k] = std::pow(v[k], 1.0 - e.q()[k]) / (1.0 - e.q()[k]);
  }
  c.c3 = integrate(g, terms);
  return c;
}

}  // namespace pxbih
