#pragma once

#include <vector>

#include "pxbih/discretization.hpp"
#include "pxbih/problem.hpp"

namespace pxbih {

struct EnergyBreakdown {
  double phi_part = 0.0;       // integral of Phi(x, |Lu|)
  double singular_part = 0.0;  // integral of m_eps(u)^(1-q) / (1-q)
  double reaction_part = 0.0;  // integral of |u|^r / r
  double lambda = 0.0;
  double total = 0.0;          // phi_part - singular_part - lambda * reaction_part
  double eps = 0.0;
};

/// Smoothed magnitude sqrt(u^2 + eps^2) - eps; equals |u| at eps = 0.
double smoothed_magnitude(double u, double eps) noexcept;
/// Derivative of m_eps(u)^(1-q) / (1-q) in u; 0 at u = 0.
double singular_derivative(double u, double q, double eps) noexcept;

/// Evaluates the discrete energy and its derivatives for one problem.
/// Holds scratch buffers, so one instance must not be shared across threads.
class EnergyModel {
 public:
  explicit EnergyModel(const ProblemSpec& spec);

  const ProblemSpec& spec() const noexcept { return spec_; }
  const NavierOperator& op() const noexcept { return op_; }

  EnergyBreakdown evaluate(std::span<const double> u, double eps) const;
  /// Riesz representer g of the derivative in the quadrature inner product;
  /// 0 on the boundary. Returns the energy at u as a by-product.
  EnergyBreakdown gradient(std::span<const double> u, double eps, std::span<double> g) const;

  /// Per-node second derivative of Phi at Lu (floored away from 0) and the
  /// pointwise second derivatives of the singular and reaction terms,
  /// already signed as they enter the energy.
  struct Curvature {
    std::vector<double> phi;
    std::vector<double> lower_order;
  };
  Curvature curvature(std::span<const double> u, double eps, double xi_floor_ratio) const;

 private:
  ProblemSpec spec_;
  NavierOperator op_;
  mutable std::vector<double> lu_, terms_, flux_;
};

EnergyBreakdown energy(const ScalarField& u, const ProblemSpec& spec, double eps);
ScalarField energy_gradient(const ScalarField& u, const ProblemSpec& spec, double eps);

/// max over probes v of |<g, v>_h| / (1 + |Lv|_p): the smoothed weak-form
/// defect of the Euler-Lagrange identity.
double stationarity_residual(const ScalarField& u, const ProblemSpec& spec, double eps,
                             const std::vector<ScalarField>& probes);

/// Smooth test fields vanishing on the boundary (sine modes, lowest first).
std::vector<ScalarField> probe_basis(const GridPtr& grid, std::size_t count = 20);

struct CoercivityBound {
  double lower = 0.0;
  double norm = 0.0;  // |Lu|_p
  double c = 0.0;
  double c0 = 0.0;
  double p_inf = 0.0, p_sup = 0.0, q_sup = 0.0, r_inf = 0.0;
  double leading = 0.0;   // (c / p+) norm^p-
  double singular = 0.0;  // (c0 / (1 - q+)) norm^(1 - q+)
  double reaction = 0.0;  // (lambda c0 / r-) norm^r-
};

/// max(|u|_(1-q)p, |u|_r) / |Lu|_p for one field.
double embedding_ratio(const ScalarField& u, const ProblemSpec& spec);
/// Largest embedding ratio over the probe fields.
double estimate_embedding_constant(const ProblemSpec& spec,
                                   const std::vector<ScalarField>& probes);

/// Lower bound on the energy for |Lu|_p > 1. The H3 constant is the model's
/// claimed c, accepted only if verify_hypotheses confirms it.
CoercivityBound coercivity_bound(const ScalarField& u, const ProblemSpec& spec, double c0);
/// Same, with c0 estimated on 200 random fields drawn from spec.seed.
CoercivityBound coercivity_bound(const ScalarField& u, const ProblemSpec& spec);

struct ValleyConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double p_inf = 0.0;
  double q_inf = 0.0;
  /// C1 t + C2 t^p- - C3 t^(1 - q-)
  double bound(double t) const;
};

/// The valley constants of a profile 0 <= v <= 1 vanishing on the boundary.
ValleyConstants valley_constants(const ScalarField& v, const ProblemSpec& spec);

}  // namespace pxbih
