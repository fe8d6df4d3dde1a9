#include "pxbih/lebesgue.hpp"

#include <cmath>
#include <limits>

#include "pxbih/discretization.hpp"
#include "pxbih/error.hpp"
#include "pxbih/exponents.hpp"

namespace pxbih {

namespace {

double scaled_modular(const ScalarField& u, const ScalarField& p, double mu) {
  std::vector<double> terms(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = std::abs(u[k]) / mu;
    terms[k] = a == 0.0 ? 0.0 : std::pow(a, p[k]);
  }
  return integrate(u.grid(), terms);
}

}  // namespace

double modular(const ScalarField& u, const ScalarField& p) {
  require_same_grid(u.grid_ptr(), p.grid_ptr(), "modular");
  return scaled_modular(u, p, 1.0);
}

NormResult luxemburg_norm(const ScalarField& u, const ScalarField& p, double tol) {
  require_same_grid(u.grid_ptr(), p.grid_ptr(), "luxemburg_norm");
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  if (!(p.min() > 0.0)) throw Error(ErrorKind::kInvalidField, "exponent must be positive");
  if (u.is_zero()) return {};

  double lo = std::numeric_limits<double>::epsilon();
  double hi = std::max(1.0, u.max_abs() * u.grid().measure());
  while (scaled_modular(u, p, hi) > 1.0) hi *= 2.0;
  while (scaled_modular(u, p, lo) <= 1.0) lo *= 0.5;

  NormResult res;
  constexpr int kMaxIterations = 400;
  for (res.iterations = 1; res.iterations <= kMaxIterations; ++res.iterations) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    const double r = scaled_modular(u, p, mid) - 1.0;
    res.value = mid;
    res.residual = std::abs(r);
    if (res.residual <= tol) return res;
    if (!(lo < mid && mid < hi)) break;
    if (r > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw Error(ErrorKind::kNumerical, "bisection stalled at modular residual " +
                                         std::to_string(res.residual));
}

ScalarField conjugate_exponent(const ScalarField& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] > 1.0)) {
      throw Error(ErrorKind::kInvalidField,
                  "conjugate exponent needs p > 1 (node " + std::to_string(k) + ")");
    }
  }
  return p.map([](double v) { return v / (v - 1.0); });
}

HolderReport holder_check(const ScalarField& u, const ScalarField& v, const ScalarField& p,
                          double tol) {
  require_same_grid(u.grid_ptr(), v.grid_ptr(), "holder_check");
  const ScalarField pc = conjugate_exponent(p);
  HolderReport rep;
  rep.lhs = std::abs(inner_product(u.grid(), u.values(), v.values()));
  const double constant = 1.0 / p.min() + 1.0 / pc.min();
  rep.rhs = constant * luxemburg_norm(u, p).value * luxemburg_norm(v, pc).value;
  rep.pass = rep.lhs <= rep.rhs + tol;
  return rep;
}

ModularRelationReport modular_norm_relations_check(const ScalarField& u, const ScalarField& p,
                                                   double slack) {
  const Bounds b = exponent_bounds(p);
  ModularRelationReport rep;
  rep.norm = luxemburg_norm(u, p).value;
  rep.modular = modular(u, p);
  // rho(u) = 1 iff the norm is 1
  if (std::abs(rep.modular - 1.0) <= kDefaultNormTolerance) {
    rep.regime = NormRegime::kUnit;
    rep.lower = rep.upper = 1.0;
    rep.pass = true;
    return rep;
  }
  if (rep.norm > 1.0) {
    rep.regime = NormRegime::kAboveOne;
    rep.lower = std::pow(rep.norm, b.inf);
    rep.upper = std::pow(rep.norm, b.sup);
  } else if (rep.norm < 1.0) {
    rep.regime = NormRegime::kBelowOne;
    rep.lower = std::pow(rep.norm, b.sup);
    rep.upper = std::pow(rep.norm, b.inf);
  } else {
    rep.regime = NormRegime::kUnit;
    rep.lower = rep.upper = 1.0;
    rep.pass = true;
    return rep;
  }
  rep.pass = rep.lower <= rep.modular * (1.0 + slack) && rep.modular <= rep.upper * (1.0 + slack);
  return rep;
}

ConvergenceEquivalenceReport convergence_equivalence_check(const ScalarField& u,
                                                           const ScalarField& w,
                                                           const ScalarField& p, int terms,
                                                           double vanish_threshold) {
  require_same_grid(u.grid_ptr(), w.grid_ptr(), "convergence check");
  if (terms < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one term");
  ConvergenceEquivalenceReport rep;
  rep.relations_hold = true;
  for (int n = 1; n <= terms; ++n) {
    const ScalarField un = u.plus(w, std::ldexp(1.0, -n));
    const ScalarField diff = un.plus(u, -1.0);
    const auto rel = modular_norm_relations_check(diff, p);
    rep.norms.push_back(rel.norm);
    rep.modulars.push_back(rel.modular);
    rep.relations_hold = rep.relations_hold && rel.pass;
  }
  rep.both_vanish = rep.norms.back() <= vanish_threshold && rep.modulars.back() <= vanish_threshold;
  rep.pass = rep.relations_hold && rep.both_vanish;
  return rep;
}

}  // namespace pxbih
