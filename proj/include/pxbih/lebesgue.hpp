#pragma once

#include <vector>

#include "pxbih/grid.hpp"

namespace pxbih {

/// Integral of |u|^p(x) by the trapezoidal rule.
double modular(const ScalarField& u, const ScalarField& p);

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |modular(u / value) - 1|
};

inline constexpr double kDefaultNormTolerance = 1e-10;

/// Luxemburg norm: the root mu of modular(u / mu) = 1, by bracketing and
/// bisection in log(mu) until the modular residual is at most `tol`.
NormResult luxemburg_norm(const ScalarField& u, const ScalarField& p,
                          double tol = kDefaultNormTolerance);

/// Nodewise p / (p - 1).
ScalarField conjugate_exponent(const ScalarField& p);

struct HolderReport {
  double lhs = 0.0;  // |integral of u v|
  double rhs = 0.0;  // (1/p^- + 1/p'^-) |u|_p |v|_p'
  bool pass = false;
};

HolderReport holder_check(const ScalarField& u, const ScalarField& v, const ScalarField& p,
                          double tol = 0.0);

enum class NormRegime { kAboveOne, kBelowOne, kUnit };

struct ModularRelationReport {
  double norm = 0.0;
  double modular = 0.0;
  double lower = 0.0;  // the smaller power of the norm bracketing the modular
  double upper = 0.0;
  NormRegime regime = NormRegime::kUnit;
  bool pass = false;
};

inline constexpr double kRelationSlack = 1e-9;

/// norm^p- <= modular <= norm^p+ above one, reversed below one; the unit
/// norm case is vacuous. Both sides get a relative slack.
ModularRelationReport modular_norm_relations_check(const ScalarField& u, const ScalarField& p,
                                                   double slack = kRelationSlack);

struct ConvergenceEquivalenceReport {
  std::vector<double> norms;
  std::vector<double> modulars;
  bool relations_hold = false;
  bool both_vanish = false;
  bool pass = false;
};

/// Follows u_n = u + 2^-n w for n = 1..terms and checks that the norm and
/// the modular of u_n - u tend to zero together.
ConvergenceEquivalenceReport convergence_equivalence_check(const ScalarField& u,
                                                           const ScalarField& w,
                                                           const ScalarField& p, int terms = 40,
                                                           double vanish_threshold = 1e-6);

}  // namespace pxbih
