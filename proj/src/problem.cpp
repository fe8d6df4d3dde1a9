#include "pxbih/problem.hpp"

#include <cmath>

#include "pxbih/error.hpp"

namespace pxbih {

void EpsSchedule::validate() const {
  if (!(floor > 0.0) || !(initial > floor)) {
    throw Error(ErrorKind::kInvalidArgument, "eps schedule needs eps0 > eps_min > 0");
  }
  if (!(decay > 0.0 && decay < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "eps decay must lie in (0, 1)");
  }
}

std::vector<double> EpsSchedule::stages() const {
  validate();
  std::vector<double> out;
  double e = initial;
  // Relative guard so that 1e-2 * 0.1^4 still lands on a 1e-6 floor.
  while (e > floor * (1.0 + 1e-9)) {
    out.push_back(e);
    e *= decay;
  }
  out.push_back(floor);
  return out;
}

void validate_for_energy(const ProblemSpec& spec) {
  require_same_grid(spec.exponents.grid_ptr(), spec.model.grid_ptr(), "problem model");
  if (!(spec.model.exponent() == spec.exponents.p())) {
    throw Error(ErrorKind::kInvalidArgument, "phi model exponent must equal p");
  }
  if (!(spec.lambda >= 0.0) || !std::isfinite(spec.lambda)) {
    throw Error(ErrorKind::kInvalidArgument, "lambda must be finite and nonnegative");
  }
  const auto chain = check_theorem_hypotheses(spec.exponents, spec.space_dim);
  if (!chain.pass) {
    const auto& v = chain.violations.front();
    throw Error(ErrorKind::kHypothesisFailure, "exponent chain fails '" + v.inequality +
                                                   "' at node " + std::to_string(v.node));
  }
}

void validate_for_solve(const ProblemSpec& spec) {
  validate_for_energy(spec);
  if (!(spec.lambda > 0.0)) throw Error(ErrorKind::kInvalidArgument, "lambda must be positive");
  spec.eps.validate();
  const auto& s = spec.solver;
  if (!(s.armijo > 0.0 && s.armijo < 1.0) || !(s.backtrack > 0.0 && s.backtrack < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "line search constants must lie in (0, 1)");
  }
  if (s.max_iterations < 1 || s.stall_window < 1 || s.max_backtracks < 1) {
    throw Error(ErrorKind::kInvalidArgument, "iteration limits must be positive");
  }
}

}  // namespace pxbih
