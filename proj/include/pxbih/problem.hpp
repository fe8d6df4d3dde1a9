#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pxbih/exponents.hpp"
#include "pxbih/phi.hpp"

namespace pxbih {

/// Geometric continuation eps0, eps0 * decay, ... down to the floor.
struct EpsSchedule {
  double initial = 1e-2;
  double decay = 0.1;
  double floor = 1e-6;

  void validate() const;
  std::vector<double> stages() const;
};

enum class DescentMethod {
  /// Steepest descent in the quadrature inner product, Barzilai-Borwein steps.
  kGradient,
  /// Descent along -H^-1 grad with H the (safeguarded) Hessian of the
  /// discrete energy.
  kNewton,
};

struct SolverOptions {
  DescentMethod method = DescentMethod::kNewton;
  double gradient_tol = 1e-8;     // relative to 1 + |E|
  double energy_tol = 1e-12;      // total decrease over the stall window
  int stall_window = 5;
  int max_iterations = 500;       // per eps stage
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  double residual_tol = 1e-6;
};

enum class InitialGuess { kValleySeed, kProvided };

/// Everything that defines one instance of the singular Navier problem.
struct ProblemSpec {
  ExponentTriple exponents;
  PhiModel model;
  double lambda = 1.0;
  EpsSchedule eps;
  SolverOptions solver;
  InitialGuess initial_guess = InitialGuess::kValleySeed;
  std::optional<int> space_dim;
  std::uint64_t seed = 42;
  /// Test hook: drop the singular term from the energy and gradient.
  bool include_singular = true;

  const Grid& grid() const noexcept { return exponents.grid(); }
  const GridPtr& grid_ptr() const noexcept { return exponents.grid_ptr(); }
};

/// Structural checks needed before evaluating the energy: matching grids,
/// the model exponent equal to p, lambda >= 0, and the exponent chain.
void validate_for_energy(const ProblemSpec& spec);
/// validate_for_energy plus lambda > 0 and a sane schedule.
void validate_for_solve(const ProblemSpec& spec);

}  // namespace pxbih
