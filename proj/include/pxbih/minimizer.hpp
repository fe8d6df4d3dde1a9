#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pxbih/energy.hpp"

namespace pxbih {

struct ValleyScan {
  double t_star = 0.0;  // largest scanned t with E(t v) < 0
  std::vector<double> t;
  std::vector<double> energy;
};

/// 25 log-spaced points covering [1e-6, 1].
std::vector<double> default_t_grid();

/// E(t v) at eps = 0 for every t; throws kValleyNotFound when none is negative.
ValleyScan valley_scan(const ProblemSpec& spec, const ScalarField& v,
                       const std::vector<double>& t_grid = default_t_grid());

struct TraceRow {
  int stage = 0;
  int iteration = 0;
  double eps = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // accepted line-search step leading to this iterate
};

enum class SolveStatus {
  kConverged,
  kMaxIterations,
  kLineSearchFailure,
  kNonnegativeEnergy,
  kResidualTooLarge,
};

const char* to_string(SolveStatus status);

struct StageSummary {
  double eps = 0.0;
  int iterations = 0;
  bool converged = false;
  bool roundoff_floor = false;  // stopped because no decrease is resolvable
};

struct SolveResult {
  ScalarField u;
  EnergyBreakdown smoothed;  // at the final eps
  EnergyBreakdown exact;     // at eps = 0
  double m_hat = 0.0;        // exact energy of u
  double norm = 0.0;         // |Lu|_p
  double residual = 0.0;     // stationarity residual at the final eps
  SolveStatus status = SolveStatus::kConverged;
  std::string message;
  std::vector<StageSummary> stages;
  std::vector<TraceRow> trace;
  double seconds = 0.0;

  bool success() const noexcept { return status == SolveStatus::kConverged; }
};

/// Descent with Armijo backtracking through the eps schedule, warm-starting
/// each stage from the previous one.
SolveResult minimize(const ProblemSpec& spec, const ScalarField& u_init);

/// Applies the initial-guess policy (valley seed t* v for the bump profile
/// v) and minimizes.
SolveResult solve(const ProblemSpec& spec);

struct SweepRow {
  double lambda = 0.0;
  double m_hat = 0.0;
  double norm = 0.0;
  double residual = 0.0;
  std::string status;
  bool success = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::optional<SolveResult>> results;  // parallel to rows; empty on error
  bool monotone = false;             // m_hat nonincreasing in lambda
  bool all_succeeded = false;
};

/// Independent solves for each lambda (ascending, all > 0), merged in order.
SweepResult lambda_sweep(const ProblemSpec& base, const std::vector<double>& lambdas,
                         bool parallel = true);

}  // namespace pxbih
