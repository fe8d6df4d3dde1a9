#include "pxbih/minimizer.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <numeric>

#include "pxbih/error.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/sampling.hpp"

namespace pxbih {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIterations: return "max_iterations";
    case SolveStatus::kLineSearchFailure: return "line_search_failure";
    case SolveStatus::kNonnegativeEnergy: return "nonnegative_energy";
    case SolveStatus::kResidualTooLarge: return "residual_too_large";
  }
  return "?";
}

std::vector<double> default_t_grid() {
  std::vector<double> t(25);
  for (int i = 0; i < 25; ++i) t[i] = std::pow(10.0, -6.0 + 6.0 * i / 24.0);
  return t;
}

ValleyScan valley_scan(const ProblemSpec& spec, const ScalarField& v,
                       const std::vector<double>& t_grid) {
  validate_for_solve(spec);
  require_same_grid(v.grid_ptr(), spec.grid_ptr(), "valley_scan");
  if (t_grid.empty()) throw Error(ErrorKind::kInvalidArgument, "empty t grid");
  const EnergyModel model(spec);
  ValleyScan scan;
  scan.t = t_grid;
  bool found = false;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error(ErrorKind::kInvalidArgument, "t grid must be positive");
    const ScalarField tv = v.scaled(t);
    const double e = model.evaluate(tv.values(), 0.0).total;
    scan.energy.push_back(e);
    if (e < 0.0 && (!found || t > scan.t_star)) {
      scan.t_star = t;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorKind::kValleyNotFound,
                "no scanned t gives negative energy; widen or refine the t grid");
  }
  return scan;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Interior block of the Navier Laplacian, indexed by interior ordinal.
SparseMatrix interior_laplacian(const Grid& g, std::vector<long>& ordinal) {
  ordinal.assign(g.size(), -1);
  long m = 0;
  for (std::size_t k : g.interior_nodes()) ordinal[k] = m++;
  std::vector<Eigen::Triplet<double>> trips;
  const std::size_t ny = g.dim() == 2 ? g.count(1) : 1;
  const double ix = 1.0 / (g.spacing(0) * g.spacing(0));
  const double iy = g.dim() == 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
  for (std::size_t k : g.interior_nodes()) {
    const long row = ordinal[k];
    trips.emplace_back(row, row, -2.0 * (ix + iy));
    auto link = [&](std::size_t nb, double coef) {
      if (ordinal[nb] >= 0) trips.emplace_back(row, ordinal[nb], coef);
    };
    link(k - ny, ix);
    link(k + ny, ix);
    if (g.dim() == 2) {
      link(k - 1, iy);
      link(k + 1, iy);
    }
  }
  SparseMatrix lap(m, m);
  lap.setFromTriplets(trips.begin(), trips.end());
  return lap;
}

class NewtonDirection {
 public:
  NewtonDirection(const EnergyModel& model) : model_(model) {
    lap_ = interior_laplacian(model.spec().grid(), ordinal_);
  }

  // Solves H d = -W g on the interior. Falls back to a convexified H when
  // the exact Hessian is not positive definite. Returns false if both fail.
  bool compute(std::span<const double> u, double eps, std::span<const double> grad,
               std::span<double> dir) {
    const Grid& g = model_.spec().grid();
    const auto w = g.weights();
    Eigen::VectorXd rhs(lap_.rows());
    for (std::size_t k : g.interior_nodes()) rhs[ordinal_[k]] = -w[k] * grad[k];

    for (int attempt = 0; attempt < 2; ++attempt) {
      const bool convexify = attempt == 1;
      const auto curv = model_.curvature(u, eps, convexify ? 1e-3 : 1e-6);
      Eigen::VectorXd top(lap_.rows()), diag(lap_.rows());
      for (std::size_t k : g.interior_nodes()) {
        const long i = ordinal_[k];
        top[i] = w[k] * curv.phi[k];
        diag[i] = w[k] * (convexify ? std::max(0.0, curv.lower_order[k]) : curv.lower_order[k]);
      }
      SparseMatrix h = lap_.transpose() * top.asDiagonal() * lap_;
      h += SparseMatrix(diag.asDiagonal());
      Eigen::SimplicialLDLT<SparseMatrix> ldlt(h);
      if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) continue;
      const Eigen::VectorXd d = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success || !d.allFinite()) continue;
      for (std::size_t k = 0; k < g.size(); ++k) dir[k] = ordinal_[k] >= 0 ? d[ordinal_[k]] : 0.0;
      return true;
    }
    return false;
  }

 private:
  const EnergyModel& model_;
  SparseMatrix lap_;
  std::vector<long> ordinal_;
};

double interior_max_abs(const Grid& g, std::span<const double> v) {
  double m = 0.0;
  for (std::size_t k : g.interior_nodes()) m = std::max(m, std::abs(v[k]));
  return m;
}

}  // namespace

SolveResult minimize(const ProblemSpec& spec, const ScalarField& u_init) {
  const auto start = std::chrono::steady_clock::now();
  validate_for_solve(spec);
  require_same_grid(u_init.grid_ptr(), spec.grid_ptr(), "minimize");
  const Grid& g = spec.grid();
  const auto& opt = spec.solver;
  const std::size_t n = g.size();
  const EnergyModel model(spec);
  NewtonDirection newton(model);

  const ScalarField start_field = project_boundary(u_init);
  std::vector<double> u(start_field.values().begin(), start_field.values().end());
  std::vector<double> grad(n), dir(n), trial(n), prev_u(n), prev_grad(n);
  SolveStatus status = SolveStatus::kConverged;
  std::string message;
  std::vector<StageSummary> stages;
  std::vector<TraceRow> trace;

  const auto schedule = spec.eps.stages();
  for (std::size_t s = 0; s < schedule.size() && status == SolveStatus::kConverged; ++s) {
    const double eps = schedule[s];
    StageSummary stage{eps, 0, false, false};
    std::deque<double> decreases;
    double energy = model.gradient(u, eps, grad).total;
    double step = 0.0;
    double bb_step = 1.0;
    bool have_prev = false;

    for (int it = 0;; ++it) {
      const double gnorm = interior_max_abs(g, grad);
      trace.push_back({static_cast<int>(s), it, eps, energy, gnorm, step});
      stage.iterations = it;
      const double window_decrease = std::accumulate(decreases.begin(), decreases.end(), 0.0);
      if (gnorm <= opt.gradient_tol * (1.0 + std::abs(energy)) &&
          window_decrease <= opt.energy_tol) {
        stage.converged = true;
        break;
      }
      if (it >= opt.max_iterations) {
        status = SolveStatus::kMaxIterations;
        message = "iteration limit reached at eps = " + std::to_string(eps);
        break;
      }

      bool use_newton = opt.method == DescentMethod::kNewton && newton.compute(u, eps, grad, dir);
      double slope = use_newton ? inner_product(g, grad, dir) : 0.0;
      if (!use_newton || !(slope < 0.0)) {
        use_newton = false;
        for (std::size_t k = 0; k < n; ++k) dir[k] = -grad[k];
        slope = inner_product(g, grad, dir);
      }
      double alpha = 1.0;
      if (!use_newton && have_prev) {
        double ss = 0.0, sy = 0.0;
        std::vector<double> sv(n), yv(n);
        for (std::size_t k = 0; k < n; ++k) {
          sv[k] = u[k] - prev_u[k];
          yv[k] = grad[k] - prev_grad[k];
        }
        ss = inner_product(g, sv, sv);
        sy = inner_product(g, sv, yv);
        if (sy > 0.0) bb_step = ss / sy;
        alpha = bb_step;
      }

      const double first_alpha = alpha;
      bool accepted = false;
      double trial_energy = energy;
      for (int b = 0; b < opt.max_backtracks; ++b) {
        for (std::size_t k = 0; k < n; ++k) trial[k] = u[k] + alpha * dir[k];
        trial_energy = model.evaluate(trial, eps).total;
        if (trial_energy <= energy + opt.armijo * alpha * slope && trial_energy < energy) {
          accepted = true;
          break;
        }
        alpha *= opt.backtrack;
      }
      if (!accepted) {
        // Nothing left that double precision can resolve in the energy.
        constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();
        if (first_alpha * std::abs(slope) <= kRoundoff * (1.0 + std::abs(energy))) {
          stage.converged = true;
          stage.roundoff_floor = true;
        } else {
          status = SolveStatus::kLineSearchFailure;
          message = "no sufficient decrease at eps = " + std::to_string(eps);
        }
        break;
      }
      prev_u = u;
      prev_grad = grad;
      have_prev = true;
      u.swap(trial);
      decreases.push_back(energy - trial_energy);
      if (static_cast<int>(decreases.size()) > opt.stall_window) decreases.pop_front();
      step = alpha;
      energy = model.gradient(u, eps, grad).total;
    }
    stages.push_back(stage);
  }

  SolveResult res{ScalarField(spec.grid_ptr(), u), {}, {}, 0.0, 0.0, 0.0,
                  SolveStatus::kConverged, {}, {}, {}, 0.0};
  const double eps_final = schedule.back();
  res.smoothed = model.evaluate(u, eps_final);
  res.exact = model.evaluate(u, 0.0);
  res.m_hat = res.exact.total;
  res.norm = luxemburg_norm(model.op().apply(res.u), spec.exponents.p()).value;
  res.residual = stationarity_residual(res.u, spec, eps_final, probe_basis(spec.grid_ptr()));
  res.stages = std::move(stages);
  res.trace = std::move(trace);
  res.status = status;
  res.message = message;
  if (res.status == SolveStatus::kConverged) {
    if (!(res.m_hat < 0.0)) {
      res.status = SolveStatus::kNonnegativeEnergy;
      res.message = "achieved energy is not negative";
    } else if (!(res.residual <= opt.residual_tol)) {
      res.status = SolveStatus::kResidualTooLarge;
      res.message = "stationarity residual " + std::to_string(res.residual) + " above tolerance";
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SolveResult solve(const ProblemSpec& spec) {
  validate_for_solve(spec);
  if (spec.initial_guess == InitialGuess::kProvided) {
    throw Error(ErrorKind::kInvalidArgument, "provided initial guess: call minimize directly");
  }
  const ScalarField v = bump_profile(spec.grid_ptr());
  const ValleyScan scan = valley_scan(spec, v);
  return minimize(spec, v.scaled(scan.t_star));
}

SweepResult lambda_sweep(const ProblemSpec& base, const std::vector<double>& lambdas,
                         bool parallel) {
  if (lambdas.empty()) throw Error(ErrorKind::kInvalidArgument, "empty lambda list");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw Error(ErrorKind::kInvalidArgument, "lambdas must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument, "lambdas must be sorted ascending");
    }
  }
  auto run = [&base](double lambda) -> std::optional<SolveResult> {
    ProblemSpec spec = base;
    spec.lambda = lambda;
    return solve(spec);
  };

  SweepResult out;
  std::vector<std::future<std::optional<SolveResult>>> jobs;
  for (double lambda : lambdas) {
    jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred, run, lambda));
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    SweepRow row;
    row.lambda = lambdas[i];
    try {
      auto res = jobs[i].get();
      row.m_hat = res->m_hat;
      row.norm = res->norm;
      row.residual = res->residual;
      row.status = to_string(res->status);
      row.success = res->success();
      out.results.push_back(std::move(res));
    } catch (const Error& e) {
      row.status = std::string("error: ") + e.what();
      row.m_hat = row.norm = row.residual = std::numeric_limits<double>::quiet_NaN();
      out.results.emplace_back(std::nullopt);
    }
    out.rows.push_back(row);
  }
  out.all_succeeded = std::all_of(out.rows.begin(), out.rows.end(),
                                  [](const SweepRow& r) { return r.success; });
  out.monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].m_hat <= out.rows[i - 1].m_hat)) out.monotone = false;
  }
  return out;
}

}  // namespace pxbih
