#include "pxbih/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "pxbih/error.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/minimizer.hpp"
#include "pxbih/sampling.hpp"

namespace pxbih {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kMaxListed = 1000;

std::string csv_safe(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char ch) { return ch == ',' || ch == '\n' || ch == '\r'; }, ' ');
  return s;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_json(const fs::path& path, const json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

json chain_to_json(const ChainReport& chain, const Grid& grid) {
  json list = json::array();
  std::set<std::string> names;
  for (const auto& v : chain.violations) {
    names.insert(v.inequality);
    if (list.size() < kMaxListed) {
      const auto x = grid.coords(v.node);
      json item = {{"node", v.node}, {"x", x[0]}, {"inequality", v.inequality}};
      if (grid.dim() == 2) item["y"] = x[1];
      list.push_back(item);
    }
  }
  return {{"pass", chain.pass},
          {"space_dim", chain.space_dim},
          {"violation_count", chain.violations.size()},
          {"violated_inequalities", names},
          {"violations", list}};
}

json hypotheses_to_json(const PhiHypothesisReport& rep, PhiTag tag) {
  json list = json::array();
  for (const auto& v : rep.violations) {
    list.push_back({{"node", v.node}, {"xi", v.xi}, {"inequality", v.inequality}, {"margin", v.margin}});
  }
  const double a_max = rep.a.empty() ? 0.0 : *std::max_element(rep.a.begin(), rep.a.end());
  return {{"tag", to_string(tag)},
          {"samples", rep.samples},
          {"h1", "satisfied by construction"},
          {"h3", {{"pass", rep.h3_pass},
                  {"c_claimed", rep.c_claimed},
                  {"c_max", rep.c_max},
                  {"c_max_first", rep.c_max_first},
                  {"c_max_second", rep.c_max_second},
                  {"worst_margin_first", rep.worst_margin_first},
                  {"worst_margin_second", rep.worst_margin_second},
                  {"violation_count", rep.violation_count},
                  {"violations", list}}},
          {"h2", {{"bounded", rep.h2_bounded}, {"b", rep.b}, {"a_max", a_max}}}};
}

// Simon inequality on random (node, u, v) with entries in [-10, 10].
json simon_battery(const PhiModel& model, double c, std::size_t samples, int dim, Rng& rng,
                   bool& pass) {
  std::uniform_int_distribution<std::size_t> node_dist(0, model.grid().size() - 1);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::vector<double> u(static_cast<std::size_t>(dim)), v(u.size());
  std::size_t violations = 0, sub = 0, super = 0;
  double worst = std::numeric_limits<double>::infinity();
  json list = json::array();
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t node = node_dist(rng);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = coord(rng);
      v[i] = coord(rng);
    }
    const SimonGap gap = simon_gap(model, node, u, v, c);
    (gap.subquadratic_branch ? sub : super) += 1;
    if (gap.rhs > 0.0) worst = std::min(worst, gap.lhs / gap.rhs);
    if (gap.lhs < gap.rhs) {
      ++violations;
      if (list.size() < kMaxListed) {
        list.push_back({{"node", node}, {"u", u}, {"v", v}, {"lhs", gap.lhs}, {"rhs", gap.rhs}});
      }
    }
  }
  pass = violations == 0;
  return {{"pass", pass},
          {"c", c},
          {"samples", samples},
          {"subquadratic_samples", sub},
          {"superquadratic_samples", super},
          {"min_ratio", std::isfinite(worst) ? json(worst) : json(nullptr)},
          {"violation_count", violations},
          {"violations", list}};
}

ScalarField scaled_random_field(const GridPtr& grid, Rng& rng) {
  std::uniform_real_distribution<double> decade(-2.0, 2.0);
  return random_nodal_field(grid, rng, -1.0, 1.0).scaled(std::pow(10.0, decade(rng)));
}

ScalarField valley_profile(const ProblemSpec& spec) { return bump_profile(spec.grid_ptr()); }

}  // namespace

int exit_code_for(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kIo:
    case ErrorKind::kInvalidGrid:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kGridMismatch:
      return kExitUsage;
    default:
      return kExitMathFailure;
  }
}

int cmd_verify(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const ProblemSpec spec = cfg.make_problem();
  const GridPtr grid = spec.grid_ptr();
  const ScalarField& p = spec.exponents.p();
  Rng rng(cfg.seed);

  const ChainReport chain = check_theorem_hypotheses(spec.exponents, spec.space_dim);
  HypothesisOptions hopt;
  hopt.samples = cfg.verify.hypothesis_samples;
  const PhiHypothesisReport hyp = verify_hypotheses(spec.model, hopt);

  std::vector<std::string> warnings;
  if (!hyp.h3_pass) {
    warnings.push_back("H3 fails for the claimed c = " + fmt12(hyp.c_claimed) +
                       "; largest admissible c on the samples is " + fmt12(hyp.c_max));
  }
  if (!hyp.h2_bounded) warnings.push_back("H2 growth bound not confirmed on the sampled range");

  json simon;
  bool simon_pass = true;
  if (hyp.c_max > 0.0) {
    simon = simon_battery(spec.model, hyp.c_max, cfg.verify.simon_samples, cfg.verify.simon_dim,
                          rng, simon_pass);
    simon["structural"] = hyp.h3_pass;
    if (!simon_pass && !hyp.h3_pass) warnings.push_back("Simon inequality fails at the sampled c_max");
  } else {
    simon = {{"pass", nullptr}, {"skipped", "no positive H3 constant"}};
  }

  std::size_t holder_fail = 0;
  double holder_worst = 0.0;
  for (std::size_t s = 0; s < cfg.verify.holder_samples; ++s) {
    const ScalarField u = scaled_random_field(grid, rng);
    const ScalarField v = scaled_random_field(grid, rng);
    const HolderReport h = holder_check(u, v, p);
    if (!h.pass) ++holder_fail;
    if (h.rhs > 0.0) holder_worst = std::max(holder_worst, h.lhs / h.rhs);
  }

  std::size_t rel_fail = 0, above = 0, below = 0;
  for (std::size_t s = 0; s < cfg.verify.relation_samples; ++s) {
    const auto r = modular_norm_relations_check(scaled_random_field(grid, rng), p);
    if (!r.pass) ++rel_fail;
    if (r.regime == NormRegime::kAboveOne) ++above;
    if (r.regime == NormRegime::kBelowOne) ++below;
  }

  std::size_t seq_fail = 0;
  for (std::size_t s = 0; s < cfg.verify.sequences; ++s) {
    const ScalarField u = scaled_random_field(grid, rng);
    const ScalarField w = scaled_random_field(grid, rng);
    if (!convergence_equivalence_check(u, w, p).pass) ++seq_fail;
  }

  const bool structural = chain.pass && holder_fail == 0 && rel_fail == 0 && seq_fail == 0 &&
                          (simon_pass || !hyp.h3_pass);
  json report = {
      {"pass", structural},
      {"warning", !warnings.empty()},
      {"warnings", warnings},
      {"seed", cfg.seed},
      {"exponent_chain", chain_to_json(chain, *grid)},
      {"phi", hypotheses_to_json(hyp, spec.model.tag())},
      {"simon", simon},
      {"holder", {{"pass", holder_fail == 0},
                  {"samples", cfg.verify.holder_samples},
                  {"failures", holder_fail},
                  {"max_ratio", holder_worst}}},
      {"modular_relations", {{"pass", rel_fail == 0},
                             {"samples", cfg.verify.relation_samples},
                             {"above_one", above},
                             {"below_one", below},
                             {"failures", rel_fail}}},
      {"convergence_equivalence", {{"pass", seq_fail == 0},
                                   {"sequences", cfg.verify.sequences},
                                   {"failures", seq_fail}}}};
  write_json(out_dir / "verify.json", report);

  for (const auto& w : warnings) log << "warning: " << w << "\n";
  if (!chain.pass) {
    log << "exponent chain fails:";
    for (const auto& name : report["exponent_chain"]["violated_inequalities"]) {
      log << " " << name.get<std::string>();
    }
    log << "\n";
  }
  log << "verify: " << (structural ? "pass" : "FAIL") << "\n";
  return structural ? kExitOk : kExitMathFailure;
}

int cmd_solve(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const ProblemSpec spec = cfg.make_problem();
  validate_for_solve(spec);
  const PhiHypothesisReport hyp = verify_hypotheses(spec.model);
  if (!hyp.h3_pass) {
    log << "warning: H3 fails for the claimed c; largest admissible c is " << fmt12(hyp.c_max) << "\n";
  }

  const SolveResult res = solve(spec);
  json j = solve_result_to_json(res, spec.lambda);
  j["h3_pass"] = hyp.h3_pass;
  write_field_file(out_dir / "u0.json", res.u);
  write_json(out_dir / "result.json", j);
  write_text_atomic(out_dir / "trace.csv", trace_to_csv(res.trace));

  log << "solve: status " << to_string(res.status) << ", m_hat " << fmt12(res.m_hat) << ", norm "
      << fmt12(res.norm) << ", residual " << fmt12(res.residual) << ", " << fmt12(res.seconds)
      << " s\n";
  return res.success() ? kExitOk : kExitMathFailure;
}

int cmd_valley(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const ProblemSpec spec = cfg.make_problem();
  validate_for_solve(spec);
  const ScalarField v = valley_profile(spec);
  const ValleyConstants vc = valley_constants(v, spec);
  const std::vector<double> t = cfg.t_grid();

  std::ostringstream csv;
  csv << "t,E,bound\n";
  bool negative = false, below = true;
  json rows = json::array();
  for (double tk : t) {
    const double e = energy(v.scaled(tk), spec, 0.0).total;
    const double bound = vc.bound(tk);
    const double scale = std::abs(vc.c1 * tk) + std::abs(vc.c2 * std::pow(tk, vc.p_inf)) +
                         std::abs(vc.c3 * std::pow(tk, 1.0 - vc.q_inf));
    negative = negative || e < 0.0;
    if (e > bound + 1e-12 * scale) below = false;
    csv << format_real(tk) << ',' << format_real(e) << ',' << format_real(bound) << '\n';
  }
  write_text_atomic(out_dir / "valley.csv", csv.str());

  json summary = {{"c1", vc.c1},         {"c2", vc.c2},           {"c3", vc.c3},
                  {"p_inf", vc.p_inf},   {"q_inf", vc.q_inf},     {"negative_found", negative},
                  {"below_bound", below}, {"lambda", spec.lambda}};
  if (negative) summary["t_star"] = valley_scan(spec, v, t).t_star;
  write_json(out_dir / "valley.json", summary);

  log << "valley: negative " << (negative ? "yes" : "no") << ", bound holds "
      << (below ? "yes" : "no") << "\n";
  return negative && below ? kExitOk : kExitMathFailure;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const ProblemSpec base = cfg.make_problem();
  validate_for_solve(base);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sweep = lambda_sweep(base, cfg.solve.lambdas, cfg.solve.parallel);

  std::ostringstream csv;
  csv << "lambda,m_hat,norm,residual,status\n";
  for (const auto& r : sweep.rows) {
    csv << format_real(r.lambda) << ',' << format_real(r.m_hat) << ',' << format_real(r.norm) << ','
        << format_real(r.residual) << ',' << csv_safe(r.status) << '\n';
  }
  write_text_atomic(out_dir / "sweep.csv", csv.str());
  write_json(out_dir / "sweep.json",
             {{"monotone", sweep.monotone}, {"all_succeeded", sweep.all_succeeded},
              {"lambdas", cfg.solve.lambdas}});

  log << "sweep: " << sweep.rows.size() << " solves, all succeeded "
      << (sweep.all_succeeded ? "yes" : "no") << ", monotone " << (sweep.monotone ? "yes" : "no")
      << ", " << fmt12(seconds_since(t0)) << " s\n";
  return sweep.all_succeeded && sweep.monotone ? kExitOk : kExitMathFailure;
}

int cmd_norm(const RunConfig& cfg, const fs::path& field_file, std::ostream& out) {
  const ScalarField u = read_field_file(field_file);
  const GridPtr grid = cfg.make_grid();
  if (!(u.grid() == *grid)) throw Error(ErrorKind::kGridMismatch, "field grid differs from the config domain");
  const ScalarField p = cfg.exponents.p.realize(u.grid_ptr(), cfg.base_dir);
  for (double pk : p.values()) {
    if (!(pk > 1.0)) throw Error(ErrorKind::kInvalidField, "p must exceed 1");
  }
  const NormResult n = luxemburg_norm(u, p, cfg.norm.tolerance);
  out << "norm " << fmt12(n.value) << "\n";
  out << "modular " << fmt12(modular(u, p)) << "\n";
  return kExitOk;
}

int run_command(const CommandLine& cl, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = RunConfig::load(cl.config);
    if (cl.out) cfg.output = cl.out->string();
    if (cl.seed) cfg.seed = *cl.seed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const fs::path out_dir(cfg.output);
  try {
    if (cl.command == "verify") return cmd_verify(cfg, out_dir, out);
    if (cl.command == "solve") return cmd_solve(cfg, out_dir, out);
    if (cl.command == "valley") return cmd_valley(cfg, out_dir, out);
    if (cl.command == "sweep") return cmd_sweep(cfg, out_dir, out);
    if (cl.command == "norm") {
      if (!cl.field) {
        err << "error: norm needs a field file\n";
        return kExitUsage;
      }
      return cmd_norm(cfg, *cl.field, out);
    }
    err << "error: unknown command '" << cl.command << "'\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace pxbih
