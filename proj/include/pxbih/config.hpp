#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pxbih/io.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/problem.hpp"

namespace pxbih {

/// A field given in a config: a number, an affine string "a+b*x+c*y", or
/// the path of a field file (any string ending in ".json").
struct FieldExpr {
  enum class Kind { kConstant, kAffine, kFile };
  Kind kind = Kind::kConstant;
  double a = 0.0;
  double bx = 0.0;
  double by = 0.0;
  std::string text;  // affine source or file path

  static FieldExpr constant(double v);
  static FieldExpr parse(const std::string& text);

  /// File paths resolve against base_dir when relative.
  ScalarField realize(const GridPtr& grid, const std::filesystem::path& base_dir) const;
  json to_json() const;
  static FieldExpr from_json(const json& j);

  bool operator==(const FieldExpr&) const = default;
};

struct DomainConfig {
  int dim = 1;
  std::vector<double> extents{1.0};
  std::vector<std::size_t> counts{201};
  bool operator==(const DomainConfig&) const = default;
};

struct ExponentConfig {
  FieldExpr p = FieldExpr::constant(2.5);
  FieldExpr q = FieldExpr::constant(0.5);
  FieldExpr r = FieldExpr::constant(1.5);
  std::optional<int> space_dim;
  bool operator==(const ExponentConfig&) const = default;
};

struct PhiConfig {
  PhiTag tag = PhiTag::kPower;
  /// Empty: use the exponent block's p. Double phase needs [p1, p2].
  std::vector<FieldExpr> p;
  std::optional<FieldExpr> potential;  // "V", double phase only
  bool log_weight = false;
  double c = 1.0;
  std::optional<double> b;
  PhiFamily first = PhiFamily::kPower;
  PhiFamily second = PhiFamily::kPower;
  bool operator==(const PhiConfig&) const = default;
};

struct SolveConfig {
  std::vector<double> lambdas{1.0};  // "lambda" when one value
  double eps_initial = 1e-2;
  double eps_decay = 0.1;
  double eps_floor = 1e-6;
  std::string method = "newton";
  double gradient_tol = 1e-8;
  double energy_tol = 1e-12;
  int stall_window = 5;
  int max_iterations = 500;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double residual_tol = 1e-6;
  bool parallel = true;
  bool operator==(const SolveConfig&) const = default;
};

struct VerifyConfig {
  std::size_t hypothesis_samples = 20000;
  std::size_t holder_samples = 200;
  std::size_t relation_samples = 200;
  std::size_t sequences = 20;
  std::size_t simon_samples = 10000;
  int simon_dim = 2;
  bool operator==(const VerifyConfig&) const = default;
};

struct ValleyConfig {
  double t_min = 1e-6;
  double t_max = 1.0;
  std::size_t t_points = 25;
  bool operator==(const ValleyConfig&) const = default;
};

struct NormConfig {
  double tolerance = kDefaultNormTolerance;
  bool operator==(const NormConfig&) const = default;
};

struct RunConfig {
  DomainConfig domain;
  ExponentConfig exponents;
  PhiConfig phi;
  SolveConfig solve;
  VerifyConfig verify;
  ValleyConfig valley;
  NormConfig norm;
  std::string output = "pxbih_out";
  std::uint64_t seed = 42;
  /// Directory that relative field paths resolve against; not serialized.
  std::filesystem::path base_dir = ".";

  /// Canonical form: every key present, in a fixed order.
  json to_json() const;
  /// Rejects unknown keys and ill-typed values with a kConfig error.
  static RunConfig from_json(const json& j, const std::filesystem::path& base_dir = ".");
  static RunConfig load(const std::filesystem::path& path);

  bool operator==(const RunConfig& o) const { return to_json() == o.to_json(); }

  GridPtr make_grid() const;
  std::vector<double> t_grid() const;
  /// Problem for one lambda. Field construction failures surface as kConfig.
  ProblemSpec make_problem(double lambda) const;
  ProblemSpec make_problem() const { return make_problem(solve.lambdas.front()); }
};

}  // namespace pxbih
