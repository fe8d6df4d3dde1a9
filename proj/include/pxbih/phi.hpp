#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pxbih/exponents.hpp"
#include "pxbih/grid.hpp"

namespace pxbih {

/// Scalar integrand families; each is parametrized by a single exponent.
enum class PhiFamily { kPower, kMeanCurvature, kCapillarity };

enum class PhiTag { kPower, kMeanCurvature, kCapillarity, kDoublePhase, kDoublePhaseLog };

const char* to_string(PhiTag tag);
const char* to_string(PhiFamily family);
PhiTag phi_tag_from_string(const std::string& name);
PhiFamily phi_family_from_string(const std::string& name);

namespace kernel {
// Closed forms for one family at a fixed exponent p. xi, t >= 0.
double phi(PhiFamily f, double p, double xi);
/// xi * phi(xi), with the limit 0 at xi = 0.
double flux(PhiFamily f, double p, double xi);
/// d/dxi (xi * phi(xi)); this is the second derivative of big_phi.
double flux_derivative(PhiFamily f, double p, double xi);
/// Antiderivative of s * phi(s) from 0 to t.
double big_phi(PhiFamily f, double p, double t);
/// Default H2 growth constant b.
double default_growth_constant(PhiFamily f, double p_sup);
}  // namespace kernel

/// phi(x, xi) on a grid. Single-family tags use exponent(); the double-phase
/// tags evaluate first(p1) + V(x) * w(x) * second(p2) with w = log(e + |x|)
/// for the log variant and w = 1 otherwise.
class PhiModel {
 public:
  static PhiModel single(PhiTag tag, ScalarField p, double c = 1.0,
                         std::optional<double> b = std::nullopt);
  static PhiModel power(ScalarField p, double c = 1.0) {
    return single(PhiTag::kPower, std::move(p), c);
  }
  static PhiModel double_phase(ScalarField p1, ScalarField p2, ScalarField potential,
                               bool log_weight, double c = 1.0,
                               std::optional<double> b = std::nullopt,
                               PhiFamily first = PhiFamily::kPower,
                               PhiFamily second = PhiFamily::kPower);

  PhiTag tag() const noexcept { return tag_; }
  bool is_double_phase() const noexcept {
    return tag_ == PhiTag::kDoublePhase || tag_ == PhiTag::kDoublePhaseLog;
  }
  /// The exponent governing the ambient space (p, or p1 for double phase).
  const ScalarField& exponent() const noexcept { return p_; }
  const std::optional<ScalarField>& second_exponent() const noexcept { return p2_; }
  const std::optional<ScalarField>& potential() const noexcept { return potential_; }
  PhiFamily first_family() const noexcept { return first_; }
  PhiFamily second_family() const noexcept { return second_; }
  const Grid& grid() const noexcept { return p_.grid(); }
  const GridPtr& grid_ptr() const noexcept { return p_.grid_ptr(); }

  /// Caller-claimed H3 constant.
  double c() const noexcept { return c_; }
  /// Caller-claimed H2 constant, or the family default.
  double b() const noexcept { return b_; }

  /// Tagged +infinity where the formula blows up at xi = 0 (p < 2).
  ExtendedReal phi(std::size_t node, double xi) const;
  double big_phi(std::size_t node, double t) const;
  double flux(std::size_t node, double xi) const;
  double flux_derivative(std::size_t node, double xi) const;
  /// Multiplier of the second phase at a node (0 for single-family models).
  double second_weight(std::size_t node) const noexcept {
    return weights_.empty() ? 0.0 : weights_[node];
  }

 private:
  PhiModel(PhiTag tag, ScalarField p) : tag_(tag), p_(std::move(p)) {}
  void check_node(std::size_t node) const;

  PhiTag tag_;
  ScalarField p_;
  std::optional<ScalarField> p2_;
  std::optional<ScalarField> potential_;
  std::vector<double> weights_;
  PhiFamily first_ = PhiFamily::kPower;
  PhiFamily second_ = PhiFamily::kPower;
  double c_ = 1.0;
  double b_ = 1.0;
};

struct H3Violation {
  std::size_t node;
  double xi;
  int inequality;  // 1: phi >= c xi^(p-2); 2: phi + xi phi' >= c xi^(p-2)
  double margin;   // (lhs - c xi^(p-2)) / xi^(p-2)
};

struct PhiHypothesisReport {
  bool h1_by_construction = true;
  // H3 with the caller-claimed c. Margins are relative to xi^(p-2).
  double c_claimed = 0.0;
  double c_max_first = 0.0;
  double c_max_second = 0.0;
  double c_max = 0.0;
  double worst_margin_first = 0.0;
  double worst_margin_second = 0.0;
  std::size_t violation_count = 0;
  std::vector<H3Violation> violations;  // first 100 only
  bool h3_pass = false;
  // H2 with the claimed b and the smallest a(x) consistent with the samples.
  double b = 0.0;
  std::vector<double> a;
  bool h2_bounded = false;
  std::size_t samples = 0;
};

struct HypothesisOptions {
  std::size_t samples = 20000;
  double xi_min = 1e-6;
  double xi_max = 1e6;
  double relative_slack = 1e-9;
};

/// Samples (node, xi) pairs and checks H3 (both inequalities, one c) and H2.
PhiHypothesisReport verify_hypotheses(const PhiModel& model, const HypothesisOptions& opt = {});

/// The smallest H3 constant over the samples; convenience over verify_hypotheses.
double maximal_h3_constant(const PhiModel& model, const HypothesisOptions& opt = {});

struct SimonGap {
  double lhs;
  double rhs;
  bool subquadratic_branch;  // p(x) < 2
};

/// <phi(|u|) u - phi(|v|) v, u - v> against its strong-monotonicity lower bound.
SimonGap simon_gap(const PhiModel& model, std::size_t node, std::span<const double> u,
                   std::span<const double> v, std::optional<double> c = std::nullopt);

}  // namespace pxbih
