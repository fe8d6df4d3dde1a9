#include "pxbih/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pxbih/error.hpp"

namespace pxbih {

const char* to_string(PhiTag tag) {
  switch (tag) {
    case PhiTag::kPower: return "power";
    case PhiTag::kMeanCurvature: return "mean_curvature";
    case PhiTag::kCapillarity: return "capillarity";
    case PhiTag::kDoublePhase: return "double_phase";
    case PhiTag::kDoublePhaseLog: return "double_phase_log";
  }
  return "?";
}

const char* to_string(PhiFamily family) {
  switch (family) {
    case PhiFamily::kPower: return "power";
    case PhiFamily::kMeanCurvature: return "mean_curvature";
    case PhiFamily::kCapillarity: return "capillarity";
  }
  return "?";
}

PhiTag phi_tag_from_string(const std::string& name) {
  for (PhiTag t : {PhiTag::kPower, PhiTag::kMeanCurvature, PhiTag::kCapillarity,
                   PhiTag::kDoublePhase, PhiTag::kDoublePhaseLog}) {
    if (name == to_string(t)) return t;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown phi tag '" + name + "'");
}

PhiFamily phi_family_from_string(const std::string& name) {
  for (PhiFamily f : {PhiFamily::kPower, PhiFamily::kMeanCurvature, PhiFamily::kCapillarity}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown phi family '" + name + "'");
}

namespace kernel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// s / sqrt(1 + s^2) without overflow.
double saturation(double s) { return s / std::hypot(1.0, s); }

// sqrt(1 + s^2) - 1 without cancellation or overflow.
double hypot_minus_one(double s) {
  if (s > 1e100) return s - 1.0;
  return std::expm1(0.5 * std::log1p(s * s));
}

}  // namespace

double phi(PhiFamily f, double p, double xi) {
  switch (f) {
    case PhiFamily::kPower:
      if (xi == 0.0) return p < 2.0 ? kInf : (p == 2.0 ? 1.0 : 0.0);
      return std::pow(xi, p - 2.0);
    case PhiFamily::kMeanCurvature:
      return std::pow(1.0 + xi * xi, 0.5 * (p - 2.0));
    case PhiFamily::kCapillarity: {
      if (xi == 0.0) return p < 2.0 ? kInf : (p == 2.0 ? 1.0 : 0.0);
      return (1.0 + saturation(std::pow(xi, p))) * std::pow(xi, p - 2.0);
    }
  }
  return 0.0;
}

double flux(PhiFamily f, double p, double xi) {
  if (xi == 0.0) return 0.0;
  switch (f) {
    case PhiFamily::kPower: return std::pow(xi, p - 1.0);
    case PhiFamily::kMeanCurvature: return xi * std::pow(1.0 + xi * xi, 0.5 * (p - 2.0));
    case PhiFamily::kCapillarity:
      return (1.0 + saturation(std::pow(xi, p))) * std::pow(xi, p - 1.0);
  }
  return 0.0;
}

double flux_derivative(PhiFamily f, double p, double xi) {
  switch (f) {
    case PhiFamily::kPower:
      if (xi == 0.0) return p < 2.0 ? kInf : (p == 2.0 ? 1.0 : 0.0);
      return (p - 1.0) * std::pow(xi, p - 2.0);
    case PhiFamily::kMeanCurvature: {
      const double x2 = xi * xi;
      return std::pow(1.0 + x2, 0.5 * (p - 4.0)) * (1.0 + (p - 1.0) * x2);
    }
    case PhiFamily::kCapillarity: {
      if (xi == 0.0) return p < 2.0 ? kInf : (p == 2.0 ? 1.0 : 0.0);
      const double s = std::pow(xi, p);
      const double h = std::hypot(1.0, s);
      const double sh = s / h;
      const double extra = sh * sh / (xi * xi) * ((2.0 * p - 1.0) + (p - 1.0) * s * s) / h;
      return (p - 1.0) * std::pow(xi, p - 2.0) + extra;
    }
  }
  return 0.0;
}

double big_phi(PhiFamily f, double p, double t) {
  if (t == 0.0) return 0.0;
  switch (f) {
    case PhiFamily::kPower: return std::pow(t, p) / p;
    case PhiFamily::kMeanCurvature: return std::expm1(0.5 * p * std::log1p(t * t)) / p;
    case PhiFamily::kCapillarity: {
      const double s = std::pow(t, p);
      return s / p + hypot_minus_one(s) / p;
    }
  }
  return 0.0;
}

double default_growth_constant(PhiFamily f, double p_sup) {
  switch (f) {
    case PhiFamily::kPower: return 1.0;
    case PhiFamily::kCapillarity: return 2.0;
    case PhiFamily::kMeanCurvature: return std::pow(2.0, 0.5 * (p_sup - 2.0)) + 1.0;
  }
  return 1.0;
}

}  // namespace kernel

namespace {

PhiFamily family_of(PhiTag tag) {
  switch (tag) {
    case PhiTag::kMeanCurvature: return PhiFamily::kMeanCurvature;
    case PhiTag::kCapillarity: return PhiFamily::kCapillarity;
    default: return PhiFamily::kPower;
  }
}

}  // namespace

PhiModel PhiModel::single(PhiTag tag, ScalarField p, double c, std::optional<double> b) {
  if (tag == PhiTag::kDoublePhase || tag == PhiTag::kDoublePhaseLog) {
    throw Error(ErrorKind::kInvalidArgument, "use PhiModel::double_phase for double-phase tags");
  }
  if (!(c > 0.0)) throw Error(ErrorKind::kInvalidArgument, "H3 constant c must be positive");
  for (double v : p.values()) {
    if (!(v > 1.0)) throw Error(ErrorKind::kInvalidField, "phi exponent must exceed 1");
  }
  PhiModel m(tag, std::move(p));
  m.first_ = family_of(tag);
  m.c_ = c;
  m.b_ = b.value_or(kernel::default_growth_constant(m.first_, m.p_.max()));
  if (!(m.b_ > 0.0)) throw Error(ErrorKind::kInvalidArgument, "H2 constant b must be positive");
  return m;
}

PhiModel PhiModel::double_phase(ScalarField p1, ScalarField p2, ScalarField potential,
                                bool log_weight, double c, std::optional<double> b,
                                PhiFamily first, PhiFamily second) {
  require_same_grid(p1.grid_ptr(), p2.grid_ptr(), "double phase exponents");
  require_same_grid(p1.grid_ptr(), potential.grid_ptr(), "double phase potential");
  if (!(c > 0.0)) throw Error(ErrorKind::kInvalidArgument, "H3 constant c must be positive");
  for (std::size_t k = 0; k < p1.size(); ++k) {
    if (!(p1[k] > 1.0)) throw Error(ErrorKind::kInvalidField, "p1 must exceed 1");
    if (p1[k] > p2[k]) {
      throw Error(ErrorKind::kInvalidField,
                  "double phase needs p1 <= p2 (node " + std::to_string(k) + ")");
    }
    if (potential[k] < 0.0) {
      throw Error(ErrorKind::kInvalidField, "potential V must be nonnegative");
    }
  }
  PhiModel m(log_weight ? PhiTag::kDoublePhaseLog : PhiTag::kDoublePhase, std::move(p1));
  m.first_ = first;
  m.second_ = second;
  m.c_ = c;
  m.b_ = b.value_or(kernel::default_growth_constant(first, m.p_.max()));
  if (!(m.b_ > 0.0)) throw Error(ErrorKind::kInvalidArgument, "H2 constant b must be positive");
  m.weights_.resize(potential.size());
  for (std::size_t k = 0; k < potential.size(); ++k) {
    double w = potential[k];
    if (log_weight) {
      const auto [x, y] = potential.grid().coords(k);
      w *= std::log(std::numbers::e + std::hypot(x, y));
    }
    m.weights_[k] = w;
  }
  m.p2_ = std::move(p2);
  m.potential_ = std::move(potential);
  return m;
}

void PhiModel::check_node(std::size_t node) const {
  if (node >= p_.size()) throw Error(ErrorKind::kInvalidArgument, "node index out of range");
}

ExtendedReal PhiModel::phi(std::size_t node, double xi) const {
  check_node(node);
  if (!(xi >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "phi needs xi >= 0");
  double value = kernel::phi(first_, p_[node], xi);
  if (is_double_phase() && weights_[node] != 0.0) {
    value += weights_[node] * kernel::phi(second_, (*p2_)[node], xi);
  }
  if (std::isinf(value)) return ExtendedReal::infinity();
  return ExtendedReal::finite(value);
}

double PhiModel::big_phi(std::size_t node, double t) const {
  check_node(node);
  if (!(t >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "big_phi needs t >= 0");
  double value = kernel::big_phi(first_, p_[node], t);
  if (is_double_phase()) value += weights_[node] * kernel::big_phi(second_, (*p2_)[node], t);
  return value;
}

double PhiModel::flux(std::size_t node, double xi) const {
  double value = kernel::flux(first_, p_[node], xi);
  if (is_double_phase()) value += weights_[node] * kernel::flux(second_, (*p2_)[node], xi);
  return value;
}

double PhiModel::flux_derivative(std::size_t node, double xi) const {
  double value = kernel::flux_derivative(first_, p_[node], xi);
  if (is_double_phase() && weights_[node] != 0.0) {
    value += weights_[node] * kernel::flux_derivative(second_, (*p2_)[node], xi);
  }
  return value;
}

PhiHypothesisReport verify_hypotheses(const PhiModel& model, const HypothesisOptions& opt) {
  if (opt.samples < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one sample");
  if (!(opt.xi_min > 0.0) || !(opt.xi_max > opt.xi_min)) {
    throw Error(ErrorKind::kInvalidArgument, "need 0 < xi_min < xi_max");
  }
  const std::size_t n = model.exponent().size();
  const std::size_t n_xi = std::max<std::size_t>(2, opt.samples / n);
  const std::size_t nodes_used = std::max<std::size_t>(1, std::min(n, opt.samples / n_xi));
  const std::size_t stride = (n + nodes_used - 1) / nodes_used;

  std::vector<double> xis(n_xi);
  const double l0 = std::log10(opt.xi_min), l1 = std::log10(opt.xi_max);
  for (std::size_t i = 0; i < n_xi; ++i) {
    xis[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n_xi - 1));
  }

  PhiHypothesisReport rep;
  rep.c_claimed = model.c();
  rep.c_max_first = std::numeric_limits<double>::infinity();
  rep.c_max_second = std::numeric_limits<double>::infinity();
  const double c = model.c();
  const double slack = opt.relative_slack * c;

  for (std::size_t k = 0; k < n; k += stride) {
    const double p = model.exponent()[k];
    for (double xi : xis) {
      const double scale = std::pow(xi, p - 2.0);
      const double f = model.phi(k, xi).value();
      const double h = 1e-6 * xi;
      const double df = (model.phi(k, xi + h).value() - model.phi(k, xi - h).value()) / (2.0 * h);
      const double r1 = f / scale;
      const double r2 = (f + xi * df) / scale;
      rep.c_max_first = std::min(rep.c_max_first, r1);
      rep.c_max_second = std::min(rep.c_max_second, r2);
      for (int which : {1, 2}) {
        const double margin = (which == 1 ? r1 : r2) - c;
        if (margin < -slack) {
          ++rep.violation_count;
          if (rep.violations.size() < 100) rep.violations.push_back({k, xi, which, margin});
        }
      }
      ++rep.samples;
    }
  }
  rep.worst_margin_first = rep.c_max_first - c;
  rep.worst_margin_second = rep.c_max_second - c;
  rep.c_max = std::min(rep.c_max_first, rep.c_max_second);
  rep.h3_pass = rep.violation_count == 0;

  rep.b = model.b();
  rep.a.assign(n, 0.0);
  rep.h2_bounded = true;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = model.exponent()[k];
    double prev = 0.0, last = 0.0;
    for (double xi : xis) {
      const double excess = std::max(0.0, model.flux(k, xi) - rep.b * std::pow(xi, p - 1.0));
      rep.a[k] = std::max(rep.a[k], excess);
      prev = last;
      last = excess;
    }
    // Excess still growing at the top of the range: no finite a(x) exists.
    if (last > 0.0 && last > prev) rep.h2_bounded = false;
  }
  return rep;
}

double maximal_h3_constant(const PhiModel& model, const HypothesisOptions& opt) {
  return verify_hypotheses(model, opt).c_max;
}

SimonGap simon_gap(const PhiModel& model, std::size_t node, std::span<const double> u,
                   std::span<const double> v, std::optional<double> c) {
  if (u.size() != v.size() || u.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "simon_gap needs equal-length nonempty vectors");
  }
  if (node >= model.exponent().size()) {
    throw Error(ErrorKind::kInvalidArgument, "node index out of range");
  }
  double nu = 0.0, nv = 0.0, diff2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(v[i])) {
      throw Error(ErrorKind::kInvalidArgument, "simon_gap needs finite vectors");
    }
    nu += u[i] * u[i];
    nv += v[i] * v[i];
    diff2 += (u[i] - v[i]) * (u[i] - v[i]);
  }
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  const double fu = nu > 0.0 ? model.flux(node, nu) / nu : 0.0;
  const double fv = nv > 0.0 ? model.flux(node, nv) / nv : 0.0;
  double lhs = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) lhs += (fu * u[i] - fv * v[i]) * (u[i] - v[i]);

  const double p = model.exponent()[node];
  const double cc = c.value_or(model.c());
  SimonGap gap{lhs, 0.0, p < 2.0};
  if (gap.subquadratic_branch) {
    if (nu == 0.0 && nv == 0.0) {
      throw Error(ErrorKind::kUndefinedBranch, "(u, v) = (0, 0) with p(x) < 2");
    }
    gap.rhs = cc * std::pow(nu + nv, p - 2.0) * diff2;
  } else {
    const double p_sup = model.exponent().max();
    gap.rhs = std::pow(4.0, 1.0 - p_sup) * cc * std::pow(std::sqrt(diff2), p);
  }
  return gap;
}

}  // namespace pxbih
