#include "pxbih/exponents.hpp"

#include <algorithm>

#include "pxbih/error.hpp"

namespace pxbih {

double ExtendedReal::value() const {
  if (infinite_) throw Error(ErrorKind::kInvalidArgument, "value() on the infinity tag");
  return value_;
}

Bounds exponent_bounds(const ScalarField& f) {
  if (f.size() == 0) throw Error(ErrorKind::kInvalidField, "empty field");
  const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
  return {*lo, *hi};
}

std::vector<ExtendedReal> sobolev_critical_exponent(const ScalarField& p, int order,
                                                    std::optional<int> space_dim) {
  if (order != 1 && order != 2) {
    throw Error(ErrorKind::kInvalidArgument, "order must be 1 or 2");
  }
  const int n = space_dim.value_or(p.grid().dim());
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "space dimension must be positive");
  const double dim = static_cast<double>(n);
  std::vector<ExtendedReal> out;
  out.reserve(p.size());
  for (double pv : p.values()) {
    const double denom = dim - static_cast<double>(order) * pv;
    if (denom <= 0.0) {
      out.push_back(ExtendedReal::infinity());
    } else {
      out.push_back(ExtendedReal::finite(dim * pv / denom));
    }
  }
  return out;
}

ExponentTriple::ExponentTriple(ScalarField p, ScalarField q, ScalarField r)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)) {
  require_same_grid(p_.grid_ptr(), q_.grid_ptr(), "exponent triple");
  require_same_grid(p_.grid_ptr(), r_.grid_ptr(), "exponent triple");
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (!(p_[k] > 1.0)) {
      throw Error(ErrorKind::kInvalidField,
                  "p must exceed 1 at every node (node " + std::to_string(k) + ")");
    }
  }
  pb_ = exponent_bounds(p_);
  qb_ = exponent_bounds(q_);
  rb_ = exponent_bounds(r_);
}

std::vector<std::size_t> ChainReport::violating_nodes() const {
  std::vector<std::size_t> nodes;
  for (const auto& v : violations) {
    if (nodes.empty() || nodes.back() != v.node) nodes.push_back(v.node);
  }
  return nodes;
}

ChainReport check_theorem_hypotheses(const ExponentTriple& e, std::optional<int> space_dim) {
  ChainReport report;
  report.space_dim = space_dim.value_or(e.grid().dim());
  const auto crit = sobolev_critical_exponent(e.p(), 2, report.space_dim);
  for (std::size_t k = 0; k < e.p().size(); ++k) {
    const double p = e.p()[k], q = e.q()[k], r = e.r()[k];
    auto flag = [&](bool ok, const char* name) {
      if (!ok) report.violations.push_back({k, name});
    };
    flag(0.0 < q, "0<q");
    flag(q < 1.0, "q<1");
    flag(1.0 < r, "1<r");
    flag(r < p, "r<p");
    flag(crit[k].exceeds(p), "p<p*");
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace pxbih
