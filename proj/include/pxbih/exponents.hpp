#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pxbih/grid.hpp"

namespace pxbih {

/// A real number or an explicit +infinity tag. Never carries a floating
/// point infinity, so comparisons against it cannot produce NaN.
class ExtendedReal {
 public:
  static ExtendedReal finite(double value) { return ExtendedReal(false, value); }
  static ExtendedReal infinity() { return ExtendedReal(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws when the value is the infinity tag.
  double value() const;
  /// True iff x < *this, with every real below infinity.
  bool exceeds(double x) const noexcept { return infinite_ || x < value_; }

  bool operator==(const ExtendedReal& o) const noexcept {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }

 private:
  ExtendedReal(bool infinite, double value) : infinite_(infinite), value_(value) {}
  bool infinite_;
  double value_;
};

struct Bounds {
  double inf;
  double sup;
};

/// Exact min and max over all nodes.
Bounds exponent_bounds(const ScalarField& f);

/// Nodewise N p / (N - p) (order 1) or N p / (N - 2 p) (order 2), with the
/// infinity tag on the branch p >= N (order 1) or p >= N / 2 (order 2).
/// N defaults to the grid dimension.
std::vector<ExtendedReal> sobolev_critical_exponent(const ScalarField& p, int order,
                                                    std::optional<int> space_dim = std::nullopt);

/// Variable exponents p, q, r on one grid with cached bounds. Requires p > 1.
class ExponentTriple {
 public:
  ExponentTriple(ScalarField p, ScalarField q, ScalarField r);

  const ScalarField& p() const noexcept { return p_; }
  const ScalarField& q() const noexcept { return q_; }
  const ScalarField& r() const noexcept { return r_; }
  const GridPtr& grid_ptr() const noexcept { return p_.grid_ptr(); }
  const Grid& grid() const noexcept { return p_.grid(); }

  Bounds p_bounds() const noexcept { return pb_; }
  Bounds q_bounds() const noexcept { return qb_; }
  Bounds r_bounds() const noexcept { return rb_; }

 private:
  ScalarField p_, q_, r_;
  Bounds pb_, qb_, rb_;
};

struct ChainViolation {
  std::size_t node;
  std::string inequality;  // one of "0<q", "q<1", "1<r", "r<p", "p<p*"
};

struct ChainReport {
  bool pass = true;
  int space_dim = 1;
  std::vector<ChainViolation> violations;
  std::vector<std::size_t> violating_nodes() const;
};

/// Per-node check of 0 < q < 1 < r < p < p*(x).
ChainReport check_theorem_hypotheses(const ExponentTriple& e,
                                     std::optional<int> space_dim = std::nullopt);

}  // namespace pxbih
