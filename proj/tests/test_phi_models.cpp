#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pxbih/error.hpp"
#include "pxbih/phi.hpp"
#include "pxbih/sampling.hpp"

using namespace pxbih;

namespace {

constexpr PhiTag kBaseTags[] = {PhiTag::kPower, PhiTag::kMeanCurvature, PhiTag::kCapillarity};

PhiModel constant_model(PhiTag tag, double p, double c = 1.0) {
  return PhiModel::single(tag, ScalarField::constant(Grid::line(5), p), c);
}

// Independent transcription of the three integrands.
double phi_direct(PhiTag tag, double p, double s) {
  switch (tag) {
    case PhiTag::kPower: return std::pow(s, p - 2.0);
    case PhiTag::kMeanCurvature: return std::pow(1.0 + s * s, (p - 2.0) / 2.0);
    default: return (1.0 + std::pow(s, p) / std::sqrt(1.0 + std::pow(s, 2.0 * p))) * std::pow(s, p - 2.0);
  }
}

double big_phi_quadrature(PhiTag tag, double p, double t) {
  return oracle::integrate_singular([=](double s) { return s > 0.0 ? s * phi_direct(tag, p, s) : 0.0; }, 0.0, t);
}

}  // namespace

TEST_CASE("phi examples") {
  CHECK(constant_model(PhiTag::kPower, 3.0).phi(0, 2.0).value() == doctest::Approx(2.0));
  for (double xi : {0.0, 0.3, 7.0, 1e5}) {
    CHECK(constant_model(PhiTag::kMeanCurvature, 2.0).phi(1, xi).value() == 1.0);
  }
  CHECK(constant_model(PhiTag::kCapillarity, 2.0).phi(0, 1.0).value() ==
        doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(constant_model(PhiTag::kCapillarity, 2.0).phi(0, 1.0).value() ==
        doctest::Approx(1.70711).epsilon(1e-5));
}

TEST_CASE("phi at xi = 0 and negative arguments") {
  CHECK(constant_model(PhiTag::kPower, 1.5).phi(0, 0.0).is_infinite());
  CHECK(constant_model(PhiTag::kCapillarity, 1.5).phi(0, 0.0).is_infinite());
  CHECK(constant_model(PhiTag::kPower, 2.5).phi(0, 0.0).value() == 0.0);
  CHECK(constant_model(PhiTag::kPower, 1.5).flux(0, 0.0) == 0.0);
  CHECK_THROWS_AS(constant_model(PhiTag::kPower, 2.5).phi(0, -1.0), Error);
  CHECK_THROWS_AS(constant_model(PhiTag::kPower, 2.5).big_phi(0, -1.0), Error);
  CHECK_THROWS_AS(constant_model(PhiTag::kPower, 2.5).phi(99, 1.0), Error);
}

TEST_CASE("big_phi examples") {
  for (PhiTag tag : kBaseTags) CHECK(constant_model(tag, 2.5).big_phi(0, 0.0) == 0.0);
  CHECK(constant_model(PhiTag::kMeanCurvature, 2.0).big_phi(0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  const double cap = 0.5 + (std::sqrt(2.0) - 1.0) / 2.0;
  CHECK(constant_model(PhiTag::kCapillarity, 2.0).big_phi(0, 1.0) == doctest::Approx(cap).epsilon(1e-15));
  CHECK(oracle::rel(big_phi_quadrature(PhiTag::kCapillarity, 2.0, 1.0), cap) < 1e-12);
  CHECK(cap == doctest::Approx(0.70711).epsilon(1e-5));
}

TEST_CASE("big_phi closed forms match quadrature") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> pd(1.2, 4.0), td(-3.0, 1.5);
  for (int i = 0; i < 200; ++i) {
    const PhiTag tag = kBaseTags[i % 3];
    const double p = pd(rng), t = std::pow(10.0, td(rng));
    const double closed = constant_model(tag, p).big_phi(0, t);
    CHECK(oracle::rel(closed, big_phi_quadrature(tag, p, t)) < 1e-8);
  }
}

TEST_CASE("d/dt big_phi = t phi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pd(1.2, 4.0), td(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const PhiTag tag = kBaseTags[i % 3];
    const double p = pd(rng), t = std::pow(10.0, td(rng));
    auto m = constant_model(tag, p);
    const double h = 1e-5 * t;
    const double fd = (m.big_phi(0, t + h) - m.big_phi(0, t - h)) / (2.0 * h);
    CHECK(oracle::rel(fd, t * m.phi(0, t).value()) < 1e-6);
    CHECK(oracle::rel(m.flux(0, t), t * m.phi(0, t).value()) < 1e-13);
  }
}

TEST_CASE("flux_derivative is the derivative of the flux") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pd(1.2, 4.0), td(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const PhiTag tag = kBaseTags[i % 3];
    const double p = pd(rng), t = std::pow(10.0, td(rng));
    auto m = constant_model(tag, p);
    const double h = 1e-5 * t;
    const double fd = (m.flux(0, t + h) - m.flux(0, t - h)) / (2.0 * h);
    CHECK(oracle::rel(fd, m.flux_derivative(0, t)) < 1e-6);
  }
}

TEST_CASE("big_phi is nonnegative, increasing, and convex for power p >= 2") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pd(1.1, 4.0);
  for (int i = 0; i < 60; ++i) {
    const PhiTag tag = kBaseTags[i % 3];
    const double p = tag == PhiTag::kPower && i % 2 ? 2.0 + (pd(rng) - 1.1) : pd(rng);
    auto m = constant_model(tag, p);
    double prev = 0.0;
    std::vector<double> vals;
    for (int k = 1; k <= 200; ++k) {
      const double v = m.big_phi(0, 0.05 * k);
      CHECK(v >= 0.0);
      CHECK(v > prev);
      prev = v;
      vals.push_back(v);
    }
    if (tag == PhiTag::kPower && p >= 2.0) {
      for (std::size_t k = 1; k + 1 < vals.size(); ++k) CHECK(vals[k + 1] - 2 * vals[k] + vals[k - 1] >= -1e-12);
    }
  }
}

TEST_CASE("double phase is the weighted sum of its phases") {
  auto g = Grid::rectangle(7, 5, 2.0, 1.0);
  Rng rng(4);
  auto p1 = random_exponent(g, rng, 1.5, 2.5);
  auto p2 = p1.plus(random_nodal_field(g, rng, 0.0, 1.0));
  auto V = random_nodal_field(g, rng, 0.0, 3.0);
  for (bool log_weight : {false, true}) {
    auto m = PhiModel::double_phase(p1, p2, V, log_weight);
    CHECK(m.tag() == (log_weight ? PhiTag::kDoublePhaseLog : PhiTag::kDoublePhase));
    for (std::size_t k = 0; k < g->size(); ++k) {
      const auto x = g->coords(k);
      const double w = V[k] * (log_weight ? std::log(std::numbers::e + std::hypot(x[0], x[1])) : 1.0);
      CHECK(m.second_weight(k) == doctest::Approx(w).epsilon(1e-15));
      for (double t : {0.0, 0.01, 0.7, 3.0, 40.0}) {
        const double expected = kernel::big_phi(PhiFamily::kPower, p1[k], t) +
                                m.second_weight(k) * kernel::big_phi(PhiFamily::kPower, p2[k], t);
        CHECK(m.big_phi(k, t) == expected);
      }
    }
  }
}

TEST_CASE("double phase validation") {
  auto g = Grid::line(5);
  auto two = ScalarField::constant(g, 2.0), three = ScalarField::constant(g, 3.0);
  CHECK_THROWS_AS(PhiModel::double_phase(three, two, ScalarField::constant(g, 1.0), false), Error);
  CHECK_THROWS_AS(PhiModel::double_phase(two, three, ScalarField::constant(g, -1.0), false), Error);
  CHECK_THROWS_AS(PhiModel::single(PhiTag::kDoublePhase, two), Error);
  CHECK_THROWS_AS(PhiModel::single(PhiTag::kPower, two, 0.0), Error);
  CHECK_THROWS_AS(PhiModel::single(PhiTag::kPower, ScalarField::constant(g, 1.0)), Error);
}

TEST_CASE("tag names round-trip") {
  for (PhiTag tag : {PhiTag::kPower, PhiTag::kMeanCurvature, PhiTag::kCapillarity,
                     PhiTag::kDoublePhase, PhiTag::kDoublePhaseLog}) {
    CHECK(phi_tag_from_string(to_string(tag)) == tag);
  }
  CHECK_THROWS_AS(phi_tag_from_string("cubic"), Error);
}

TEST_CASE("verify_hypotheses: power model") {
  auto rep = verify_hypotheses(constant_model(PhiTag::kPower, 2.5));
  CHECK(rep.h1_by_construction);
  CHECK(rep.h3_pass);
  CHECK(rep.c_max == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.worst_margin_first == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.c_max_second == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(rep.h2_bounded);
  for (double a : rep.a) CHECK(a == doctest::Approx(0.0));

  auto sub = verify_hypotheses(constant_model(PhiTag::kPower, 1.5));
  CHECK_FALSE(sub.h3_pass);
  CHECK(sub.c_max == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(verify_hypotheses(constant_model(PhiTag::kPower, 1.5, 0.5)).h3_pass);
  CHECK(maximal_h3_constant(constant_model(PhiTag::kPower, 3.0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("verify_hypotheses: mean curvature below p = 2 fails H3 near 0") {
  auto g = Grid::line(11);
  auto p = ScalarField::sample(g, [](double x, double) { return 1.5 + x; });
  auto rep = verify_hypotheses(PhiModel::single(PhiTag::kMeanCurvature, p, 1.0));
  CHECK_FALSE(rep.h3_pass);
  REQUIRE_FALSE(rep.violations.empty());
  bool at_floor = false;
  for (const auto& v : rep.violations) {
    CHECK(p[v.node] < 2.0 + 1e-12);
    at_floor = at_floor || (v.node == 0 && v.xi == doctest::Approx(1e-6));
  }
  CHECK(at_floor);
  // Direct evaluation at the worst point: phi ~ 1 against xi^(p-2) = 1000.
  const double ratio = std::pow(1.0 + 1e-12, -0.25) / std::pow(1e-6, -0.5);
  CHECK(rep.c_max_first == doctest::Approx(ratio).epsilon(1e-6));
}

TEST_CASE("verify_hypotheses: capillarity and mean curvature above 2") {
  CHECK(verify_hypotheses(constant_model(PhiTag::kCapillarity, 2.5)).h3_pass);
  auto cap = verify_hypotheses(constant_model(PhiTag::kCapillarity, 2.5));
  CHECK(cap.h2_bounded);
  CHECK(cap.b == 2.0);
  auto mc = verify_hypotheses(constant_model(PhiTag::kMeanCurvature, 3.0));
  CHECK(mc.h3_pass);
  CHECK(mc.h2_bounded);
}

TEST_CASE("verify_hypotheses reports unbounded H2 excess") {
  auto rep = verify_hypotheses(PhiModel::single(PhiTag::kCapillarity,
                                                ScalarField::constant(Grid::line(5), 2.5), 1.0, 1.0));
  CHECK_FALSE(rep.h2_bounded);
}

TEST_CASE("simon_gap examples") {
  auto m = constant_model(PhiTag::kPower, 2.5);
  std::vector<double> u{1.0, -2.0};
  auto same = simon_gap(m, 0, u, u);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);

  auto quad = constant_model(PhiTag::kPower, 2.0);
  std::vector<double> e1{1.0, 0.0}, zero{0.0, 0.0};
  auto g = simon_gap(quad, 0, e1, zero);
  CHECK(g.lhs == doctest::Approx(1.0));
  CHECK(g.rhs == doctest::Approx(0.25));
  CHECK_FALSE(g.subquadratic_branch);

  auto sub = constant_model(PhiTag::kPower, 1.5);
  CHECK_THROWS_AS(simon_gap(sub, 0, zero, zero), Error);
  try {
    simon_gap(sub, 0, zero, zero);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUndefinedBranch);
  }
  CHECK(simon_gap(sub, 0, e1, zero).subquadratic_branch);
}

TEST_CASE("simon inequality on random pairs, both branches") {
  for (double p : {1.5, 2.5}) {
    auto m = constant_model(PhiTag::kPower, p);
    const double c = maximal_h3_constant(m);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
      std::vector<double> u{coord(rng), coord(rng)}, v{coord(rng), coord(rng)};
      auto gap = simon_gap(m, i % 5, u, v, c);
      violations += gap.lhs < gap.rhs;
    }
    CHECK(violations == 0);
  }
}
