#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "pxbih/energy.hpp"
#include "pxbih/error.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/sampling.hpp"
#include "support.hpp"

using namespace pxbih;
using support::constant_spec;

namespace {

// Smooth field with |u| >= 0.1 at interior nodes.
ScalarField bounded_away(const GridPtr& g, Rng& rng) {
  auto u = random_smooth_field(g, rng, 4, 1.0);
  std::uniform_real_distribution<double> shift(0.2, 1.0);
  const double s = shift(rng);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (g->is_interior(k)) v[k] = (v[k] >= 0 ? 1.0 : -1.0) * (0.1 + std::abs(v[k])) * s * 2.0;
  }
  return ScalarField(g, std::move(v));
}

double fd_directional(const ScalarField& u, const ScalarField& v, const ProblemSpec& spec,
                      double eps, double delta) {
  return (energy(u.plus(v, delta), spec, eps).total - energy(u.plus(v, -delta), spec, eps).total) /
         (2.0 * delta);
}

}  // namespace

TEST_CASE("energy of the zero field") {
  auto g = Grid::line(51);
  auto e = energy(ScalarField::constant(g, 0.0), constant_spec(g, 2.5, 0.5, 1.5, 3.0), 0.0);
  CHECK(e.phi_part == 0.0);
  CHECK(e.singular_part == 0.0);
  CHECK(e.reaction_part == 0.0);
  CHECK(e.total == 0.0);
}

TEST_CASE("energy example: u = x(1 - x), p = 2, lambda = 0") {
  auto g = Grid::line(2001);
  const double h = g->spacing(0);
  auto u = ScalarField::sample(g, [](double x, double) { return x * (1 - x); });
  auto e = energy(u, constant_spec(g, 2.0, 0.5, 1.5, 0.0), 0.0);

  // Lu = -2 in the interior and 0 on the two boundary nodes.
  CHECK(std::abs(e.phi_part - 2.0) <= 2.0 * h + 1e-12);
  const double beta = oracle::integrate_singular([](double x) { return std::sqrt(x * (1 - x)); }, 0.0, 1.0);
  CHECK(oracle::rel(beta, std::numbers::pi / 8.0) < 1e-14);
  CHECK(std::abs(e.singular_part - std::numbers::pi / 4.0) <= 3.0 * std::pow(h, 1.5));
  CHECK(e.total == doctest::Approx(1.2146).epsilon(2e-3));
  CHECK(e.total == e.phi_part - e.singular_part - e.lambda * e.reaction_part);
}

TEST_CASE("energy is strictly decreasing in lambda") {
  auto g = Grid::line(101);
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    auto u = random_smooth_field(g, rng);
    const double e1 = energy(u, constant_spec(g, 2.5, 0.5, 1.5, 1.0), 0.0).total;
    const double e2 = energy(u, constant_spec(g, 2.5, 0.5, 1.5, 2.0), 0.0).total;
    CHECK(e2 < e1);
  }
}

TEST_CASE("energy breakdown is consistent") {
  auto g = Grid::rectangle(21, 17);
  Rng rng(2);
  ExponentTriple e(random_exponent(g, rng, 2.2, 3.0), random_exponent(g, rng, 0.2, 0.8),
                   random_exponent(g, rng, 1.2, 2.0));
  ProblemSpec spec{e, PhiModel::single(PhiTag::kCapillarity, e.p()), 1.7};
  for (int i = 0; i < 10; ++i) {
    auto u = random_smooth_field(g, rng, 6, 3.0);
    for (double eps : {0.0, 1e-3}) {
      auto b = energy(u, spec, eps);
      CHECK(b.total == b.phi_part - b.singular_part - b.lambda * b.reaction_part);
      CHECK(b.phi_part >= 0.0);
      CHECK(b.singular_part >= 0.0);
      CHECK(b.reaction_part >= 0.0);
      CHECK(b.eps == eps);
    }
  }
}

TEST_CASE("energy validates the problem") {
  auto g = Grid::line(21);
  auto u = ScalarField::constant(g, 0.0);
  CHECK_THROWS_AS(energy(u, constant_spec(g, 2.5, 1.2, 1.5, 1.0), 0.0), Error);
  CHECK_THROWS_AS(energy(u, constant_spec(g, 2.5, 0.5, 1.5, -1.0), 0.0), Error);
  CHECK_THROWS_AS(energy(u, constant_spec(g, 2.5, 0.5, 1.5, 1.0), -1e-3), Error);
  CHECK_THROWS_AS(energy(ScalarField::constant(Grid::line(22), 0.0), constant_spec(g, 2.5, 0.5, 1.5, 1.0), 0.0), Error);
}

TEST_CASE("smoothed magnitude and singular derivative") {
  for (double u : {-3.0, -0.1, 0.0, 1e-9, 0.5, 2.0}) {
    CHECK(smoothed_magnitude(u, 0.0) == std::abs(u));
    double prev = -1.0;
    for (double eps : {1e-1, 1e-2, 1e-4, 1e-6}) {
      const double m = smoothed_magnitude(u, eps);
      CHECK(m <= std::abs(u));
      CHECK(m >= prev);
      const double ratio = u / eps;
      CHECK(oracle::rel(m, eps * std::expm1(0.5 * std::log1p(ratio * ratio))) < 1e-12);
      prev = m;
    }
  }
  for (double q : {0.2, 0.5, 0.9}) {
    for (double u : {-2.0, -0.01, 0.003, 0.7}) {
      const double eps = 1e-2, d = 1e-6 * std::abs(u);
      auto f = [&](double s) { return std::pow(smoothed_magnitude(s, eps), 1 - q) / (1 - q); };
      CHECK(oracle::rel((f(u + d) - f(u - d)) / (2 * d), singular_derivative(u, q, eps)) < 1e-6);
    }
  }
  CHECK(singular_derivative(0.0, 0.5, 1e-3) == 0.0);
}

TEST_CASE("gradient of the zero field vanishes") {
  auto g = Grid::line(41);
  auto gr = energy_gradient(ScalarField::constant(g, 0.0), constant_spec(g, 2.5, 0.5, 1.5, 1.0), 1e-3);
  CHECK(gr.is_zero());
  CHECK_THROWS_AS(energy_gradient(ScalarField::constant(g, 0.0), constant_spec(g, 2.5, 0.5, 1.5, 1.0), 0.0), Error);
}

TEST_CASE("gradient matches central differences of the energy") {
  Rng rng(11);
  for (auto g : {Grid::line(101), Grid::rectangle(21, 21)}) {
    for (PhiTag tag : {PhiTag::kPower, PhiTag::kMeanCurvature, PhiTag::kCapillarity}) {
      ExponentTriple e(random_exponent(g, rng, 2.0, 3.0), random_exponent(g, rng, 0.2, 0.8),
                       random_exponent(g, rng, 1.2, 1.9));
      ProblemSpec spec{e, PhiModel::single(tag, e.p()), 1.3};
      for (int i = 0; i < 5; ++i) {
        auto u = bounded_away(g, rng);
        auto v = project_boundary(random_smooth_field(g, rng));
        const double analytic = inner_product(*g, energy_gradient(u, spec, 1e-3).values(), v.values());
        CHECK(oracle::rel(fd_directional(u, v, spec, 1e-3, 1e-5), analytic) < 1e-5);
      }
    }
  }
}

TEST_CASE("quadratic case: <g(u), u> = 2 phi_part and the form is symmetric") {
  auto g = Grid::line(81);
  auto spec = constant_spec(g, 2.0, 0.5, 1.5, 0.0);
  spec.include_singular = false;
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    auto u = project_boundary(random_nodal_field(g, rng, -1, 1));
    auto v = project_boundary(random_nodal_field(g, rng, -1, 1));
    auto gu = energy_gradient(u, spec, 1e-3);
    auto gv = energy_gradient(v, spec, 1e-3);
    CHECK(inner_product(*g, gu.values(), u.values()) ==
          doctest::Approx(2.0 * energy(u, spec, 0.0).phi_part).epsilon(1e-10));
    CHECK(inner_product(*g, gu.values(), v.values()) ==
          doctest::Approx(inner_product(*g, gv.values(), u.values())).epsilon(1e-10));
    CHECK(inner_product(*g, gu.values(), u.values()) >= 0.0);
  }
}

TEST_CASE("smoothed energy decreases to the exact energy as eps shrinks") {
  auto g = Grid::line(201);
  auto spec = constant_spec(g, 2.5, 0.5, 1.5, 1.0);
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    auto u = random_smooth_field(g, rng, 6, std::pow(10.0, -2.0 + 0.2 * i));
    double prev = energy(u, spec, 1e-2).total;
    for (double eps : {1e-3, 1e-4, 1e-6, 0.0}) {
      const double e = energy(u, spec, eps).total;
      CHECK(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("coercivity bound constants for p = 2, q = 0.5, r = 1.5") {
  auto g = Grid::line(101);
  auto spec = constant_spec(g, 2.0, 0.5, 1.5, 1.0);
  auto u = ScalarField::sample(g, [](double x, double) { return 3.0 * std::sin(std::numbers::pi * x); });
  auto b = coercivity_bound(u, spec, 0.25);
  const double n = luxemburg_norm(NavierOperator(g).apply(u), spec.exponents.p()).value;
  CHECK(b.norm == n);
  CHECK(b.lower == doctest::Approx(0.5 * n * n - 2.0 * 0.25 * std::sqrt(n) - 2.0 / 3.0 * 0.25 * std::pow(n, 1.5)));

  auto small = ScalarField::sample(g, [](double x, double) { return 0.01 * std::sin(std::numbers::pi * x); });
  try {
    coercivity_bound(small, spec, 0.25);
    FAIL("expected out-of-regime");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOutOfRegime);
  }
  auto overclaim = constant_spec(g, 1.5, 0.2, 1.2, 1.0, PhiTag::kPower, 1.0);
  CHECK_THROWS_AS(coercivity_bound(u, overclaim, 0.25), Error);
}

TEST_CASE("coercivity bound eventually increases along rays") {
  auto g = Grid::line(101);
  auto spec = constant_spec(g, 2.5, 0.5, 1.5, 2.0);
  Rng rng(14);
  auto u = random_smooth_field(g, rng);
  const double n0 = luxemburg_norm(NavierOperator(g).apply(u), spec.exponents.p()).value;
  double prev = -1e300;
  for (double t = 2.0 / n0; t < 1e4 / n0; t *= 1.5) {
    const double lower = coercivity_bound(u.scaled(t), spec, 0.5).lower;
    if (t > 20.0 / n0) CHECK(lower > prev);
    prev = lower;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("embedding constant estimate") {
  auto g = Grid::line(101);
  auto spec = constant_spec(g, 2.5, 0.5, 1.5, 1.0);
  Rng rng(15);
  std::vector<ScalarField> probes;
  for (int i = 0; i < 30; ++i) probes.push_back(random_smooth_field(g, rng));
  const double c0 = estimate_embedding_constant(spec, probes);
  for (const auto& p : probes) CHECK(embedding_ratio(p, spec) <= c0);
  CHECK(embedding_ratio(probes[0].scaled(7.0), spec) == doctest::Approx(embedding_ratio(probes[0], spec)).epsilon(1e-8));
}

TEST_CASE("valley constants for the power model with p = 2") {
  auto g = Grid::line(201);
  auto spec = constant_spec(g, 2.0, 0.5, 1.5, 1.0);
  auto v = bump_profile(g);
  auto c = valley_constants(v, spec);
  NavierOperator op(g);
  CHECK(c.c1 == 0.0);
  CHECK(c.c2 == doctest::Approx(0.5 * modular(op.apply(v), ScalarField::constant(g, 2.0))).epsilon(1e-14));
  CHECK(c.c3 == doctest::Approx(integrate(v.map([](double s) { return std::sqrt(s) / 0.5; }))).epsilon(1e-14));
  CHECK(c.c2 > 0.0);
  CHECK(c.c3 > 0.0);
}

TEST_CASE("valley bound holds for the bump profile") {
  auto g = Grid::line(201);
  for (double p : {2.0, 2.5}) {
    auto spec = constant_spec(g, p, 0.5, 1.5, 1.0);
    auto v = bump_profile(g);
    auto c = valley_constants(v, spec);
    for (double t : {1e-4, 1e-3, 1e-2, 1e-1}) {
      CHECK(energy(v.scaled(t), spec, 0.0).total <= c.bound(t) + 1e-14);
    }
  }
}

TEST_CASE("valley constants reject bad profiles") {
  auto g = Grid::line(51);
  auto spec = constant_spec(g, 2.5, 0.5, 1.5, 1.0);
  auto v = bump_profile(g);
  CHECK_THROWS_AS(valley_constants(ScalarField::constant(g, 0.0), spec), Error);
  CHECK_THROWS_AS(valley_constants(v.scaled(2.0), spec), Error);
  CHECK_THROWS_AS(valley_constants(v.scaled(-1.0), spec), Error);
  CHECK_THROWS_AS(valley_constants(ScalarField::constant(g, 0.5), spec), Error);
}

TEST_CASE("probe basis vanishes on the boundary") {
  for (auto g : {Grid::line(41), Grid::rectangle(15, 19)}) {
    auto basis = probe_basis(g, 20);
    CHECK(basis.size() == 20);
    for (const auto& b : basis) {
      CHECK_FALSE(b.is_zero());
      for (std::size_t k = 0; k < g->size(); ++k) {
        if (g->is_boundary(k)) CHECK(b[k] == 0.0);
      }
    }
  }
}
