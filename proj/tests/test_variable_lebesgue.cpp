#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "pxbih/error.hpp"
#include "pxbih/lebesgue.hpp"
#include "pxbih/sampling.hpp"

using namespace pxbih;

namespace {

ScalarField affine(const GridPtr& g, double a, double b) {
  return ScalarField::sample(g, [=](double x, double) { return a + b * x; });
}

// Continuum modular of the constant c under p(x) = 2 + x on (0, 1):
// integral of c^(2 + x) = c^2 (c - 1) / ln c.
double closed_modular(double c) { return c * c * (c - 1.0) / std::log(c); }

}  // namespace

TEST_CASE("modular examples") {
  auto g = Grid::line(1001);
  auto p = affine(g, 2.0, 1.0);
  CHECK(modular(ScalarField::constant(g, 0.0), p) == 0.0);
  CHECK(modular(ScalarField::constant(g, 1.0), p) == doctest::Approx(1.0).epsilon(1e-14));

  const double exact = 4.0 / std::numbers::ln2;
  const double quad = oracle::integrate([](double x) { return std::pow(2.0, 2.0 + x); }, 0.0, 1.0);
  CHECK(oracle::rel(exact, quad) < 1e-13);
  CHECK(exact == doctest::Approx(5.7708).epsilon(1e-4));
  CHECK(oracle::rel(modular(ScalarField::constant(g, 2.0), p), exact) < 1e-6);
}

TEST_CASE("modular rejects mismatched grids") {
  auto g = Grid::line(11);
  auto h = Grid::line(12);
  CHECK_THROWS_AS(modular(ScalarField::constant(g, 1.0), ScalarField::constant(h, 2.0)), Error);
}

TEST_CASE("luxemburg_norm examples") {
  auto g = Grid::line(1001);
  auto zero = luxemburg_norm(ScalarField::constant(g, 0.0), ScalarField::constant(g, 2.0));
  CHECK(zero.value == 0.0);
  CHECK(zero.iterations == 0);

  auto two = luxemburg_norm(ScalarField::constant(g, 2.0), ScalarField::constant(g, 2.0));
  CHECK(two.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(two.residual <= kDefaultNormTolerance);

  // mu* with integral of (2 / mu)^(2 + x) = 1, found two independent ways.
  const double mu_closed = oracle::bisect([](double mu) { return closed_modular(2.0 / mu) - 1.0; }, 1.0, 4.0);
  const double mu_quad = oracle::bisect(
      [](double mu) {
        return oracle::integrate([mu](double x) { return std::pow(2.0 / mu, 2.0 + x); }, 0.0, 1.0) - 1.0;
      },
      1.0, 4.0);
  CHECK(oracle::rel(mu_closed, mu_quad) < 1e-12);
  auto lux = luxemburg_norm(ScalarField::constant(g, 2.0), affine(g, 2.0, 1.0));
  CHECK(oracle::rel(lux.value, mu_closed) < 1e-6);
  CHECK(lux.residual <= kDefaultNormTolerance);
}

TEST_CASE("luxemburg_norm argument checks") {
  auto g = Grid::line(11);
  auto u = ScalarField::constant(g, 1.0);
  CHECK_THROWS_AS(luxemburg_norm(u, ScalarField::constant(g, 2.0), 0.0), Error);
  CHECK_THROWS_AS(luxemburg_norm(u, ScalarField::constant(g, 0.0)), Error);
}

TEST_CASE("luxemburg_norm residual, zero iff zero, homogeneity, constant exponent") {
  auto g = Grid::rectangle(21, 17);
  Rng rng(2024);
  std::uniform_real_distribution<double> scale(-50.0, 50.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto u = random_nodal_field(g, rng, -3.0, 3.0);
    auto p = random_exponent(g, rng, 1.2, 4.0);
    auto n = luxemburg_norm(u, p);
    CHECK(n.value > 0.0);
    CHECK(n.residual <= kDefaultNormTolerance);
    CHECK(std::abs(modular(u.scaled(1.0 / n.value), p) - 1.0) <= kDefaultNormTolerance);

    const double c = scale(rng);
    CHECK(oracle::rel(luxemburg_norm(u.scaled(c), p).value, std::abs(c) * n.value) < 1e-8);

    for (double p0 : {1.5, 2.0, 3.0}) {
      auto pc = ScalarField::constant(g, p0);
      const double expected = std::pow(modular(u, pc), 1.0 / p0);
      CHECK(oracle::rel(luxemburg_norm(u, pc).value, expected) < 1e-8);
    }
  }
}

TEST_CASE("luxemburg_norm triangle inequality") {
  auto g = Grid::line(64);
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto u = random_nodal_field(g, rng, -2.0, 2.0);
    auto v = random_nodal_field(g, rng, -2.0, 2.0);
    auto p = random_exponent(g, rng, 1.1, 3.5);
    const double lhs = luxemburg_norm(u.plus(v), p).value;
    const double rhs = luxemburg_norm(u, p).value + luxemburg_norm(v, p).value;
    CHECK(lhs <= rhs * (1.0 + 1e-9));
  }
}

TEST_CASE("conjugate_exponent examples") {
  auto g = Grid::line(11);
  CHECK(conjugate_exponent(ScalarField::constant(g, 2.0)).max() == 2.0);
  CHECK(conjugate_exponent(ScalarField::constant(g, 3.0)).min() == 1.5);
  auto pc = conjugate_exponent(affine(g, 2.0, 1.0));
  CHECK(pc[10] == 1.5);
  CHECK_THROWS_AS(conjugate_exponent(ScalarField::constant(g, 1.0)), Error);
}

TEST_CASE("holder_check examples") {
  auto g = Grid::line(101);
  auto p2 = ScalarField::constant(g, 2.0);
  auto zero = holder_check(ScalarField::constant(g, 0.0), ScalarField::constant(g, 3.0), p2);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.pass);

  auto one = ScalarField::constant(g, 1.0);
  auto eq = holder_check(one, one, p2, 1e-9);
  CHECK(eq.lhs == doctest::Approx(1.0));
  CHECK(eq.rhs == doctest::Approx(1.0));
  CHECK(eq.pass);
}

TEST_CASE("holder inequality on random pairs with p = 2 + sin(pi x)") {
  auto g = Grid::line(101);
  auto p = ScalarField::sample(g, [](double x, double) { return 2.0 + std::sin(std::numbers::pi * x); });
  Rng rng(77);
  std::uniform_real_distribution<double> decade(-2.0, 2.0);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto u = random_nodal_field(g, rng, -1.0, 1.0).scaled(std::pow(10.0, decade(rng)));
    auto v = random_nodal_field(g, rng, -1.0, 1.0).scaled(std::pow(10.0, decade(rng)));
    failures += !holder_check(u, v, p).pass;
  }
  CHECK(failures == 0);
}

TEST_CASE("modular_norm_relations_check examples") {
  auto g = Grid::line(101);
  auto unit = modular_norm_relations_check(ScalarField::constant(g, 1.0), ScalarField::constant(g, 2.0));
  CHECK(unit.regime == NormRegime::kUnit);
  CHECK(unit.pass);

  auto p = affine(g, 2.0, 1.0);
  auto above = modular_norm_relations_check(ScalarField::constant(g, 3.0), p);
  CHECK(above.regime == NormRegime::kAboveOne);
  CHECK(above.norm > 1.0);
  CHECK(std::pow(above.norm, 2.0) <= above.modular);
  CHECK(above.modular <= std::pow(above.norm, 3.0));
  CHECK(above.pass);

  auto below = modular_norm_relations_check(ScalarField::constant(g, 0.1), p);
  CHECK(below.regime == NormRegime::kBelowOne);
  CHECK(std::pow(below.norm, 3.0) <= below.modular);
  CHECK(below.modular <= std::pow(below.norm, 2.0));
  CHECK(below.pass);
}

TEST_CASE("modular relations on random fields and exponents") {
  auto g = Grid::rectangle(15, 15);
  Rng rng(31);
  std::uniform_real_distribution<double> decade(-2.0, 2.0);
  int above = 0, below = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto u = random_nodal_field(g, rng, -1.0, 1.0).scaled(std::pow(10.0, decade(rng)));
    auto p = random_exponent(g, rng, 1.1, 5.0);
    auto rep = modular_norm_relations_check(u, p);
    CHECK(rep.pass);
    above += rep.regime == NormRegime::kAboveOne;
    below += rep.regime == NormRegime::kBelowOne;
  }
  CHECK(above > 20);
  CHECK(below > 20);
}

TEST_CASE("norm and modular vanish together along u + 2^-n w") {
  auto g = Grid::line(51);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto u = random_nodal_field(g, rng, -5.0, 5.0);
    auto w = random_nodal_field(g, rng, -5.0, 5.0);
    auto p = random_exponent(g, rng, 1.1, 4.0);
    auto rep = convergence_equivalence_check(u, w, p);
    CHECK(rep.pass);
    for (std::size_t n = 1; n < rep.norms.size(); ++n) {
      CHECK(rep.norms[n] < rep.norms[n - 1]);
      CHECK(rep.modulars[n] < rep.modulars[n - 1]);
    }
  }
}
