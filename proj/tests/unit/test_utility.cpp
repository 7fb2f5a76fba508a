#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cpt/counter_rng.hpp"
#include "cpt/utility.hpp"

using namespace cpt;

namespace {

const double kX0 = std::pow(10.0, 0.7);

UtilitySpec case_study() { return UtilitySpec::generalized(GeneralizedParams{}, kX0); }

// Independent evaluation of the generalized exponential form.
double generalized_oracle(const GeneralizedParams& g, double x0, double x) {
  if (x == x0) return 0.0;
  if (x > x0) return g.lambda1 * (g.mu1 - std::exp(g.alpha / g.gamma1 * (x - x0))) / g.alpha;
  return g.lambda2 * (g.mu2 - std::exp(g.beta / g.gamma2 * (x - x0))) / g.beta;
}

double central_difference(const UtilitySpec& u, double x, double h) {
  return (utility_value(u, x + h) - utility_value(u, x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("kt linear branches") {
  const auto u = UtilitySpec::kt({1.0, 1.0, 2.0}, 0.0);
  CHECK(utility_value(u, 3.0) == doctest::Approx(3.0));
  CHECK(utility_value(u, -3.0) == doctest::Approx(-6.0));
  CHECK(utility_derivative(u, 5.0).value == doctest::Approx(1.0));
  CHECK(utility_derivative(u, -5.0).value == doctest::Approx(2.0));
}

TEST_CASE("kt power branches") {
  const auto u = UtilitySpec::kt({0.5, 0.5, 0.5}, 0.0);
  CHECK(utility_value(u, 4.0) == doctest::Approx(2.0));
  CHECK(utility_value(u, -4.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(utility_derivative(u, 0.0, Side::Right), unbounded_derivative);
  CHECK_THROWS_AS(utility_derivative(u, 0.0, Side::Left), unbounded_derivative);
}

TEST_CASE("kt parameter validation") {
  CHECK_THROWS_AS(UtilitySpec::kt({0.0, 0.5, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilitySpec::kt({1.2, 0.5, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilitySpec::kt({0.5, 1.5, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilitySpec::kt({0.5, 0.5, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("kw hand values") {
  const auto u = UtilitySpec::kw({1.0, 1.0, 1.0, 1.0}, 0.0);
  CHECK(utility_value(u, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(utility_value(u, 1.0) == doctest::Approx(0.632121).epsilon(1e-6));
  CHECK(utility_value(u, -1.0) == doctest::Approx(-(1.0 - std::exp(-1.0))).epsilon(1e-12));
  CHECK_THROWS_AS(UtilitySpec::kw({0.0, 1.0, 1.0, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UtilitySpec::kw({1.0, 1.0, 1.0, -1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("generalized case study") {
  const auto u = case_study();
  CHECK(utility_value(u, kX0) == 0.0);
  CHECK(utility_derivative(u, kX0, Side::Right).value == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(utility_derivative(u, kX0, Side::Left).value == doctest::Approx(0.8).epsilon(1e-14));
  const auto autoside = utility_derivative(u, kX0);
  CHECK(autoside.at_kink);
  CHECK(autoside.value == doctest::Approx(0.4));
  CHECK(arrow_pratt(u, kX0 + 1.0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(arrow_pratt(u, kX0 - 1.0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS(arrow_pratt(u, kX0));
  CHECK(is_concave_loss_averse(u));

  const GeneralizedParams g{};
  for (double x : {0.0, 1.0, 4.9, 5.2, 7.5, 30.0})
    CHECK(utility_value(u, x) == doctest::Approx(generalized_oracle(g, kX0, x)).epsilon(1e-12));
}

TEST_CASE("arrow-pratt near-linear and exponential") {
  GeneralizedParams g;
  g.alpha = 1e-12;
  g.gain_shape = BranchShape::Linear;
  const auto lin = UtilitySpec::generalized(g, kX0);
  CHECK(std::abs(arrow_pratt(lin, kX0 + 1.0)) < 1e-9);

  const auto kw = UtilitySpec::kw({1.0, 1.0, 2.0, 1.0}, 0.0);
  CHECK(arrow_pratt(kw, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("generalized shape validation") {
  GeneralizedParams g;
  g.gamma1 = 5.0;  // concave gain needs lambda1/gamma1 < 0
  CHECK_THROWS_AS(UtilitySpec::generalized(g, kX0), std::invalid_argument);

  g = GeneralizedParams{};
  g.mu1 = 0.5;  // concave gain needs mu1 >= 1
  CHECK_THROWS_AS(UtilitySpec::generalized(g, kX0), std::invalid_argument);

  g = GeneralizedParams{};
  g.gain_shape = BranchShape::Convex;  // parameters describe a concave branch
  CHECK_THROWS_AS(UtilitySpec::generalized(g, kX0), std::invalid_argument);

  g = GeneralizedParams{};
  g.gain_shape = BranchShape::Linear;
  CHECK_THROWS_AS(UtilitySpec::generalized(g, kX0), std::invalid_argument);

  // convex gain branch: alpha/gamma1 > 0, lambda1/gamma1 < 0
  g = GeneralizedParams{};
  g.alpha = -1.0;
  g.gain_shape = BranchShape::Convex;
  const auto convex = UtilitySpec::generalized(g, kX0);
  CHECK(utility_second_derivative(convex, kX0 + 1.0) > 0.0);
  CHECK_FALSE(is_concave_loss_averse(convex));
}

TEST_CASE("non-finite and out-of-domain arguments") {
  const auto u = UtilitySpec::generalized(GeneralizedParams{}, kX0, 0.0);
  CHECK_THROWS_AS(utility_value(u, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(utility_value(u, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(utility_value(u, -1.0), std::domain_error);
}

TEST_CASE("with_reference keeps parameters") {
  const auto u = case_study().with_reference(2.0);
  CHECK(u.x0() == 2.0);
  CHECK(utility_value(u, 2.0) == 0.0);
  REQUIRE(u.get<GeneralizedParams>() != nullptr);
  CHECK(u.get<GeneralizedParams>()->lambda2 == 4.0);
}

TEST_CASE("property: monotone, signed, derivatives match finite differences") {
  const CounterStream rng(42, 7);
  std::uint64_t k = 0;
  std::vector<UtilitySpec> specs{
      case_study(),
      UtilitySpec::kt({0.88, 0.88, 2.25}, 1.0),
      UtilitySpec::kt({0.5, 0.7, 1.5}, -2.0),
      UtilitySpec::kw({1.0, 2.0, 2.0, 1.0}, 0.0),
      UtilitySpec::kw({0.3, 0.9, 0.5, 0.25}, 3.0),
  };
  {
    GeneralizedParams g;
    g.lambda1 = 1.0;
    g.alpha = 0.7;
    g.gamma1 = -2.0;
    g.lambda2 = 3.0;
    g.beta = 0.4;
    g.gamma2 = -1.5;
    specs.push_back(UtilitySpec::generalized(g, 2.0));
  }
  for (const auto& u : specs) {
    const double x0 = u.x0();
    double prev_u = utility_value(u, x0 - 10.0);
    for (int i = 1; i <= 400; ++i) {
      const double x = x0 - 10.0 + 0.05 * i;
      const double v = utility_value(u, x);
      CHECK(v > prev_u);
      if (x > x0 + 1e-9) CHECK(v > 0.0);
      if (x < x0 - 1e-9) CHECK(v < 0.0);
      prev_u = v;
    }
    for (int i = 0; i < 100; ++i) {
      const double off = 0.05 + 4.0 * rng.uniform(k++);
      const double x = rng.uniform(k++) < 0.5 ? x0 - off : x0 + off;
      const double fd = central_difference(u, x, 1e-6);
      const double an = utility_derivative(u, x).value;
      CHECK(an > 0.0);
      CHECK(an == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}
