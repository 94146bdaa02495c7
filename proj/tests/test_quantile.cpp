#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "ordscore/error.hpp"
#include "ordscore/quantile.hpp"
#include "properties.hpp"

using namespace ordscore;

TEST_CASE("normal quantile against published values and boost") {
  // 0.6744897501960817 is the upper quartile of N(0, 1)
  CHECK(normal_quantile(0.75) == doctest::Approx(0.6744897501960817).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == 0.0);
  boost::math::normal_distribution<double> n01;
  double worst = 0;
  for (int i = 1; i < 10000; ++i) {
    const double p = i / 10000.0;
    worst = std::max(worst, std::abs(normal_quantile(p) - boost::math::quantile(n01, p)));
  }
  for (double p : {1e-12, 1e-8, 1e-5, 0.02, 0.03, 0.97, 0.98, 1 - 1e-5, 1 - 1e-9})
    worst = std::max(worst, std::abs(normal_quantile(p) - boost::math::quantile(n01, p)));
  CHECK(worst < 1e-9);
}

TEST_CASE("gh_quantile examples") {
  for (double g : {-1.0, 0.0, 0.7}) {
    for (double h : {0.0, 0.3}) CHECK(gh_quantile(0.5, {g, h}) == 0.0);
  }
  CHECK(gh_quantile(0.25, {0, 0}) == doctest::Approx(-0.67449).epsilon(1e-5));
  CHECK(gh_quantile(0.75, {0, 0}) == doctest::Approx(0.67449).epsilon(1e-5));
  // 0.67449 * exp(0.25 * 0.67449^2), checked against a 40-digit evaluation
  CHECK(gh_quantile(0.75, {0, 0.5}) == doctest::Approx(0.7557348484991957).epsilon(1e-14));
}

TEST_CASE("gh_quantile rejects probabilities outside (0, 1)") {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    try {
      gh_quantile(p, {});
      FAIL("expected InvalidProbability");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidProbability);
    }
  }
  CHECK_THROWS_AS(gh_quantile(0.3, {0.0, -0.1}), std::invalid_argument);
}

TEST_CASE("gh_scores standardisation") {
  const auto x3 = gh_scores(3, {0, 0});
  CHECK(x3[0] == 1.0);
  CHECK(x3[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x3[2] == 3.0);

  for (int k = 3; k <= 12; ++k) {
    const auto x = gh_scores(k, {0, 0});
    for (int i = 0; i < k; ++i)
      CHECK(x[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(k - 1 - i)] ==
            doctest::Approx(k + 1.0).epsilon(1e-12));
  }

  // g = 1: (exp(z) - 1) at the quartiles, standardised; frozen from a
  // direct evaluation with an independent normal quantile
  const auto skew = gh_scores(3, {1.0, 0.0});
  CHECK(skew[1] < 2.0);
  CHECK(skew[1] == doctest::Approx(1.6749844814969814).epsilon(1e-12));
}

TEST_CASE("gh_scores degenerate spread") {
  CHECK_THROWS_AS(gh_scores(2, {0, 0}), Error);
  try {
    gh_scores(4, {-800.0, 0.0});
    FAIL("expected DegenerateScores");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateScores);
  }
}

TEST_CASE("quantile property suite (smaller draw count)") {
  const auto rep = properties::check_quantiles(200, 3);
  CHECK(rep.monotone_failures == 0);
  CHECK(rep.max_reflection_error <= 1e-10);
  CHECK(rep.max_end_error <= 1e-12);
}

TEST_CASE("g -> 0 continuity follows the first-order term") {
  // T(z; g, h) - T(z; 0, h) = g z^2 / 2 exp(h z^2 / 2) + O(g^2)
  for (double h : {0.0, 0.1, 0.5, 0.68, 1.0}) {
    for (double g : {1e-8, -1e-8}) {
      for (int i = 0; i <= 60; ++i) {
        const double z = -3 + 0.1 * i;
        const double diff = gh_transform(z, {g, h}) - gh_transform(z, {0, h});
        const double first = g * z * z / 2 * std::exp(h * z * z / 2);
        CHECK(std::abs(diff - first) <= 1e-12 + 1e-7 * std::abs(first));
        if (h <= 0.68) CHECK(std::abs(diff) <= 1e-6);
      }
    }
  }
}
