#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ordscore/error.hpp"
#include "ordscore/factor.hpp"
#include "ordscore/model.hpp"

using namespace ordscore;

TEST_CASE("integer scores are 1..K") {
  CHECK(integer_scores(3).vector() == std::vector<double>{1, 2, 3});
  CHECK(integer_scores(5).vector() == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(integer_scores(2).vector() == std::vector<double>{1, 2});
  OrderedFactor f("q", {"low", "mid", "high"}, {1, 3});
  CHECK(integer_scores(f).vector() == std::vector<double>{1, 2, 3});
}

TEST_CASE("ordered factor invariants") {
  CHECK_THROWS_AS(OrderedFactor("q", {"only"}, {1}), Error);
  CHECK_THROWS_AS(OrderedFactor("q", {"a", "a"}, {1}), Error);
  CHECK_THROWS_AS(OrderedFactor("q", {"a", "b"}, {0}), Error);
  CHECK_THROWS_AS(OrderedFactor("q", {"a", "b"}, {3}), Error);
  // level order is kept as given
  OrderedFactor f("quality", {"very poor", "poor", "fair"}, {2});
  CHECK(f.levels().front() == "very poor");
}

TEST_CASE("polynomial contrasts match Gram-Schmidt") {
  SUBCASE("K=3") {
    const auto c = polynomial_contrasts(3, 2);
    const double r2 = 1 / std::sqrt(2.0), r6 = 1 / std::sqrt(6.0);
    CHECK(c(0, 0) == doctest::Approx(-r2).epsilon(1e-14));
    CHECK(c(1, 0) == doctest::Approx(0).epsilon(1e-14));
    CHECK(c(2, 0) == doctest::Approx(r2).epsilon(1e-14));
    CHECK(c(0, 1) == doctest::Approx(r6).epsilon(1e-14));
    CHECK(c(1, 1) == doctest::Approx(-2 * r6).epsilon(1e-14));
    CHECK(c(2, 1) == doctest::Approx(r6).epsilon(1e-14));
  }
  SUBCASE("K=2") {
    const auto c = polynomial_contrasts(2, 1);
    CHECK(c(0, 0) == doctest::Approx(-1 / std::sqrt(2.0)));
    CHECK(c(1, 0) == doctest::Approx(1 / std::sqrt(2.0)));
  }
  for (int k = 2; k <= 9; ++k) {
    const auto c = polynomial_contrasts(k, k - 1);
    const auto ref = oracle::gram_schmidt_contrasts(k, k - 1);
    for (int d = 0; d < k - 1; ++d) {
      CHECK(std::abs(c.col(d).sum()) < 1e-12);
      CHECK(c.col(d).norm() == doctest::Approx(1.0).epsilon(1e-12));
      for (int e = 0; e < d; ++e) CHECK(std::abs(c.col(d).dot(c.col(e))) < 1e-12);
      for (int i = 0; i < k; ++i)
        CHECK(c(i, d) == doctest::Approx(ref[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)]).epsilon(1e-9));
    }
  }
  CHECK(contrast_suffix(1) == ".L");
  CHECK(contrast_suffix(4) == "^4");
}

TEST_CASE("polynomial contrasts reject bad degrees") {
  try {
    polynomial_contrasts(4, 4);
    FAIL("expected InvalidDegree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDegree);
  }
  CHECK_THROWS_AS(polynomial_contrasts(4, 0), Error);
}

TEST_CASE("expand_scores looks up per observation") {
  OrderedFactor f("f", {"a", "b", "c"}, {1, 3, 2});
  const std::vector<double> s{1, 2, 3};
  auto x = expand_scores(f, s);
  CHECK(x[0] == 1);
  CHECK(x[1] == 3);
  CHECK(x[2] == 2);

  OrderedFactor g("g", {"a", "b"}, {2, 2});
  const std::vector<double> s2{0, 5};
  x = expand_scores(g, s2);
  CHECK(x[0] == 5);
  CHECK(x[1] == 5);

  OrderedFactor h("h", {"a", "b", "c"}, {1, 1, 1, 1});
  const std::vector<double> s3{-0.5, 2, 7};
  CHECK((expand_scores(h, s3).array() == -0.5).all());
  CHECK_THROWS(expand_scores(h, std::vector<double>{1, 2}));
}

TEST_CASE("expand_scores is affine-equivariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_int_distribution<int> lvl(1, 6);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> codes(40);
    for (auto& c : codes) c = lvl(rng);
    OrderedFactor f("f", {"1", "2", "3", "4", "5", "6"}, codes);
    std::vector<double> s(6), t(6);
    const double a = u(rng), b = u(rng);
    for (int k = 0; k < 6; ++k) {
      s[static_cast<std::size_t>(k)] = u(rng);
      t[static_cast<std::size_t>(k)] = a + b * s[static_cast<std::size_t>(k)];
    }
    const auto xs = expand_scores(f, s);
    const auto xt = expand_scores(f, t);
    CHECK(((xt.array() - (a + b * xs.array())).abs() < 1e-12).all());
  }
}

TEST_CASE("full-degree contrasts span the one-hot column space") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0, 1);
  for (int k = 3; k <= 7; ++k) {
    std::uniform_int_distribution<int> lvl(1, k);
    const int n = 60;
    std::vector<int> codes(n);
    for (int i = 0; i < n; ++i) codes[static_cast<std::size_t>(i)] = i < k ? i + 1 : lvl(rng);
    OrderedFactor f("f", [k] {
      std::vector<std::string> l;
      for (int i = 0; i < k; ++i) l.push_back(std::to_string(i));
      return l;
    }(), codes);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = z(rng) + 0.3 * codes[static_cast<std::size_t>(i)];

    Design poly;
    poly.matrix.resize(n, k);
    poly.matrix.col(0).setOnes();
    poly.matrix.rightCols(k - 1) = expand_rows(f, polynomial_contrasts(k, k - 1));
    poly.names.assign(static_cast<std::size_t>(k), "c");

    Design dummy;
    dummy.matrix = Eigen::MatrixXd::Zero(n, k);
    for (int i = 0; i < n; ++i) dummy.matrix(i, codes[static_cast<std::size_t>(i)] - 1) = 1.0;
    dummy.names.assign(static_cast<std::size_t>(k), "d");

    const double a = fit_ols(poly, y).criterion;
    const double b = fit_ols(dummy, y).criterion;
    CHECK(std::abs(a - b) <= 1e-8 * b);
  }
}
