#include "doctest.h"

#include "pho/errors.hpp"
#include "pho/predictor.hpp"
#include "pho/rng.hpp"

#include <cmath>

using namespace pho;

TEST_CASE("exact-line inputs recover coefficients exactly") {
  const auto predictor = fit_early_predictor({{0, 1}, {1, 3}, {2, 5}});
  CHECK(predictor.slope == 2.0);
  CHECK(predictor.intercept == 1.0);
  CHECK(predictor.pearson_r == 1.0);
  CHECK(predictor.sample_count == 3);
  CHECK_FALSE(predictor.degenerate);
}

TEST_CASE("zero early variance yields a degenerate fit") {
  const auto predictor = fit_early_predictor({{0.5, 0.1}, {0.5, 0.9}, {0.5, 0.4}});
  CHECK(predictor.degenerate);
  CHECK_THROWS_AS(predict(predictor, 0.5), ValidationError);
}

TEST_CASE("fit needs at least two pairs") {
  CHECK_THROWS_AS(fit_early_predictor({}), ValidationError);
  CHECK_THROWS_AS(fit_early_predictor({{0.1, 0.2}}), ValidationError);
}

TEST_CASE("reference fitted line evaluates as fixed") {
  // fixture coefficients used by the report formatting tests
  EarlyPredictor line;
  line.slope = 0.17746344745827727;
  line.intercept = 0.7167788206986645;
  line.pearson_r = 0.55;
  line.sample_count = 5;
  CHECK(predict(line, 0.80) == doctest::Approx(0.8587495786652863).epsilon(1e-12));
}

TEST_CASE("predict basics") {
  EarlyPredictor predictor;
  predictor.slope = 2.0;
  predictor.intercept = 1.0;
  predictor.sample_count = 2;
  CHECK(predict(predictor, 0.5) == 2.0);

  predictor.slope = 0.0;
  predictor.intercept = 0.25;
  CHECK(predict(predictor, 0.1) == 0.25);
  CHECK(predict(predictor, 0.9) == 0.25);
}

TEST_CASE("pearson correlation") {
  CHECK(pearson({{0, 0}, {1, 1}, {2, 2}}) == doctest::Approx(1.0));
  CHECK(pearson({{0, 0}, {1, 1}, {2, 0}, {3, 1}}) ==
        doctest::Approx(0.4472135955).epsilon(1e-9));

  SUBCASE("negating the second coordinate flips the sign") {
    Rng rng(3);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 20; ++i) {
      pairs.emplace_back(rng.uniform01(), rng.uniform01());
    }
    const double r = pearson(pairs);
    for (auto &[x, y] : pairs) {
      y = -y;
    }
    CHECK(pearson(pairs) == doctest::Approx(-r).epsilon(1e-12));
  }
  SUBCASE("zero variance is an error") {
    CHECK_THROWS_AS(pearson({{1, 0}, {1, 1}}), ValidationError);
    CHECK_THROWS_AS(pearson({{0, 1}, {1, 1}}), ValidationError);
  }
}

TEST_CASE("fit matches the closed-form normal equations on random data") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pairs;
    const std::size_t n = 2 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      pairs.emplace_back(rng.normal(0.5, 0.3), rng.normal(0.7, 0.2));
    }
    // normal equations solved by Cramer's rule in long double
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &[x, y] : pairs) {
      sx += x;
      sy += y;
      sxx += static_cast<long double>(x) * x;
      sxy += static_cast<long double>(x) * y;
    }
    const long double count = static_cast<long double>(n);
    const long double det = count * sxx - sx * sx;
    if (std::fabs(static_cast<double>(det)) < 1e-12) {
      continue;
    }
    const double slope = static_cast<double>((count * sxy - sx * sy) / det);
    const double intercept = static_cast<double>((sxx * sy - sx * sxy) / det);

    const auto predictor = fit_early_predictor(pairs);
    CHECK(predictor.slope == doctest::Approx(slope).epsilon(1e-10));
    CHECK(predictor.intercept == doctest::Approx(intercept).epsilon(1e-10));
  }
}

TEST_CASE("fit on noiseless linear data recovers the generator") {
  Rng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.normal(0.0, 2.0);
    const double b = rng.normal(0.0, 1.0);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 10; ++i) {
      const double x = rng.uniform01();
      pairs.emplace_back(x, a * x + b);
    }
    const auto predictor = fit_early_predictor(pairs);
    CHECK(predictor.slope == doctest::Approx(a).epsilon(1e-10));
    CHECK(predictor.intercept == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("fit residuals sum to zero and are uncorrelated with inputs") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> pairs;
    const std::size_t n = 3 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) {
      pairs.emplace_back(rng.uniform01(), rng.uniform01());
    }
    const auto predictor = fit_early_predictor(pairs);
    if (predictor.degenerate) {
      continue;
    }
    double residual_sum = 0.0;
    double dot = 0.0;
    for (const auto &[x, y] : pairs) {
      const double r = y - predict(predictor, x);
      residual_sum += r;
      dot += r * x;
    }
    CHECK(std::fabs(residual_sum) <= 1e-9 * static_cast<double>(n));
    CHECK(std::fabs(dot) <= 1e-9 * static_cast<double>(n));
  }
}

TEST_CASE("ranking by prediction equals ranking by early metric when slope > 0") {
  const auto predictor = fit_early_predictor({{0.1, 0.3}, {0.4, 0.5}, {0.8, 0.9}});
  REQUIRE(predictor.slope > 0.0);
  double previous = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double early = static_cast<double>(i) / 100.0;
    const double predicted = predict(predictor, early);
    CHECK(predicted > previous);
    previous = predicted;
  }
}
