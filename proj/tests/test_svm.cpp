#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sulfex/random.hpp"
#include "sulfex/svm.hpp"

using namespace sulfex;

namespace {

double oracle_objective(const Matrix& x, const std::vector<int>& y, double c, Vector* where = nullptr) {
  const auto f = [&](const Vector& p) { return oracle::svm_objective(x, y, p[0], p[1], p[2], c); };
  double span = 4;
  for (double v : x.entries()) span = std::max(span, 4 * std::abs(v));
  const Vector best = oracle::grid_minimize(f, {-span, -span, -span}, {span, span, span}, 15, 80, 0.6);
  if (where) *where = best;
  return f(best);
}

}  // namespace

TEST_CASE("boundary construction") {
  CHECK_THROWS_WITH_AS(LinearBoundary({"a", "b"}, {0, 0}, 1, 1), doctest::Contains("InvalidArgument"), Error);
  CHECK_THROWS_AS(LinearBoundary({"a", "b"}, {NAN, 0}, 1, 1), Error);
  const LinearBoundary b({"C3A", "WC"}, {3, 4}, -10, 100);
  CHECK(b.unit_weights()[0] == doctest::Approx(0.6));
  CHECK(b.unit_bias() == doctest::Approx(-2.0));
  CHECK_FALSE(b.axis_threshold());
  const LinearBoundary a({"C3A", "WC"}, {1, 0}, -8, 100);
  REQUIRE(a.axis_threshold());
  CHECK(a.axis_threshold()->first == 0);
  CHECK(a.axis_threshold()->second == 8.0);
}

TEST_CASE("classify examples") {
  const LinearBoundary first({"C3A", "WC"}, {1.0, 1.241}, -8.697, 100);
  const double p1[] = {10, 0.5};
  CHECK(first.decision_value(p1) == doctest::Approx(1.9235).epsilon(1e-12));
  CHECK(svm::classify(first, p1) == 1);
  const LinearBoundary second({"C3S", "WC"}, {1.0, 387.3}, -233.6, 100);
  const double p2[] = {50, 0.481}, p3[] = {55, 0.45};
  CHECK(second.decision_value(p2) == doctest::Approx(2.6913).epsilon(1e-12));
  CHECK(svm::classify(second, p2) == 1);
  CHECK(second.decision_value(p3) == doctest::Approx(-4.315).epsilon(1e-12));
  CHECK(svm::classify(second, p3) == -1);
  const double zero[] = {8, 0};
  CHECK(svm::classify(LinearBoundary({"x", "y"}, {1, 0}, -8, 1), zero) == 1);
}

TEST_CASE("classify ignores positive rescaling") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double w0 = rng.normal(), w1 = rng.normal(), b = rng.normal(), s = rng.uniform(0.01, 100);
    const double p[] = {rng.normal(), rng.normal()};
    CHECK(svm::classify(LinearBoundary({"x", "y"}, {w0, w1}, b, 1), p) ==
          svm::classify(LinearBoundary({"x", "y"}, {s * w0, s * w1}, s * b, 1), p));
  }
}

TEST_CASE("two-point maximum margin") {
  const Matrix x{{-1, 0}, {1, 0}};
  const std::vector<int> y{-1, 1};
  const auto f = svm::train(x, y, {.box_constraint = 1e4});
  CHECK(f.boundary->weights()[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(f.boundary->weights()[1]) < 1e-9);
  CHECK(std::abs(f.boundary->bias()) < 1e-9);
  CHECK(f.certified);
}

TEST_CASE("separable one-dimensional data") {
  const Matrix x{{-3, 0}, {-2, 0}, {-1, 0}, {1, 0}, {2.5, 0}, {4, 0}};
  const std::vector<int> y{-1, -1, -1, 1, 1, 1};
  const auto f = svm::train(x, y, {.box_constraint = 1e4});
  const auto& w = f.boundary->unit_weights();
  CHECK(std::abs(-f.boundary->unit_bias() / w[0]) < 1e-3);
  for (double s : f.slacks) CHECK(s <= 1e-6);
  CHECK(f.boundary->weights()[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inseparable XOR needs slack") {
  const Matrix x{{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  const std::vector<int> y{1, 1, -1, -1};
  const auto f = svm::train(x, y, {.box_constraint = 100});
  double max_slack = 0;
  for (double s : f.slacks) max_slack = std::max(max_slack, s);
  CHECK(max_slack > 0);
  // by symmetry the optimum has no preferred direction
  CHECK(std::hypot(f.weights[0], f.weights[1]) <= 1e-6);
  const double o = oracle_objective(x, y, 100);
  CHECK(std::abs(f.objective - o) <= 1e-3 * std::max(1.0, o));
}

TEST_CASE("slacks are tight and feasible") {
  Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng.below(20);
    Matrix x(n, 2);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, 0) = rng.normal();
      x(i, 1) = rng.normal();
      y[i] = (x(i, 0) + 0.5 * x(i, 1) + 0.5 * rng.normal()) > 0 ? 1 : -1;
    }
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), -1) == 0) continue;
    const auto f = svm::train(x, y, {.box_constraint = std::pow(10.0, rng.uniform(-1, 3))});
    for (std::size_t i = 0; i < n; ++i) {
      const double m = y[i] * f.boundary->decision_value(x.row(i));
      CHECK(f.slacks[i] >= 0);
      CHECK(m >= 1 - f.slacks[i] - 1e-8);
      CHECK(std::abs(f.slacks[i] - std::max(0.0, 1 - m)) <= 1e-8);
    }
  }
}

TEST_CASE("objective is non-decreasing in C") {
  Rng rng(71);
  Matrix x(15, 2);
  std::vector<int> y(15);
  for (std::size_t i = 0; i < 15; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[i] = rng.uniform() < 0.5 ? 1 : -1;
  }
  y[0] = 1;
  y[1] = -1;
  double prev = 0;
  for (double c : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const double o = svm::train(x, y, {.box_constraint = c}).objective;
    CHECK(o >= prev - 1e-9 * std::max(1.0, o));
    prev = o;
  }
}

TEST_CASE("separable data at large C keeps the oracle margin") {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix x(10, 2);
    std::vector<int> y(10);
    const double a = rng.normal(), b = rng.normal();
    for (std::size_t i = 0; i < 10; ++i) {
      double s;
      do {
        x(i, 0) = rng.uniform(-2, 2);
        x(i, 1) = rng.uniform(-2, 2);
        s = a * x(i, 0) + b * x(i, 1);
      } while (std::abs(s) < 0.3 * std::hypot(a, b));
      y[i] = s > 0 ? 1 : -1;
    }
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), -1) == 0) continue;
    const auto f = svm::train(x, y, {.box_constraint = 1e4});
    for (double s : f.slacks) CHECK(s <= 1e-6);
    Vector best;
    oracle_objective(x, y, 1e4, &best);
    const double margin = 2 / std::hypot(f.boundary->weights()[0], f.boundary->weights()[1]);
    const double oracle_margin = 2 / std::hypot(best[0], best[1]);
    CHECK(std::abs(margin - oracle_margin) <= 1e-3 * std::max(1.0, oracle_margin));
  }
}

TEST_CASE("standardised training maps back to raw units") {
  Rng rng(3);
  Matrix x(30, 2);
  std::vector<int> y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    x(i, 0) = rng.uniform(2, 13);
    x(i, 1) = rng.uniform(0.35, 0.7);
    y[i] = x(i, 0) + 1.2 * x(i, 1) - 8.7 > 0 ? 1 : -1;
  }
  const auto f = svm::train(x, y, {.box_constraint = 100, .standardize = true, .feature_names = {"C3A", "WC"}});
  CHECK(f.boundary->feature_names()[0] == "C3A");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < 30; ++i) correct += svm::classify(*f.boundary, x.row(i)) == y[i];
  CHECK(correct >= 28);
}

TEST_CASE("training errors") {
  CHECK_THROWS_WITH_AS(svm::train(Matrix{{0, 0}, {1, 1}}, std::vector<int>{1, 1}), doctest::Contains("SingleClass"),
                       Error);
  CHECK_THROWS_AS(svm::train(Matrix{{0, 0}, {1, 1}}, std::vector<int>{1, 0}), Error);
  CHECK_THROWS_AS(svm::train(Matrix{{0, 0}, {1, 1}}, std::vector<int>{1, -1}, {.box_constraint = 0}), Error);
  CHECK_THROWS_AS(svm::train(Matrix{{0}, {1}}, std::vector<int>{1, -1}), Error);
  CHECK_THROWS_AS(svm::train(Matrix{{0, 0}, {1, 1}}, std::vector<int>{1}), Error);
}

TEST_CASE("axis-parallel simplification") {
  // clean split at feature 0 = 3 with a gap from 2 to 4
  const Matrix x{{0, 0.5}, {1, 0.1}, {2, 0.9}, {4, 0.3}, {5, 0.7}, {6, 0.2}};
  const std::vector<int> y{-1, -1, -1, 1, 1, 1};
  const LinearBoundary slanted({"C3A", "WC"}, {1.0, 0.4}, -3.2, 100);
  const auto s = svm::simplify_axis_parallel(slanted, x, y);
  REQUIRE(s.axis_threshold());
  CHECK(s.axis_threshold()->first == 0);
  CHECK(std::abs(s.axis_threshold()->second - 3.0) <= 1.0);
  CHECK(s.feature_names() == slanted.feature_names());

  const LinearBoundary already({"C3A", "WC"}, {1.0, 0.0}, -3, 100);
  CHECK(svm::simplify_axis_parallel(already, x, y) == already);
}

TEST_CASE("simplifying the shipped first boundary lands near C3A = 8") {
  // mixtures spread over typical cement ranges, labelled by the slanted line
  Rng rng(2);
  Matrix x(200, 2);
  std::vector<int> y(200);
  const LinearBoundary first({"C3A", "WC"}, {1.0, 1.241}, -8.697, 100);
  for (std::size_t i = 0; i < 200; ++i) {
    x(i, 0) = rng.uniform(2, 13);
    x(i, 1) = rng.uniform(0.35, 0.7);
    y[i] = svm::classify(first, x.row(i));
  }
  const auto s = svm::simplify_axis_parallel(first, x, y);
  REQUIRE(s.axis_threshold());
  CHECK(s.axis_threshold()->first == 0);
  CHECK(std::abs(s.axis_threshold()->second - 8.0) < 0.2);
}
