#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "sulfex/random.hpp"
#include "sulfex/regression.hpp"

using namespace sulfex;

namespace {

double normal_residual(const Matrix& x, const Vector& y, const Vector& beta) {
  Vector r(y);
  const Vector yhat = num::matvec(x, beta);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= yhat[i];
  return num::norm_inf(num::transpose_matvec(x, r));
}

MixtureRecord panel_record(const std::string& id, Mixture m, GroupLabel g, const std::vector<double>& coef) {
  MixtureRecord r;
  m.id = id;
  r.mixture = m;
  r.series.mixture_id = id;
  for (int t = 0; t <= 40; ++t) {
    double v = 0;
    if (g == GroupLabel::LL) v = coef[0] * *m.wc * t + coef[1];
    if (g == GroupLabel::ML) v = coef[0] * *m.wc * t + coef[1] * *m.c3a * t + coef[2];
    if (g == GroupLabel::HN) v = std::exp(coef[0] * *m.cement_content * t + coef[1] * t + coef[2]);
    r.series.samples.push_back({static_cast<double>(t), v});
  }
  return r;
}

}  // namespace

TEST_CASE("exact affine data") {
  const Matrix x{{0, 1}, {1, 1}, {2, 1}};
  const Vector y{1, 3, 5};
  const auto f = ols::fit(x, y);
  CHECK(f.coefficients[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.coefficients[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.r_squared == 1.0);
  CHECK(f.n_observations == 3);
  const auto p = ols::predict(f, Matrix{{3, 1}});
  CHECK(p[0] == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(ols::predict(f, Matrix(0, 2)).empty());
  CHECK_THROWS_AS(ols::predict(f, Matrix{{1, 2, 3}}), Error);
}

TEST_CASE("noiseless recovery") {
  Rng rng(5);
  Matrix x(50, 3);
  for (std::size_t i = 0; i < 50; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    x(i, 2) = 1.0;
  }
  const Vector beta{1.5, -0.25, 3.0};
  const Vector y = num::matvec(x, beta);
  const auto f = ols::fit(x, y);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(f.coefficients[j] - beta[j]) < 1e-9);
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("null relationship") {
  // x is symmetric about its mean and y is even in it: zero covariance
  const Matrix x{{-2, 1}, {-1, 1}, {0, 1}, {1, 1}, {2, 1}};
  const Vector y{4, 1, 0, 1, 4};
  const auto f = ols::fit(x, y);
  CHECK(std::abs(f.coefficients[0]) < 1e-14);
  CHECK(f.coefficients[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(f.r_squared) < 1e-14);
}

TEST_CASE("errors") {
  CHECK_THROWS_WITH_AS(ols::fit(Matrix{{1, 1}, {2, 1}}, Vector{1, 2}), doctest::Contains("TooFewRows"), Error);
  CHECK_THROWS_WITH_AS(ols::fit(Matrix{{1, 2}, {2, 4}, {3, 6}}, Vector{1, 2, 4}), doctest::Contains("RankDeficient"),
                       Error);
  CHECK_THROWS_WITH_AS(ols::fit(Matrix{{1, 0}, {2, 0}, {3, 0}}, Vector{1, 2, 4}), doctest::Contains("RankDeficient"),
                       Error);
  CHECK_THROWS_AS(ols::fit(Matrix{{1, 1}, {2, 1}, {3, 1}}, Vector{1, 2}), Error);
  // constant response: exact fit is R2 = 1; an unreproducible constant is an error
  const auto c = ols::fit(Matrix{{1, 1}, {2, 1}, {3, 1}}, Vector{4, 4, 4});
  CHECK(c.r_squared == 1.0);
  CHECK_THROWS_WITH_AS(ols::fit(Matrix{{1}, {2}, {3}}, Vector{4, 4, 4}), doctest::Contains("ConstantResponse"), Error);
}

TEST_CASE("t statistics follow the classical formula") {
  Rng rng(17);
  Matrix x(30, 2);
  Vector y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    x(i, 0) = i;
    x(i, 1) = 1;
    y[i] = 0.5 * i + 2 + rng.normal();
  }
  const auto f = ols::fit(x, y);
  // closed form for simple regression
  double sx = 0, sxx = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    sx += i;
    sxx += double(i) * i;
  }
  const double sxx_c = sxx - sx * sx / 30;
  const double s2 = f.residual_std * f.residual_std;
  CHECK(f.t_statistics[0] == doctest::Approx(f.coefficients[0] / std::sqrt(s2 / sxx_c)).epsilon(1e-10));
  CHECK(f.t_statistics[1] == doctest::Approx(f.coefficients[1] / std::sqrt(s2 * sxx / 30 / sxx_c)).epsilon(1e-10));
}

TEST_CASE("randomised fits satisfy the normal equations and R2 decomposition") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 1 + rng.below(5), n = p + 2 + rng.below(40);
    Matrix x(n, p + 1);
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) x(i, j) = rng.normal() * std::pow(10.0, rng.uniform(-2, 2));
      x(i, p) = 1.0;
      y[i] = rng.normal() * 3;
    }
    const auto f = ols::fit(x, y);
    const Vector xty = num::transpose_matvec(x, y);
    CHECK(normal_residual(x, y, f.coefficients) <= 1e-8 * (1 + num::norm_inf(xty)));
    const Vector yhat = ols::predict(f, x);
    double mean = 0;
    for (double v : y) mean += v;
    mean /= n;
    double ess = 0, rss = 0, tss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ess += (yhat[i] - mean) * (yhat[i] - mean);
      rss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
      tss += (y[i] - mean) * (y[i] - mean);
    }
    CHECK(std::abs(ess + rss - tss) <= 1e-6 * tss);
    CHECK(f.r_squared >= 0.0);
    CHECK(f.r_squared <= 1 + 1e-12);
  }
}

TEST_CASE("adding a noise regressor never lowers R2") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix a(40, 2), b(40, 3);
    Vector y(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a(i, 0) = b(i, 0) = rng.normal();
      a(i, 1) = b(i, 2) = 1;
      b(i, 1) = rng.normal();
      y[i] = a(i, 0) + rng.normal();
    }
    CHECK(ols::fit(b, y).r_squared >= ols::fit(a, y).r_squared - 1e-12);
  }
}

TEST_CASE("matches a grid-refinement minimiser on two coefficients") {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(15, 2);
    Vector y(15);
    const double a = rng.uniform(-3, 3), c = rng.uniform(-3, 3);
    for (std::size_t i = 0; i < 15; ++i) {
      x(i, 0) = rng.uniform(-2, 2);
      x(i, 1) = 1;
      y[i] = a * x(i, 0) + c + 0.3 * rng.normal();
    }
    const auto f = ols::fit(x, y);
    const auto best = oracle::grid_minimize([&](const Vector& b) { return oracle::sum_squares(x, y, b); },
                                            {-10, -10}, {10, 10}, 21, 40, 0.5);
    CHECK(std::abs(f.coefficients[0] - best[0]) <= 1e-4);
    CHECK(std::abs(f.coefficients[1] - best[1]) <= 1e-4);
  }
}

TEST_CASE("terms and forms") {
  CHECK(Term::var_time(MixVar::WC).name() == "WC*T");
  CHECK(Term::var_time(MixVar::CC).name() == "CC*T");
  CHECK(Term::time().name() == "T");
  CHECK(Term::constant().name() == "1");
  for (const auto& t : {Term::var_time(MixVar::C3A), Term::time(), Term::constant()}) CHECK(*Term::parse(t.name()) == t);
  CHECK_FALSE(Term::parse("Q*T"));
  CHECK(default_form(GroupLabel::HN) == ModelForm::LogLinear);
  CHECK(default_form(GroupLabel::ML) == ModelForm::Linear);
  CHECK(*parse_model_form("log-linear") == ModelForm::LogLinear);
  CHECK(default_terms(GroupLabel::ML) ==
        std::vector<Term>{Term::var_time(MixVar::WC), Term::var_time(MixVar::C3A), Term::constant()});
}

TEST_CASE("group models recover generating coefficients") {
  Rng rng(3);
  std::vector<MixtureRecord> ll, ml, hn;
  for (int i = 0; i < 5; ++i) {
    Mixture m;
    m.wc = rng.uniform(0.35, 0.7);
    m.c3a = rng.uniform(2, 12);
    m.cement_content = rng.uniform(0.5, 0.65);
    ll.push_back(panel_record("L" + std::to_string(i), m, GroupLabel::LL, {0.0157, 0.0305}));
    ml.push_back(panel_record("M" + std::to_string(i), m, GroupLabel::ML, {0.0293, 0.000975, 0.0216}));
    hn.push_back(panel_record("H" + std::to_string(i), m, GroupLabel::HN, {11.20, -5.68, -3.66}));
  }
  auto f = fit_group_model(ll, GroupLabel::LL);
  CHECK(std::abs(f.model.coefficients[0] - 0.0157) < 1e-9);
  CHECK(std::abs(f.model.coefficients[1] - 0.0305) < 1e-9);
  CHECK(f.model.fit->r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.model.fit->n_observations == 5 * 41);

  f = fit_group_model(ml, GroupLabel::ML);
  CHECK(std::abs(f.model.coefficients[0] - 0.0293) < 1e-9);
  CHECK(std::abs(f.model.coefficients[1] - 0.000975) < 1e-9);
  CHECK(std::abs(f.model.coefficients[2] - 0.0216) < 1e-9);

  f = fit_group_model(hn, GroupLabel::HN);
  CHECK(f.model.form == ModelForm::LogLinear);
  CHECK(std::abs(f.model.coefficients[0] - 11.20) < 1e-6);
  CHECK(std::abs(f.model.coefficients[1] + 5.68) < 1e-6);
  CHECK(std::abs(f.model.coefficients[2] + 3.66) < 1e-6);
  CHECK(f.dropped_nonpositive == 0);
}

TEST_CASE("log-linear fits drop non-positive samples") {
  std::vector<MixtureRecord> hn;
  for (int i = 0; i < 3; ++i) {
    Mixture m;
    m.cement_content = 0.55 + 0.03 * i;
    hn.push_back(panel_record("H" + std::to_string(i), m, GroupLabel::HN, {11.20, -5.68, -3.66}));
  }
  hn[0].series.samples[0].exp = 0.0;
  hn[1].series.samples[3].exp = -0.01;
  const auto f = fit_group_model(hn, GroupLabel::HN);
  CHECK(f.dropped_nonpositive == 2);
  CHECK(f.model.fit->n_observations == 3 * 41 - 2);
}

TEST_CASE("group fit preconditions") {
  Mixture m;
  m.wc = 0.5;
  const auto r = panel_record("a", m, GroupLabel::LL, {0.0157, 0.0305});
  std::vector<MixtureRecord> one{r};
  CHECK_THROWS_WITH_AS(fit_group_model(one, GroupLabel::LL), doctest::Contains("EmptyGroup"), Error);
  std::vector<MixtureRecord> two{r, r};
  two[1].mixture.wc.reset();
  CHECK_THROWS_WITH_AS(fit_group_model(two, GroupLabel::LL), doctest::Contains("MissingField"), Error);
}

TEST_CASE("affine response of a group model") {
  GroupModel m;
  m.group = GroupLabel::HN;
  m.form = ModelForm::LogLinear;
  m.terms = default_terms(GroupLabel::HN);
  m.coefficients = {11.2, -5.68, -3.66};
  Mixture mix;
  mix.cement_content = 0.589;
  const auto r = affine_response(m, mix);
  CHECK(r.intercept == -3.66);
  CHECK(r.rate == doctest::Approx(11.2 * 0.589 - 5.68).epsilon(1e-15));
}
