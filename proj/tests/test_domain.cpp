#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sulfex/domain.hpp"
#include "sulfex/random.hpp"

using namespace sulfex;

namespace {

Mixture mix(std::optional<double> c3a, std::optional<double> wc, std::optional<double> c3s,
            std::optional<double> cc = std::nullopt) {
  Mixture m;
  m.id = "x";
  m.c3a = c3a;
  m.wc = wc;
  m.c3s = c3s;
  m.cement_content = cc;
  return m;
}

Mixture random_mixture(Rng& rng) {
  Mixture m;
  m.id = "r";
  m.wc = rng.uniform(0.3, 0.75);
  m.c3a = rng.uniform(1, 14);
  m.c3s = rng.uniform(20, 65);
  m.c2s = rng.uniform(5, 40);
  m.c4af = rng.uniform(5, 15);
  m.cement_content = rng.uniform(0.52, 0.64);
  m.air = rng.uniform(1, 7);
  return m;
}

}  // namespace

TEST_CASE("shipped bundle holds the published coefficients") {
  const auto b = paper_default_bundle();
  CHECK(b.model(GroupLabel::LL).coefficients == Vector{0.0157, 0.0305});
  CHECK(b.model(GroupLabel::ML).coefficients == Vector{0.0293, 0.000975, 0.0216});
  CHECK(b.model(GroupLabel::HN).coefficients == Vector{11.20, -5.68, -3.66});
  CHECK(b.model(GroupLabel::HN).form == ModelForm::LogLinear);
  CHECK(b.boundary_second->weights() == std::array<double, 2>{1.0, 387.3});
  CHECK(b.boundary_second->bias() == -233.6);
  CHECK(b.boundary_second->feature_names() == std::array<std::string, 2>{"C3S", "WC"});
  CHECK(b.boundary_first->weights() == std::array<double, 2>{1.0, 1.241});
  CHECK(b.boundary_first->bias() == -8.697);
  CHECK(b.boundary_first_simplified->axis_threshold()->second == 8.0);
  CHECK(b.failure_threshold == 0.5);
  CHECK(b.provenance.kind == Provenance::Kind::PaperDefault);
  CHECK_FALSE(b.partial());
  for (GroupLabel g : kAllGroups) {
    const auto& m = b.model(g);
    CHECK(m.coefficients.size() == m.terms.size());
    CHECK((m.form == ModelForm::LogLinear) == (g == GroupLabel::HN));
  }
}

TEST_CASE("classification examples") {
  const auto b = paper_default_bundle();
  CHECK(classify_mixture(mix(9.0, 0.5, 40), b) == GroupLabel::HN);
  auto c = classify_detail(mix(5.1, 0.481, 50), b);
  CHECK(c.group == GroupLabel::ML);
  CHECK(*c.second_value == doctest::Approx(2.6913).epsilon(1e-12));
  c = classify_detail(mix(5.0, 0.45, 55), b);
  CHECK(c.group == GroupLabel::LL);
  CHECK(*c.second_value == doctest::Approx(-4.315).epsilon(1e-12));
  CHECK(classify_mixture(mix(10, 0.5, 40), b, false) == GroupLabel::HN);
  // exactly 8% C3A is not "exceeding 8%"
  CHECK(classify_mixture(mix(8.0, 0.481, 50), b) == GroupLabel::ML);
  // second-boundary value exactly zero goes to ML
  Mixture tie = mix(5, 0.5, 0);
  tie.c3s = 233.6 - 387.3 * 0.5;
  CHECK(classify_detail(tie, b).second_value.value() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(classify_mixture(mix(5, 0.5, std::nullopt), b), doctest::Contains("MissingField"), Error);
  CHECK_THROWS_WITH_AS(classify_mixture(mix(std::nullopt, 0.5, 40), b), doctest::Contains("MissingField"), Error);
}

TEST_CASE("classification is total and reads only C3A, C3S and WC") {
  const auto b = paper_default_bundle();
  Rng rng(6);
  for (int i = 0; i < 2000; ++i) {
    Mixture m = random_mixture(rng);
    const GroupLabel g = classify_mixture(m, b);
    CHECK((g == GroupLabel::HN || g == GroupLabel::ML || g == GroupLabel::LL));
    const bool hn = *m.c3a > 8.0;
    const bool ml = *m.c3s + 387.3 * *m.wc - 233.6 >= 0;
    CHECK(g == (hn ? GroupLabel::HN : ml ? GroupLabel::ML : GroupLabel::LL));
    Mixture other = m;
    other.c2s = rng.uniform(0, 50);
    other.c4af = rng.uniform(0, 20);
    other.cement_content = rng.uniform(0, 1);
    other.air = rng.uniform(0, 10);
    CHECK(classify_mixture(other, b) == g);
  }
}

TEST_CASE("prediction examples") {
  const auto b = paper_default_bundle();
  CHECK(predict_expansion(mix(std::nullopt, 0.49, std::nullopt), GroupLabel::LL, b, 40) ==
        doctest::Approx(0.0157 * 19.6 + 0.0305).epsilon(1e-12));
  CHECK(predict_expansion(mix(5.1, 0.481, std::nullopt), GroupLabel::ML, b, 20) ==
        doctest::Approx(0.402916).epsilon(1e-12));
  CHECK(predict_expansion(mix(std::nullopt, std::nullopt, std::nullopt, 0.589), GroupLabel::HN, b, 5) ==
        doctest::Approx(std::exp(0.924)).epsilon(1e-12));
  CHECK(std::exp(0.924) == doctest::Approx(2.5194).epsilon(1e-4));
  CHECK_THROWS_WITH_AS(predict_expansion(mix(5, 0.5, 40), GroupLabel::LL, b, -1), doctest::Contains("NegativeTime"),
                       Error);
  CHECK_THROWS_WITH_AS(predict_expansion(mix(5, std::nullopt, 40), GroupLabel::LL, b, 1),
                       doctest::Contains("MissingField"), Error);
  CHECK_THROWS_WITH_AS(predict_expansion(mix(5, 0.5, 40), GroupLabel::HN, b, 1), doctest::Contains("MissingField"),
                       Error);
}

TEST_CASE("predicted curves") {
  const auto b = paper_default_bundle();
  const Mixture ll = mix(5.0, 0.49, 40);
  auto c = predict_curve(ll, b, 40, 10);
  CHECK(c.group == GroupLabel::LL);
  const double expect[] = {0.0305, 0.10743, 0.18436, 0.26129, 0.33822};
  REQUIRE(c.series.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(c.series.samples[i].t == 10.0 * i);
    CHECK(c.series.samples[i].exp == doctest::Approx(expect[i]).epsilon(1e-12));
  }
  c = predict_curve(ll, b, 40, 60);
  REQUIRE(c.series.size() == 1);
  CHECK(c.series.samples[0].exp == 0.0305);
  c = predict_curve(ll, b, 1, 0.1);
  CHECK(c.series.size() == 11);
  CHECK_THROWS_AS(predict_curve(ll, b, 40, 0), Error);
  CHECK_THROWS_AS(predict_curve(ll, b, 0, 1), Error);
}

TEST_CASE("failure time examples") {
  const auto b = paper_default_bundle();
  CHECK(predicted_failure_time(mix(5.0, 0.49, 40), b) == doctest::Approx((0.5 - 0.0305) / (0.0157 * 0.49)).epsilon(1e-14));
  CHECK(predicted_failure_time(mix(5.0, 0.49, 40), b) == doctest::Approx(61.03).epsilon(1e-4));
  CHECK(predicted_failure_time(mix(5.1, 0.481, 50), b) == doctest::Approx(25.09).epsilon(1e-3));
  CHECK(predicted_failure_time(mix(9, 0.5, 40, 0.589), b) == doctest::Approx(3.236).epsilon(1e-3));
  CHECK(predicted_failure_time(mix(9, 0.5, 40, 0.589), GroupLabel::HN, b) ==
        doctest::Approx((std::log(0.5) + 3.66) / (11.2 * 0.589 - 5.68)).epsilon(1e-14));
  // HN with a falling log-trend
  CHECK_THROWS_WITH_AS(predicted_failure_time(mix(9, 0.5, 40, 0.5), b), doctest::Contains("NonIncreasing"), Error);
  ModelBundle raised = b;
  raised.failure_threshold = 0.02;
  CHECK_THROWS_WITH_AS(predicted_failure_time(mix(5.0, 0.49, 40), raised), doctest::Contains("AlreadyFailed"), Error);
}

TEST_CASE("inversion and prediction agree") {
  const auto b = paper_default_bundle();
  Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    const Mixture m = random_mixture(rng);
    for (GroupLabel g : kAllGroups) {
      if (g == GroupLabel::HN && 11.2 * *m.cement_content - 5.68 <= 0) continue;
      const double t = predicted_failure_time(m, g, b);
      CHECK(std::abs(predict_expansion(m, g, b, t) - 0.5) <= 1e-9);
    }
  }
}

TEST_CASE("linear groups are affine and HN is log-affine in time") {
  const auto b = paper_default_bundle();
  Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    const Mixture m = random_mixture(rng);
    const double h = rng.uniform(0.1, 3);
    for (GroupLabel g : kAllGroups) {
      double v[5];
      for (int k = 0; k < 5; ++k) v[k] = predict_expansion(m, g, b, k * h);
      for (int k = 1; k < 4; ++k) {
        if (g == GroupLabel::HN) CHECK(std::abs(std::log(v[k + 1]) - 2 * std::log(v[k]) + std::log(v[k - 1])) <= 1e-10);
        else CHECK(std::abs(v[k + 1] - 2 * v[k] + v[k - 1]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("expansion grows with W/C and with C3A") {
  const auto b = paper_default_bundle();
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    Mixture m = random_mixture(rng);
    const double t = rng.uniform(0.5, 40);
    Mixture wetter = m;
    wetter.wc = *m.wc + 0.01;
    CHECK(predict_expansion(wetter, GroupLabel::LL, b, t) > predict_expansion(m, GroupLabel::LL, b, t));
    CHECK(predict_expansion(wetter, GroupLabel::ML, b, t) > predict_expansion(m, GroupLabel::ML, b, t));
    Mixture richer = m;
    richer.c3a = *m.c3a + 0.5;
    CHECK(predict_expansion(richer, GroupLabel::ML, b, t) > predict_expansion(m, GroupLabel::ML, b, t));
  }
}

TEST_CASE("bundle bookkeeping") {
  ModelBundle b = paper_default_bundle();
  b.models[index_of(GroupLabel::HN)].reset();
  CHECK(b.partial());
  CHECK_THROWS_WITH_AS(b.model(GroupLabel::HN), doctest::Contains("EmptyGroup"), Error);
  ModelBundle nob = paper_default_bundle();
  nob.boundary_second.reset();
  CHECK(nob.partial());
  CHECK_THROWS_AS(classify_mixture(mix(5, 0.5, 40), nob), Error);
}

TEST_CASE("mixture fields and ranges") {
  Mixture m;
  m.id = "q";
  CHECK_THROWS_WITH_AS(m.require(MixVar::C3S), doctest::Contains("c3s"), Error);
  m.set(MixVar::CC, 0.5);
  CHECK(*m.get(MixVar::CC) == 0.5);
  CHECK(range_problem(MixVar::WC, 1.5) != "");
  CHECK(range_problem(MixVar::WC, 0.0) != "");
  CHECK(range_problem(MixVar::WC, 1.0) == "");
  CHECK(range_problem(MixVar::CC, 1.2) != "");
  CHECK(range_problem(MixVar::C3A, 101) != "");
  CHECK(*parse_mix_var("cement_content") == MixVar::CC);
  CHECK(*parse_mix_var("c3a") == MixVar::C3A);
  CHECK(*parse_mix_var("AIR") == MixVar::Air);
  CHECK(*parse_group("ml") == GroupLabel::ML);
}
