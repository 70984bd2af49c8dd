#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "coderev/metrics.hpp"
#include "coderev/pv_math.hpp"

using namespace coderev;

TEST_CASE("all correct predictions") {
  const std::vector<std::pair<bool, bool>> pairs{{true, true}, {false, false},
                                                 {true, true}};
  const MetricsResult r = compute_metrics(pairs);
  CHECK(r.accuracy == 1.0);
  REQUIRE(r.precision);
  REQUIRE(r.recall);
  REQUIRE(r.f1);
  CHECK(*r.precision == 1.0);
  CHECK(*r.recall == 1.0);
  CHECK(*r.f1 == 1.0);
}

TEST_CASE("tp=2 fp=1 fn=1 gives two-thirds across the board") {
  const std::vector<std::pair<bool, bool>> pairs{
      {true, true}, {true, true}, {true, false}, {false, true}};
  const MetricsResult r = compute_metrics(pairs);
  CHECK(r.tp == 2);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  CHECK(*r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(*r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(*r.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.accuracy == doctest::Approx(0.5));
}

TEST_CASE("no predicted positives leaves precision undefined") {
  const std::vector<std::pair<bool, bool>> pairs{{false, true}, {false, false}};
  const MetricsResult r = compute_metrics(pairs);
  CHECK(!r.precision);
  CHECK(!r.f1);
  REQUIRE(r.recall);
  CHECK(*r.recall == 0.0);
}

TEST_CASE("no actual positives leaves recall undefined") {
  const std::vector<std::pair<bool, bool>> pairs{{true, false}, {false, false}};
  const MetricsResult r = compute_metrics(pairs);
  CHECK(!r.recall);
  CHECK(!r.f1);
  REQUIRE(r.precision);
  CHECK(*r.precision == 0.0);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(compute_metrics(std::vector<std::pair<bool, bool>>{}),
                  std::invalid_argument);
}

TEST_CASE("metrics stay in range and f1 sits between precision and recall") {
  pvmath::SplitMix64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<bool, bool>> pairs;
    const std::size_t n = 1 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i)
      pairs.emplace_back(rng.below(2) == 0, rng.below(2) == 0);
    const MetricsResult r = compute_metrics(pairs);
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
    if (r.precision) {
      CHECK(*r.precision >= 0.0);
      CHECK(*r.precision <= 1.0);
    }
    if (r.recall) {
      CHECK(*r.recall >= 0.0);
      CHECK(*r.recall <= 1.0);
    }
    if (r.f1) {
      CHECK(*r.f1 <= std::max(*r.precision, *r.recall) + 1e-12);
      CHECK(*r.f1 >= std::min(*r.precision, *r.recall) - 1e-12);
    }
  }
}

TEST_CASE("unpredictable labels are excluded and counted") {
  const std::vector<LabeledPair> pairs{
      {DefectLabel::LikelyDefective, DefectLabel::LikelyDefective},
      {DefectLabel::Unpredictable, DefectLabel::LikelyDefective},
      {DefectLabel::UnlikelyDefective, DefectLabel::Unpredictable},
      {DefectLabel::UnlikelyDefective, DefectLabel::UnlikelyDefective},
  };
  const MetricsSummary summary = compute_metrics(pairs);
  CHECK(summary.excluded_unpredictable == 2);
  CHECK(summary.metrics.total == 2);
  CHECK(summary.metrics.accuracy == 1.0);
}
