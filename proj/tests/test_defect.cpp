#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coderev/defect.hpp"
#include "support/decision_table.hpp"

using namespace coderev;

TEST_CASE("narrative score mapping") {
  CHECK(narrative_score(SentimentLabel::Negative) == -1);
  CHECK(narrative_score(SentimentLabel::Positive) == 1);
  CHECK(narrative_score(SentimentLabel::Neutral) == 300);
}

TEST_CASE("estimate_post spot checks") {
  const DefectThresholds t;
  // high-score question: defective regardless of narrative
  CHECK(estimate_post(PostType::Question, 5, SentimentLabel::Positive, t) == -1);
  // high-score answer with a negative narrative: min step keeps -1
  CHECK(estimate_post(PostType::Answer, 3, SentimentLabel::Negative, t) == -1);
  // low-score answer with a neutral narrative: min(-1, 300) = -1
  CHECK(estimate_post(PostType::Answer, 0, SentimentLabel::Neutral, t) == -1);
  // low-score question with a neutral narrative: unpredictable
  CHECK(estimate_post(PostType::Question, 0, SentimentLabel::Neutral, t) == 300);
}

TEST_CASE("full decision table (30 cases)") {
  const DefectThresholds t;
  for (const auto& c : testsupport::decision_table()) {
    CAPTURE(post_type_name(c.type));
    CAPTURE(c.score);
    CAPTURE(sentiment_label_name(c.narrative));
    CHECK(estimate_post(c.type, c.score, c.narrative, t) == c.expected);
  }
}

TEST_CASE("estimate never leaves the score set") {
  const DefectThresholds t;
  for (PostType type : {PostType::Question, PostType::Answer}) {
    for (int score = -10; score <= 10; ++score) {
      for (SentimentLabel label : {SentimentLabel::Positive,
                                   SentimentLabel::Negative,
                                   SentimentLabel::Neutral}) {
        const int delta = estimate_post(type, score, label, t);
        CHECK((delta == -1 || delta == 1 || delta == 300));
      }
    }
  }
}

TEST_CASE("answers: positive -> negative narrative never raises the score") {
  const DefectThresholds t;
  for (int score = -5; score <= 5; ++score) {
    const int with_pos = estimate_post(PostType::Answer, score, SentimentLabel::Positive, t);
    const int with_neg = estimate_post(PostType::Answer, score, SentimentLabel::Negative, t);
    CHECK(with_neg <= with_pos);
  }
}

TEST_CASE("high-score questions ignore sentiment") {
  const DefectThresholds t;
  for (double score : {1.5, 2.0, 100.0}) {
    CHECK(estimate_post(PostType::Question, score, SentimentLabel::Positive, t) == -1);
    CHECK(estimate_post(PostType::Question, score, SentimentLabel::Negative, t) == -1);
    CHECK(estimate_post(PostType::Question, score, SentimentLabel::Neutral, t) == -1);
  }
}

TEST_CASE("thresholds are strict comparisons and overridable") {
  // score == threshold goes to the low branch
  CHECK(estimate_post(PostType::Question, 1.0, SentimentLabel::Neutral, {1.0, 1.9}) == 300);
  CHECK(estimate_post(PostType::Answer, 1.9, SentimentLabel::Positive, {1.0, 1.9}) == -1);
  // custom thresholds move the cut
  CHECK(estimate_post(PostType::Question, 5, SentimentLabel::Neutral, {10.0, 1.9}) == 300);
  CHECK(estimate_post(PostType::Answer, 5, SentimentLabel::Positive, {1.0, 4.9}) == 1);
}

TEST_CASE("label mapping and validation") {
  CHECK(defect_label(-1) == DefectLabel::LikelyDefective);
  CHECK(defect_label(1) == DefectLabel::UnlikelyDefective);
  CHECK(defect_label(300) == DefectLabel::Unpredictable);
  CHECK_THROWS_AS(defect_label(0), std::invalid_argument);
  CHECK_THROWS_AS(defect_label(2), std::invalid_argument);
}

TEST_CASE("estimate_post over narrative text runs the sentiment pipeline") {
  SoPost post;
  post.type = PostType::Answer;
  post.score = 5;
  CHECK(estimate_post(post, "this fix works great thanks") == 1);
  CHECK(estimate_post(post, "still crashes with an error, broken") == -1);
}

TEST_CASE("threshold statistics per language and post type") {
  std::vector<SoPost> posts;
  for (int score : {0, 2, 4}) {
    SoPost p;
    p.post_id = score;
    p.type = PostType::Question;
    p.score = score;
    p.tags = {"java"};
    posts.push_back(p);
  }
  SoPost ans;
  ans.post_id = 100;
  ans.type = PostType::Answer;
  ans.score = 10;
  ans.tags = {"java"};
  posts.push_back(ans);
  SoPost untagged;
  untagged.post_id = 101;
  untagged.score = 99;
  posts.push_back(untagged);  // no language: excluded

  const auto stats = threshold_stats(posts);
  const auto& q = stats.at({Language::Java, PostType::Question});
  CHECK(q.count == 3);
  CHECK(q.min == 0);
  CHECK(q.max == 4);
  CHECK(q.avg == doctest::Approx(2.0));
  CHECK(q.stddev == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK(stats.at({Language::Java, PostType::Answer}).count == 1);
  CHECK(stats.size() == 2);
}
