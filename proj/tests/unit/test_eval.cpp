#include <doctest.h>

#include "gumorph/error.hpp"
#include "gumorph/eval.hpp"

using namespace gumorph;

TEST_CASE("printed percentages are cut to two decimals") {
  CHECK(format_percent(accuracy_from_counts(3614, 4058).accuracy) == "89.05");
  CHECK(format_percent(accuracy_from_counts(1240, 1369).accuracy) == "90.57");
  CHECK(format_percent(accuracy_from_counts(1761, 2025).accuracy) == "86.96");
  CHECK(format_percent(1.0) == "100.00");
  CHECK(format_percent(0.5) == "50.00");
  CHECK_THROWS_AS(accuracy_from_counts(3, 2), PreconditionViolation);
}

TEST_CASE("reported figures are checked against their counts") {
  CHECK(check_reported(3614, 4058, 89.05).consistent);
  CHECK(check_reported(1240, 1369, 90.57).consistent);
  const auto adj = check_reported(645, 669, 97.49);
  CHECK_FALSE(adj.consistent);
  CHECK(adj.truncated == doctest::Approx(96.41));
}

TEST_CASE("segmentation accuracy is whole-word exact match") {
  const std::vector<BoundaryLabeling> gold = {BoundaryLabeling::parse("0010"), BoundaryLabeling::parse("000")};
  const std::vector<BoundaryLabeling> pred = {BoundaryLabeling::parse("0010"), BoundaryLabeling::parse("010")};
  const auto m = seg_accuracy(gold, pred);
  CHECK(m.n_correct == 1);
  CHECK(m.accuracy == 0.5);
  const std::vector<BoundaryLabeling> short_pred = {BoundaryLabeling::parse("0010")};
  CHECK_THROWS_AS(seg_accuracy(gold, short_pred), LengthMismatch);
  const std::vector<BoundaryLabeling> wrong_len = {BoundaryLabeling::parse("0010"), BoundaryLabeling::parse("00")};
  CHECK_THROWS_AS(seg_accuracy(gold, wrong_len), LengthMismatch);
}

TEST_CASE("tagging precision, recall and F1 per class") {
  ClassRegistry reg;
  const auto a = parse_bundle("N;M;SG;NOM");
  const auto b = parse_bundle("N;F;SG;NOM");
  const auto c = parse_bundle("N;N;SG;NOM");
  reg.add(a);
  reg.add(b);
  reg.add(c);
  const std::vector<FeatureBundle> gold = {a, a, b, b};
  const std::vector<FeatureBundle> pred = {a, b, b, c};
  const auto m = tag_metrics(gold, pred, reg);
  CHECK(m.accuracy == 0.5);
  // a: P 1, R 1/2; b: P 1/2, R 1/2; c absent from gold.
  CHECK(m.macro_precision == doctest::Approx(0.75));
  CHECK(m.macro_recall == doctest::Approx(0.5));
  CHECK(m.macro_f1 == doctest::Approx((2.0 / 3.0 + 0.5) / 2.0));
  CHECK(m.f1(Averaging::Micro) == 0.5);
  REQUIRE(m.per_class.size() == 3);
  const std::vector<FeatureBundle> unknown = {parse_bundle("N;M;PL;NOM")};
  const std::vector<FeatureBundle> one = {a};
  CHECK_THROWS_AS(tag_metrics(unknown, one, reg), UnknownBundle);
}

TEST_CASE("comparison report") {
  std::map<Pos, Metrics> neural = {{Pos::Noun, accuracy_from_counts(1240, 1369)},
                                   {Pos::Verb, accuracy_from_counts(1761, 2025)}};
  const auto self = compare_report(neural, neural);
  for (const auto& row : self.rows) {
    CHECK(row.difference == 0.0);
    CHECK(row.sign == 0);
  }
  std::map<Pos, Metrics> base = {{Pos::Noun, accuracy_from_counts(934, 1369)},
                                 {Pos::Verb, accuracy_from_counts(262, 2025)}};
  const auto r = compare_report(neural, base);
  CHECK(r.rows[0].sign == 1);
  CHECK(r.text().find("N\t1369\t90.57\t68.22\t+22.35") != std::string::npos);
  CHECK(r.tsv().find("N\tneural\taccuracy\t0.905771") != std::string::npos);

  std::map<Pos, Metrics> other = {{Pos::Noun, accuracy_from_counts(1, 2)}, {Pos::Verb, accuracy_from_counts(1, 2)}};
  CHECK_THROWS_AS(compare_report(neural, other), MismatchedTestSets);
  std::map<Pos, Metrics> fewer = {{Pos::Noun, accuracy_from_counts(934, 1369)}};
  CHECK_THROWS_AS(compare_report(neural, fewer), MismatchedTestSets);
}
