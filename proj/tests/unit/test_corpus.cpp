#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gumorph/corpus.hpp"
#include "gumorph/error.hpp"
#include "support.hpp"

using namespace gumorph;
using test::U;

TEST_CASE("gold boundary is the longest-common-prefix cut") {
  const auto b = derive_boundary(U("સવારે"), U("સવાર"));
  CHECK(b.str() == "00010");
  const auto morphs = decode_segmentation(U("સવારે"), b);
  REQUIRE(morphs.size() == 2);
  CHECK(to_utf8(morphs[0]) == "સવાર");
  CHECK(to_utf8(morphs[1]) == "ે");

  CHECK(derive_boundary(U"abc", U"abc").str() == "000");
  CHECK(derive_boundary(U"abc", U"xbc").str() == "000");
  CHECK(derive_boundary(U"ab", U"abc").str() == "00");
  CHECK(derive_boundary(U"ab", U"ab").count() == 0);
  CHECK(derive_boundary(U"walked", U"walk").str() == "000100");
}

TEST_CASE("decoding and labels are inverse") {
  const auto labels = BoundaryLabeling::parse("0101");
  const auto morphs = decode_segmentation(U"abcd", labels);
  CHECK(morphs == std::vector<Units>{U"ab", U"cd"});
  CHECK(labels_from_morphs(morphs).str() == "0100");
  CHECK(decode_segmentation(U"abc", BoundaryLabeling::parse("001")) == std::vector<Units>{U"abc"});
  CHECK(decode_segmentation(U"", BoundaryLabeling{}).empty());
  CHECK_THROWS_AS(decode_segmentation(U"abc", BoundaryLabeling::parse("01")), LengthMismatch);
  CHECK_THROWS_AS(BoundaryLabeling::parse("012"), FormatError);
}

TEST_CASE("unimorph parsing collects bad lines and keeps going") {
  std::istringstream in(
      "સવાર\tસવારે\tN;M;SG;ERG\n"
      "only two\tcolumns\n"
      "x\ty\tQ;M;SG\n"
      "x\ty\tN;M;XX;NOM\n"
      "\n"
      "દેખાવું\tદેખાશે\tV;NONE;SG;3;FUT;SIMP\r\n");
  const auto r = parse_unimorph(in);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].pos == Pos::Noun);
  CHECK(r.records[0].line_no == 1);
  CHECK(canonicalize(r.records[0].bundle) == "N;M;SG;ERG");
  CHECK(r.records[1].pos == Pos::Verb);
  CHECK(to_utf8(r.records[1].surface) == "દેખાશે");
  REQUIRE(r.errors.size() == 3);
  CHECK(r.errors[0].line_no == 2);
  CHECK(r.errors[0].kind == IssueKind::MalformedLine);
  CHECK(r.errors[1].kind == IssueKind::UnknownPos);
  CHECK(r.errors[2].kind == IssueKind::BadFeatures);
}

TEST_CASE("unimorph write and read round trip") {
  std::istringstream in("a\tab\tN;F;PL;LOC\nc\tcd\tADJ;INFL;NONE;PL\n");
  const auto first = parse_unimorph(in);
  std::ostringstream out;
  write_unimorph(out, first.records);
  CHECK(out.str() == "a\tab\tN;F;PL;LOC\nc\tcd\tADJ;INFL;NONE;PL\n");
  std::istringstream again(out.str());
  const auto second = parse_unimorph(again);
  REQUIRE(second.records.size() == 2);
  CHECK(second.records[0].same_entry(first.records[0]));
  CHECK(second.records[1].same_entry(first.records[1]));
}

TEST_CASE("quality report flags records without a shared prefix") {
  std::istringstream in("abc\tabd\tN;M;SG;NOM\nxyz\tpq\tN;M;SG;NOM\n");
  const auto r = parse_unimorph(in);
  const auto issues = quality_report(r.records);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].line_no == 2);
  CHECK(issues[0].kind == IssueKind::NoSharedPrefix);
  std::ostringstream out;
  write_issues(out, issues);
  CHECK(out.str().rfind("2\t", 0) == 0);
}

TEST_CASE("train/test split is a seeded partition") {
  std::vector<Record> records;
  for (int i = 0; i < 10; ++i) {
    Record r;
    r.surface = Units(1, static_cast<Unit>(U'a' + i));
    r.lemma = r.surface;
    r.bundle = parse_bundle("N;M;SG;NOM");
    records.push_back(r);
  }
  const auto s = split_train_test(records, 0.8, 0);
  CHECK(s.train.size() == 8);
  CHECK(s.test.size() == 2);
  std::set<Units> all;
  for (const auto& r : s.train) all.insert(r.surface);
  for (const auto& r : s.test) all.insert(r.surface);
  CHECK(all.size() == 10);
  const auto again = split_train_test(records, 0.8, 0);
  CHECK(again.test[0].surface == s.test[0].surface);
  CHECK(split_train_test(std::span(records).first(7), 0.8, 0).train.size() == 6);
  CHECK_THROWS_AS(split_train_test(records, 1.0, 0), PreconditionViolation);
  CHECK_THROWS_AS(split_train_test(records, 0.0, 0), PreconditionViolation);
}
