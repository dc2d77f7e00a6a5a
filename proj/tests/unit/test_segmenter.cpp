#include <doctest.h>

#include <sstream>

#include "gumorph/error.hpp"
#include "gumorph/paradigm.hpp"
#include "gumorph/segmenter.hpp"
#include "support.hpp"

using namespace gumorph;
using test::U;

TEST_CASE("shipped rule file matches the built-in rules") {
  CHECK(test::slurp(test::data_path("root_rules.tsv")) == default_rules_text());
  const auto loaded = RuleTable::load(test::data_path("root_rules.tsv"));
  CHECK(loaded.rules().size() == RuleTable::defaults().rules().size());
}

TEST_CASE("root normalization attaches the POS and gender suffix") {
  const auto& rules = RuleTable::defaults();
  const auto verb = normalize_root(rules, U("દેખા"), Pos::Verb, std::nullopt);
  CHECK(verb.normalized);
  CHECK(to_utf8(verb.root) == "દેખાવું");
  const auto noun = normalize_root(rules, U("ધંધ"), Pos::Noun, "M");
  CHECK(to_utf8(noun.root) == "ધંધો");
  CHECK(to_utf8(normalize_root(rules, U("છોકર"), Pos::Noun, "F").root) == "છોકરી");
  const auto neuter = normalize_root(rules, U("ઘર"), Pos::Noun, "N");
  CHECK_FALSE(neuter.normalized);
  CHECK(to_utf8(neuter.root) == "ઘર");
  CHECK_FALSE(normalize_root(rules, U("ધંધ"), Pos::Noun, std::nullopt).normalized);
}

TEST_CASE("rule files reject malformed lines") {
  std::istringstream cols("N\tM\n");
  CHECK_THROWS_AS(RuleTable::parse(cols), FormatError);
  std::istringstream pos("Q\tM\tો\n");
  CHECK_THROWS_AS(RuleTable::parse(pos), FormatError);
  std::istringstream ok("# comment\n\nV\t-\tવું\n");
  CHECK(RuleTable::parse(ok).rules().size() == 1);
  CHECK_THROWS_AS(RuleTable::load("/nonexistent/rules.tsv"), IoError);
}

TEST_CASE("boundary training preconditions") {
  nn::Hyperparams h;
  CHECK_THROWS_AS(train_boundary({}, h), EmptyTrainingSet);
  Record r;
  r.surface = U"ab";
  r.lemma = U"a";
  CHECK_THROWS_AS(train_boundary(std::span(&r, 1), h), PreconditionViolation);
}

TEST_CASE("a small boundary model learns its training words") {
  const auto roots = random_roots(2, 5);
  const std::vector<std::string> genders = {"M", "F"};
  const auto records = gen_nouns(roots, genders);
  nn::Hyperparams h;
  h.embed_dim = 8;
  h.hidden_dim = 16;
  h.epochs = 150;
  h.batch = 4;
  h.lr = 1e-2;
  const auto model = train_boundary(records, h);
  std::size_t correct = 0;
  for (const auto& r : records) {
    const auto pred = predict_splits(model, r.surface);
    CHECK(pred.bits.back() == 0);
    if (pred == *r.boundary) ++correct;
  }
  CHECK(correct == records.size());

  const auto a = analyze_word(model, RuleTable::defaults(), records[3].surface, Pos::Noun, "M");
  REQUIRE(a.morphs.size() == 2);
  CHECK(a.normalized);
  CHECK(a.root == roots[0] + U"ો");

  const auto back = boundary_model_from(to_model_file(model));
  CHECK(back.params == model.params);
  CHECK(split_probabilities(back, records[3].surface) == split_probabilities(model, records[3].surface));
}
