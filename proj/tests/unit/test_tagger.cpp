#include <doctest.h>

#include "gumorph/error.hpp"
#include "gumorph/paradigm.hpp"
#include "gumorph/tagger.hpp"
#include "support.hpp"

using namespace gumorph;

namespace {

Record rec(std::u32string surface, const char* bundle) {
  Record r;
  r.surface = std::move(surface);
  r.lemma = r.surface;
  r.bundle = parse_bundle(bundle);
  r.pos = r.bundle.pos;
  return r;
}

}  // namespace

TEST_CASE("ambiguity ceiling counts the majority bundle per surface") {
  const std::vector<Record> records = {
      rec(U"a", "V;M;SG;1;PST;PROG"), rec(U"a", "V;M;SG;3;PST;PROG"), rec(U"a", "V;M;SG;3;PST;PROG"),
      rec(U"b", "V;F;SG;3;PST;PROG"), rec(U"b", "V;F;PL;3;PST;PROG"), rec(U"c", "V;NONE;SG;3;FUT;SIMP"),
  };
  const auto audit = audit_ambiguity(records);
  CHECK(audit.total == 6);
  CHECK(audit.resolvable == 4);
  CHECK(audit.ambiguous_surfaces == 2);
  CHECK(audit.ceiling == doctest::Approx(4.0 / 6.0));
  CHECK(audit_ambiguity({}).ceiling == 1.0);
}

TEST_CASE("tagger preconditions") {
  nn::Hyperparams h;
  ClassRegistry reg;
  const std::vector<Record> mixed = {rec(U"a", "N;M;SG;NOM"), rec(U"b", "V;M;SG;3;PST;PROG")};
  reg.add(mixed[0].bundle);
  reg.add(mixed[1].bundle);
  CHECK_THROWS_AS(train_tagger({}, Pos::Noun, reg, h), EmptyTrainingSet);
  CHECK_THROWS_AS(train_tagger(mixed, Pos::Noun, reg, h), PreconditionViolation);
  const std::vector<Record> unknown = {rec(U"a", "N;F;SG;NOM")};
  CHECK_THROWS_AS(train_tagger(unknown, Pos::Noun, reg, h), BundleNotRegistered);
}

TEST_CASE("ties go to the lowest class id") {
  nn::Hyperparams h;
  h.embed_dim = 2;
  h.hidden_dim = 2;
  const std::vector<Units> words = {U"ab"};
  TaggerModel m;
  m.params = nn::ModelParams::zeros(nn::Head::Class, Vocab::build(words), 3, h);
  m.pos = Pos::Noun;
  m.classes = {"N;M;SG;NOM", "N;F;SG;NOM", "N;N;SG;NOM"};
  const auto p = predict_bundle(m, U"ab");
  CHECK(p.class_id == 0);
  CHECK(p.canonical == "N;M;SG;NOM");
  CHECK(p.distribution[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a small tagger fits its training words") {
  const auto roots = random_roots(3, 11);
  const std::vector<std::string> genders = {"M", "F", "N"};
  const auto records = gen_nouns(roots, genders);
  const auto reg = register_all(records);
  nn::Hyperparams h;
  h.embed_dim = 8;
  h.hidden_dim = 16;
  h.epochs = 200;
  h.batch = 6;
  h.lr = 1e-2;
  const auto model = train_tagger(records, Pos::Noun, reg, h);
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (predict_bundle(model, r.surface).bundle == r.bundle) ++correct;
  }
  CHECK(correct == records.size());
  const auto back = tagger_model_from(to_model_file(model));
  CHECK(back.classes == model.classes);
  CHECK(predict_bundle(back, records[4].surface).class_id == predict_bundle(model, records[4].surface).class_id);
}
