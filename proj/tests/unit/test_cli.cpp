#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gumorph/cli.hpp"
#include "gumorph/corpus.hpp"
#include "gumorph/model_io.hpp"
#include "support.hpp"

using namespace gumorph;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gumorph");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config file values parse and validate") {
  const auto dir = test::scratch("cli_config");
  write_file(dir / "a.conf", "# comment\nepochs = 7\nembed-dim=3\nlr=0.5\n");
  cli::Config c;
  cli::apply_key_values(c, cli::read_key_values((dir / "a.conf").string()));
  CHECK(c.hyper.epochs == 7);
  CHECK(c.hyper.embed_dim == 3);
  CHECK(c.hyper.lr == 0.5);
  c.validate();
  c.hyper.threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), cli::ConfigError);
  CHECK_THROWS_AS(cli::apply_key_values(c, {{"bogus", "1"}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::apply_key_values(c, {{"epochs", "-1"}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::apply_key_values(c, {{"lr", "fast"}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::read_key_values((dir / "missing.conf").string()), IoError);
}

TEST_CASE("exit codes") {
  const auto dir = test::scratch("cli_exit");
  CHECK(run_cli({}).code == cli::kConfigFailure);
  CHECK(run_cli({"frobnicate"}).code == cli::kConfigFailure);
  CHECK(run_cli({"--help"}).code == cli::kOk);
  CHECK(run_cli({"train", "--task", "segment", "--train", "/nonexistent.tsv", "--model", "m.bin"}).code ==
        cli::kIoFailure);
  CHECK(run_cli({"train", "--task", "parse", "--train", "x", "--model", "m"}).code == cli::kConfigFailure);
  CHECK(run_cli({"train", "--task", "segment", "--threshold", "1.5"}).code == cli::kConfigFailure);
  CHECK(run_cli({"train", "--task", "segment", "--epochs", "0"}).code == cli::kConfigFailure);

  write_file(dir / "bad.tsv", "a\tb\n");
  const auto bad = run_cli({"train", "--task", "segment", "--train", (dir / "bad.tsv").string(), "--model",
                            (dir / "m.bin").string()});
  CHECK(bad.code == cli::kDataFailure);
  CHECK(bad.err.find("MalformedLine") != std::string::npos);
}

TEST_CASE("generate writes the grid product") {
  const auto dir = test::scratch("cli_generate");
  write_file(dir / "g.spec", "noun_roots=3\nverb_roots=1\nnumbers=SG,PL\nseed=4\n");
  const auto out = (dir / "c.tsv").string();
  const auto r = run_cli({"generate", "--spec", (dir / "g.spec").string(), "--out", out, "--registry",
                          (dir / "reg.tsv").string()});
  REQUIRE(r.code == cli::kOk);
  const auto parsed = read_unimorph_file(out);
  CHECK(parsed.errors.empty());
  CHECK(parsed.records.size() == 3 * 2 * 6 + 13);

  write_file(dir / "bad.spec", "noun_roots=3\nnumbers=DU\n");
  CHECK(run_cli({"generate", "--spec", (dir / "bad.spec").string()}).code == cli::kConfigFailure);
  write_file(dir / "unknown.spec", "trees=3\n");
  CHECK(run_cli({"generate", "--spec", (dir / "unknown.spec").string()}).code == cli::kConfigFailure);
}

TEST_CASE("train, predict and evaluate a segmenter") {
  const auto dir = test::scratch("cli_segment");
  write_file(dir / "g.spec", "noun_roots=2\nseed=1\n");
  const auto corpus = (dir / "c.tsv").string();
  REQUIRE(run_cli({"generate", "--spec", (dir / "g.spec").string(), "--out", corpus}).code == 0);
  write_file(dir / "train.conf", "embed-dim=8\nhidden-dim=8\nepochs=3\n");

  const std::vector<std::string> train = {"train", "--task", "segment", "--train", corpus, "--config",
                                          (dir / "train.conf").string(), "--epochs", "2"};
  auto first = train;
  first.insert(first.end(), {"--model", (dir / "a.bin").string()});
  auto second = train;
  second.insert(second.end(), {"--model", (dir / "b.bin").string()});
  const auto r = run_cli(first);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("final_loss\t") != std::string::npos);
  CHECK(r.out.find("elapsed_seconds\t") != std::string::npos);
  REQUIRE(run_cli(second).code == 0);
  CHECK(test::slurp((dir / "a.bin").string()) == test::slurp((dir / "b.bin").string()));
  const auto model = load_model((dir / "a.bin").string());
  CHECK(model.params.hyper.epochs == 2);
  CHECK(model.params.hyper.embed_dim == 8);

  write_file(dir / "empty.txt", "");
  const auto empty = run_cli({"predict", "--model", (dir / "a.bin").string(), "--input", (dir / "empty.txt").string()});
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());

  write_file(dir / "words.txt", "ઘરમાં\nઘર\tN\tN\nકાગળ\tV\n");
  const auto pred = run_cli({"predict", "--model", (dir / "a.bin").string(), "--input", (dir / "words.txt").string()});
  REQUIRE(pred.code == 0);
  CHECK(count_lines(pred.out) == 3);
  CHECK(pred.out.rfind("ઘરમાં\t", 0) == 0);

  // Predictions over the gold corpus, scored and compared with themselves.
  std::ostringstream words;
  for (const auto& rec : read_unimorph_file(corpus).records) words << to_utf8(rec.surface) << '\n';
  write_file(dir / "gold_words.txt", words.str());
  const auto preds = (dir / "pred.tsv").string();
  REQUIRE(run_cli({"predict", "--model", (dir / "a.bin").string(), "--input", (dir / "gold_words.txt").string(),
                   "--out", preds})
              .code == 0);
  const auto eval = run_cli({"evaluate", "--test", corpus, "--input", preds});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.find("Segmentation by POS") != std::string::npos);
  const auto via_model = run_cli({"evaluate", "--test", corpus, "--model", (dir / "a.bin").string()});
  CHECK(via_model.out == eval.out);
  const auto cmp = run_cli({"compare", "--test", corpus, "--system-a", preds, "--system-b", preds});
  REQUIRE(cmp.code == 0);
  CHECK(cmp.out.find("=0.00") != std::string::npos);

  write_file(dir / "short.tsv", "ઘર\tઘર\tઘર\n");
  CHECK(run_cli({"evaluate", "--test", corpus, "--input", (dir / "short.tsv").string()}).code == cli::kDataFailure);
  CHECK(run_cli({"compare", "--test", corpus, "--system-a", preds, "--system-b", (dir / "short.tsv").string()}).code ==
        cli::kDataFailure);
  CHECK(run_cli({"predict", "--model", (dir / "missing.bin").string()}).code == cli::kIoFailure);
}

TEST_CASE("train and evaluate a tagger") {
  const auto dir = test::scratch("cli_tag");
  write_file(dir / "g.spec", "noun_roots=2\nverb_roots=1\nseed=2\n");
  const auto corpus = (dir / "c.tsv").string();
  REQUIRE(run_cli({"generate", "--spec", (dir / "g.spec").string(), "--out", corpus}).code == 0);
  const auto model = (dir / "t.bin").string();
  CHECK(run_cli({"train", "--task", "tag", "--train", corpus, "--model", model, "--epochs", "1"}).code ==
        cli::kConfigFailure);
  const auto r = run_cli({"train", "--task", "tag", "--train", corpus, "--model", model, "--pos", "V", "--epochs", "2",
                          "--registry", (dir / "reg.tsv").string()});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "reg.tsv"));
  write_file(dir / "w.txt", "abc\n");
  const auto pred = run_cli({"predict", "--model", model, "--input", (dir / "w.txt").string()});
  REQUIRE(pred.code == 0);
  CHECK(pred.out.rfind("abc\tV;", 0) == 0);
  const auto eval = run_cli({"evaluate", "--test", corpus, "--model", model});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.find("Ceiling") != std::string::npos);
}

TEST_CASE("evaluate from literal counts and gradcheck") {
  const auto r = run_cli({"evaluate", "--counts", "3614/4058", "--reported", "89.05"});
  CHECK(r.code == 0);
  CHECK(r.out == "accuracy\t89.05\nreported\t89.05\tconsistent\n");
  CHECK(run_cli({"evaluate", "--counts", "645/669", "--reported", "97.49"}).out.find("INCONSISTENT") !=
        std::string::npos);
  CHECK(run_cli({"evaluate", "--counts", "5/4"}).code == cli::kConfigFailure);

  const auto g = run_cli({"gradcheck"});
  CHECK(g.code == 0);
  CHECK(count_lines(g.out) == 6);
  const auto bad = run_cli({"gradcheck", "--corrupt-gradient", "--task", "segment", "--seed", "0"});
  CHECK(bad.code == cli::kDataFailure);
  CHECK(bad.out.find("worst=out_b[0]") != std::string::npos);
}
