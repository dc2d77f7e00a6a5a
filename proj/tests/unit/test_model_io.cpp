#include <doctest.h>

#include <sstream>

#include "gumorph/error.hpp"
#include "gumorph/model_io.hpp"
#include "support.hpp"

using namespace gumorph;

namespace {

ModelFile sample() {
  const std::vector<Units> words = {test::U("સવારે"), U"xyz"};
  nn::Hyperparams h;
  h.embed_dim = 3;
  h.hidden_dim = 4;
  h.seed = 9;
  ModelFile f;
  f.params = nn::ModelParams::init(nn::Head::Class, Vocab::build(words), 2, h);
  f.pos = Pos::Verb;
  f.classes = {"V;M;SG;3;PST;PROG", "V;NONE;SG;3;FUT;SIMP"};
  return f;
}

}  // namespace

TEST_CASE("model files round trip bit-exactly") {
  const auto f = sample();
  std::ostringstream out;
  write_model(out, f);
  std::istringstream in(out.str());
  const auto back = read_model(in);
  CHECK(back == f);
  std::ostringstream again;
  write_model(again, back);
  CHECK(again.str() == out.str());
  CHECK(out.str().substr(0, 8) == std::string("GUMORPH\0", 8));
}

TEST_CASE("corrupt model files are rejected") {
  std::ostringstream out;
  write_model(out, sample());
  const auto bytes = out.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 5));
  CHECK_THROWS_AS(read_model(truncated), FormatError);
  std::istringstream bad_magic("NOTMODEL" + bytes.substr(8));
  CHECK_THROWS_AS(read_model(bad_magic), FormatError);
  auto versioned = bytes;
  versioned[8] = 9;
  std::istringstream future(versioned);
  CHECK_THROWS_AS(read_model(future), FormatError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.bin"), IoError);
}

TEST_CASE("save and load through the filesystem") {
  const auto dir = test::scratch("model_io");
  const auto path = (dir / "m.bin").string();
  save_model(path, sample());
  CHECK(load_model(path) == sample());
}
