#include <doctest.h>

#include "gumorph/script.hpp"
#include "support.hpp"

using namespace gumorph;
using test::U;

TEST_CASE("units are NFC scalar values") {
  CHECK(to_units("e\xCC\x81") == U"é");
  CHECK(nfc("e\xCC\x81") == "\xC3\xA9");
  const auto w = U("સવારે");
  REQUIRE(w.size() == 5);
  CHECK(w[4] == U'ે');
  CHECK(to_utf8(w) == "સવારે");
  CHECK(to_units("").empty());
}

TEST_CASE("vocab hands out ids in first-occurrence order") {
  const std::vector<Units> words = {U"bab", U"cab"};
  const auto v = Vocab::build(words);
  CHECK(v.size() == 5);
  CHECK(v.id_of(U'b') == 2);
  CHECK(v.id_of(U'a') == 3);
  CHECK(v.id_of(U'c') == 4);
  CHECK(v.id_of(U'z') == Vocab::kUnk);
  CHECK(v.encode(U"cz") == std::vector<int>{4, Vocab::kUnk});
  CHECK(v.unit_of(3) == U'a');
  CHECK_THROWS_AS(v.unit_of(Vocab::kPad), std::out_of_range);
  CHECK_THROWS_AS(v.unit_of(5), std::out_of_range);
  CHECK(Vocab::from_units(v.units()) == v);
}
