#include "gumorph/script.hpp"

#include <stdexcept>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "gumorph/error.hpp"

namespace gumorph {

namespace {

icu::UnicodeString normalized(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc_norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString out = nfc_norm->normalize(src, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

}  // namespace

Units to_units(std::string_view utf8) {
  const icu::UnicodeString text = normalized(utf8);
  Units out;
  out.reserve(static_cast<std::size_t>(text.countChar32()));
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    out.push_back(static_cast<Unit>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

std::string to_utf8(std::u32string_view units) {
  std::string out;
  out.reserve(units.size() * 3);
  for (const char32_t c : units) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::string nfc(std::string_view utf8) {
  std::string out;
  normalized(utf8).toUTF8String(out);
  return out;
}

Vocab Vocab::build(std::span<const Units> words) {
  Vocab v;
  for (const auto& w : words) {
    for (const Unit u : w) v.add(u);
  }
  return v;
}

Vocab Vocab::from_units(std::span<const Unit> units_in_id_order) {
  Vocab v;
  for (const Unit u : units_in_id_order) {
    if (v.unit_to_id_.contains(u)) throw FormatError("duplicate unit in vocabulary");
    v.add(u);
  }
  return v;
}

void Vocab::add(Unit u) {
  if (unit_to_id_.contains(u)) return;
  unit_to_id_.emplace(u, static_cast<int>(id_to_unit_.size()) + kFirstId);
  id_to_unit_.push_back(u);
}

int Vocab::id_of(Unit u) const {
  const auto it = unit_to_id_.find(u);
  return it == unit_to_id_.end() ? kUnk : it->second;
}

Unit Vocab::unit_of(int id) const {
  if (id < kFirstId || id - kFirstId >= static_cast<int>(id_to_unit_.size())) {
    throw std::out_of_range("vocabulary id has no unit");
  }
  return id_to_unit_[static_cast<std::size_t>(id - kFirstId)];
}

std::vector<int> Vocab::encode(std::u32string_view units) const {
  std::vector<int> ids;
  ids.reserve(units.size());
  for (const Unit u : units) ids.push_back(id_of(u));
  return ids;
}

}  // namespace gumorph
