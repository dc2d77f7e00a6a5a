#pragma once

// Character units and vocabularies.
//
// A unit is one Unicode scalar value of the NFC-normalized text. Indic vowel
// signs are therefore their own units, so a boundary may fall between a
// consonant and the vowel sign attached to it.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gumorph {

using Unit = char32_t;
using Units = std::u32string;

/// NFC-normalizes UTF-8 text and splits it into scalar values.
Units to_units(std::string_view utf8);

/// Encodes units as UTF-8 without normalizing.
std::string to_utf8(std::u32string_view units);

/// NFC normalization of UTF-8 text.
std::string nfc(std::string_view utf8);

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kFirstId = 2;

  Vocab() = default;

  /// Ids are handed out in first-occurrence order starting at kFirstId.
  static Vocab build(std::span<const Units> words);

  /// Rebuilds a vocabulary from units listed in id order (ids 2, 3, ...).
  static Vocab from_units(std::span<const Unit> units_in_id_order);

  std::vector<int> encode(std::u32string_view units) const;

  int id_of(Unit u) const;
  /// Throws std::out_of_range for PAD, UNK and ids past the end.
  Unit unit_of(int id) const;

  /// Total id count including PAD and UNK.
  std::size_t size() const { return id_to_unit_.size() + kFirstId; }
  const std::vector<Unit>& units() const { return id_to_unit_; }

  bool operator==(const Vocab& other) const { return id_to_unit_ == other.id_to_unit_; }

 private:
  void add(Unit u);

  std::unordered_map<Unit, int> unit_to_id_;
  std::vector<Unit> id_to_unit_;  // index = id - kFirstId
};

}  // namespace gumorph
