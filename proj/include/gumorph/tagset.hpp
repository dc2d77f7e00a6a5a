#pragma once

// Feature bundles and the monolithic class registry.
//
// Every unique combination of feature values within a part of speech is one
// class. Bundles are reduced to a canonical string (POS tag followed by the
// values in schema order) and the registry maps those strings to dense ids.

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gumorph {

enum class Pos { Noun = 0, Verb = 1, Adjective = 2 };

inline constexpr std::array<Pos, 3> kAllPos = {Pos::Noun, Pos::Verb, Pos::Adjective};

/// Unimorph-style tag: "N", "V" or "ADJ".
std::string_view pos_tag(Pos pos);
std::optional<Pos> parse_pos(std::string_view tag);

inline constexpr std::string_view kNone = "NONE";

struct Dimension {
  std::string_view name;
  std::vector<std::string_view> values;  // NONE is always implicitly allowed
};

/// Ordered dimensions for a part of speech.
const std::vector<Dimension>& schema(Pos pos);

struct FeatureBundle {
  Pos pos = Pos::Noun;
  std::vector<std::pair<std::string, std::string>> features;  // (dimension, value)

  /// Value of a dimension, or nullopt when absent.
  std::optional<std::string_view> get(std::string_view dimension) const;

  /// Order-insensitive comparison of the feature pairs.
  bool operator==(const FeatureBundle& other) const;
};

/// Builds a bundle from bare value tags (as they appear in a Unimorph feature
/// column after the POS tag). Each value is routed to the dimension whose
/// value set contains it; NONE tags fill the dimensions left over.
/// Throws SchemaViolation when the tags do not describe a complete bundle.
FeatureBundle bundle_from_tags(Pos pos, std::span<const std::string> tags);

/// Parses "POS;v1;v2;...". Throws SchemaViolation.
FeatureBundle parse_bundle(std::string_view text);

/// Throws SchemaViolation for unknown, duplicate or missing dimensions and
/// values outside the dimension's value set.
std::string canonicalize(const FeatureBundle& bundle);

struct Record;

class ClassRegistry {
 public:
  /// Registers the bundle if new; returns its id either way.
  int add(const FeatureBundle& bundle);

  int class_of(const FeatureBundle& bundle) const;
  bool contains(const FeatureBundle& bundle) const;
  FeatureBundle bundle_of(Pos pos, int id) const;
  const std::string& canonical_of(Pos pos, int id) const;
  std::size_t size(Pos pos) const;

  /// "class_id<TAB>canonical_string" per line, nouns then verbs then adjectives.
  void write(std::ostream& out) const;
  static ClassRegistry read(std::istream& in);

  bool operator==(const ClassRegistry& other) const = default;

 private:
  struct PerPos {
    std::map<std::string, int> ids;
    std::vector<std::string> names;
    bool operator==(const PerPos&) const = default;
  };
  std::array<PerPos, 3> by_pos_;
};

ClassRegistry register_all(std::span<const Record> records);
ClassRegistry register_all(std::span<const FeatureBundle> bundles);

}  // namespace gumorph
