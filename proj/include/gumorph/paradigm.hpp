#pragma once

// Synthetic Unimorph corpora from declarative paradigm tables.
//
// The generated records carry their gold boundary at the stem/suffix seam, so
// they double as desk-scale training and test data for both tasks.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gumorph/corpus.hpp"

namespace gumorph {

struct ParadigmRow {
  Units suffix;                       // empty for a bare stem
  std::vector<std::string> fragment;  // feature values contributed by the row
};

/// Rewrites a root into the stem that suffixes attach to: a trailing `strip`
/// is removed, then `append` is added. The default is the identity. Noun and
/// adjective records built through a non-identity rule take their gold
/// boundary from the shared prefix with the lemma.
struct StemRule {
  Units strip;
  Units append;

  Units apply(std::u32string_view root) const;
  bool identity() const { return strip.empty() && append.empty(); }
};

struct ParadigmTable {
  Pos pos = Pos::Noun;
  std::vector<ParadigmRow> rows;
  Units lemma_suffix;  // appended to the root to form the lemma
  StemRule stem_rule;  // lemmas keep the untransformed root

  /// "suffix TAB v1;v2;..." per line; "-" or "∅" marks an empty suffix and
  /// lines starting with '#' are comments. An "@stem TAB strip TAB append"
  /// line sets the stem rule. Throws FormatError.
  static ParadigmTable parse(Pos pos, std::istream& in, Units lemma_suffix = {});
};

/// NOM ∅, GEN નો, ERG ે, DAT ને, ABL થી, LOC માં.
const ParadigmTable& default_noun_cases();
/// Small present/past/future/infinitive grid including the duplicate past
/// progressive surfaces (1st vs 3rd person masculine, feminine SG vs PL).
const ParadigmTable& default_verb_grid();
/// Inflected adjective endings: ો M.SG, ી F, ું N.SG, ા PL.
const ParadigmTable& default_adjective_endings();

inline constexpr char32_t kPluralMarker = U'ો';  // ો

bool is_gujarati_consonant(Unit u);
bool is_dependent_vowel_sign(Unit u);

/// Joins a suffix onto a stem. A suffix starting with a dependent vowel sign
/// attaches directly to a final consonant; after anything else the sign is
/// written as its independent vowel.
Units attach(std::u32string_view stem, std::u32string_view suffix);

struct NounOptions {
  std::vector<std::string> numbers = {"SG"};
  const ParadigmTable* cases = nullptr;  // default_noun_cases() when null
};

/// roots × numbers × case rows. `genders` is parallel to `roots`.
std::vector<Record> gen_nouns(std::span<const Units> roots, std::span<const std::string> genders,
                              const NounOptions& options = {});

/// Four forms per inflected stem, one uninflected record per non-inflected
/// stem. Lemma is the bare stem.
std::vector<Record> gen_adjectives(std::span<const Units> inflected, std::span<const Units> noninflected = {},
                                   const ParadigmTable* endings = nullptr);

/// roots × grid rows, lemma = root + grid lemma suffix (વું by default).
std::vector<Record> gen_verbs(std::span<const Units> roots, const ParadigmTable* grid = nullptr);

/// Distinct consonant-final pseudo-roots of 2 to 5 units. Final consonants
/// never start a default suffix, so generated surfaces cannot collide.
std::vector<Units> random_roots(std::size_t n, std::uint64_t seed);

struct GeneratorSpec {
  std::size_t noun_roots = 0;
  std::size_t verb_roots = 0;
  std::size_t inflected_adjectives = 0;
  std::size_t noninflected_adjectives = 0;
  std::vector<std::string> numbers = {"SG"};
  std::vector<std::string> genders = {"M", "F", "N"};  // cycled over noun roots
  std::uint64_t seed = 0;
  const ParadigmTable* noun_cases = nullptr;
  const ParadigmTable* verb_grid = nullptr;
  const ParadigmTable* adjective_endings = nullptr;
};

/// Nouns, then verbs, then adjectives, drawing all roots from one seeded pool.
std::vector<Record> generate(const GeneratorSpec& spec);

}  // namespace gumorph
