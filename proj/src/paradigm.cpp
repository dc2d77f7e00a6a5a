#include "gumorph/paradigm.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>

#include "gumorph/error.hpp"
#include "gumorph/rng.hpp"
#include "util.hpp"

namespace gumorph {

namespace {

constexpr std::string_view kNounCases =
    "-\tNOM\n"
    "નો\tGEN\n"
    "ે\tERG\n"
    "ને\tDAT\n"
    "થી\tABL\n"
    "માં\tLOC\n";

constexpr std::string_view kVerbGrid =
    "ે\tNONE;SG;3;PRS;HAB\n"
    "ે\tNONE;PL;3;PRS;HAB\n"
    "ું\tNONE;SG;1;PRS;HAB\n"
    "ીએ\tNONE;PL;1;PRS;HAB\n"
    "ો\tNONE;PL;2;PRS;HAB\n"
    "તો\tM;SG;1;PST;PROG\n"
    "તો\tM;SG;3;PST;PROG\n"
    "તી\tF;SG;3;PST;PROG\n"
    "તી\tF;PL;3;PST;PROG\n"
    "તું\tN;SG;3;PST;PROG\n"
    "તા\tM;PL;3;PST;PROG\n"
    "શે\tNONE;SG;3;FUT;SIMP\n"
    "વું\tNONE;NONE;NONE;NONE;NONE\n";

constexpr std::string_view kAdjectiveEndings =
    "ો\tINFL;M;SG\n"
    "ી\tINFL;F;NONE\n"
    "ું\tINFL;N;SG\n"
    "ા\tINFL;NONE;PL\n";

ParadigmTable parse_builtin(Pos pos, std::string_view text, Units lemma_suffix = {}) {
  std::istringstream in{std::string(text)};
  return ParadigmTable::parse(pos, in, std::move(lemma_suffix));
}

// Dependent vowel sign -> independent vowel, Gujarati block.
Unit independent_form(Unit sign) {
  switch (sign) {
    case 0x0ABE: return 0x0A86;
    case 0x0ABF: return 0x0A87;
    case 0x0AC0: return 0x0A88;
    case 0x0AC1: return 0x0A89;
    case 0x0AC2: return 0x0A8A;
    case 0x0AC3: return 0x0A8B;
    case 0x0AC5: return 0x0A8D;
    case 0x0AC7: return 0x0A8F;
    case 0x0AC8: return 0x0A90;
    case 0x0AC9: return 0x0A91;
    case 0x0ACB: return 0x0A93;
    case 0x0ACC: return 0x0A94;
    default: return sign;
  }
}

Record make_record(Pos pos, Units root, std::u32string_view suffix, Units lemma, std::span<const std::string> tags) {
  Record r;
  r.surface = attach(root, suffix);
  r.lemma = std::move(lemma);
  r.pos = pos;
  r.bundle = bundle_from_tags(pos, tags);
  BoundaryLabeling gold;
  gold.bits.assign(r.surface.size(), 0);
  if (!suffix.empty() && !root.empty()) gold.bits[root.size() - 1] = 1;
  r.boundary = std::move(gold);
  return r;
}

}  // namespace

Units StemRule::apply(std::u32string_view root) const {
  Units stem(root);
  if (!strip.empty() && stem.size() >= strip.size() && stem.ends_with(strip)) stem.resize(stem.size() - strip.size());
  return stem + append;
}

ParadigmTable ParadigmTable::parse(Pos pos, std::istream& in, Units lemma_suffix) {
  ParadigmTable table;
  table.pos = pos;
  table.lemma_suffix = std::move(lemma_suffix);
  std::set<std::pair<Units, std::vector<std::string>>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim_cr(line);
    if (detail::is_blank(text) || text.front() == '#') continue;
    const auto cols = detail::split(text, '\t');
    if (cols[0] == "@stem") {
      if (cols.size() != 3) throw FormatError("paradigm line " + std::to_string(line_no) + ": @stem needs strip and append");
      auto part = [](const std::string& c) { return c == "-" || c == "∅" ? Units() : to_units(c); };
      table.stem_rule = {part(cols[1]), part(cols[2])};
      continue;
    }
    if (cols.size() != 2) throw FormatError("paradigm line " + std::to_string(line_no) + ": expected 2 columns");
    ParadigmRow row;
    if (cols[0] != "-" && cols[0] != "∅") row.suffix = to_units(cols[0]);
    row.fragment = detail::split(cols[1], ';');
    if (!seen.emplace(row.suffix, row.fragment).second) {
      throw FormatError("paradigm line " + std::to_string(line_no) + ": duplicate row");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

const ParadigmTable& default_noun_cases() {
  static const ParadigmTable t = parse_builtin(Pos::Noun, kNounCases);
  return t;
}

const ParadigmTable& default_verb_grid() {
  static const ParadigmTable t = parse_builtin(Pos::Verb, kVerbGrid, to_units("વું"));
  return t;
}

const ParadigmTable& default_adjective_endings() {
  static const ParadigmTable t = parse_builtin(Pos::Adjective, kAdjectiveEndings);
  return t;
}

bool is_gujarati_consonant(Unit u) { return u >= 0x0A95 && u <= 0x0AB9; }

bool is_dependent_vowel_sign(Unit u) {
  return (u >= 0x0ABE && u <= 0x0AC5) || (u >= 0x0AC7 && u <= 0x0AC9) || u == 0x0ACB || u == 0x0ACC ||
         u == 0x0AE2 || u == 0x0AE3;
}

Units attach(std::u32string_view stem, std::u32string_view suffix) {
  Units out(stem);
  if (suffix.empty()) return out;
  const bool after_consonant = !stem.empty() && (is_gujarati_consonant(stem.back()) || stem.back() == 0x0ABC);
  if (is_dependent_vowel_sign(suffix.front()) && !after_consonant) {
    out.push_back(independent_form(suffix.front()));
    out.append(suffix.substr(1));
  } else {
    out.append(suffix);
  }
  return out;
}

std::vector<Record> gen_nouns(std::span<const Units> roots, std::span<const std::string> genders,
                              const NounOptions& options) {
  if (roots.size() != genders.size()) throw PreconditionViolation("one gender per noun root required");
  const ParadigmTable& cases = options.cases ? *options.cases : default_noun_cases();
  const Units plural(1, kPluralMarker);
  std::vector<Record> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (const auto& number : options.numbers) {
      for (const auto& row : cases.rows) {
        std::vector<std::string> tags{genders[i], number};
        tags.insert(tags.end(), row.fragment.begin(), row.fragment.end());
        const Units suffix = number == "PL" ? attach(plural, row.suffix) : row.suffix;
        out.push_back(make_record(Pos::Noun, cases.stem_rule.apply(roots[i]), suffix, roots[i], tags));
        if (!cases.stem_rule.identity()) out.back().boundary = derive_boundary(out.back().surface, roots[i]);
      }
    }
  }
  return out;
}

std::vector<Record> gen_adjectives(std::span<const Units> inflected, std::span<const Units> noninflected,
                                   const ParadigmTable* endings) {
  const ParadigmTable& table = endings ? *endings : default_adjective_endings();
  std::vector<Record> out;
  for (const auto& stem : inflected) {
    const Units base = table.stem_rule.apply(stem);
    for (const auto& row : table.rows) {
      out.push_back(make_record(Pos::Adjective, base, row.suffix, stem, row.fragment));
      if (!table.stem_rule.identity()) out.back().boundary = derive_boundary(out.back().surface, stem);
    }
  }
  const std::vector<std::string> plain{"NONINFL", std::string(kNone), std::string(kNone)};
  for (const auto& stem : noninflected) out.push_back(make_record(Pos::Adjective, stem, {}, stem, plain));
  return out;
}

std::vector<Record> gen_verbs(std::span<const Units> roots, const ParadigmTable* grid) {
  const ParadigmTable& table = grid ? *grid : default_verb_grid();
  std::vector<Record> out;
  for (const auto& root : roots) {
    const Units lemma = attach(root, table.lemma_suffix);
    const Units stem = table.stem_rule.apply(root);
    for (const auto& row : table.rows) out.push_back(make_record(Pos::Verb, stem, row.suffix, lemma, row.fragment));
  }
  return out;
}

std::vector<Units> random_roots(std::size_t n, std::uint64_t seed) {
  // Consonants that begin no default suffix (ન થ મ ત શ વ are excluded as finals).
  static const Units finals = U"કખગઘચછજઝટઠડઢણદધપફબભયરલષસહળ";
  static const Units onsets = U"કખગઘચછજઝટઠડઢણતથદધનપફબભમયરલવશષસહળ";
  static const Units signs = U"ાિીુેો";
  Rng rng(seed);
  std::set<Units> seen;
  std::vector<Units> roots;
  while (roots.size() < n) {
    Units r;
    const auto syllables = 1 + rng.below(2);
    for (std::uint64_t s = 0; s < syllables; ++s) {
      r.push_back(onsets[rng.below(onsets.size())]);
      // Half of the syllables keep the inherent vowel.
      if (rng.below(2) == 1) r.push_back(signs[rng.below(signs.size())]);
    }
    r.push_back(finals[rng.below(finals.size())]);
    if (seen.insert(r).second) roots.push_back(std::move(r));
  }
  return roots;
}

std::vector<Record> generate(const GeneratorSpec& spec) {
  const std::size_t total =
      spec.noun_roots + spec.verb_roots + spec.inflected_adjectives + spec.noninflected_adjectives;
  const auto pool = random_roots(total, spec.seed);
  auto next = pool.begin();
  auto take = [&](std::size_t k) {
    std::vector<Units> part(next, next + static_cast<std::ptrdiff_t>(k));
    next += static_cast<std::ptrdiff_t>(k);
    return part;
  };
  if (spec.genders.empty() && spec.noun_roots > 0) throw PreconditionViolation("no noun genders given");

  std::vector<Record> out;
  const auto nouns = take(spec.noun_roots);
  std::vector<std::string> genders;
  for (std::size_t i = 0; i < nouns.size(); ++i) genders.push_back(spec.genders[i % spec.genders.size()]);
  auto noun_records = gen_nouns(nouns, genders, {spec.numbers, spec.noun_cases});
  out.insert(out.end(), noun_records.begin(), noun_records.end());

  auto verb_records = gen_verbs(take(spec.verb_roots), spec.verb_grid);
  out.insert(out.end(), verb_records.begin(), verb_records.end());

  const auto infl = take(spec.inflected_adjectives);
  const auto plain = take(spec.noninflected_adjectives);
  auto adj_records = gen_adjectives(infl, plain, spec.adjective_endings);
  out.insert(out.end(), adj_records.begin(), adj_records.end());
  return out;
}

}  // namespace gumorph
