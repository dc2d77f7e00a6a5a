#include "gumorph/tagset.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "gumorph/corpus.hpp"
#include "gumorph/error.hpp"
#include "util.hpp"

namespace gumorph {

namespace {

const std::vector<std::string_view> kGender = {"M", "F", "N"};
const std::vector<std::string_view> kNumber = {"SG", "PL"};

std::size_t index_of(Pos pos) { return static_cast<std::size_t>(pos); }

bool allows(const Dimension& dim, std::string_view value) {
  return value == kNone || std::find(dim.values.begin(), dim.values.end(), value) != dim.values.end();
}

}  // namespace

std::string_view pos_tag(Pos pos) {
  switch (pos) {
    case Pos::Noun:
      return "N";
    case Pos::Verb:
      return "V";
    case Pos::Adjective:
      return "ADJ";
  }
  return "?";
}

std::optional<Pos> parse_pos(std::string_view tag) {
  for (const Pos p : kAllPos) {
    if (pos_tag(p) == tag) return p;
  }
  return std::nullopt;
}

const std::vector<Dimension>& schema(Pos pos) {
  static const std::vector<Dimension> noun = {
      {"gender", kGender},
      {"number", kNumber},
      {"case", {"NOM", "GEN", "ERG", "DAT", "ABL", "LOC"}},
  };
  static const std::vector<Dimension> verb = {
      {"gender", kGender},
      {"number", kNumber},
      {"person", {"1", "2", "3"}},
      {"tense", {"PRS", "PST", "FUT"}},
      {"aspect", {"SIMP", "HAB", "PROG", "PRF", "PRFPROG"}},
  };
  static const std::vector<Dimension> adjective = {
      {"type", {"INFL", "NONINFL"}},
      {"gender", kGender},
      {"number", kNumber},
  };
  switch (pos) {
    case Pos::Noun:
      return noun;
    case Pos::Verb:
      return verb;
    case Pos::Adjective:
      return adjective;
  }
  return noun;
}

std::optional<std::string_view> FeatureBundle::get(std::string_view dimension) const {
  for (const auto& [d, v] : features) {
    if (d == dimension) return std::string_view(v);
  }
  return std::nullopt;
}

bool FeatureBundle::operator==(const FeatureBundle& other) const {
  if (pos != other.pos || features.size() != other.features.size()) return false;
  auto a = features;
  auto b = other.features;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

FeatureBundle bundle_from_tags(Pos pos, std::span<const std::string> tags) {
  const auto& dims = schema(pos);
  std::vector<std::optional<std::string>> slots(dims.size());
  std::size_t nones = 0;
  for (const auto& tag : tags) {
    if (tag == kNone) {
      ++nones;
      continue;
    }
    bool placed = false;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      if (std::find(dims[d].values.begin(), dims[d].values.end(), tag) == dims[d].values.end()) continue;
      if (slots[d]) {
        throw SchemaViolation("dimension '" + std::string(dims[d].name) + "' given twice");
      }
      slots[d] = tag;
      placed = true;
      break;
    }
    if (!placed) {
      throw SchemaViolation("tag '" + tag + "' fits no dimension of " + std::string(pos_tag(pos)));
    }
  }
  const auto open = static_cast<std::size_t>(std::count(slots.begin(), slots.end(), std::nullopt));
  if (open != nones) {
    throw SchemaViolation("bundle for " + std::string(pos_tag(pos)) + " needs " +
                          std::to_string(dims.size()) + " values");
  }
  FeatureBundle b{pos, {}};
  for (std::size_t d = 0; d < dims.size(); ++d) {
    b.features.emplace_back(std::string(dims[d].name), slots[d].value_or(std::string(kNone)));
  }
  return b;
}

FeatureBundle parse_bundle(std::string_view text) {
  auto tags = detail::split(text, ';');
  const auto pos = parse_pos(tags.front());
  if (!pos) throw SchemaViolation("unknown POS tag '" + tags.front() + "'");
  return bundle_from_tags(*pos, std::span<const std::string>(tags).subspan(1));
}

std::string canonicalize(const FeatureBundle& bundle) {
  const auto& dims = schema(bundle.pos);
  std::vector<const std::string*> values(dims.size(), nullptr);
  for (const auto& [name, value] : bundle.features) {
    const auto it = std::find_if(dims.begin(), dims.end(), [&](const Dimension& d) { return d.name == name; });
    if (it == dims.end()) {
      throw SchemaViolation("unknown dimension '" + name + "' for " + std::string(pos_tag(bundle.pos)));
    }
    const auto d = static_cast<std::size_t>(it - dims.begin());
    if (values[d]) throw SchemaViolation("duplicate dimension '" + name + "'");
    if (!allows(*it, value)) throw SchemaViolation("value '" + value + "' not allowed for '" + name + "'");
    values[d] = &value;
  }
  std::string out(pos_tag(bundle.pos));
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (!values[d]) throw SchemaViolation("missing dimension '" + std::string(dims[d].name) + "'");
    out += ';';
    out += *values[d];
  }
  return out;
}

int ClassRegistry::add(const FeatureBundle& bundle) {
  auto key = canonicalize(bundle);
  auto& slot = by_pos_[index_of(bundle.pos)];
  const auto [it, inserted] = slot.ids.emplace(key, static_cast<int>(slot.names.size()));
  if (inserted) slot.names.push_back(std::move(key));
  return it->second;
}

int ClassRegistry::class_of(const FeatureBundle& bundle) const {
  const auto& slot = by_pos_[index_of(bundle.pos)];
  const auto key = canonicalize(bundle);
  const auto it = slot.ids.find(key);
  if (it == slot.ids.end()) throw UnknownBundle("bundle not registered: " + key);
  return it->second;
}

bool ClassRegistry::contains(const FeatureBundle& bundle) const {
  return by_pos_[index_of(bundle.pos)].ids.contains(canonicalize(bundle));
}

const std::string& ClassRegistry::canonical_of(Pos pos, int id) const {
  const auto& names = by_pos_[index_of(pos)].names;
  if (id < 0 || static_cast<std::size_t>(id) >= names.size()) {
    throw UnknownClass("no class " + std::to_string(id) + " for " + std::string(pos_tag(pos)));
  }
  return names[static_cast<std::size_t>(id)];
}

FeatureBundle ClassRegistry::bundle_of(Pos pos, int id) const { return parse_bundle(canonical_of(pos, id)); }

std::size_t ClassRegistry::size(Pos pos) const { return by_pos_[index_of(pos)].names.size(); }

void ClassRegistry::write(std::ostream& out) const {
  for (const auto& slot : by_pos_) {
    for (std::size_t i = 0; i < slot.names.size(); ++i) out << i << '\t' << slot.names[i] << '\n';
  }
}

ClassRegistry ClassRegistry::read(std::istream& in) {
  ClassRegistry reg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim_cr(line);
    if (detail::is_blank(text)) continue;
    const auto cols = detail::split(text, '\t');
    if (cols.size() != 2) throw FormatError("registry line " + std::to_string(line_no) + ": expected 2 columns");
    const FeatureBundle b = parse_bundle(cols[1]);
    int expected = 0;
    try {
      expected = std::stoi(cols[0]);
    } catch (const std::exception&) {
      throw FormatError("registry line " + std::to_string(line_no) + ": bad class id");
    }
    if (reg.add(b) != expected) {
      throw FormatError("registry line " + std::to_string(line_no) + ": ids must be dense and in order");
    }
  }
  return reg;
}

ClassRegistry register_all(std::span<const Record> records) {
  ClassRegistry reg;
  for (const auto& r : records) reg.add(r.bundle);
  return reg;
}

ClassRegistry register_all(std::span<const FeatureBundle> bundles) {
  ClassRegistry reg;
  for (const auto& b : bundles) reg.add(b);
  return reg;
}

}  // namespace gumorph
