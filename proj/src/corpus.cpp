#include "gumorph/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "gumorph/error.hpp"
#include "gumorph/rng.hpp"
#include "util.hpp"

namespace gumorph {

std::size_t BoundaryLabeling::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::string BoundaryLabeling::str() const {
  std::string s;
  s.reserve(bits.size());
  for (const auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

BoundaryLabeling BoundaryLabeling::parse(std::string_view text) {
  BoundaryLabeling out;
  for (const char c : text) {
    if (c != '0' && c != '1') throw FormatError("labeling must consist of 0 and 1");
    out.bits.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

bool Record::same_entry(const Record& other) const {
  return surface == other.surface && lemma == other.lemma && pos == other.pos && bundle == other.bundle;
}

std::string_view issue_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::MalformedLine:
      return "MalformedLine";
    case IssueKind::UnknownPos:
      return "UnknownPos";
    case IssueKind::BadFeatures:
      return "BadFeatures";
    case IssueKind::NoSharedPrefix:
      return "NoSharedPrefix";
  }
  return "?";
}

ParseResult parse_unimorph(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim_cr(line);
    if (detail::is_blank(text)) continue;
    const auto cols = detail::split(text, '\t');
    if (cols.size() != 3) {
      result.errors.push_back({line_no, IssueKind::MalformedLine,
                               "expected 3 columns, got " + std::to_string(cols.size())});
      continue;
    }
    if (cols[0].empty() || cols[1].empty() || cols[2].empty()) {
      result.errors.push_back({line_no, IssueKind::MalformedLine, "empty column"});
      continue;
    }
    const auto tags = detail::split(cols[2], ';');
    const auto pos = parse_pos(tags.front());
    if (!pos) {
      result.errors.push_back({line_no, IssueKind::UnknownPos, "unknown POS tag '" + tags.front() + "'"});
      continue;
    }
    Record r;
    r.lemma = to_units(cols[0]);
    r.surface = to_units(cols[1]);
    r.pos = *pos;
    r.features_text = cols[2];
    r.line_no = line_no;
    try {
      r.bundle = bundle_from_tags(*pos, std::span<const std::string>(tags).subspan(1));
    } catch (const SchemaViolation& e) {
      result.errors.push_back({line_no, IssueKind::BadFeatures, e.what()});
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

ParseResult read_unimorph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return parse_unimorph(in);
}

void write_unimorph(std::ostream& out, std::span<const Record> records) {
  for (const auto& r : records) {
    out << to_utf8(r.lemma) << '\t' << to_utf8(r.surface) << '\t'
        << (r.features_text.empty() ? canonicalize(r.bundle) : r.features_text) << '\n';
  }
}

void emit_tsv(std::span<const Record> records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_unimorph(out, records);
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

BoundaryLabeling derive_boundary(std::u32string_view surface, std::u32string_view lemma) {
  BoundaryLabeling out;
  out.bits.assign(surface.size(), 0);
  const std::size_t limit = std::min(surface.size(), lemma.size());
  std::size_t k = 0;
  while (k < limit && surface[k] == lemma[k]) ++k;
  if (k >= 1 && k < surface.size()) out.bits[k - 1] = 1;
  return out;
}

void derive_all(std::span<Record> records) {
  for (auto& r : records) {
    if (!r.boundary) r.boundary = derive_boundary(r.surface, r.lemma);
  }
}

std::vector<Units> decode_segmentation(std::u32string_view surface, const BoundaryLabeling& labels) {
  if (labels.size() != surface.size()) {
    throw LengthMismatch("labeling has " + std::to_string(labels.size()) + " bits for " +
                         std::to_string(surface.size()) + " units");
  }
  std::vector<Units> morphs;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < surface.size(); ++i) {
    if (labels.bits[i]) {
      morphs.emplace_back(surface.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < surface.size()) morphs.emplace_back(surface.substr(start));
  return morphs;
}

BoundaryLabeling labels_from_morphs(std::span<const Units> morphs) {
  BoundaryLabeling out;
  for (std::size_t m = 0; m < morphs.size(); ++m) {
    if (morphs[m].empty()) continue;
    out.bits.insert(out.bits.end(), morphs[m].size(), 0);
    out.bits.back() = 1;
  }
  if (!out.bits.empty()) out.bits.back() = 0;
  return out;
}

std::vector<Issue> quality_report(std::span<const Record> records) {
  std::vector<Issue> issues;
  for (const auto& r : records) {
    if (r.surface.empty() || r.lemma.empty() || r.surface.front() != r.lemma.front()) {
      issues.push_back({r.line_no, IssueKind::NoSharedPrefix, "surface and lemma share no prefix"});
    }
  }
  return issues;
}

void write_issues(std::ostream& out, std::span<const Issue> issues) {
  for (const auto& i : issues) {
    out << i.line_no << '\t' << issue_name(i.kind);
    if (!i.detail.empty()) out << ": " << i.detail;
    out << '\n';
  }
}

Split split_train_test(std::span<const Record> records, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionViolation("split ratio must lie in (0, 1)");
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  // Guard against 0.8 * 10 landing a hair above 8.
  const auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(records.size()) - 1e-9));
  Split s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? s.train : s.test).push_back(records[order[i]]);
  }
  return s;
}

}  // namespace gumorph
