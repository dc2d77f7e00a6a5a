#pragma once

// Unimorph corpora: parsing, gold boundary derivation and the train/test split.
//
// A file holds one entry per line: lemma TAB surface TAB features, where the
// feature column is ";"-separated and starts with the POS tag.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gumorph/script.hpp"
#include "gumorph/tagset.hpp"

namespace gumorph {

/// Bit i set means unit i is the last unit of a morph.
struct BoundaryLabeling {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
  /// "00010"
  std::string str() const;
  static BoundaryLabeling parse(std::string_view text);

  bool operator==(const BoundaryLabeling&) const = default;
};

struct Record {
  Units surface;
  Units lemma;
  Pos pos = Pos::Noun;
  FeatureBundle bundle;
  std::optional<BoundaryLabeling> boundary;
  std::string features_text;  // feature column as read; empty for generated records
  std::size_t line_no = 0;    // 1-based source line, 0 when not read from a file

  /// Compares the entry itself (surface, lemma, POS, bundle). Boundary and
  /// provenance fields are ignored.
  bool same_entry(const Record& other) const;
};

enum class IssueKind { MalformedLine, UnknownPos, BadFeatures, NoSharedPrefix };

std::string_view issue_name(IssueKind kind);

struct Issue {
  std::size_t line_no = 0;
  IssueKind kind = IssueKind::MalformedLine;
  std::string detail;
};

struct ParseResult {
  std::vector<Record> records;
  std::vector<Issue> errors;
};

/// Bad lines are collected in `errors` and parsing continues.
ParseResult parse_unimorph(std::istream& in);
ParseResult read_unimorph_file(const std::string& path);

/// Re-emits the feature column as read when available, canonical otherwise.
void write_unimorph(std::ostream& out, std::span<const Record> records);
void emit_tsv(std::span<const Record> records, const std::string& path);

/// Longest-common-prefix cut: after unit k-1 where k = LCP(surface, lemma),
/// unless k is 0 or covers the whole surface.
BoundaryLabeling derive_boundary(std::u32string_view surface, std::u32string_view lemma);

/// Fills in `boundary` for records that lack one.
void derive_all(std::span<Record> records);

/// Cuts after every set bit. A bit on the final unit is ignored.
/// Throws LengthMismatch.
std::vector<Units> decode_segmentation(std::u32string_view surface, const BoundaryLabeling& labels);

/// Inverse of decode_segmentation: bits at the end of every morph but the last.
BoundaryLabeling labels_from_morphs(std::span<const Units> morphs);

/// Records whose surface and lemma share no prefix. One "line_no<TAB>reason"
/// line per record when written out.
std::vector<Issue> quality_report(std::span<const Record> records);
void write_issues(std::ostream& out, std::span<const Issue> issues);

struct Split {
  std::vector<Record> train;
  std::vector<Record> test;
};

/// Seeded shuffle, then the first ceil(ratio * n) records go to train.
/// Throws PreconditionViolation unless 0 < ratio < 1.
Split split_train_test(std::span<const Record> records, double ratio, std::uint64_t seed);

}  // namespace gumorph
