#pragma once

// Exact-match segmentation accuracy, tagging P/R/F1 and the
// neural-vs-baseline comparison table.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gumorph/corpus.hpp"
#include "gumorph/tagset.hpp"

namespace gumorph {

struct ClassScores {
  std::string name;
  std::size_t support = 0;  // gold occurrences
  std::size_t predicted = 0;
  std::size_t true_positives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class Averaging { Macro, Micro };

struct Metrics {
  std::size_t n_total = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  std::vector<ClassScores> per_class;  // tagging only, sorted by name
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  std::optional<double> ambiguity_ceiling;

  double precision(Averaging a = Averaging::Macro) const { return a == Averaging::Macro ? macro_precision : micro_precision; }
  double recall(Averaging a = Averaging::Macro) const { return a == Averaging::Macro ? macro_recall : micro_recall; }
  double f1(Averaging a = Averaging::Macro) const { return a == Averaging::Macro ? macro_f1 : micro_f1; }
};

Metrics accuracy_from_counts(std::size_t n_correct, std::size_t n_total);

/// A word counts as correct only when every label matches. Throws LengthMismatch.
Metrics seg_accuracy(std::span<const BoundaryLabeling> gold, std::span<const BoundaryLabeling> predicted);
/// Uses each record's boundary, deriving it from the lemma when absent.
Metrics seg_accuracy(std::span<const Record> gold, std::span<const BoundaryLabeling> predicted);

/// Per-class scores with 0/0 taken as 0; macro averages run over the classes
/// present in gold. Throws UnknownBundle for unregistered bundles and
/// LengthMismatch for misaligned inputs.
Metrics tag_metrics(std::span<const FeatureBundle> gold, std::span<const FeatureBundle> predicted,
                    const ClassRegistry& registry);

/// "89.05": percentage cut (not rounded) to two decimals.
std::string format_percent(double fraction);

/// Compares a printed percentage with the one implied by its counts. Both
/// cut and rounded two-decimal renderings are accepted as consistent.
struct ReportedCheck {
  double percent = 0.0;
  double truncated = 0.0;
  double rounded = 0.0;
  double printed = 0.0;
  bool consistent = false;
};

ReportedCheck check_reported(std::size_t n_correct, std::size_t n_total, double printed_percent);

struct ComparisonRow {
  Pos pos = Pos::Noun;
  std::size_t n = 0;
  double neural = 0.0;
  double baseline = 0.0;
  double difference = 0.0;  // neural - baseline
  int sign = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;

  std::string text() const;
  /// "pos TAB system TAB metric TAB value" lines.
  std::string tsv() const;
};

/// Throws MismatchedTestSets unless both sides cover the same POS with the
/// same number of test words.
ComparisonReport compare_report(const std::map<Pos, Metrics>& neural, const std::map<Pos, Metrics>& baseline);

/// "pos TAB system TAB metric TAB value" lines for one metrics block.
std::string metrics_tsv(std::string_view pos, std::string_view system, const Metrics& m);

}  // namespace gumorph
