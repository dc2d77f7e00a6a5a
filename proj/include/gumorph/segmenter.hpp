#pragma once

// Morpheme boundary detection and stem-to-root normalization.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gumorph/corpus.hpp"
#include "gumorph/model_io.hpp"
#include "gumorph/nn.hpp"

namespace gumorph {

struct RootRule {
  Pos pos = Pos::Noun;
  std::optional<std::string> gender;  // nullopt matches any gender
  Units suffix;
};

/// Ordered suffix-attachment rules; the first match wins.
class RuleTable {
 public:
  RuleTable() = default;
  explicit RuleTable(std::vector<RootRule> rules) : rules_(std::move(rules)) {}

  /// "pos TAB gender TAB suffix" per line, "-" for any gender, '#' comments.
  /// Throws FormatError.
  static RuleTable parse(std::istream& in);
  static RuleTable load(const std::string& path);
  /// The shipped rule set (same text as data/root_rules.tsv).
  static const RuleTable& defaults();

  const RootRule* match(Pos pos, std::optional<std::string_view> gender) const;
  const std::vector<RootRule>& rules() const { return rules_; }

 private:
  std::vector<RootRule> rules_;
};

/// Text of the shipped rule file.
std::string_view default_rules_text();

struct RootResult {
  Units root;
  bool normalized = false;  // false when no rule matched
};

RootResult normalize_root(const RuleTable& rules, std::u32string_view stem, Pos pos,
                          std::optional<std::string_view> gender);

struct BoundaryModel {
  nn::ModelParams params;
  nn::TrainLog log;
};

/// Throws EmptyTrainingSet, or PreconditionViolation if a record has no
/// boundary labeling.
BoundaryModel train_boundary(std::span<const Record> train, const nn::Hyperparams& hyper,
                             const nn::EpochHook& hook = {});

std::vector<double> split_probabilities(const BoundaryModel& model, std::u32string_view word);

/// Bit i is set iff the split probability at i exceeds the model threshold
/// and i is not the last unit.
BoundaryLabeling predict_splits(const BoundaryModel& model, std::u32string_view word);

std::vector<BoundaryLabeling> predict_all(const BoundaryModel& model, std::span<const Record> records);

struct Analysis {
  std::vector<Units> morphs;
  Units root;
  bool normalized = false;
};

/// Segments the word; when it splits, the first morph is turned into a root
/// with the rule table, otherwise the word is its own root.
Analysis analyze_word(const BoundaryModel& model, const RuleTable& rules, std::u32string_view word, Pos pos,
                      std::optional<std::string_view> gender);

ModelFile to_model_file(const BoundaryModel& model);
BoundaryModel boundary_model_from(ModelFile file);

}  // namespace gumorph
