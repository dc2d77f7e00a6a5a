#pragma once

// Unsupervised two-part MDL segmenter (Morfessor Baseline family).
//
//   cost = corpus cost + lexicon cost
//   corpus cost  = -sum over morph tokens of log2(count(m) / N)
//   lexicon cost = sum over morph types of (len(m) + 1) * log2(A + 1)
//
// N is the number of morph tokens and A the alphabet size of the training
// words. Training greedily re-splits one word at a time and keeps a new
// analysis only if it does not raise the total cost.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "gumorph/script.hpp"

namespace gumorph {

struct WordCount {
  Units word;
  std::uint64_t count = 1;
};

struct MdlConfig {
  std::uint64_t seed = 0;
  std::size_t max_passes = 20;
  double min_improvement = 0.01;  // bits per pass
  bool use_frequencies = false;   // false: every distinct word counts once
};

struct MdlTrainStats {
  std::vector<double> pass_costs;  // cost before training, then after each pass
  std::size_t adopted_splits = 0;
  /// Largest (cost after split - cost unsplit) over adopted splits; never positive.
  double worst_split_delta = 0.0;
  std::size_t rejected_reanalyses = 0;
};

/// Closed-form cost of a lexicon of morph counts.
double mdl_cost(const std::unordered_map<Units, std::uint64_t>& counts, std::size_t alphabet_size);

class MdlModel {
 public:
  MdlModel() = default;
  explicit MdlModel(std::size_t alphabet_size);

  const std::unordered_map<Units, std::uint64_t>& lexicon() const { return counts_; }
  std::uint64_t count(std::u32string_view morph) const;
  std::uint64_t tokens() const { return tokens_; }
  std::size_t alphabet_size() const { return alphabet_; }

  /// Cached, incrementally maintained cost.
  double cost() const;
  /// Recomputed from scratch.
  double recompute_cost() const { return mdl_cost(counts_, alphabet_); }

  void add(const Units& morph, std::int64_t delta);

  const std::vector<std::vector<Units>>& analyses() const { return analyses_; }
  const std::vector<Units>& words() const { return words_; }
  const MdlTrainStats& stats() const { return stats_; }

  /// "morph TAB count" per line, most frequent first.
  void write_lexicon(std::ostream& out) const;

 private:
  friend MdlModel train_mdl(std::span<const WordCount>, const MdlConfig&);

  std::vector<Units> resplit(const Units& morph, std::uint64_t weight);
  void refresh_cache();

  std::unordered_map<Units, std::uint64_t> counts_;
  std::size_t alphabet_ = 0;
  double log_alpha_ = 0.0;  // log2(A + 1)
  std::uint64_t tokens_ = 0;
  double sum_clogc_ = 0.0;
  double lexicon_cost_ = 0.0;

  std::vector<Units> words_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::vector<Units>> analyses_;
  MdlTrainStats stats_;
};

/// Cost of the current analysis.
double total_cost(const MdlModel& model);

/// Throws PreconditionViolation on an empty word list.
MdlModel train_mdl(std::span<const WordCount> words, const MdlConfig& config = {});

/// Cost of using `morph` once: -log2(count / N) for lexicon morphs,
/// -log2(1 / (N + A)) for unseen single units, infinity otherwise.
double morph_cost(const MdlModel& model, std::u32string_view morph);

/// Minimum-cost segmentation by dynamic programming over cut points.
std::vector<Units> segment_mdl(const MdlModel& model, std::u32string_view word);

}  // namespace gumorph
