#include "gumorph/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "gumorph/error.hpp"
#include "gumorph/rng.hpp"

namespace gumorph {

namespace {

double clogc(std::uint64_t c) {
  if (c == 0) return 0.0;
  const auto d = static_cast<double>(c);
  return d * std::log2(d);
}

constexpr double kTieTolerance = 1e-9;

}  // namespace

double mdl_cost(const std::unordered_map<Units, std::uint64_t>& counts, std::size_t alphabet_size) {
  const double log_alpha = std::log2(static_cast<double>(alphabet_size) + 1.0);
  std::uint64_t n = 0;
  double corpus = 0.0;
  double lexicon = 0.0;
  for (const auto& [m, c] : counts) {
    if (c == 0) continue;
    n += c;
    corpus -= clogc(c);
    lexicon += static_cast<double>(m.size() + 1) * log_alpha;
  }
  corpus += clogc(n);
  return corpus + lexicon;
}

MdlModel::MdlModel(std::size_t alphabet_size)
    : alphabet_(alphabet_size), log_alpha_(std::log2(static_cast<double>(alphabet_size) + 1.0)) {}

std::uint64_t MdlModel::count(std::u32string_view morph) const {
  const auto it = counts_.find(Units(morph));
  return it == counts_.end() ? 0 : it->second;
}

double MdlModel::cost() const { return clogc(tokens_) - sum_clogc_ + lexicon_cost_; }

void MdlModel::add(const Units& morph, std::int64_t delta) {
  auto it = counts_.find(morph);
  const std::uint64_t old = it == counts_.end() ? 0 : it->second;
  const auto updated = static_cast<std::int64_t>(old) + delta;
  if (updated < 0) throw PreconditionViolation("morph count would go negative");
  const auto now = static_cast<std::uint64_t>(updated);
  sum_clogc_ += clogc(now) - clogc(old);
  tokens_ = tokens_ + now - old;
  const double type_cost = static_cast<double>(morph.size() + 1) * log_alpha_;
  if (old == 0 && now > 0) lexicon_cost_ += type_cost;
  if (old > 0 && now == 0) lexicon_cost_ -= type_cost;
  if (now == 0) {
    if (it != counts_.end()) counts_.erase(it);
  } else if (it == counts_.end()) {
    counts_.emplace(morph, now);
  } else {
    it->second = now;
  }
}

void MdlModel::refresh_cache() {
  tokens_ = 0;
  sum_clogc_ = 0.0;
  lexicon_cost_ = 0.0;
  for (const auto& [m, c] : counts_) {
    tokens_ += c;
    sum_clogc_ += clogc(c);
    lexicon_cost_ += static_cast<double>(m.size() + 1) * log_alpha_;
  }
}

// Expects `morph` to be absent from the counts on entry; leaves its chosen
// analysis counted on exit.
std::vector<Units> MdlModel::resplit(const Units& morph, std::uint64_t weight) {
  const auto w = static_cast<std::int64_t>(weight);
  add(morph, w);
  const double whole = cost();
  add(morph, -w);

  double best = whole;
  std::size_t best_cut = 0;
  for (std::size_t cut = 1; cut < morph.size(); ++cut) {
    const Units left = morph.substr(0, cut);
    const Units right = morph.substr(cut);
    add(left, w);
    add(right, w);
    const double c = cost();
    add(left, -w);
    add(right, -w);
    if (c < best - kTieTolerance) {
      best = c;
      best_cut = cut;
    }
  }
  if (best_cut == 0) {
    add(morph, w);
    return {morph};
  }

  ++stats_.adopted_splits;
  stats_.worst_split_delta = stats_.adopted_splits == 1 ? best - whole : std::max(stats_.worst_split_delta, best - whole);
  const Units left = morph.substr(0, best_cut);
  const Units right = morph.substr(best_cut);
  add(left, w);
  add(right, w);
  add(left, -w);
  auto out = resplit(left, weight);
  add(right, -w);
  auto tail = resplit(right, weight);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

double total_cost(const MdlModel& model) { return model.cost(); }

MdlModel train_mdl(std::span<const WordCount> words, const MdlConfig& config) {
  if (words.empty()) throw PreconditionViolation("MDL training needs at least one word");

  // Merge duplicates; the first occurrence fixes the order.
  std::vector<Units> types;
  std::vector<std::uint64_t> weights;
  std::map<Units, std::size_t> index;
  std::set<Unit> alphabet;
  for (const auto& wc : words) {
    if (wc.word.empty()) continue;
    alphabet.insert(wc.word.begin(), wc.word.end());
    const auto [it, fresh] = index.emplace(wc.word, types.size());
    if (fresh) {
      types.push_back(wc.word);
      weights.push_back(config.use_frequencies ? wc.count : 1);
    } else if (config.use_frequencies) {
      weights[it->second] += wc.count;
    }
  }
  if (types.empty()) throw PreconditionViolation("MDL training needs at least one nonempty word");

  MdlModel model(alphabet.size());
  model.words_ = types;
  model.weights_ = weights;
  for (std::size_t i = 0; i < types.size(); ++i) {
    model.add(types[i], static_cast<std::int64_t>(weights[i]));
    model.analyses_.push_back({types[i]});
  }
  model.stats_.pass_costs.push_back(model.cost());

  Rng rng(config.seed);
  std::vector<std::size_t> order(types.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t pass = 0; pass < config.max_passes; ++pass) {
    const double before_pass = model.cost();
    rng.shuffle(order);
    for (const std::size_t i : order) {
      const auto w = static_cast<std::int64_t>(weights[i]);
      const double before = model.cost();
      const auto old = model.analyses_[i];
      for (const auto& m : old) model.add(m, -w);
      auto fresh = model.resplit(types[i], weights[i]);
      if (model.cost() > before + kTieTolerance) {
        for (const auto& m : fresh) model.add(m, -w);
        for (const auto& m : old) model.add(m, w);
        ++model.stats_.rejected_reanalyses;
      } else {
        model.analyses_[i] = std::move(fresh);
      }
    }
    model.refresh_cache();
    model.stats_.pass_costs.push_back(model.cost());
    if (before_pass - model.cost() < config.min_improvement) break;
  }
  return model;
}

void MdlModel::write_lexicon(std::ostream& out) const {
  std::vector<std::pair<Units, std::uint64_t>> rows(counts_.begin(), counts_.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  for (const auto& [m, c] : rows) out << to_utf8(m) << '\t' << c << '\n';
}

double morph_cost(const MdlModel& model, std::u32string_view morph) {
  const auto n = static_cast<double>(model.tokens());
  if (const auto c = model.count(morph); c > 0) return -std::log2(static_cast<double>(c) / n);
  if (morph.size() == 1) return std::log2(n + static_cast<double>(model.alphabet_size()));
  return std::numeric_limits<double>::infinity();
}

std::vector<Units> segment_mdl(const MdlModel& model, std::u32string_view word) {
  const std::size_t n = word.size();
  if (n == 0) return {};
  std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t end = 1; end <= n; ++end) {
    for (std::size_t start = 0; start < end; ++start) {
      if (!std::isfinite(best[start])) continue;
      const double c = best[start] + morph_cost(model, word.substr(start, end - start));
      if (c < best[end]) {
        best[end] = c;
        back[end] = start;
      }
    }
  }
  std::vector<Units> morphs;
  for (std::size_t end = n; end > 0; end = back[end]) morphs.emplace_back(word.substr(back[end], end - back[end]));
  std::reverse(morphs.begin(), morphs.end());
  return morphs;
}

}  // namespace gumorph
