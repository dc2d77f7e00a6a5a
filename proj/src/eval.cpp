#include "gumorph/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gumorph/error.hpp"

namespace gumorph {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Metrics accuracy_from_counts(std::size_t n_correct, std::size_t n_total) {
  if (n_correct > n_total) throw PreconditionViolation("more correct words than words");
  Metrics m;
  m.n_total = n_total;
  m.n_correct = n_correct;
  m.accuracy = ratio(n_correct, n_total);
  return m;
}

Metrics seg_accuracy(std::span<const BoundaryLabeling> gold, std::span<const BoundaryLabeling> predicted) {
  if (gold.size() != predicted.size()) {
    throw LengthMismatch("gold has " + std::to_string(gold.size()) + " words, predictions " +
                         std::to_string(predicted.size()));
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size()) throw LengthMismatch("labeling length differs at word " + std::to_string(i));
    if (gold[i] == predicted[i]) ++correct;
  }
  return accuracy_from_counts(correct, gold.size());
}

Metrics seg_accuracy(std::span<const Record> gold, std::span<const BoundaryLabeling> predicted) {
  std::vector<BoundaryLabeling> labels;
  labels.reserve(gold.size());
  for (const auto& r : gold) labels.push_back(r.boundary ? *r.boundary : derive_boundary(r.surface, r.lemma));
  return seg_accuracy(labels, predicted);
}

Metrics tag_metrics(std::span<const FeatureBundle> gold, std::span<const FeatureBundle> predicted,
                    const ClassRegistry& registry) {
  if (gold.size() != predicted.size()) throw LengthMismatch("gold and predicted bundle counts differ");
  std::map<std::string, ClassScores> scores;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    registry.class_of(gold[i]);
    registry.class_of(predicted[i]);
    const auto g = canonicalize(gold[i]);
    const auto p = canonicalize(predicted[i]);
    ++scores[g].support;
    ++scores[p].predicted;
    if (g == p) {
      ++scores[g].true_positives;
      ++correct;
    }
  }
  Metrics m = accuracy_from_counts(correct, gold.size());
  std::size_t in_gold = 0;
  for (auto& [name, s] : scores) {
    s.name = name;
    s.precision = ratio(s.true_positives, s.predicted);
    s.recall = ratio(s.true_positives, s.support);
    s.f1 = harmonic(s.precision, s.recall);
    if (s.support > 0) {
      ++in_gold;
      m.macro_precision += s.precision;
      m.macro_recall += s.recall;
      m.macro_f1 += s.f1;
    }
    m.per_class.push_back(s);
  }
  if (in_gold > 0) {
    m.macro_precision /= static_cast<double>(in_gold);
    m.macro_recall /= static_cast<double>(in_gold);
    m.macro_f1 /= static_cast<double>(in_gold);
  }
  // Single-label classification: every prediction and every gold item is one
  // decision, so micro P, R and F1 all equal accuracy.
  m.micro_precision = m.micro_recall = m.micro_f1 = m.accuracy;
  return m;
}

std::string format_percent(double fraction) {
  const double cut = std::floor(fraction * 10000.0 + 1e-9) / 100.0;
  return fixed(cut, 2);
}

ReportedCheck check_reported(std::size_t n_correct, std::size_t n_total, double printed_percent) {
  ReportedCheck c;
  c.printed = printed_percent;
  c.percent = 100.0 * ratio(n_correct, n_total);
  c.truncated = std::floor(c.percent * 100.0 + 1e-9) / 100.0;
  c.rounded = std::round(c.percent * 100.0) / 100.0;
  c.consistent = std::abs(printed_percent - c.truncated) < 1e-6 || std::abs(printed_percent - c.rounded) < 1e-6;
  return c;
}

ComparisonReport compare_report(const std::map<Pos, Metrics>& neural, const std::map<Pos, Metrics>& baseline) {
  if (neural.size() != baseline.size()) throw MismatchedTestSets("systems cover different POS sets");
  ComparisonReport report;
  for (const auto& [pos, n] : neural) {
    const auto it = baseline.find(pos);
    if (it == baseline.end()) throw MismatchedTestSets("baseline lacks " + std::string(pos_tag(pos)));
    if (it->second.n_total != n.n_total) {
      throw MismatchedTestSets("test sets differ in size for " + std::string(pos_tag(pos)));
    }
    ComparisonRow row;
    row.pos = pos;
    row.n = n.n_total;
    row.neural = n.accuracy;
    row.baseline = it->second.accuracy;
    row.difference = row.neural - row.baseline;
    row.sign = row.difference > 0.0 ? 1 : (row.difference < 0.0 ? -1 : 0);
    report.rows.push_back(row);
  }
  return report;
}

std::string ComparisonReport::text() const {
  std::ostringstream out;
  out << "POS\tWords\tNeural %\tBaseline %\tDifference\n";
  for (const auto& r : rows) {
    const char sign = r.sign > 0 ? '+' : (r.sign < 0 ? '-' : '=');
    out << pos_tag(r.pos) << '\t' << r.n << '\t' << format_percent(r.neural) << '\t' << format_percent(r.baseline)
        << '\t' << sign << fixed(std::abs(r.difference) * 100.0, 2) << '\n';
  }
  return out.str();
}

std::string ComparisonReport::tsv() const {
  std::ostringstream out;
  for (const auto& r : rows) {
    const auto pos = pos_tag(r.pos);
    out << pos << "\tneural\taccuracy\t" << fixed(r.neural, 6) << '\n';
    out << pos << "\tbaseline\taccuracy\t" << fixed(r.baseline, 6) << '\n';
    out << pos << "\tdifference\taccuracy\t" << fixed(r.difference, 6) << '\n';
  }
  return out.str();
}

std::string metrics_tsv(std::string_view pos, std::string_view system, const Metrics& m) {
  std::ostringstream out;
  const auto line = [&](std::string_view metric, const std::string& value) {
    out << pos << '\t' << system << '\t' << metric << '\t' << value << '\n';
  };
  line("n_total", std::to_string(m.n_total));
  line("n_correct", std::to_string(m.n_correct));
  line("accuracy", fixed(m.accuracy, 6));
  if (!m.per_class.empty()) {
    line("macro_precision", fixed(m.macro_precision, 6));
    line("macro_recall", fixed(m.macro_recall, 6));
    line("macro_f1", fixed(m.macro_f1, 6));
  }
  if (m.ambiguity_ceiling) line("ambiguity_ceiling", fixed(*m.ambiguity_ceiling, 6));
  return out.str();
}

}  // namespace gumorph
