#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "../util.hpp"
#include "gumorph/baseline.hpp"
#include "gumorph/cli.hpp"
#include "gumorph/corpus.hpp"
#include "gumorph/eval.hpp"
#include "gumorph/paradigm.hpp"
#include "gumorph/segmenter.hpp"
#include "gumorph/tagger.hpp"

namespace gumorph::cli {

namespace {

// Values given on the command line. Anything left unset falls back to the
// config file and then to the built-in defaults.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> task, train, test, model, rules, registry, input, out, pos;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs, batch, embed_dim, hidden_dim;
  std::optional<double> lr, threshold;

  std::optional<std::string> spec, counts, system_a, system_b;
  std::optional<double> reported;
  bool corrupt = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value config file; flags override it");
  cmd->add_option("--task", f.task, "segment or tag");
  cmd->add_option("--train", f.train, "training corpus (Unimorph TSV)");
  cmd->add_option("--test", f.test, "test corpus (Unimorph TSV)");
  cmd->add_option("--model", f.model, "model file");
  cmd->add_option("--rules", f.rules, "root normalization rule file");
  cmd->add_option("--registry", f.registry, "class registry file");
  cmd->add_option("--input", f.input, "input file, one word per line");
  cmd->add_option("--out", f.out, "output path");
  cmd->add_option("--pos", f.pos, "N, V or ADJ");
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--epochs", f.epochs);
  cmd->add_option("--batch", f.batch);
  cmd->add_option("--embed-dim", f.embed_dim);
  cmd->add_option("--hidden-dim", f.hidden_dim);
  cmd->add_option("--lr", f.lr);
  cmd->add_option("--threshold", f.threshold);
}

Config resolve(const Flags& f) {
  Config c;
  if (f.config) apply_key_values(c, read_key_values(*f.config));
  auto take = [](std::string& dst, const std::optional<std::string>& src) {
    if (src) dst = *src;
  };
  take(c.task, f.task);
  take(c.train, f.train);
  take(c.test, f.test);
  take(c.model, f.model);
  take(c.rules, f.rules);
  take(c.registry, f.registry);
  take(c.input, f.input);
  take(c.out, f.out);
  take(c.pos, f.pos);
  if (f.seed) c.hyper.seed = *f.seed;
  if (f.epochs) c.hyper.epochs = *f.epochs;
  if (f.batch) c.hyper.batch = *f.batch;
  if (f.embed_dim) c.hyper.embed_dim = *f.embed_dim;
  if (f.hidden_dim) c.hyper.hidden_dim = *f.hidden_dim;
  if (f.lr) c.hyper.lr = *f.lr;
  if (f.threshold) c.hyper.threshold = *f.threshold;
  c.validate();
  return c;
}

const std::string& require(const std::string& value, std::string_view flag) {
  if (value.empty()) throw ConfigError("missing --" + std::string(flag));
  return value;
}

std::optional<Pos> pos_option(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto pos = parse_pos(text);
  if (!pos) throw ConfigError("unknown POS '" + text + "'");
  return pos;
}

std::vector<Record> load_corpus(const std::string& path, std::ostream& err) {
  auto parsed = read_unimorph_file(path);
  if (!parsed.errors.empty()) {
    std::ostringstream msg;
    write_issues(msg, parsed.errors);
    err << msg.str();
    throw FormatError(path + ": " + std::to_string(parsed.errors.size()) + " malformed line(s)");
  }
  derive_all(parsed.records);
  return std::move(parsed.records);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  auto slurp = [&](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) lines.emplace_back(detail::trim_cr(line));
  };
  if (path.empty() || path == "-") {
    slurp(std::cin);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    slurp(in);
  }
  return lines;
}

// Writes to the --out path when given, to `fallback` otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed for " + (path_.empty() ? std::string("output") : path_));
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

std::string join_morphs(std::span<const Units> morphs) {
  std::string out;
  for (std::size_t i = 0; i < morphs.size(); ++i) {
    if (i) out += '+';
    out += to_utf8(morphs[i]);
  }
  return out;
}

std::string percent(double fraction) { return format_percent(fraction); }

std::vector<std::string> comma_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& item : detail::split(text, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------
// generate

struct LoadedSpec {
  GeneratorSpec spec;
  std::optional<ParadigmTable> noun_cases, verb_grid, adjective_endings;
};

ParadigmTable load_table(Pos pos, const std::string& path, Units lemma_suffix) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return ParadigmTable::parse(pos, in, std::move(lemma_suffix));
}

LoadedSpec load_spec(const std::string& path) {
  LoadedSpec out;
  auto& s = out.spec;
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve_path = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };
  for (const auto& [key, value] : read_key_values(path)) {
    if (key == "noun_roots") {
      s.noun_roots = parse_size(key, value);
    } else if (key == "verb_roots") {
      s.verb_roots = parse_size(key, value);
    } else if (key == "inflected_adjectives") {
      s.inflected_adjectives = parse_size(key, value);
    } else if (key == "noninflected_adjectives") {
      s.noninflected_adjectives = parse_size(key, value);
    } else if (key == "numbers") {
      s.numbers = comma_list(value);
    } else if (key == "genders") {
      s.genders = comma_list(value);
    } else if (key == "seed") {
      s.seed = parse_size(key, value);
    } else if (key == "noun_cases") {
      out.noun_cases = load_table(Pos::Noun, resolve_path(value), {});
    } else if (key == "verb_grid") {
      out.verb_grid = load_table(Pos::Verb, resolve_path(value), to_units("વું"));
    } else if (key == "adjective_endings") {
      out.adjective_endings = load_table(Pos::Adjective, resolve_path(value), {});
    } else {
      throw ConfigError(path + ": unknown generator key '" + key + "'");
    }
  }
  if (s.numbers.empty()) throw ConfigError(path + ": empty number list");
  for (const auto& n : s.numbers) {
    if (n != "SG" && n != "PL") throw ConfigError(path + ": unknown number '" + n + "'");
  }
  for (const auto& g : s.genders) {
    if (g != "M" && g != "F" && g != "N") throw ConfigError(path + ": unknown gender '" + g + "'");
  }
  return out;
}

int cmd_generate(const Flags& f, std::ostream& out, std::ostream& err) {
  const Config c = resolve(f);
  LoadedSpec loaded;
  if (f.spec) {
    loaded = load_spec(*f.spec);
  } else {
    loaded.spec.noun_roots = 100;
  }
  if (f.seed) loaded.spec.seed = *f.seed;
  if (loaded.noun_cases) loaded.spec.noun_cases = &*loaded.noun_cases;
  if (loaded.verb_grid) loaded.spec.verb_grid = &*loaded.verb_grid;
  if (loaded.adjective_endings) loaded.spec.adjective_endings = &*loaded.adjective_endings;

  const auto records = generate(loaded.spec);
  Sink sink(c.out, out);
  write_unimorph(sink.get(), records);
  sink.close();
  if (!c.registry.empty()) {
    std::ofstream reg(c.registry, std::ios::binary);
    if (!reg) throw IoError("cannot write " + c.registry);
    register_all(records).write(reg);
  }
  err << "generated " << records.size() << " records\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// train

ClassRegistry registry_for(const Config& c, std::span<const Record> records) {
  if (!c.registry.empty() && std::filesystem::exists(c.registry)) {
    std::ifstream in(c.registry, std::ios::binary);
    if (!in) throw IoError("cannot open " + c.registry);
    return ClassRegistry::read(in);
  }
  auto registry = register_all(records);
  if (!c.registry.empty()) {
    std::ofstream outf(c.registry, std::ios::binary);
    if (!outf) throw IoError("cannot write " + c.registry);
    registry.write(outf);
  }
  return registry;
}

std::vector<Record> of_pos(std::span<const Record> records, Pos pos) {
  std::vector<Record> out;
  for (const auto& r : records) {
    if (r.pos == pos) out.push_back(r);
  }
  return out;
}

Pos single_pos(std::span<const Record> records, const std::string& flag) {
  if (const auto p = pos_option(flag)) return *p;
  if (records.empty()) throw EmptyTrainingSet("no training records");
  const Pos first = records.front().pos;
  for (const auto& r : records) {
    if (r.pos != first) throw ConfigError("training data mixes POS categories; pass --pos");
  }
  return first;
}

int cmd_train(const Flags& f, std::ostream& out, std::ostream& err) {
  const Config c = resolve(f);
  const auto& task = require(c.task, "task");
  if (task != "segment" && task != "tag") throw ConfigError("--task must be segment or tag");
  const auto& model_path = require(c.model, "model");
  auto records = load_corpus(require(c.train, "train"), err);

  const auto started = std::chrono::steady_clock::now();
  ModelFile file;
  double final_loss = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  if (task == "segment") {
    if (const auto p = pos_option(c.pos)) records = of_pos(records, *p);
    const auto model = train_boundary(records, c.hyper);
    final_loss = model.log.epoch_loss.empty() ? 0.0 : model.log.epoch_loss.back();
    const auto predicted = predict_all(model, records);
    const auto m = seg_accuracy(std::span<const Record>(records), predicted);
    correct = m.n_correct;
    total = m.n_total;
    file = to_model_file(model);
  } else {
    const Pos pos = single_pos(records, c.pos);
    records = of_pos(records, pos);
    const auto registry = registry_for(c, records);
    const auto model = train_tagger(records, pos, registry, c.hyper);
    final_loss = model.log.epoch_loss.empty() ? 0.0 : model.log.epoch_loss.back();
    for (const auto& r : records) {
      if (predict_bundle(model, r.surface).canonical == canonicalize(r.bundle)) ++correct;
    }
    total = records.size();
    file = to_model_file(model);
  }
  save_model(model_path, file);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", final_loss);
  out << "final_loss\t" << buf << '\n';
  out << "train_accuracy\t" << percent(accuracy_from_counts(correct, total).accuracy) << '\n';
  std::snprintf(buf, sizeof buf, "%.2f", elapsed);
  out << "elapsed_seconds\t" << buf << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// predict

struct WordLine {
  std::string word;
  std::optional<Pos> pos;
  std::optional<std::string> gender;
};

// "word" or "word TAB pos [TAB gender]".
WordLine parse_word_line(const std::string& line, std::optional<Pos> default_pos) {
  const auto cols = detail::split(line, '\t');
  WordLine w{cols[0], default_pos, std::nullopt};
  if (cols.size() > 1 && !cols[1].empty()) {
    w.pos = parse_pos(cols[1]);
    if (!w.pos) throw FormatError("unknown POS '" + cols[1] + "' for " + cols[0]);
  }
  if (cols.size() > 2 && !cols[2].empty() && cols[2] != "-") w.gender = cols[2];
  return w;
}

RuleTable rules_for(const Config& c) { return c.rules.empty() ? RuleTable::defaults() : RuleTable::load(c.rules); }

int cmd_predict(const Flags& f, std::ostream& out, std::ostream&) {
  const Config c = resolve(f);
  auto file = load_model(require(c.model, "model"));
  const auto lines = read_lines(c.input);
  Sink sink(c.out, out);
  auto& o = sink.get();
  if (file.params.head == nn::Head::Boundary) {
    auto model = boundary_model_from(std::move(file));
    if (f.threshold) model.params.hyper.threshold = *f.threshold;
    const auto rules = rules_for(c);
    const auto default_pos = pos_option(c.pos);
    for (const auto& line : lines) {
      const auto w = parse_word_line(line, default_pos);
      const auto word = to_units(w.word);
      if (w.pos) {
        const auto a = analyze_word(model, rules, word, *w.pos, w.gender);
        o << to_utf8(word) << '\t' << join_morphs(a.morphs) << '\t' << to_utf8(a.root) << '\n';
      } else {
        const auto morphs = decode_segmentation(word, predict_splits(model, word));
        o << to_utf8(word) << '\t' << join_morphs(morphs) << '\t' << (morphs.empty() ? "" : to_utf8(morphs[0]))
          << '\n';
      }
    }
  } else {
    const auto model = tagger_model_from(std::move(file));
    for (const auto& line : lines) {
      const auto word = to_units(detail::split(line, '\t')[0]);
      const auto p = predict_bundle(model, word);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", p.distribution.empty() ? 0.0 : p.distribution[p.class_id]);
      o << to_utf8(word) << '\t' << p.canonical << '\t' << buf << '\n';
    }
  }
  sink.close();
  return kOk;
}

// ---------------------------------------------------------------------------
// evaluate / compare

struct SegPrediction {
  Units word;
  BoundaryLabeling labels;
};

std::vector<SegPrediction> read_seg_predictions(const std::string& path) {
  std::vector<SegPrediction> out;
  for (const auto& line : read_lines(path)) {
    const auto cols = detail::split(line, '\t');
    if (cols.size() < 2) throw FormatError(path + ": expected word TAB morphs");
    std::vector<Units> morphs;
    for (const auto& m : detail::split(cols[1], '+')) morphs.push_back(to_units(m));
    SegPrediction p{to_units(cols[0]), labels_from_morphs(morphs)};
    Units joined;
    for (const auto& m : morphs) joined += m;
    if (joined != p.word) throw FormatError(path + ": morphs do not spell " + cols[0]);
    out.push_back(std::move(p));
  }
  return out;
}

void check_aligned(std::span<const Record> gold, std::span<const SegPrediction> predicted, const std::string& path) {
  if (gold.size() != predicted.size()) {
    throw LengthMismatch(path + " has " + std::to_string(predicted.size()) + " lines for " +
                         std::to_string(gold.size()) + " gold records");
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].surface != predicted[i].word) {
      throw LengthMismatch(path + ": line " + std::to_string(i + 1) + " is " + to_utf8(predicted[i].word) +
                           ", gold has " + to_utf8(gold[i].surface));
    }
  }
}

// Per-POS and overall exact-match accuracy for parallel gold and predictions.
std::map<Pos, Metrics> seg_by_pos(std::span<const Record> gold, std::span<const BoundaryLabeling> predicted) {
  std::map<Pos, std::pair<std::vector<BoundaryLabeling>, std::vector<BoundaryLabeling>>> groups;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto& g = groups[gold[i].pos];
    g.first.push_back(*gold[i].boundary);
    g.second.push_back(predicted[i]);
  }
  std::map<Pos, Metrics> out;
  for (const auto& [pos, g] : groups) out[pos] = seg_accuracy(g.first, g.second);
  return out;
}

void print_seg_tables(std::ostream& o, const Metrics& overall, const std::map<Pos, Metrics>& by_pos) {
  o << "Segmentation (overall)\n";
  o << "Words in test set\tCorrectly segmented\tAccuracy\n";
  o << overall.n_total << '\t' << overall.n_correct << '\t' << percent(overall.accuracy) << "\n\n";
  o << "Segmentation by POS\n";
  o << "POS\tWords\tCorrect\tAccuracy\n";
  for (const auto& [pos, m] : by_pos) {
    o << pos_tag(pos) << '\t' << m.n_total << '\t' << m.n_correct << '\t' << percent(m.accuracy) << '\n';
  }
}

std::string two(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void print_tag_table(std::ostream& o, const std::map<Pos, Metrics>& by_pos) {
  o << "Tagging by POS\n";
  o << "POS\tAccuracy\tPrecision\tRecall\tF1\tCeiling\n";
  for (const auto& [pos, m] : by_pos) {
    o << pos_tag(pos) << '\t' << percent(m.accuracy) << '\t' << two(m.macro_precision) << '\t'
      << two(m.macro_recall) << '\t' << two(m.macro_f1) << '\t'
      << (m.ambiguity_ceiling ? percent(*m.ambiguity_ceiling) : std::string("-")) << '\n';
  }
}

Metrics evaluate_tagger(const TaggerModel& model, std::span<const Record> test, const ClassRegistry& registry) {
  std::vector<FeatureBundle> gold;
  std::vector<FeatureBundle> predicted;
  for (const auto& r : test) {
    gold.push_back(r.bundle);
    predicted.push_back(predict_bundle(model, r.surface).bundle);
  }
  auto m = tag_metrics(gold, predicted, registry);
  m.ambiguity_ceiling = audit_ambiguity(test).ceiling;
  return m;
}

int evaluate_counts(const Flags& f, std::ostream& out) {
  const auto parts = detail::split(*f.counts, '/');
  if (parts.size() != 2) throw ConfigError("--counts expects correct/total");
  const auto correct = parse_size("counts", parts[0]);
  const auto total = parse_size("counts", parts[1]);
  if (correct > total) throw ConfigError("--counts: more correct than total");
  const auto m = accuracy_from_counts(correct, total);
  out << "accuracy\t" << percent(m.accuracy) << '\n';
  if (f.reported) {
    const auto check = check_reported(correct, total, *f.reported);
    out << "reported\t" << two(check.printed) << '\t' << (check.consistent ? "consistent" : "INCONSISTENT") << '\n';
  }
  return kOk;
}

int cmd_evaluate(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.counts) return evaluate_counts(f, out);
  const Config c = resolve(f);
  auto test = load_corpus(require(c.test, "test"), err);
  Sink sink(c.out, out);
  auto& o = sink.get();

  if (!c.model.empty()) {
    auto file = load_model(c.model);
    if (file.params.head == nn::Head::Boundary) {
      const auto model = boundary_model_from(std::move(file));
      const auto predicted = predict_all(model, test);
      print_seg_tables(o, seg_accuracy(std::span<const Record>(test), predicted), seg_by_pos(test, predicted));
    } else {
      const auto model = tagger_model_from(std::move(file));
      test = of_pos(test, model.pos);
      ClassRegistry registry;
      for (const auto& name : model.classes) registry.add(parse_bundle(name));
      for (const auto& r : test) registry.add(r.bundle);
      print_tag_table(o, {{model.pos, evaluate_tagger(model, test, registry)}});
    }
  } else {
    const auto& path = require(c.input, "input");
    const auto predictions = read_seg_predictions(path);
    check_aligned(test, predictions, path);
    std::vector<BoundaryLabeling> labels;
    for (const auto& p : predictions) labels.push_back(p.labels);
    print_seg_tables(o, seg_accuracy(std::span<const Record>(test), labels), seg_by_pos(test, labels));
  }
  sink.close();
  return kOk;
}

int cmd_compare(const Flags& f, std::ostream& out, std::ostream& err) {
  const Config c = resolve(f);
  const auto test = load_corpus(require(c.test, "test"), err);
  if (!f.system_a || !f.system_b) throw ConfigError("compare needs --system-a and --system-b");
  auto by_pos_for = [&](const std::string& path) {
    const auto predictions = read_seg_predictions(path);
    check_aligned(test, predictions, path);
    std::vector<BoundaryLabeling> labels;
    for (const auto& p : predictions) labels.push_back(p.labels);
    return seg_by_pos(test, labels);
  };
  const auto report = compare_report(by_pos_for(*f.system_a), by_pos_for(*f.system_b));
  out << report.text();
  if (!c.out.empty()) {
    Sink sink(c.out, out);
    sink.get() << report.tsv();
    sink.close();
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// gradcheck

int cmd_gradcheck(const Flags& f, std::ostream& out, std::ostream&) {
  const Config c = resolve(f);
  std::vector<nn::Head> heads;
  if (c.task.empty() || c.task == "both") {
    heads = {nn::Head::Boundary, nn::Head::Class};
  } else if (c.task == "segment") {
    heads = {nn::Head::Boundary};
  } else if (c.task == "tag") {
    heads = {nn::Head::Class};
  } else {
    throw ConfigError("--task must be segment, tag or both");
  }
  const std::vector<std::uint64_t> seeds = f.seed ? std::vector<std::uint64_t>{*f.seed} : std::vector<std::uint64_t>{0, 1, 2};
  const std::size_t d_e = f.embed_dim.value_or(4);
  const std::size_t d_h = f.hidden_dim.value_or(6);

  bool ok = true;
  for (const auto head : heads) {
    for (const auto seed : seeds) {
      const auto r = toy_gradcheck(head, seed, d_e, d_h, f.corrupt);
      const bool pass = r.max_rel_error < kGradCheckTolerance;
      ok = ok && pass;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s\tseed=%llu\tmax_rel_error=%.3e\tworst=%s[%zu]\t%s\n",
                    head == nn::Head::Boundary ? "boundary" : "class", static_cast<unsigned long long>(seed),
                    r.max_rel_error, r.worst_param.c_str(), r.worst_index, pass ? "ok" : "FAIL");
      out << buf;
    }
  }
  return ok ? kOk : kDataFailure;
}

// ---------------------------------------------------------------------------
// experiment: generate, split, train both systems, report the four tables.

int cmd_experiment(const Flags& f, std::ostream& out, std::ostream& err) {
  const Config c = resolve(f);
  LoadedSpec loaded;
  if (f.spec) {
    loaded = load_spec(*f.spec);
  } else {
    loaded.spec.noun_roots = 100;
    loaded.spec.verb_roots = 20;
    loaded.spec.inflected_adjectives = 20;
    loaded.spec.noninflected_adjectives = 10;
  }
  loaded.spec.seed = c.hyper.seed;
  if (loaded.noun_cases) loaded.spec.noun_cases = &*loaded.noun_cases;
  if (loaded.verb_grid) loaded.spec.verb_grid = &*loaded.verb_grid;
  if (loaded.adjective_endings) loaded.spec.adjective_endings = &*loaded.adjective_endings;

  const auto records = c.train.empty() ? generate(loaded.spec) : load_corpus(c.train, err);
  auto split = split_train_test(records, 0.8, c.hyper.seed);
  derive_all(split.train);
  derive_all(split.test);
  const auto registry = register_all(records);

  Sink sink(c.out, out);
  auto& o = sink.get();
  o << "records\t" << records.size() << "\ttrain\t" << split.train.size() << "\ttest\t" << split.test.size()
    << "\n\n";

  const auto boundary = train_boundary(split.train, c.hyper);
  const auto neural = predict_all(boundary, split.test);
  const auto neural_by_pos = seg_by_pos(split.test, neural);
  print_seg_tables(o, seg_accuracy(std::span<const Record>(split.test), neural), neural_by_pos);
  o << '\n';

  std::map<Pos, Metrics> tagging;
  for (const Pos pos : kAllPos) {
    const auto train = of_pos(split.train, pos);
    const auto test = of_pos(split.test, pos);
    if (train.empty() || test.empty()) continue;
    const auto tagger = train_tagger(train, pos, registry, c.hyper);
    tagging[pos] = evaluate_tagger(tagger, test, registry);
  }
  print_tag_table(o, tagging);
  o << '\n';

  std::vector<WordCount> words;
  for (const auto& r : split.train) words.push_back({r.surface, 1});
  MdlConfig mdl;
  mdl.seed = c.hyper.seed;
  const auto baseline = train_mdl(words, mdl);
  std::vector<BoundaryLabeling> unsupervised;
  for (const auto& r : split.test) unsupervised.push_back(labels_from_morphs(segment_mdl(baseline, r.surface)));
  const auto report = compare_report(neural_by_pos, seg_by_pos(split.test, unsupervised));
  o << "Neural vs unsupervised segmentation\n" << report.text();
  sink.close();
  return kOk;
}

int dispatch(CLI::App& app, const std::map<std::string, std::function<int()>>& commands) {
  for (const auto& [name, fn] : commands) {
    if (app.got_subcommand(name)) return fn();
  }
  throw ConfigError("no command given");
}

}  // namespace

nn::GradCheckResult toy_gradcheck(nn::Head head, std::uint64_t seed, std::size_t embed_dim, std::size_t hidden_dim,
                                  bool corrupt) {
  const auto roots = random_roots(4, seed);
  const std::vector<std::string> genders = {"M", "F", "N", "M"};
  const auto records = gen_nouns(roots, genders);
  // A few short words spread over different cases and roots.
  std::vector<Record> picked;
  for (std::size_t i = 0; i < records.size() && picked.size() < 4; i += 5) {
    if (records[i].surface.size() <= 6) picked.push_back(records[i]);
  }
  derive_all(picked);

  std::vector<Units> words;
  for (const auto& r : picked) words.push_back(r.surface);
  const auto registry = register_all(std::span<const Record>(picked));
  nn::Hyperparams hyper;
  hyper.embed_dim = embed_dim;
  hyper.hidden_dim = hidden_dim;
  hyper.seed = seed;
  const std::size_t outputs = head == nn::Head::Boundary ? 1 : registry.size(Pos::Noun);
  const auto params = nn::ModelParams::init(head, Vocab::build(words), outputs, hyper);

  std::vector<nn::Example> examples;
  for (const auto& r : picked) {
    examples.push_back({params.vocab.encode(r.surface), r.boundary->bits, registry.class_of(r.bundle)});
  }
  return nn::grad_check(params, nn::make_batch(examples), 1e-5, corrupt);
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gujarati morphological analyzer"};
  app.require_subcommand(1);
  Flags flags;

  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic corpus from paradigm tables");
  add_common(generate_cmd, flags);
  generate_cmd->add_option("--spec", flags.spec, "generator spec (key=value)");

  auto* train_cmd = app.add_subcommand("train", "train a boundary or tagging model");
  add_common(train_cmd, flags);

  auto* predict_cmd = app.add_subcommand("predict", "run a model over a word list");
  add_common(predict_cmd, flags);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a model or prediction file against gold");
  add_common(evaluate_cmd, flags);
  evaluate_cmd->add_option("--counts", flags.counts, "correct/total, scored without any files");
  evaluate_cmd->add_option("--reported", flags.reported, "printed percentage to check against --counts");

  auto* compare_cmd = app.add_subcommand("compare", "compare two segmentation prediction files");
  add_common(compare_cmd, flags);
  compare_cmd->add_option("--system-a", flags.system_a, "neural predictions");
  compare_cmd->add_option("--system-b", flags.system_b, "baseline predictions");

  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "finite-difference check of both heads");
  add_common(gradcheck_cmd, flags);
  gradcheck_cmd->add_flag("--corrupt-gradient", flags.corrupt, "perturb one analytic component");

  auto* experiment_cmd = app.add_subcommand("experiment", "generate, split, train and report");
  add_common(experiment_cmd, flags);
  experiment_cmd->add_option("--spec", flags.spec, "generator spec (key=value)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    return dispatch(app, {
                             {"generate", [&] { return cmd_generate(flags, out, err); }},
                             {"train", [&] { return cmd_train(flags, out, err); }},
                             {"predict", [&] { return cmd_predict(flags, out, err); }},
                             {"evaluate", [&] { return cmd_evaluate(flags, out, err); }},
                             {"compare", [&] { return cmd_compare(flags, out, err); }},
                             {"gradcheck", [&] { return cmd_gradcheck(flags, out, err); }},
                             {"experiment", [&] { return cmd_experiment(flags, out, err); }},
                         });
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataFailure;
  }
}

}  // namespace gumorph::cli
