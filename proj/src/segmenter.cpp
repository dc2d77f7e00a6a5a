#include "gumorph/segmenter.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "gumorph/error.hpp"
#include "util.hpp"

namespace gumorph {

namespace {

// ો for masculine and ી for feminine nominal stems, વું for verbs. The
// verb row follows the worked attachment દેખા + વું rather than a bare ું.
constexpr std::string_view kDefaultRules =
    "# pos\tgender\tsuffix\n"
    "N\tM\tો\n"
    "N\tF\tી\n"
    "ADJ\tM\tો\n"
    "ADJ\tF\tી\n"
    "V\t-\tવું\n";

}  // namespace

std::string_view default_rules_text() { return kDefaultRules; }

RuleTable RuleTable::parse(std::istream& in) {
  std::vector<RootRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim_cr(line);
    if (detail::is_blank(text) || text.front() == '#') continue;
    const auto cols = detail::split(text, '\t');
    const auto where = "rule line " + std::to_string(line_no);
    if (cols.size() != 3) throw FormatError(where + ": expected 3 columns");
    const auto pos = parse_pos(cols[0]);
    if (!pos) throw FormatError(where + ": unknown POS '" + cols[0] + "'");
    if (cols[2].empty()) throw FormatError(where + ": empty suffix");
    RootRule r;
    r.pos = *pos;
    if (cols[1] != "-" && !cols[1].empty()) r.gender = cols[1];
    r.suffix = to_units(cols[2]);
    rules.push_back(std::move(r));
  }
  return RuleTable(std::move(rules));
}

RuleTable RuleTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return parse(in);
}

const RuleTable& RuleTable::defaults() {
  static const RuleTable table = [] {
    std::istringstream in{std::string(kDefaultRules)};
    return parse(in);
  }();
  return table;
}

const RootRule* RuleTable::match(Pos pos, std::optional<std::string_view> gender) const {
  for (const auto& r : rules_) {
    if (r.pos != pos) continue;
    if (r.gender && (!gender || *gender != *r.gender)) continue;
    return &r;
  }
  return nullptr;
}

RootResult normalize_root(const RuleTable& rules, std::u32string_view stem, Pos pos,
                          std::optional<std::string_view> gender) {
  const RootRule* rule = rules.match(pos, gender);
  if (!rule) return {Units(stem), false};
  Units root(stem);
  root += rule->suffix;
  return {std::move(root), true};
}

BoundaryModel train_boundary(std::span<const Record> train, const nn::Hyperparams& hyper,
                             const nn::EpochHook& hook) {
  if (train.empty()) throw EmptyTrainingSet("no boundary training records");
  std::vector<Units> words;
  words.reserve(train.size());
  for (const auto& r : train) {
    if (!r.boundary) throw PreconditionViolation("record without boundary labeling: " + to_utf8(r.surface));
    if (r.boundary->size() != r.surface.size()) throw LengthMismatch("boundary labeling length differs from surface");
    words.push_back(r.surface);
  }
  BoundaryModel model;
  model.params = nn::ModelParams::init(nn::Head::Boundary, Vocab::build(words), 1, hyper);
  std::vector<nn::Example> examples;
  examples.reserve(train.size());
  for (const auto& r : train) {
    examples.push_back({model.params.vocab.encode(r.surface), r.boundary->bits, -1});
  }
  model.log = nn::fit(model.params, examples, hook);
  return model;
}

std::vector<double> split_probabilities(const BoundaryModel& model, std::u32string_view word) {
  const auto ids = model.params.vocab.encode(word);
  const auto states = nn::bilstm_forward(model.params, ids);
  return nn::boundary_head(model.params, states);
}

BoundaryLabeling predict_splits(const BoundaryModel& model, std::u32string_view word) {
  BoundaryLabeling out;
  out.bits.assign(word.size(), 0);
  if (word.empty()) return out;
  const auto probs = split_probabilities(model, word);
  for (std::size_t i = 0; i + 1 < word.size(); ++i) out.bits[i] = probs[i] > model.params.hyper.threshold ? 1 : 0;
  return out;
}

std::vector<BoundaryLabeling> predict_all(const BoundaryModel& model, std::span<const Record> records) {
  std::vector<BoundaryLabeling> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(predict_splits(model, r.surface));
  return out;
}

Analysis analyze_word(const BoundaryModel& model, const RuleTable& rules, std::u32string_view word, Pos pos,
                      std::optional<std::string_view> gender) {
  Analysis a;
  a.morphs = decode_segmentation(word, predict_splits(model, word));
  if (a.morphs.size() > 1) {
    auto root = normalize_root(rules, a.morphs.front(), pos, gender);
    a.root = std::move(root.root);
    a.normalized = root.normalized;
  } else {
    a.root = Units(word);
  }
  return a;
}

ModelFile to_model_file(const BoundaryModel& model) { return ModelFile{model.params, std::nullopt, {}}; }

BoundaryModel boundary_model_from(ModelFile file) {
  if (file.params.head != nn::Head::Boundary) throw FormatError("not a boundary model");
  return BoundaryModel{std::move(file.params), {}};
}

}  // namespace gumorph
