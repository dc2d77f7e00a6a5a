#include "gumorph/tagger.hpp"

#include <algorithm>
#include <map>

#include "gumorph/error.hpp"

namespace gumorph {

TaggerModel train_tagger(std::span<const Record> train, Pos pos, const ClassRegistry& registry,
                         const nn::Hyperparams& hyper, const nn::EpochHook& hook) {
  if (train.empty()) throw EmptyTrainingSet("no tagger training records");
  std::vector<Units> words;
  std::vector<int> labels;
  for (const auto& r : train) {
    if (r.pos != pos || r.bundle.pos != pos) {
      throw PreconditionViolation("tagger for " + std::string(pos_tag(pos)) + " given a " +
                                  std::string(pos_tag(r.pos)) + " record");
    }
    if (!registry.contains(r.bundle)) throw BundleNotRegistered("unregistered bundle " + canonicalize(r.bundle));
    words.push_back(r.surface);
    labels.push_back(registry.class_of(r.bundle));
  }
  TaggerModel model;
  model.pos = pos;
  for (std::size_t c = 0; c < registry.size(pos); ++c) model.classes.push_back(registry.canonical_of(pos, static_cast<int>(c)));
  model.params = nn::ModelParams::init(nn::Head::Class, Vocab::build(words), model.classes.size(), hyper);
  std::vector<nn::Example> examples;
  examples.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) examples.push_back({model.params.vocab.encode(words[i]), {}, labels[i]});
  model.log = nn::fit(model.params, examples, hook);
  return model;
}

TagPrediction predict_bundle(const TaggerModel& model, std::u32string_view word) {
  if (word.empty()) throw PreconditionViolation("cannot tag an empty word");
  const auto ids = model.params.vocab.encode(word);
  const auto states = nn::bilstm_forward(model.params, ids);
  TagPrediction p;
  p.distribution = nn::class_head(model.params, states);
  // max_element keeps the first maximum, i.e. the lowest id.
  p.class_id = static_cast<int>(std::max_element(p.distribution.begin(), p.distribution.end()) - p.distribution.begin());
  p.canonical = model.classes.at(static_cast<std::size_t>(p.class_id));
  p.bundle = parse_bundle(p.canonical);
  return p;
}

AmbiguityAudit audit_ambiguity(std::span<const Record> records) {
  std::map<std::pair<Pos, Units>, std::map<std::string, std::size_t>> by_surface;
  for (const auto& r : records) ++by_surface[{r.pos, r.surface}][canonicalize(r.bundle)];
  AmbiguityAudit a;
  a.total = records.size();
  for (const auto& [key, bundles] : by_surface) {
    std::size_t best = 0;
    for (const auto& [name, n] : bundles) best = std::max(best, n);
    a.resolvable += best;
    if (bundles.size() > 1) ++a.ambiguous_surfaces;
  }
  a.ceiling = a.total == 0 ? 1.0 : static_cast<double>(a.resolvable) / static_cast<double>(a.total);
  return a;
}

ModelFile to_model_file(const TaggerModel& model) { return ModelFile{model.params, model.pos, model.classes}; }

TaggerModel tagger_model_from(ModelFile file) {
  if (file.params.head != nn::Head::Class || !file.pos) throw FormatError("not a tagger model");
  if (file.classes.size() != file.params.outputs) throw FormatError("class list does not match output layer");
  TaggerModel m;
  m.params = std::move(file.params);
  m.pos = *file.pos;
  m.classes = std::move(file.classes);
  return m;
}

}  // namespace gumorph
