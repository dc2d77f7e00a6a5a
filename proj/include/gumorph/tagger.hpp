#pragma once

// Monolithic grammatical-feature classification, one model per POS.

#include <span>
#include <string>
#include <vector>

#include "gumorph/corpus.hpp"
#include "gumorph/model_io.hpp"
#include "gumorph/nn.hpp"
#include "gumorph/tagset.hpp"

namespace gumorph {

struct TaggerModel {
  nn::ModelParams params;
  Pos pos = Pos::Noun;
  std::vector<std::string> classes;  // canonical bundle per class id
  nn::TrainLog log;
};

/// Throws EmptyTrainingSet, PreconditionViolation for records of another POS
/// and BundleNotRegistered for bundles the registry does not know.
TaggerModel train_tagger(std::span<const Record> train, Pos pos, const ClassRegistry& registry,
                         const nn::Hyperparams& hyper, const nn::EpochHook& hook = {});

struct TagPrediction {
  int class_id = 0;
  FeatureBundle bundle;
  std::string canonical;
  std::vector<double> distribution;
};

/// Argmax class; ties go to the lowest id.
TagPrediction predict_bundle(const TaggerModel& model, std::u32string_view word);

/// Word-level models see only the surface, so records sharing a surface but
/// not a bundle cannot all be right. `ceiling` is the best attainable accuracy.
struct AmbiguityAudit {
  std::size_t total = 0;
  std::size_t resolvable = 0;
  std::size_t ambiguous_surfaces = 0;
  double ceiling = 1.0;
};

AmbiguityAudit audit_ambiguity(std::span<const Record> records);

ModelFile to_model_file(const TaggerModel& model);
TaggerModel tagger_model_from(ModelFile file);

}  // namespace gumorph
