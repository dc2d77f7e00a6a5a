#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gumorph/baseline.hpp"
#include "gumorph/cli.hpp"
#include "gumorph/corpus.hpp"
#include "gumorph/error.hpp"
#include "gumorph/eval.hpp"
#include "gumorph/paradigm.hpp"
#include "gumorph/segmenter.hpp"
#include "gumorph/tagger.hpp"

namespace py = pybind11;
using namespace gumorph;

namespace {

std::vector<std::string> strings(std::span<const Units> morphs) {
  std::vector<std::string> out;
  for (const auto& m : morphs) out.push_back(to_utf8(m));
  return out;
}

Pos pos_of(const std::string& tag) {
  const auto p = parse_pos(tag);
  if (!p) throw py::value_error("unknown POS '" + tag + "'");
  return *p;
}

nn::Hyperparams hyper(std::size_t epochs, std::size_t embed_dim, std::size_t hidden_dim, std::size_t batch, double lr,
                      std::uint64_t seed) {
  nn::Hyperparams h;
  h.epochs = epochs;
  h.embed_dim = embed_dim;
  h.hidden_dim = hidden_dim;
  h.batch = batch;
  h.lr = lr;
  h.seed = seed;
  return h;
}

std::vector<Record> prepared(std::vector<Record> records) {
  derive_all(records);
  return records;
}

}  // namespace

PYBIND11_MODULE(_gumorph, m) {
  m.doc() = "Gujarati morphological analysis: boundary detection, feature tagging and an MDL baseline";

  py::register_exception<Error>(m, "GumorphError", PyExc_RuntimeError);

  py::class_<Record>(m, "Record")
      .def(py::init([](const std::string& lemma, const std::string& surface, const std::string& features) {
             Record r;
             r.lemma = to_units(lemma);
             r.surface = to_units(surface);
             r.bundle = parse_bundle(features);
             r.pos = r.bundle.pos;
             r.boundary = derive_boundary(r.surface, r.lemma);
             return r;
           }),
           py::arg("lemma"), py::arg("surface"), py::arg("features"))
      .def_property_readonly("lemma", [](const Record& r) { return to_utf8(r.lemma); })
      .def_property_readonly("surface", [](const Record& r) { return to_utf8(r.surface); })
      .def_property_readonly("pos", [](const Record& r) { return std::string(pos_tag(r.pos)); })
      .def_property_readonly("features", [](const Record& r) { return canonicalize(r.bundle); })
      .def_property_readonly("boundary",
                             [](const Record& r) { return r.boundary ? r.boundary->str() : std::string(); })
      .def("__repr__", [](const Record& r) {
        return "Record(" + to_utf8(r.lemma) + ", " + to_utf8(r.surface) + ", " + canonicalize(r.bundle) + ")";
      });

  m.def("derive_boundary", [](const std::string& surface, const std::string& lemma) {
    return derive_boundary(to_units(surface), to_units(lemma)).str();
  });
  m.def("decode_segmentation", [](const std::string& surface, const std::string& labels) {
    return strings(decode_segmentation(to_units(surface), BoundaryLabeling::parse(labels)));
  });
  m.def(
      "normalize_root",
      [](const std::string& stem, const std::string& pos, std::optional<std::string> gender,
         std::optional<std::string> rules) {
        const auto table = rules ? RuleTable::load(*rules) : RuleTable::defaults();
        return to_utf8(normalize_root(table, to_units(stem), pos_of(pos), gender).root);
      },
      py::arg("stem"), py::arg("pos"), py::arg("gender") = py::none(), py::arg("rules") = py::none());

  m.def("read_unimorph", [](const std::string& path) {
    auto parsed = read_unimorph_file(path);
    if (!parsed.errors.empty()) {
      std::ostringstream msg;
      write_issues(msg, parsed.errors);
      throw FormatError(path + ": malformed lines\n" + msg.str());
    }
    return prepared(std::move(parsed.records));
  });
  m.def("write_unimorph", [](const std::vector<Record>& records, const std::string& path) { emit_tsv(records, path); });
  m.def(
      "generate",
      [](std::size_t noun_roots, std::size_t verb_roots, std::size_t inflected_adjectives,
         std::size_t noninflected_adjectives, std::vector<std::string> numbers, std::uint64_t seed) {
        GeneratorSpec spec;
        spec.noun_roots = noun_roots;
        spec.verb_roots = verb_roots;
        spec.inflected_adjectives = inflected_adjectives;
        spec.noninflected_adjectives = noninflected_adjectives;
        spec.numbers = std::move(numbers);
        spec.seed = seed;
        return generate(spec);
      },
      py::arg("noun_roots") = 0, py::arg("verb_roots") = 0, py::arg("inflected_adjectives") = 0,
      py::arg("noninflected_adjectives") = 0, py::arg("numbers") = std::vector<std::string>{"SG"},
      py::arg("seed") = 0);
  m.def("split_train_test", [](const std::vector<Record>& records, double ratio, std::uint64_t seed) {
    auto s = split_train_test(records, ratio, seed);
    return std::make_pair(std::move(s.train), std::move(s.test));
  }, py::arg("records"), py::arg("ratio") = 0.8, py::arg("seed") = 0);

  py::class_<BoundaryModel>(m, "Segmenter")
      .def_static("load", [](const std::string& path) { return boundary_model_from(load_model(path)); })
      .def("save", [](const BoundaryModel& b, const std::string& path) { save_model(path, to_model_file(b)); })
      .def("split", [](const BoundaryModel& b, const std::string& word) { return predict_splits(b, to_units(word)).str(); })
      .def("segment",
           [](const BoundaryModel& b, const std::string& word) {
             const auto w = to_units(word);
             return strings(decode_segmentation(w, predict_splits(b, w)));
           })
      .def("probabilities",
           [](const BoundaryModel& b, const std::string& word) { return split_probabilities(b, to_units(word)); })
      .def("accuracy",
           [](const BoundaryModel& b, const std::vector<Record>& gold) {
             return seg_accuracy(std::span<const Record>(gold), predict_all(b, gold)).accuracy;
           })
      .def_property_readonly("epoch_loss", [](const BoundaryModel& b) { return b.log.epoch_loss; });

  m.def(
      "train_segmenter",
      [](const std::vector<Record>& records, std::size_t epochs, std::size_t embed_dim, std::size_t hidden_dim,
         std::size_t batch, double lr, std::uint64_t seed) {
        return train_boundary(prepared(records), hyper(epochs, embed_dim, hidden_dim, batch, lr, seed));
      },
      py::arg("records"), py::arg("epochs") = 30, py::arg("embed_dim") = 32, py::arg("hidden_dim") = 64,
      py::arg("batch") = 32, py::arg("lr") = 1e-3, py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());

  py::class_<TaggerModel>(m, "Tagger")
      .def_static("load", [](const std::string& path) { return tagger_model_from(load_model(path)); })
      .def("save", [](const TaggerModel& t, const std::string& path) { save_model(path, to_model_file(t)); })
      .def("predict",
           [](const TaggerModel& t, const std::string& word) {
             const auto p = predict_bundle(t, to_units(word));
             return std::make_pair(p.canonical, p.distribution[static_cast<std::size_t>(p.class_id)]);
           })
      .def_property_readonly("pos", [](const TaggerModel& t) { return std::string(pos_tag(t.pos)); })
      .def_property_readonly("classes", [](const TaggerModel& t) { return t.classes; });

  m.def(
      "train_tagger",
      [](const std::vector<Record>& records, const std::string& pos, std::size_t epochs, std::size_t embed_dim,
         std::size_t hidden_dim, std::size_t batch, double lr, std::uint64_t seed) {
        const auto registry = register_all(records);
        return train_tagger(records, pos_of(pos), registry, hyper(epochs, embed_dim, hidden_dim, batch, lr, seed));
      },
      py::arg("records"), py::arg("pos"), py::arg("epochs") = 30, py::arg("embed_dim") = 32,
      py::arg("hidden_dim") = 64, py::arg("batch") = 32, py::arg("lr") = 1e-3, py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def("ambiguity_ceiling", [](const std::vector<Record>& records) { return audit_ambiguity(records).ceiling; });

  py::class_<MdlModel>(m, "MdlSegmenter")
      .def("segment", [](const MdlModel& model, const std::string& word) {
        return strings(segment_mdl(model, to_units(word)));
      })
      .def_property_readonly("cost", &MdlModel::cost)
      .def_property_readonly("pass_costs", [](const MdlModel& model) { return model.stats().pass_costs; })
      .def("lexicon", [](const MdlModel& model) {
        std::vector<std::pair<std::string, std::uint64_t>> out;
        for (const auto& [morph, count] : model.lexicon()) out.emplace_back(to_utf8(morph), count);
        std::sort(out.begin(), out.end());
        return out;
      });

  m.def(
      "train_mdl",
      [](const std::vector<std::string>& words, std::uint64_t seed, std::size_t max_passes) {
        std::vector<WordCount> counted;
        for (const auto& w : words) counted.push_back({to_units(w), 1});
        MdlConfig config;
        config.seed = seed;
        config.max_passes = max_passes;
        return train_mdl(counted, config);
      },
      py::arg("words"), py::arg("seed") = 0, py::arg("max_passes") = 20);

  m.def("format_percent", &format_percent);
  m.def("reported_is_consistent", [](std::size_t correct, std::size_t total, double printed) {
    return check_reported(correct, total, printed).consistent;
  });
  m.def(
      "grad_check",
      [](const std::string& head, std::uint64_t seed, std::size_t embed_dim, std::size_t hidden_dim) {
        const auto r = cli::toy_gradcheck(head == "tag" ? nn::Head::Class : nn::Head::Boundary, seed, embed_dim,
                                          hidden_dim);
        return std::make_pair(r.max_rel_error, r.worst_param);
      },
      py::arg("head") = "segment", py::arg("seed") = 0, py::arg("embed_dim") = 4, py::arg("hidden_dim") = 6);
  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "gumorph");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
