#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mwetk/consistency.hpp"
#include "mwetk/cupt.hpp"
#include "mwetk/evaluator.hpp"
#include "mwetk/identifier.hpp"
#include "mwetk/lexicon.hpp"
#include "mwetk/llm_format.hpp"
#include "mwetk/report_json.hpp"
#include "mwetk/type_tagger.hpp"

namespace py = pybind11;
using namespace mwetk;
using nlohmann::json;

// Structured results cross the boundary as JSON text; the Python package
// decodes them into plain dicts.

namespace {

Corpus corpus_from_text(const std::string& text) { return corpus_from_json(json::parse(text)); }

std::optional<MweType> type_from_py(const std::optional<std::string>& label) {
  if (!label) return std::nullopt;
  auto t = parse_type_label(*label);
  if (!t) throw FormatError("unknown MWE type '" + *label + "'");
  return t;
}

MatchConfig match_config(int max_gap, bool allow_reorder, const std::string& overlap) {
  MatchConfig cfg;
  if (max_gap < 0) throw Error("max_gap must be non-negative");
  cfg.max_gap = max_gap;
  cfg.allow_reorder = allow_reorder;
  if (overlap == "all") {
    cfg.overlap = OverlapPolicy::All;
  } else if (overlap == "longest") {
    cfg.overlap = OverlapPolicy::LongestNonOverlapping;
  } else {
    throw Error("overlap must be 'all' or 'longest'");
  }
  return cfg;
}

DefinitionLength definition_of(const std::string& name) {
  if (name == "long") return DefinitionLength::Long;
  if (name == "short") return DefinitionLength::Short;
  throw Error("definition must be 'long' or 'short'");
}

}  // namespace

PYBIND11_MODULE(_mwetk, m) {
  m.doc() = "Multiword expression corpus toolkit (native core)";

  static py::exception<Error> base_error(m, "MwetkError", PyExc_ValueError);
  static py::exception<ParseError> parse_error(m, "ParseError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object instance = py::reinterpret_borrow<py::object>(parse_error.ptr())(e.what());
      instance.attr("line") = e.line();
      PyErr_SetObject(parse_error.ptr(), instance.ptr());
    } catch (const Error& e) {
      py::set_error(base_error, e.what());
    }
  });

  py::class_<MweInstance>(m, "MweInstance")
      .def(py::init([](std::vector<int> indices, std::optional<std::string> type, std::string source) {
             return MweInstance(std::move(indices), type_from_py(type), std::move(source));
           }),
           py::arg("token_indices"), py::arg("type") = py::none(), py::arg("source") = "gold")
      .def_property_readonly("token_indices", &MweInstance::token_indices)
      .def_property_readonly("type",
                             [](const MweInstance& x) -> std::optional<std::string> {
                               if (!x.type()) return std::nullopt;
                               return std::string(type_label(*x.type()));
                             })
      .def_property_readonly("source", &MweInstance::source)
      .def_property_readonly("discontinuous", [](const MweInstance& x) { return is_discontinuous(x); })
      .def("__eq__", [](const MweInstance& a, const MweInstance& b) { return a == b; })
      .def("__repr__", [](const MweInstance& x) {
        std::string r = "MweInstance([";
        for (std::size_t i = 0; i < x.size(); ++i) r += (i ? ", " : "") + std::to_string(x.token_indices()[i]);
        return r + "], source='" + x.source() + "')";
      });

  py::class_<Sentence>(m, "Sentence")
      .def_readonly("id", &Sentence::id)
      .def_readonly("mwes", &Sentence::mwes)
      .def_property_readonly("words", [](const Sentence& s) {
        std::vector<std::string> out;
        for (const auto& t : s.tokens) out.push_back(t.surface);
        return out;
      })
      .def_property_readonly("lemmas", [](const Sentence& s) {
        std::vector<std::optional<std::string>> out;
        for (const auto& t : s.tokens) out.push_back(t.lemma);
        return out;
      })
      .def("__len__", &Sentence::size)
      .def("add_mwe", [](Sentence& s, const MweInstance& x) {
        if (x.last() > static_cast<int>(s.size())) throw InvalidMwe("MWE index out of range");
        return s.add_mwe(x);
      })
      .def("to_dict_json", [](const Sentence& s) { return to_json(s).dump(); });

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<>())
      .def_static("read_cupt",
                  [](const std::string& text, bool cupt11) {
                    CuptReadOptions o;
                    o.layout = cupt11 ? ColumnLayout::Eleven : ColumnLayout::Seven;
                    return read_cupt_string(text, o);
                  },
                  py::arg("text"), py::arg("cupt11") = false)
      .def_static("read_cupt_file",
                  [](const std::filesystem::path& path, bool cupt11) {
                    CuptReadOptions o;
                    o.layout = cupt11 ? ColumnLayout::Eleven : ColumnLayout::Seven;
                    return read_cupt_file(path, o);
                  },
                  py::arg("path"), py::arg("cupt11") = false)
      .def_static("from_json", &corpus_from_text)
      .def("to_cupt", [](const Corpus& c) { return write_cupt_string(c); })
      .def("to_json", [](const Corpus& c) { return to_json(c).dump(); })
      .def_property_readonly("sentences", [](const Corpus& c) { return c.sentences; })
      .def("sentence", [](Corpus& c, const std::string& id) -> Sentence& {
             Sentence* s = c.find(id);
             if (!s) throw py::key_error(id);
             return *s;
           },
           py::return_value_policy::reference_internal)
      .def_property_readonly("word_count", &Corpus::word_count)
      .def_property_readonly("mwe_count", &Corpus::mwe_count)
      .def("__len__", [](const Corpus& c) { return c.sentences.size(); })
      .def("__eq__", [](const Corpus& a, const Corpus& b) { return a == b; });

  py::class_<Lexicon>(m, "Lexicon")
      .def(py::init([](const std::vector<std::vector<std::string>>& entries) {
             Lexicon lex;
             for (const auto& e : entries) lex.add(e);
             return lex;
           }),
           py::arg("entries") = std::vector<std::vector<std::string>>{})
      .def_static("load", &load_lexicon_file)
      .def("contains",
           [](const Lexicon& lex, const std::vector<std::string>& lemmas, bool multiset) {
             return lex.contains(lemmas, multiset ? LemmaKey::Multiset : LemmaKey::Sequence);
           },
           py::arg("lemmas"), py::arg("multiset") = false)
      .def_property_readonly("entries", [](const Lexicon& lex) {
        std::vector<std::string> out;
        for (const auto& e : lex.entries()) out.push_back(e.entry_id());
        return out;
      })
      .def("__len__", &Lexicon::size);

  m.def("identify",
        [](const Corpus& c, const Lexicon& lex, int max_gap, bool allow_reorder,
           const std::string& overlap, unsigned threads) {
          const MatchConfig cfg = match_config(max_gap, allow_reorder, overlap);
          py::gil_scoped_release release;
          return identify_corpus(c, lex, cfg, threads);
        },
        py::arg("corpus"), py::arg("lexicon"), py::arg("max_gap") = 3, py::arg("allow_reorder") = false,
        py::arg("overlap") = "all", py::arg("threads") = 1);

  m.def("tag_types",
        [](const Corpus& c, bool force) {
          TagResult r = tag_corpus(c, force);
          std::vector<std::tuple<std::string, std::vector<int>, std::string>> diags;
          for (const auto& d : r.diagnostics) diags.emplace_back(d.sentence_id, d.token_indices, d.message);
          return py::make_tuple(r.corpus, diags);
        },
        py::arg("corpus"), py::arg("force") = false);

  m.def("evaluate_json",
        [](const Corpus& gold, const Corpus& pred, const Lexicon* lex, const Corpus* train) {
          EvalOptions o;
          o.lexicon = lex;
          o.train = train;
          return to_json(evaluate(gold, pred, o)).dump();
        },
        py::arg("gold"), py::arg("pred"), py::arg("lexicon") = nullptr, py::arg("train") = nullptr);

  m.def("iaa_json", [](const std::vector<Corpus>& annotations) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < annotations.size(); ++i) names.push_back(std::to_string(i));
    return to_json(iaa(annotations), names).dump();
  });

  m.def("stats_json",
        [](const Corpus& c, const std::string& group_by, bool drop_unclear) {
          const Corpus src = drop_unclear ? drop_flagged(c) : c;
          std::vector<std::pair<std::string, CorpusStats>> groups;
          if (!group_by.empty()) groups = stats_by(src, group_by);
          return stats_report_json(stats(src), group_by, groups).dump();
        },
        py::arg("corpus"), py::arg("group_by") = "", py::arg("drop_unclear") = false);

  m.def("consistency_report_json",
        [](const Corpus& c, int max_gap) {
          MatchConfig cfg;
          cfg.max_gap = max_gap;
          const LabeledSet labeled = mine_labeled_set(c);
          return consistency_report_json(c, labeled, find_candidates(c, labeled, cfg)).dump();
        },
        py::arg("corpus"), py::arg("max_gap") = 3);

  m.def("apply_decisions_json", [](const Corpus& c, const std::string& decisions) {
    return apply_decisions(c, decisions_from_json(json::parse(decisions)));
  });

  m.def("to_llm_input", &to_llm_input);
  m.def("to_llm_output", &to_llm_output);
  m.def("build_prompt",
        [](const Sentence& s, const std::string& definition) {
          return build_prompt(s, definition_of(definition));
        },
        py::arg("sentence"), py::arg("definition") = "long");
  m.def("system_message", [] { return std::string(system_message()); });
  m.def("mwe_definition", [](const std::string& d) { return std::string(mwe_definition(definition_of(d))); },
        py::arg("definition") = "long");
  m.def("parse_llm_output", [](const std::string& text, const Sentence& s) {
    LlmParseResult r = parse_llm_output(text, s);
    std::vector<std::pair<std::size_t, std::string>> diags;
    for (const auto& d : r.diagnostics) diags.emplace_back(d.line, d.message);
    return py::make_tuple(r.mwes, diags);
  });
}
