#include "mwetk/report_json.hpp"

#include <cstdio>
#include <unordered_set>

#include "mwetk/errors.hpp"

namespace mwetk {

using nlohmann::json;

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

json type_map(const std::map<MweType, double>& m) {
  json out = json::object();
  for (const auto& [t, v] : m) out[std::string(type_display_name(t))] = v;
  return out;
}

json type_map(const std::map<MweType, std::size_t>& m) {
  json out = json::object();
  for (const auto& [t, v] : m) out[std::string(type_display_name(t))] = v;
  return out;
}

}  // namespace

json to_json(const MweInstance& m) {
  json j{{"token_indices", m.token_indices()}, {"source", m.source()}};
  if (m.type()) j["type"] = std::string(type_label(*m.type()));
  return j;
}

MweInstance mwe_from_json(const json& j, const std::string& default_source) {
  auto indices = j.at("token_indices").get<std::vector<int>>();
  std::optional<MweType> type;
  if (auto label = get_optional<std::string>(j, "type")) {
    type = parse_type_label(*label);
    if (!type) throw FormatError("unknown MWE type '" + *label + "'");
  }
  return MweInstance(std::move(indices), type,
                     get_optional<std::string>(j, "source").value_or(default_source));
}

json to_json(const Sentence& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) {
    json tj{{"index", t.index}, {"surface", t.surface}};
    put_optional(tj, "lemma", t.lemma);
    put_optional(tj, "upos", t.upos);
    put_optional(tj, "head", t.head);
    put_optional(tj, "deprel", t.deprel);
    tokens.push_back(std::move(tj));
  }
  json mwes = json::array();
  for (const auto& m : s.mwes) mwes.push_back(to_json(m));
  json attrs = json::array();
  for (const auto& [k, v] : s.attrs) attrs.push_back(json::array({k, v}));
  return json{{"id", s.id},
              {"tokens", std::move(tokens)},
              {"mwes", std::move(mwes)},
              {"flags", s.flags},
              {"attrs", std::move(attrs)}};
}

Sentence sentence_from_json(const json& j) {
  Sentence s;
  s.id = j.at("id").get<std::string>();
  for (const auto& tj : j.at("tokens")) {
    Token t;
    t.index = tj.at("index").get<int>();
    t.surface = tj.at("surface").get<std::string>();
    t.lemma = get_optional<std::string>(tj, "lemma");
    t.upos = get_optional<std::string>(tj, "upos");
    t.head = get_optional<int>(tj, "head");
    t.deprel = get_optional<std::string>(tj, "deprel");
    s.tokens.push_back(std::move(t));
  }
  if (auto it = j.find("mwes"); it != j.end()) {
    for (const auto& mj : *it) s.mwes.push_back(mwe_from_json(mj, std::string(source::kGold)));
  }
  if (auto it = j.find("flags"); it != j.end()) {
    for (const auto& f : *it) s.flags.insert(f.get<std::string>());
  }
  if (auto it = j.find("attrs"); it != j.end()) {
    for (const auto& a : *it) s.attrs.emplace_back(a.at(0).get<std::string>(), a.at(1).get<std::string>());
  }
  s.normalize_mwes();
  validate(s);
  return s;
}

json to_json(const Corpus& c) {
  json sentences = json::array();
  for (const auto& s : c.sentences) sentences.push_back(to_json(s));
  return json{{"schema", schema::kCorpus}, {"metadata", c.metadata}, {"sentences", std::move(sentences)}};
}

Corpus corpus_from_json(const json& j) {
  try {
    if (j.value("schema", "") != schema::kCorpus) {
      throw FormatError(std::string("expected schema ") + schema::kCorpus);
    }
    Corpus c;
    if (auto it = j.find("metadata"); it != j.end()) {
      c.metadata = it->get<std::map<std::string, std::string>>();
    }
    for (const auto& sj : j.at("sentences")) c.sentences.push_back(sentence_from_json(sj));
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("corpus JSON: ") + e.what());
  }
}

json to_json(const EvalReport& r) {
  json breakdowns = json::array();
  for (const auto& b : r.breakdowns) {
    json cats = json::array();
    for (const auto& c : b.categories) {
      cats.push_back({{"category", c.category},
                      {"gold", c.gold},
                      {"hits", c.hits},
                      {"recall", c.recall ? json(*c.recall) : json(nullptr)}});
    }
    breakdowns.push_back({{"partition", b.partition}, {"categories", std::move(cats)}});
  }
  return json{{"schema", schema::kEvalReport},
              {"counts", {{"gold", r.gold}, {"predicted", r.predicted}, {"correct", r.correct}}},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"breakdowns", std::move(breakdowns)}};
}

json to_json(const CorpusStats& st) {
  return json{{"sentences", st.sentences},
              {"words", st.words},
              {"mwes", st.mwes},
              {"covered_words", st.covered_words},
              {"density", st.density},
              {"typed_mwes", st.typed_mwes},
              {"type_counts", type_map(st.type_counts)},
              {"type_proportions", type_map(st.type_proportions)},
              {"discontinuous", st.discontinuous},
              {"discontinuous_by_type", type_map(st.discontinuous_by_type)},
              {"discontinuity_by_type", type_map(st.discontinuity_by_type)}};
}

json stats_report_json(const CorpusStats& total, const std::string& group_attr,
                       const std::vector<std::pair<std::string, CorpusStats>>& groups) {
  json j{{"schema", schema::kStats}, {"total", to_json(total)}};
  if (!group_attr.empty()) {
    json g = json::array();
    for (const auto& [value, st] : groups) g.push_back({{"value", value}, {"stats", to_json(st)}});
    j["group_by"] = group_attr;
    j["groups"] = std::move(g);
  }
  return j;
}

json to_json(const IaaReport& r, const std::vector<std::string>& annotators) {
  return json{{"schema", schema::kIaa},
              {"annotators", annotators},
              {"pairwise_f1", r.pairwise_f1},
              {"mean", r.mean},
              {"max", r.max},
              {"best_pair", json::array({r.best_pair.first, r.best_pair.second})}};
}

std::string span_text(const Sentence& s, const std::vector<int>& indices) {
  std::string out;
  int previous = 0;
  for (int i : indices) {
    if (i < 1 || i > static_cast<int>(s.size())) continue;
    if (!out.empty()) out += (i == previous + 1) ? " " : " ... ";
    out += s.token(i).surface;
    previous = i;
  }
  return out;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

std::uint64_t parse_fingerprint(const std::string& hex) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(hex, &used, 16);
    if (used != hex.size()) throw FormatError("bad fingerprint '" + hex + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad fingerprint '" + hex + "'");
  }
}

json to_json(const ConsistencyCandidate& c, const Corpus& corpus) {
  json j{{"id", c.id()},
         {"sentence_id", c.sentence_id},
         {"token_indices", c.token_indices},
         {"matched_entry", c.matched_entry},
         {"exemplar",
          {{"sentence_id", c.exemplar.sentence_id}, {"token_indices", c.exemplar.token_indices}}},
         {"fingerprint", fingerprint_hex(c.fingerprint)},
         {"status", std::string(status_name(c.status))}};
  if (const Sentence* s = corpus.find(c.sentence_id)) j["surface"] = span_text(*s, c.token_indices);
  if (const Sentence* e = corpus.find(c.exemplar.sentence_id)) {
    j["exemplar"]["surface"] = span_text(*e, c.exemplar.token_indices);
  }
  return j;
}

json consistency_report_json(const Corpus& corpus, const LabeledSet& labeled,
                             const std::vector<ConsistencyCandidate>& candidates) {
  json list = json::array();
  for (const auto& c : candidates) list.push_back(to_json(c, corpus));
  return json{{"schema", schema::kConsistencyReport},
              {"labeled_keys", labeled.size()},
              {"candidates", std::move(list)}};
}

ConsistencyCandidate candidate_from_json(const json& j) {
  ConsistencyCandidate c;
  c.sentence_id = j.at("sentence_id").get<std::string>();
  c.token_indices = j.at("token_indices").get<std::vector<int>>();
  c.matched_entry = j.value("matched_entry", "");
  c.fingerprint = parse_fingerprint(j.at("fingerprint").get<std::string>());
  return c;
}

std::vector<Decision> decisions_from_json(const json& j) {
  if (j.value("schema", "") != schema::kConsistencyDecisions) {
    throw FormatError(std::string("expected schema ") + schema::kConsistencyDecisions);
  }
  std::vector<Decision> out;
  try {
    for (const auto& dj : j.at("decisions")) {
      Decision d;
      d.candidate = candidate_from_json(dj);
      const auto verdict = dj.at("decision").get<std::string>();
      if (verdict == "accept") {
        d.verdict = CandidateStatus::Accepted;
      } else if (verdict == "reject") {
        d.verdict = CandidateStatus::Rejected;
      } else {
        throw FormatError("decision must be accept or reject, got '" + verdict + "'");
      }
      out.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("decisions: ") + e.what());
  }
  return out;
}

}  // namespace mwetk
