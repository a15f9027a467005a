#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mwetk/consistency.hpp"
#include "mwetk/corpus.hpp"
#include "mwetk/evaluator.hpp"

namespace mwetk {

// JSON documents carry a "schema" member naming their versioned schema
// (see schemas/ in the source tree).
namespace schema {
inline constexpr const char* kCorpus = "mwetk.corpus/1";
inline constexpr const char* kEvalReport = "mwetk.eval-report/1";
inline constexpr const char* kStats = "mwetk.stats/1";
inline constexpr const char* kIaa = "mwetk.iaa/1";
inline constexpr const char* kConsistencyReport = "mwetk.consistency-report/1";
inline constexpr const char* kConsistencyDecisions = "mwetk.consistency-decisions/1";
}  // namespace schema

nlohmann::json to_json(const MweInstance& m);
MweInstance mwe_from_json(const nlohmann::json& j, const std::string& default_source);

nlohmann::json to_json(const Sentence& s);
Sentence sentence_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Corpus& c);
/// Throws FormatError on schema violations.
Corpus corpus_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const CorpusStats& st);
nlohmann::json stats_report_json(const CorpusStats& total, const std::string& group_attr,
                                 const std::vector<std::pair<std::string, CorpusStats>>& groups);
nlohmann::json to_json(const IaaReport& r, const std::vector<std::string>& annotators);

nlohmann::json to_json(const ConsistencyCandidate& c, const Corpus& corpus);
nlohmann::json consistency_report_json(const Corpus& corpus, const LabeledSet& labeled,
                                       const std::vector<ConsistencyCandidate>& candidates);

ConsistencyCandidate candidate_from_json(const nlohmann::json& j);
/// Reads a decisions document: candidates (as in the report) with a
/// "decision" of accept or reject. Throws FormatError.
std::vector<Decision> decisions_from_json(const nlohmann::json& j);

std::string fingerprint_hex(std::uint64_t fp);
std::uint64_t parse_fingerprint(const std::string& hex);

/// Surface forms of the given positions joined by spaces, with "..." where
/// positions are skipped.
std::string span_text(const Sentence& s, const std::vector<int>& indices);

}  // namespace mwetk
