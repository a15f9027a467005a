#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwetk/corpus.hpp"
#include "mwetk/lexicon.hpp"

namespace mwetk {

/// Identity of an MWE for exact-match scoring.
struct MweKey {
  std::string sentence_id;
  std::vector<int> token_indices;

  bool operator==(const MweKey&) const = default;
  auto operator<=>(const MweKey&) const = default;
};

struct CategoryRecall {
  std::string category;
  std::size_t gold = 0;
  std::size_t hits = 0;
  std::optional<double> recall;  // nullopt when the category has no gold MWEs
};

enum class PartitionKind { Type, Continuity, InLexicon, Seen };

/// How gold MWEs are split for recall breakdowns. InLexicon needs a lexicon
/// (membership by lemma multiset); Seen needs a training corpus (seen iff
/// the lemma multiset was annotated there).
struct Partition {
  PartitionKind kind = PartitionKind::Type;
  const Lexicon* lexicon = nullptr;
  const Corpus* train = nullptr;

  static Partition by_type() { return {PartitionKind::Type}; }
  static Partition by_continuity() { return {PartitionKind::Continuity}; }
  static Partition by_lexicon(const Lexicon& lex) { return {PartitionKind::InLexicon, &lex}; }
  static Partition by_seen(const Corpus& train) {
    return {PartitionKind::Seen, nullptr, &train};
  }
};

std::string_view partition_name(PartitionKind kind);

struct Breakdown {
  std::string partition;
  std::vector<CategoryRecall> categories;
};

struct EvalReport {
  std::size_t gold = 0;       // |G|
  std::size_t predicted = 0;  // |H|
  std::size_t correct = 0;    // |G ∩ H|
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<Breakdown> breakdowns;
};

/// Exact-match precision/recall/F1 over MweKeys. An empty prediction set
/// has precision 1 and an empty gold set has recall 1; F1 is 0 when P+R is
/// 0. Throws CorpusMismatch when sentence ids or lengths differ.
EvalReport score(const Corpus& gold, const Corpus& pred);

Breakdown recall_breakdown(const Corpus& gold, const Corpus& pred, const Partition& partition);

struct EvalOptions {
  const Lexicon* lexicon = nullptr;
  const Corpus* train = nullptr;
};

/// score() plus Type and Continuity breakdowns, and InLexicon / Seen when
/// the lexicon / training corpus is supplied.
EvalReport evaluate(const Corpus& gold, const Corpus& pred, const EvalOptions& options = {});

struct IaaReport {
  std::vector<std::vector<double>> pairwise_f1;  // symmetric, diagonal 1
  double mean = 0.0;                             // over unordered pairs
  double max = 0.0;
  std::pair<std::size_t, std::size_t> best_pair{0, 1};
};

/// Pairwise exact-match F1 between annotators over a shared sentence set.
IaaReport iaa(const std::vector<Corpus>& annotations);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t mwes = 0;
  std::size_t covered_words = 0;  // token positions in at least one MWE
  double density = 0.0;           // covered_words / words
  std::size_t typed_mwes = 0;
  std::map<MweType, std::size_t> type_counts;
  std::map<MweType, double> type_proportions;  // over typed MWEs
  std::map<MweType, std::size_t> discontinuous_by_type;
  std::map<MweType, double> discontinuity_by_type;  // per-type ratio
  std::size_t discontinuous = 0;
};

CorpusStats stats(const Corpus& c);

/// stats() per value of a sentence attribute (e.g. "source"), in order of
/// first appearance; sentences without the attribute are grouped under "".
std::vector<std::pair<std::string, CorpusStats>> stats_by(const Corpus& c, const std::string& attr);

}  // namespace mwetk
