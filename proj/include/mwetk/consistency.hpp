#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mwetk/corpus.hpp"
#include "mwetk/identifier.hpp"
#include "mwetk/lexicon.hpp"

namespace mwetk {

struct Exemplar {
  std::string sentence_id;
  std::vector<int> token_indices;

  bool operator==(const Exemplar&) const = default;
};

/// Lemma keys of every labeled MWE in a corpus, each with the first labeled
/// occurrence. `lexicon` holds the ordered lemma sequences.
struct LabeledSet {
  std::map<std::string, Exemplar> exemplars;  // ordered key -> first occurrence
  std::map<std::string, std::string> by_multiset;  // multiset key -> ordered key
  Lexicon lexicon;

  bool empty() const { return exemplars.empty(); }
  std::size_t size() const { return exemplars.size(); }
  bool contains(const std::string& key) const { return exemplars.count(key) > 0; }
};

enum class CandidateStatus { Pending, Accepted, Rejected };

struct ConsistencyCandidate {
  std::string sentence_id;
  std::vector<int> token_indices;
  std::string matched_entry;  // ordered lemma key of the mirrored MWE
  Exemplar exemplar;
  // Hash of the sentence's tokens when the candidate was found.
  std::uint64_t fingerprint = 0;
  CandidateStatus status = CandidateStatus::Pending;

  /// Stable identifier: "<sentence_id>:<i1>,<i2>,...".
  std::string id() const;
};

std::uint64_t sentence_fingerprint(const Sentence& s);

/// Throws MissingLemma.
LabeledSet mine_labeled_set(const Corpus& c);

/// Unlabeled spans whose lemmas match a mined key, in sentence order then
/// index order. Matching is order-free so rearranged occurrences surface;
/// `cfg.allow_reorder` is ignored.
std::vector<ConsistencyCandidate> find_candidates(const Corpus& c, const LabeledSet& labeled,
                                                  const MatchConfig& cfg = {});

struct Decision {
  ConsistencyCandidate candidate;
  CandidateStatus verdict = CandidateStatus::Rejected;
};

/// Accepted candidates become MWEs with source "consistency-added"; rejected
/// ones change nothing. Re-applying the same decisions is a no-op. Throws
/// StaleCandidate when a candidate's sentence is missing or changed.
Corpus apply_decisions(const Corpus& c, const std::vector<Decision>& decisions);

std::string_view status_name(CandidateStatus s);

}  // namespace mwetk
