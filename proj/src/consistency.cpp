#include "mwetk/consistency.hpp"

#include <algorithm>

#include "mwetk/errors.hpp"
#include "text_util.hpp"

namespace mwetk {

std::string ConsistencyCandidate::id() const {
  std::string out = sentence_id + ":";
  for (std::size_t i = 0; i < token_indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(token_indices[i]);
  }
  return out;
}

std::string_view status_name(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Pending: return "pending";
    case CandidateStatus::Accepted: return "accepted";
    case CandidateStatus::Rejected: return "rejected";
  }
  return "pending";
}

std::uint64_t sentence_fingerprint(const Sentence& s) {
  // FNV-1a over surface and lemma of every token.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view text) {
    for (unsigned char ch : text) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto& t : s.tokens) {
    mix(t.surface);
    mix(t.lemma.value_or(""));
  }
  return h;
}

LabeledSet mine_labeled_set(const Corpus& c) {
  LabeledSet out;
  for (const auto& s : c.sentences) {
    for (const auto& m : s.mwes) {
      auto lemmas = lemma_sequence(m, s);
      std::string key = detail::join(lemmas, "_");
      if (out.exemplars.count(key)) continue;
      out.exemplars.emplace(key, Exemplar{s.id, m.token_indices()});
      out.by_multiset.try_emplace(multiset_key(lemmas), key);
      out.lexicon.add(std::move(lemmas));
    }
  }
  return out;
}

std::vector<ConsistencyCandidate> find_candidates(const Corpus& c, const LabeledSet& labeled,
                                                  const MatchConfig& cfg) {
  std::vector<ConsistencyCandidate> out;
  if (labeled.empty()) return out;
  MatchConfig match = cfg;
  match.allow_reorder = true;
  for (const auto& s : c.sentences) {
    const auto found = identify(s, labeled.lexicon, match);
    if (found.empty()) continue;
    const auto fingerprint = sentence_fingerprint(s);
    for (const auto& m : found) {
      if (s.has_span(m.token_indices())) continue;
      auto alias = labeled.by_multiset.find(multiset_key(lemma_sequence(m, s)));
      if (alias == labeled.by_multiset.end()) continue;
      ConsistencyCandidate cand;
      cand.sentence_id = s.id;
      cand.token_indices = m.token_indices();
      cand.matched_entry = alias->second;
      cand.exemplar = labeled.exemplars.at(alias->second);
      cand.fingerprint = fingerprint;
      out.push_back(std::move(cand));
    }
  }
  return out;
}

Corpus apply_decisions(const Corpus& c, const std::vector<Decision>& decisions) {
  Corpus out = c;
  for (const auto& d : decisions) {
    if (d.verdict != CandidateStatus::Accepted) continue;
    const auto& cand = d.candidate;
    Sentence* s = out.find(cand.sentence_id);
    if (!s) throw StaleCandidate("candidate " + cand.id() + ": sentence no longer exists");
    if (sentence_fingerprint(*s) != cand.fingerprint) {
      throw StaleCandidate("candidate " + cand.id() + ": sentence content changed");
    }
    if (cand.token_indices.empty() || cand.token_indices.back() > static_cast<int>(s->size())) {
      throw StaleCandidate("candidate " + cand.id() + ": indices out of range");
    }
    if (s->has_span(cand.token_indices)) continue;
    s->add_mwe(MweInstance(cand.token_indices, std::nullopt,
                           std::string(source::kConsistencyAdded)));
  }
  return out;
}

}  // namespace mwetk
