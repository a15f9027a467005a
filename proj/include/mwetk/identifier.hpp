#pragma once

#include <vector>

#include "mwetk/corpus.hpp"
#include "mwetk/lexicon.hpp"

namespace mwetk {

enum class OverlapPolicy { All, LongestNonOverlapping };

struct MatchConfig {
  // Maximum number of non-member tokens between the first and last member.
  int max_gap = 3;
  // Order-free (multiset) matching against lexicon entries.
  bool allow_reorder = false;
  OverlapPolicy overlap = OverlapPolicy::All;
};

/// Lexicon-driven matching over lemmas. Every returned instance's lemma
/// sequence (multiset with allow_reorder) is a lexicon entry and its window
/// holds at most `max_gap` non-member tokens. Results are in canonical
/// order with source "predicted". Throws MissingLemma.
std::vector<MweInstance> identify(const Sentence& s, const Lexicon& lex, const MatchConfig& cfg);

/// Replaces every sentence's MWEs with identify() output. Sentences are
/// processed on up to `threads` workers; output order matches input.
/// Missing-lemma failures are collected and reported together.
Corpus identify_corpus(const Corpus& c, const Lexicon& lex, const MatchConfig& cfg,
                       unsigned threads = 1);

}  // namespace mwetk
