#include "mwetk/identifier.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "mwetk/errors.hpp"
#include "parallel.hpp"

namespace mwetk {

namespace {

class Matcher {
 public:
  Matcher(const std::vector<std::string>& lemmas, const MatchConfig& cfg)
      : lemmas_(lemmas), max_gap_(cfg.max_gap) {}

  void match_sequence(std::size_t start, const std::vector<std::string>& entry) {
    chosen_.assign(1, static_cast<int>(start));
    sequence_step(entry, 1, start, 0);
  }

  void match_multiset(std::size_t start, const std::vector<std::string>& entry) {
    std::map<std::string, int> remaining;
    for (const auto& l : entry) ++remaining[l];
    if (--remaining[lemmas_[start]] == 0) remaining.erase(lemmas_[start]);
    chosen_.assign(1, static_cast<int>(start));
    multiset_step(remaining, entry.size() - 1, start, 0);
  }

  std::set<std::vector<int>>& found() { return found_; }

 private:
  void sequence_step(const std::vector<std::string>& entry, std::size_t k, std::size_t last,
                     int gaps) {
    if (k == entry.size()) {
      record();
      return;
    }
    for (std::size_t j = last + 1; j < lemmas_.size(); ++j) {
      const int gap = gaps + static_cast<int>(j - last - 1);
      if (gap > max_gap_) break;
      if (lemmas_[j] != entry[k]) continue;
      chosen_.push_back(static_cast<int>(j));
      sequence_step(entry, k + 1, j, gap);
      chosen_.pop_back();
    }
  }

  void multiset_step(std::map<std::string, int>& remaining, std::size_t left, std::size_t last,
                     int gaps) {
    if (left == 0) {
      record();
      return;
    }
    for (std::size_t j = last + 1; j < lemmas_.size(); ++j) {
      const int gap = gaps + static_cast<int>(j - last - 1);
      if (gap > max_gap_) break;
      auto it = remaining.find(lemmas_[j]);
      if (it == remaining.end() || it->second == 0) continue;
      --it->second;
      chosen_.push_back(static_cast<int>(j));
      multiset_step(remaining, left - 1, j, gap);
      chosen_.pop_back();
      ++it->second;
    }
  }

  void record() {
    std::vector<int> indices;
    indices.reserve(chosen_.size());
    for (int i : chosen_) indices.push_back(i + 1);
    found_.insert(std::move(indices));
  }

  const std::vector<std::string>& lemmas_;
  int max_gap_;
  std::vector<int> chosen_;
  std::set<std::vector<int>> found_;
};

std::vector<std::string> sentence_lemmas(const Sentence& s) {
  std::vector<std::string> lemmas;
  lemmas.reserve(s.tokens.size());
  for (const auto& t : s.tokens) {
    if (!t.lemma) {
      throw MissingLemma("sentence " + s.id + ": token " + std::to_string(t.index) + " (" +
                         t.surface + ") has no lemma");
    }
    lemmas.push_back(ascii_lower(*t.lemma));
  }
  return lemmas;
}

std::vector<std::vector<int>> longest_non_overlapping(std::vector<std::vector<int>> spans) {
  // Earlier start wins, then the longer match.
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    if (a.front() != b.front()) return a.front() < b.front();
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  std::set<int> used;
  std::vector<std::vector<int>> kept;
  for (auto& span : spans) {
    if (std::any_of(span.begin(), span.end(), [&](int i) { return used.count(i) > 0; })) continue;
    used.insert(span.begin(), span.end());
    kept.push_back(std::move(span));
  }
  return kept;
}

}  // namespace

std::vector<MweInstance> identify(const Sentence& s, const Lexicon& lex, const MatchConfig& cfg) {
  if (cfg.max_gap < 0) throw Error("max_gap must be non-negative");
  const auto lemmas = sentence_lemmas(s);
  Matcher matcher(lemmas, cfg);
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    if (cfg.allow_reorder) {
      for (std::size_t e : lex.containing(lemmas[i])) {
        matcher.match_multiset(i, lex.entries()[e].lemmas);
      }
    } else {
      for (std::size_t e : lex.starting_with(lemmas[i])) {
        matcher.match_sequence(i, lex.entries()[e].lemmas);
      }
    }
  }
  std::vector<std::vector<int>> spans(matcher.found().begin(), matcher.found().end());
  if (cfg.overlap == OverlapPolicy::LongestNonOverlapping) {
    spans = longest_non_overlapping(std::move(spans));
  }
  std::vector<MweInstance> out;
  out.reserve(spans.size());
  for (auto& span : spans) {
    out.emplace_back(std::move(span), std::nullopt, std::string(source::kPredicted));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Corpus identify_corpus(const Corpus& c, const Lexicon& lex, const MatchConfig& cfg,
                       unsigned threads) {
  Corpus out = c;
  std::mutex mu;
  std::vector<std::string> failures;
  detail::parallel_for(out.sentences.size(), threads, [&](std::size_t i) {
    Sentence& s = out.sentences[i];
    try {
      s.mwes = identify(s, lex, cfg);
    } catch (const MissingLemma& e) {
      std::lock_guard lock(mu);
      failures.emplace_back(e.what());
    }
  });
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::string msg = std::to_string(failures.size()) + " sentence(s) lack lemmas: ";
    constexpr std::size_t kShown = 10;
    for (std::size_t i = 0; i < std::min(failures.size(), kShown); ++i) {
      if (i) msg += "; ";
      msg += failures[i];
    }
    if (failures.size() > kShown) msg += "; ...";
    throw MissingLemma(msg);
  }
  return out;
}

}  // namespace mwetk
