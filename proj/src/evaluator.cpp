#include "mwetk/evaluator.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "mwetk/errors.hpp"

namespace mwetk {

namespace {

// Gold keys with a representative instance (the first typed one, if any).
struct KeyedMwe {
  MweKey key;
  const MweInstance* mwe;
  const Sentence* sentence;
};

std::vector<KeyedMwe> keyed(const Corpus& c) {
  std::map<MweKey, KeyedMwe> by_key;
  for (const auto& s : c.sentences) {
    for (const auto& m : s.mwes) {
      MweKey key{s.id, m.token_indices()};
      auto [it, inserted] = by_key.try_emplace(key, KeyedMwe{key, &m, &s});
      if (!inserted && !it->second.mwe->type() && m.type()) it->second.mwe = &m;
    }
  }
  std::vector<KeyedMwe> out;
  out.reserve(by_key.size());
  for (auto& [k, v] : by_key) out.push_back(v);
  return out;
}

std::set<MweKey> key_set(const Corpus& c) {
  std::set<MweKey> keys;
  for (const auto& s : c.sentences) {
    for (const auto& m : s.mwes) keys.insert({s.id, m.token_indices()});
  }
  return keys;
}

void check_alignment(const Corpus& gold, const Corpus& pred) {
  std::unordered_map<std::string, std::size_t> lengths;
  for (const auto& s : gold.sentences) lengths.emplace(s.id, s.tokens.size());
  if (lengths.size() != pred.sentences.size()) {
    throw CorpusMismatch("gold has " + std::to_string(lengths.size()) +
                         " sentences, prediction has " + std::to_string(pred.sentences.size()));
  }
  for (const auto& s : pred.sentences) {
    auto it = lengths.find(s.id);
    if (it == lengths.end()) throw CorpusMismatch("sentence " + s.id + " missing from gold");
    if (it->second != s.tokens.size()) {
      throw CorpusMismatch("sentence " + s.id + " has " + std::to_string(it->second) +
                           " gold tokens but " + std::to_string(s.tokens.size()) +
                           " predicted tokens");
    }
  }
}

double ratio_or_one(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::set<std::string> training_multisets(const Corpus& train) {
  std::set<std::string> keys;
  for (const auto& s : train.sentences) {
    for (const auto& m : s.mwes) keys.insert(multiset_key(lemma_multiset(m, s)));
  }
  return keys;
}

}  // namespace

std::string_view partition_name(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::Type: return "type";
    case PartitionKind::Continuity: return "continuity";
    case PartitionKind::InLexicon: return "in_lexicon";
    case PartitionKind::Seen: return "seen";
  }
  return "type";
}

EvalReport score(const Corpus& gold, const Corpus& pred) {
  check_alignment(gold, pred);
  const auto g = key_set(gold);
  const auto h = key_set(pred);
  EvalReport r;
  r.gold = g.size();
  r.predicted = h.size();
  for (const auto& k : h) r.correct += g.count(k);
  r.precision = ratio_or_one(r.correct, r.predicted);
  r.recall = ratio_or_one(r.correct, r.gold);
  r.f1 = r.precision + r.recall == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

Breakdown recall_breakdown(const Corpus& gold, const Corpus& pred, const Partition& partition) {
  check_alignment(gold, pred);
  const auto h = key_set(pred);

  std::vector<std::string> order;
  switch (partition.kind) {
    case PartitionKind::Type:
      for (MweType t : kAllMweTypes) order.emplace_back(type_display_name(t));
      break;
    case PartitionKind::Continuity: order = {"Continuous", "Discontinuous"}; break;
    case PartitionKind::InLexicon: order = {"InLexicon", "NotInLexicon"}; break;
    case PartitionKind::Seen: order = {"Seen", "Unseen"}; break;
  }
  if (partition.kind == PartitionKind::InLexicon && !partition.lexicon) {
    throw Error("in-lexicon breakdown needs a lexicon");
  }
  if (partition.kind == PartitionKind::Seen && !partition.train) {
    throw Error("seen/unseen breakdown needs a training corpus");
  }
  std::set<std::string> seen_keys;
  if (partition.kind == PartitionKind::Seen) seen_keys = training_multisets(*partition.train);

  std::map<std::string, CategoryRecall> cats;
  for (const auto& name : order) cats[name].category = name;

  for (const auto& km : keyed(gold)) {
    std::string cat;
    switch (partition.kind) {
      case PartitionKind::Type:
        cat = km.mwe->type() ? std::string(type_display_name(*km.mwe->type())) : "Untyped";
        break;
      case PartitionKind::Continuity:
        cat = is_discontinuous(*km.mwe) ? "Discontinuous" : "Continuous";
        break;
      case PartitionKind::InLexicon: {
        auto lemmas = lemma_multiset(*km.mwe, *km.sentence);
        cat = partition.lexicon->contains(lemmas, LemmaKey::Multiset) ? "InLexicon"
                                                                      : "NotInLexicon";
        break;
      }
      case PartitionKind::Seen:
        cat = seen_keys.count(multiset_key(lemma_multiset(*km.mwe, *km.sentence))) ? "Seen"
                                                                                   : "Unseen";
        break;
    }
    if (!cats.count(cat)) {
      order.push_back(cat);
      cats[cat].category = cat;
    }
    auto& c = cats[cat];
    ++c.gold;
    c.hits += h.count(km.key);
  }

  Breakdown out;
  out.partition = std::string(partition_name(partition.kind));
  for (const auto& name : order) {
    auto c = cats[name];
    if (c.gold > 0) c.recall = static_cast<double>(c.hits) / static_cast<double>(c.gold);
    out.categories.push_back(std::move(c));
  }
  return out;
}

EvalReport evaluate(const Corpus& gold, const Corpus& pred, const EvalOptions& options) {
  EvalReport r = score(gold, pred);
  r.breakdowns.push_back(recall_breakdown(gold, pred, Partition::by_type()));
  r.breakdowns.push_back(recall_breakdown(gold, pred, Partition::by_continuity()));
  if (options.train) r.breakdowns.push_back(recall_breakdown(gold, pred, Partition::by_seen(*options.train)));
  if (options.lexicon) {
    r.breakdowns.push_back(recall_breakdown(gold, pred, Partition::by_lexicon(*options.lexicon)));
  }
  return r;
}

IaaReport iaa(const std::vector<Corpus>& annotations) {
  if (annotations.size() < 2) throw Error("inter-annotator agreement needs at least two annotators");
  const std::size_t n = annotations.size();
  IaaReport r;
  r.pairwise_f1.assign(n, std::vector<double>(n, 1.0));
  double sum = 0.0;
  std::size_t pairs = 0;
  r.max = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double f1 = score(annotations[i], annotations[j]).f1;
      r.pairwise_f1[i][j] = r.pairwise_f1[j][i] = f1;
      sum += f1;
      ++pairs;
      if (f1 > r.max) {
        r.max = f1;
        r.best_pair = {i, j};
      }
    }
  }
  r.mean = sum / static_cast<double>(pairs);
  return r;
}

CorpusStats stats(const Corpus& c) {
  CorpusStats st;
  st.sentences = c.sentences.size();
  for (const auto& s : c.sentences) {
    st.words += s.tokens.size();
    st.mwes += s.mwes.size();
    std::set<int> covered;
    for (const auto& m : s.mwes) {
      covered.insert(m.token_indices().begin(), m.token_indices().end());
      const bool discontinuous = is_discontinuous(m);
      st.discontinuous += discontinuous;
      if (!m.type()) continue;
      ++st.typed_mwes;
      ++st.type_counts[*m.type()];
      st.discontinuous_by_type[*m.type()] += discontinuous;
    }
    st.covered_words += covered.size();
  }
  st.density = st.words ? static_cast<double>(st.covered_words) / static_cast<double>(st.words)
                        : 0.0;
  for (const auto& [type, count] : st.type_counts) {
    st.type_proportions[type] = static_cast<double>(count) / static_cast<double>(st.typed_mwes);
    st.discontinuity_by_type[type] =
        static_cast<double>(st.discontinuous_by_type[type]) / static_cast<double>(count);
  }
  return st;
}

std::vector<std::pair<std::string, CorpusStats>> stats_by(const Corpus& c, const std::string& attr) {
  std::vector<std::string> order;
  std::map<std::string, Corpus> groups;
  for (const auto& s : c.sentences) {
    std::string value = s.attr(attr).value_or("");
    if (!groups.count(value)) order.push_back(value);
    groups[value].sentences.push_back(s);
  }
  std::vector<std::pair<std::string, CorpusStats>> out;
  for (const auto& v : order) out.emplace_back(v, stats(groups[v]));
  return out;
}

}  // namespace mwetk
