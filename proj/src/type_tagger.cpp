#include "mwetk/type_tagger.hpp"

#include <algorithm>

#include "mwetk/errors.hpp"

namespace mwetk {

namespace {

bool in_set(const std::optional<std::string>& v, std::initializer_list<std::string_view> set) {
  return v && std::find(set.begin(), set.end(), *v) != set.end();
}

std::string_view base_relation(const std::optional<std::string>& deprel) {
  if (!deprel) return {};
  std::string_view r = *deprel;
  return r.substr(0, r.find(':'));
}

bool is_member(const MweInstance& m, int i) {
  const auto& idx = m.token_indices();
  return std::binary_search(idx.begin(), idx.end(), i);
}

// UD uses acl:relcl; spaCy's English models emit relcl.
bool is_relative_clause(const std::optional<std::string>& deprel) {
  return deprel && (*deprel == "relcl" || base_relation(deprel) == "acl");
}

// nsubj, nsubj:pass, nsubj:outer (UD) and nsubjpass (spaCy).
bool is_nominal_subject(const std::optional<std::string>& deprel) {
  return deprel && (base_relation(deprel) == "nsubj" || *deprel == "nsubjpass");
}

}  // namespace

DepView::DepView(const Sentence& s)
    : heads_(s.tokens.size() + 1, 0),
      upos_(s.tokens.size() + 1),
      deprels_(s.tokens.size() + 1),
      children_(s.tokens.size() + 1) {
  const int n = static_cast<int>(s.tokens.size());
  for (const auto& t : s.tokens) {
    if (!t.head) {
      throw MissingParse("sentence " + s.id + ": token " + std::to_string(t.index) +
                         " has no head");
    }
    if (*t.head < 0 || *t.head > n || *t.head == t.index) {
      throw MalformedTree("sentence " + s.id + ": token " + std::to_string(t.index) +
                          " has invalid head " + std::to_string(*t.head));
    }
    const auto i = static_cast<std::size_t>(t.index);
    heads_[i] = *t.head;
    upos_[i] = t.upos;
    deprels_[i] = t.deprel;
    children_[static_cast<std::size_t>(*t.head)].push_back(t.index);
  }
  // Every token must reach the root.
  for (int i = 1; i <= n; ++i) {
    int steps = 0;
    for (int cur = heads_[static_cast<std::size_t>(i)]; cur != 0; cur = heads_[static_cast<std::size_t>(cur)]) {
      if (++steps > n) {
        throw MalformedTree("sentence " + s.id + ": head links through token " +
                            std::to_string(i) + " form a cycle");
      }
    }
  }
}

bool DepView::dominates(int ancestor, int node) const {
  int steps = 0;
  for (int cur = head(node); cur != 0; cur = head(cur)) {
    if (cur == ancestor) return true;
    if (++steps > size()) throw MalformedTree("head links form a cycle");
  }
  return false;
}

int DepView::root_count() const { return static_cast<int>(children_[0].size()); }

bool DepView::is_projective() const {
  for (int d = 1; d <= size(); ++d) {
    const int h = head(d);
    if (h == 0) continue;
    for (int k = std::min(h, d) + 1; k < std::max(h, d); ++k) {
      if (!dominates(h, k)) return false;
    }
  }
  return true;
}

std::optional<int> find_head(const MweInstance& m, const DepView& d) {
  for (int candidate : m.token_indices()) {
    bool all = true;
    for (int other : m.token_indices()) {
      if (other != candidate && !d.dominates(candidate, other)) {
        all = false;
        break;
      }
    }
    if (all) return candidate;
  }
  return std::nullopt;
}

TypeDecision decide_type(const MweInstance& m, const DepView& d) {
  TypeDecision out;
  if (d.root_count() != 1) {
    out.note = "sentence has " + std::to_string(d.root_count()) + " roots";
    return out;
  }
  out.head = find_head(m, d);
  if (!out.head) return out;  // head not in the MWE

  const int w = *out.head;
  const auto& pos = d.upos(w);
  if (!pos) throw MissingParse("token " + std::to_string(w) + " has no UPOS");

  if (in_set(pos, {"NOUN", "PRON", "PROPN"})) {
    // "the price he pays": a verbal relative clause inside the MWE.
    const bool verbal_relcl =
        std::any_of(d.children(w).begin(), d.children(w).end(), [&](int c) {
          return is_member(m, c) && is_relative_clause(d.deprel(c)) && d.upos(c) == "VERB";
        });
    out.type = verbal_relcl ? MweType::Verb : MweType::Noun;
  } else if (in_set(pos, {"VERB", "AUX"})) {
    const bool subject_inside =
        std::any_of(d.children(w).begin(), d.children(w).end(), [&](int c) {
          return is_member(m, c) && is_nominal_subject(d.deprel(c));
        });
    out.type = subject_inside ? MweType::Clause : MweType::Verb;
  } else if (in_set(pos, {"ADP", "ADJ", "ADV", "CCONJ", "SCONJ"})) {
    out.type = MweType::ModConn;
  } else {
    out.type = MweType::Other;
  }
  return out;
}

MweType tag_type(const MweInstance& m, const DepView& d) { return decide_type(m, d).type; }

TagResult tag_corpus(const Corpus& c, bool force) {
  TagResult result;
  result.corpus = c;
  for (auto& s : result.corpus.sentences) {
    const bool needs_work = std::any_of(s.mwes.begin(), s.mwes.end(),
                                        [&](const MweInstance& m) { return force || !m.type(); });
    if (!needs_work) continue;

    std::optional<DepView> view;
    try {
      view.emplace(s);
    } catch (const Error& e) {
      result.diagnostics.push_back({s.id, {}, e.what()});
      if (dynamic_cast<const MalformedTree*>(&e) == nullptr) continue;
      for (auto& m : s.mwes) {
        if (force || !m.type()) {
          m.set_type(MweType::Other);
          ++result.tagged;
        }
      }
      continue;
    }
    bool projectivity_reported = false;
    for (auto& m : s.mwes) {
      if (m.type() && !force) continue;
      try {
        TypeDecision decision = decide_type(m, *view);
        m.set_type(decision.type);
        ++result.tagged;
        if (!decision.note.empty()) {
          result.diagnostics.push_back({s.id, m.token_indices(), decision.note});
        }
      } catch (const MalformedTree& e) {
        m.set_type(MweType::Other);
        ++result.tagged;
        result.diagnostics.push_back({s.id, m.token_indices(), e.what()});
      } catch (const MissingParse& e) {
        result.diagnostics.push_back({s.id, m.token_indices(), e.what()});
      }
      if (!projectivity_reported && view->root_count() == 1) {
        projectivity_reported = true;
        try {
          if (!view->is_projective()) {
            result.diagnostics.push_back({s.id, {}, "non-projective parse"});
          }
        } catch (const MalformedTree&) {
        }
      }
    }
  }
  return result;
}

}  // namespace mwetk
