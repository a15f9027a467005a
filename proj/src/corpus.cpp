#include "mwetk/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "mwetk/errors.hpp"

namespace mwetk {

std::string_view type_label(MweType t) {
  switch (t) {
    case MweType::Noun: return "NOUN";
    case MweType::Verb: return "VERB";
    case MweType::ModConn: return "MODCONN";
    case MweType::Clause: return "CLAUSE";
    case MweType::Other: return "OTHER";
  }
  return "OTHER";
}

std::string_view type_display_name(MweType t) {
  switch (t) {
    case MweType::Noun: return "Noun";
    case MweType::Verb: return "Verb";
    case MweType::ModConn: return "Mod/Conn";
    case MweType::Clause: return "Clause";
    case MweType::Other: return "Other";
  }
  return "Other";
}

std::optional<MweType> parse_type_label(std::string_view label) {
  for (MweType t : kAllMweTypes) {
    if (label == type_label(t) || label == type_display_name(t)) return t;
  }
  return std::nullopt;
}

std::vector<int> canonical_indices(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.size() < 2) throw InvalidMwe("an MWE needs at least two distinct tokens");
  if (indices.front() < 1) throw InvalidMwe("token indices are 1-based");
  return indices;
}

MweInstance::MweInstance(std::vector<int> token_indices, std::optional<MweType> type,
                         std::string source)
    : indices_(canonical_indices(std::move(token_indices))),
      type_(type),
      source_(std::move(source)) {}

std::strong_ordering MweInstance::operator<=>(const MweInstance& other) const {
  if (auto c = indices_ <=> other.indices_; c != 0) return c;
  return source_ <=> other.source_;
}

std::optional<std::string> Sentence::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Sentence::set_attr(const std::string& key, const std::string& value) {
  for (auto& [k, v] : attrs) {
    if (k == key) {
      v = value;
      return;
    }
  }
  attrs.emplace_back(key, value);
}

bool Sentence::add_mwe(MweInstance m) {
  auto pos = std::lower_bound(mwes.begin(), mwes.end(), m);
  if (pos != mwes.end() && pos->token_indices() == m.token_indices() &&
      pos->source() == m.source()) {
    return false;
  }
  mwes.insert(pos, std::move(m));
  return true;
}

void Sentence::normalize_mwes() {
  std::stable_sort(mwes.begin(), mwes.end());
  mwes.erase(std::unique(mwes.begin(), mwes.end(),
                         [](const MweInstance& a, const MweInstance& b) {
                           return a.token_indices() == b.token_indices() &&
                                  a.source() == b.source();
                         }),
             mwes.end());
}

bool Sentence::has_span(const std::vector<int>& indices) const {
  return std::any_of(mwes.begin(), mwes.end(),
                     [&](const MweInstance& m) { return m.token_indices() == indices; });
}

const Sentence* Corpus::find(std::string_view id) const {
  for (const auto& s : sentences) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

Sentence* Corpus::find(std::string_view id) {
  for (auto& s : sentences) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::size_t Corpus::word_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::size_t Corpus::mwe_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.mwes.size();
  return n;
}

void validate(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) {
      throw FormatError("sentence " + s.id + ": token " + std::to_string(i + 1) +
                        " has index " + std::to_string(t.index));
    }
    if (t.head && (*t.head < 0 || *t.head > n || *t.head == t.index)) {
      throw FormatError("sentence " + s.id + ": token " + std::to_string(t.index) +
                        " has invalid head " + std::to_string(*t.head));
    }
  }
  for (const auto& m : s.mwes) {
    if (m.last() > n) {
      throw InvalidMwe("sentence " + s.id + ": MWE index " + std::to_string(m.last()) +
                       " out of range");
    }
  }
}

void validate(const Corpus& c) {
  std::unordered_set<std::string> seen;
  for (const auto& s : c.sentences) {
    if (!seen.insert(s.id).second) throw FormatError("duplicate sentence id " + s.id);
    validate(s);
  }
}

bool is_discontinuous(const MweInstance& m) {
  return m.last() - m.first() + 1 != static_cast<int>(m.size());
}

std::vector<std::string> lemma_sequence(const MweInstance& m, const Sentence& s) {
  std::vector<std::string> out;
  out.reserve(m.size());
  for (int i : m.token_indices()) {
    const Token& t = s.token(i);
    if (!t.lemma) {
      throw MissingLemma("sentence " + s.id + ": token " + std::to_string(i) + " (" +
                         t.surface + ") has no lemma");
    }
    out.push_back(ascii_lower(*t.lemma));
  }
  return out;
}

std::vector<std::string> lemma_multiset(const MweInstance& m, const Sentence& s) {
  auto lemmas = lemma_sequence(m, s);
  std::sort(lemmas.begin(), lemmas.end());
  return lemmas;
}

Corpus drop_flagged(const Corpus& c, std::string_view flag) {
  Corpus out;
  out.metadata = c.metadata;
  for (const auto& s : c.sentences) {
    if (!s.has_flag(flag)) out.sentences.push_back(s);
  }
  return out;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

}  // namespace mwetk
