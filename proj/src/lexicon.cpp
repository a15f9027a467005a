#include "mwetk/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "mwetk/corpus.hpp"
#include "mwetk/errors.hpp"
#include "text_util.hpp"

namespace mwetk {

std::string LexiconEntry::entry_id() const { return detail::join(lemmas, "_"); }

std::string multiset_key(std::vector<std::string> lemmas) {
  std::sort(lemmas.begin(), lemmas.end());
  return detail::join(lemmas, "_");
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) {
  for (auto& e : entries) add(std::move(e.lemmas));
}

bool Lexicon::add(std::vector<std::string> lemmas) {
  if (lemmas.size() < 2) throw InvalidMwe("lexicon entries need at least two lemmas");
  for (auto& l : lemmas) {
    if (l.empty() || detail::has_whitespace(l)) {
      throw InvalidMwe("lexicon lemma '" + l + "' is empty or contains whitespace");
    }
    l = ascii_lower(l);
  }
  LexiconEntry entry{std::move(lemmas)};
  std::string id = entry.entry_id();
  if (by_id_.count(id)) return false;
  const std::size_t pos = entries_.size();
  by_id_.emplace(std::move(id), pos);
  by_first_[entry.lemmas.front()].push_back(pos);
  std::vector<std::string> distinct = entry.lemmas;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (const auto& l : distinct) by_member_[l].push_back(pos);
  by_multiset_[multiset_key(entry.lemmas)].push_back(pos);
  max_length_ = std::max(max_length_, entry.lemmas.size());
  entries_.push_back(std::move(entry));
  return true;
}

bool Lexicon::contains(std::span<const std::string> lemmas, LemmaKey key) const {
  std::vector<std::string> lowered;
  lowered.reserve(lemmas.size());
  for (const auto& l : lemmas) lowered.push_back(ascii_lower(l));
  if (key == LemmaKey::Sequence) return by_id_.count(detail::join(lowered, "_")) > 0;
  return by_multiset_.count(multiset_key(std::move(lowered))) > 0;
}

std::span<const std::size_t> Lexicon::starting_with(const std::string& lemma) const {
  auto it = by_first_.find(lemma);
  if (it == by_first_.end()) return {};
  return it->second;
}

std::span<const std::size_t> Lexicon::containing(const std::string& lemma) const {
  auto it = by_member_.find(lemma);
  if (it == by_member_.end()) return {};
  return it->second;
}

Lexicon load_lexicon(std::istream& in) {
  Lexicon lex;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> lemmas;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '_' || line[i] == ' ' || line[i] == '\t') {
        if (i > start) lemmas.emplace_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (lemmas.size() < 2) {
      throw ParseError(line_no, "lexicon entry '" + std::string(line) + "' has a single lemma");
    }
    lex.add(std::move(lemmas));
  }
  return lex;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return load_lexicon(in);
}

void write_lexicon(const Lexicon& lex, std::ostream& out) {
  for (const auto& e : lex.entries()) out << e.entry_id() << '\n';
}

}  // namespace mwetk
