#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mwetk/errors.hpp"

namespace mwetk {

struct LexiconEntry {
  std::vector<std::string> lemmas;  // lowercase, >= 2

  std::string entry_id() const;  // lemmas joined by '_'
  bool operator==(const LexiconEntry&) const = default;
  auto operator<=>(const LexiconEntry&) const = default;
};

enum class LemmaKey { Sequence, Multiset };

/// Sorted lemmas joined by '_'; the order-free key of a lemma bag.
std::string multiset_key(std::vector<std::string> lemmas);

/// Multiword lexicon with a first-lemma index (ordered matching) and a
/// multiset index (order-free matching). Immutable once built.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexiconEntry> entries);

  /// Adds an entry unless present. Lemmas are lowercased; throws
  /// InvalidMwe for fewer than two lemmas or lemmas with whitespace.
  bool add(std::vector<std::string> lemmas);

  bool contains(std::span<const std::string> lemmas, LemmaKey key = LemmaKey::Sequence) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Entry positions whose first lemma is `lemma`.
  std::span<const std::size_t> starting_with(const std::string& lemma) const;
  /// Entry positions that contain `lemma` anywhere.
  std::span<const std::size_t> containing(const std::string& lemma) const;
  /// Length of the longest entry.
  std::size_t max_length() const { return max_length_; }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_member_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_multiset_;
  std::size_t max_length_ = 0;
};

/// One entry per line, lemmas separated by '_' or spaces; '#' starts a
/// comment line. Throws ParseError for single-lemma lines.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::filesystem::path& path);
/// Writes entries one per line in insertion order.
void write_lexicon(const Lexicon& lex, std::ostream& out);

}  // namespace mwetk
