#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mwetk/errors.hpp"

namespace mwetk {

/// Syntactic category of an MWE, assigned from the dependency head.
enum class MweType { Noun, Verb, ModConn, Clause, Other };

inline constexpr MweType kAllMweTypes[] = {MweType::Noun, MweType::Verb, MweType::ModConn,
                                           MweType::Clause, MweType::Other};

/// Column label used in the MWE column, e.g. "VERB" in `1:VERB`.
std::string_view type_label(MweType t);
/// Human-readable name used in reports ("Mod/Conn").
std::string_view type_display_name(MweType t);
std::optional<MweType> parse_type_label(std::string_view label);

namespace source {
inline constexpr std::string_view kGold = "gold";
inline constexpr std::string_view kPredicted = "predicted";
inline constexpr std::string_view kConsistencyAdded = "consistency-added";
}  // namespace source

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  std::optional<std::string> lemma;
  std::optional<std::string> upos;
  std::optional<int> head;  // 0 = root
  std::optional<std::string> deprel;

  bool operator==(const Token&) const = default;
};

/// A set of token positions inside one sentence. Indices are kept sorted
/// and unique; construction rejects anything shorter than two tokens.
class MweInstance {
 public:
  explicit MweInstance(std::vector<int> token_indices, std::optional<MweType> type = std::nullopt,
                       std::string source = std::string(source::kGold));

  const std::vector<int>& token_indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  int first() const { return indices_.front(); }
  int last() const { return indices_.back(); }

  const std::optional<MweType>& type() const { return type_; }
  void set_type(std::optional<MweType> t) { type_ = t; }

  const std::string& source() const { return source_; }
  void set_source(std::string s) { source_ = std::move(s); }

  bool operator==(const MweInstance&) const = default;
  // Canonical order: indices lexicographically, then source.
  std::strong_ordering operator<=>(const MweInstance& other) const;

 private:
  std::vector<int> indices_;
  std::optional<MweType> type_;
  std::string source_;
};

/// Sorts and deduplicates indices; throws InvalidMwe for fewer than two
/// distinct positions or non-positive indices. Idempotent.
std::vector<int> canonical_indices(std::vector<int> indices);

struct Sentence {
  std::string id;
  std::vector<Token> tokens;
  std::vector<MweInstance> mwes;
  std::set<std::string> flags;
  // Extra `# key = value` comment lines, in file order (e.g. text, source).
  std::vector<std::pair<std::string, std::string>> attrs;

  bool operator==(const Sentence&) const = default;

  std::size_t size() const { return tokens.size(); }
  const Token& token(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }
  bool has_flag(std::string_view f) const { return flags.count(std::string(f)) > 0; }
  std::optional<std::string> attr(std::string_view key) const;
  void set_attr(const std::string& key, const std::string& value);

  /// Adds an MWE, keeping `mwes` in canonical order. Returns false when an
  /// instance with the same source and indices already exists.
  bool add_mwe(MweInstance m);
  /// Restores canonical order and removes same-source duplicates.
  void normalize_mwes();
  bool has_span(const std::vector<int>& indices) const;
};

inline constexpr std::string_view kUnclearFlag = "unclear";

struct Corpus {
  std::vector<Sentence> sentences;
  std::map<std::string, std::string> metadata;

  bool operator==(const Corpus&) const = default;

  const Sentence* find(std::string_view id) const;
  Sentence* find(std::string_view id);
  std::size_t word_count() const;
  std::size_t mwe_count() const;
};

/// Checks token numbering, head ranges and MWE index ranges; throws
/// InvalidMwe or FormatError.
void validate(const Sentence& s);
/// validate() on every sentence plus id uniqueness.
void validate(const Corpus& c);

/// True iff the token indices are not consecutive integers.
bool is_discontinuous(const MweInstance& m);

/// Lowercased lemmas of the constituents in sentence order.
std::vector<std::string> lemma_sequence(const MweInstance& m, const Sentence& s);
/// Lowercased lemmas of the constituents, sorted (a multiset).
std::vector<std::string> lemma_multiset(const MweInstance& m, const Sentence& s);

/// Returns a copy with sentences flagged unclear removed.
Corpus drop_flagged(const Corpus& c, std::string_view flag = kUnclearFlag);

std::string ascii_lower(std::string_view s);

}  // namespace mwetk
