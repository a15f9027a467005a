#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwetk/corpus.hpp"

namespace mwetk {

/// Dependency view of one sentence. Position 0 is the artificial root.
class DepView {
 public:
  /// Throws MissingParse when a token has no head, MalformedTree for
  /// out-of-range heads or head cycles.
  explicit DepView(const Sentence& s);

  int size() const { return static_cast<int>(heads_.size()) - 1; }
  int head(int i) const { return heads_.at(static_cast<std::size_t>(i)); }
  const std::optional<std::string>& upos(int i) const { return upos_.at(static_cast<std::size_t>(i)); }
  const std::optional<std::string>& deprel(int i) const {
    return deprels_.at(static_cast<std::size_t>(i));
  }
  const std::vector<int>& children(int i) const { return children_.at(static_cast<std::size_t>(i)); }

  /// True iff `ancestor` lies on the head path above `node` (strictly).
  /// Throws MalformedTree when the path cycles.
  bool dominates(int ancestor, int node) const;
  int root_count() const;
  bool is_projective() const;

 private:
  std::vector<int> heads_;
  std::vector<std::optional<std::string>> upos_;
  std::vector<std::optional<std::string>> deprels_;
  std::vector<std::vector<int>> children_;
};

/// The member that has every other member as a descendant, if any.
std::optional<int> find_head(const MweInstance& m, const DepView& d);

struct TypeDecision {
  MweType type = MweType::Other;
  std::optional<int> head;
  std::string note;  // set when the decision comes from a degenerate parse
};

TypeDecision decide_type(const MweInstance& m, const DepView& d);

/// Five-way type from the head's UPOS and its dependents inside the MWE.
/// Throws MissingParse when the head has no UPOS.
MweType tag_type(const MweInstance& m, const DepView& d);

struct TagDiagnostic {
  std::string sentence_id;
  std::vector<int> token_indices;  // empty for sentence-level problems
  std::string message;
};

struct TagResult {
  Corpus corpus;
  std::vector<TagDiagnostic> diagnostics;
  std::size_t tagged = 0;
};

/// Types every MWE. Existing types are kept unless `force`. Parse problems
/// never abort: the MWE is left as is (missing parse) or typed Other
/// (malformed tree) and a diagnostic is recorded.
TagResult tag_corpus(const Corpus& c, bool force = false);

}  // namespace mwetk
