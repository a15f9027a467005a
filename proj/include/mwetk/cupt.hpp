#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "mwetk/corpus.hpp"

namespace mwetk {

// Column reader/writer for the toolkit's 7-column corpus format:
//
//   ID  FORM  LEMMA  UPOS  HEAD  DEPREL  MWE
//
// Sentences are separated by blank lines. `_` marks an absent value. The MWE
// column is `*` or a `;`-joined ascending list of per-sentence MWE numbers;
// the first member row may carry a type suffix (`1:VERB`). Sentence-level
// comments: `# sent_id = ...`, `# flag = ...`, `# mwe_source = 2:predicted`
// (only for MWEs whose source is not "gold") and any other `# key = value`
// line, kept verbatim. `# meta.key = value` lines carry corpus metadata.
//
// The Eleven layout reads PARSEME .cupt files (ID FORM LEMMA UPOS XPOS FEATS
// HEAD DEPREL DEPS MISC PARSEME:MWE), ignoring the extra columns, multiword
// token ranges and empty nodes. Unknown PARSEME categories are dropped.

enum class ColumnLayout { Seven, Eleven };

struct CuptReadOptions {
  ColumnLayout layout = ColumnLayout::Seven;
  // Source assigned to MWEs that have no `mwe_source` entry.
  std::string default_source = std::string(source::kGold);
};

Corpus read_cupt(std::istream& in, const CuptReadOptions& options = {});
Corpus read_cupt_string(std::string_view text, const CuptReadOptions& options = {});
Corpus read_cupt_file(const std::filesystem::path& path, const CuptReadOptions& options = {});

void write_cupt(const Corpus& corpus, std::ostream& out);
std::string write_cupt_string(const Corpus& corpus);
void write_cupt_file(const Corpus& corpus, const std::filesystem::path& path);

/// MWE column cell for token `index`, numbering MWEs in canonical order.
std::string mwe_cell(const Sentence& s, int index);

}  // namespace mwetk
