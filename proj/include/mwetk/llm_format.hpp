#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mwetk/corpus.hpp"

namespace mwetk {

// tsv_to_tsv exchange format for instruction-tuned models. The input is one
// surface form per line; the expected output echoes each word followed by a
// tab and its MWE tag (empty, or `;`-joined MWE numbers).

enum class DefinitionLength { Long, Short };

/// The shipped MWE definition text interpolated into prompts.
std::string_view mwe_definition(DefinitionLength length);

std::string_view system_message();

/// One surface form per line, each terminated by '\n'. Throws FormatError
/// when a surface contains a tab or line break.
std::string to_llm_input(const Sentence& s);

/// Reference output for the sentence's MWEs (numbered in canonical order).
std::string to_llm_output(const Sentence& s);

/// User message: task instruction, the definition, the format instruction
/// and the sentence words.
std::string build_prompt(const Sentence& s, DefinitionLength definition);

struct LineDiagnostic {
  std::size_t line = 0;  // 1-based; 0 for whole-output problems
  std::string message;

  bool operator==(const LineDiagnostic&) const = default;
};

struct LlmParseResult {
  std::vector<MweInstance> mwes;
  std::vector<LineDiagnostic> diagnostics;
};

/// Lenient parse of untrusted model output. Lines that break the two-column
/// shape or do not echo the expected word are reported and skipped; MWE
/// numbers seen on fewer than two usable lines are dropped.
LlmParseResult parse_llm_output(std::string_view text, const Sentence& s);

}  // namespace mwetk
