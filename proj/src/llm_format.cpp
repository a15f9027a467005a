#include "mwetk/llm_format.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mwetk/errors.hpp"
#include "mwetk_definitions.hpp"
#include "text_util.hpp"

namespace mwetk {

namespace {

constexpr std::string_view kSystemMessage =
    "You are a helpful system to identify multiple-word expressions (MWEs).";

constexpr std::string_view kTaskInstruction =
    "Identify all the MWEs in the given sentence, and output their surface forms and the "
    "indices of their components.";

constexpr std::string_view kFormatInstruction =
    "Each sentence is given as a string of words delimited by '\\n'. Respond in TSV format, "
    "where the first and second columns contain words and MWE tags, respectively. The MWE tag "
    "should be a string of MWE identifiers. When a word belongs to multiple MWEs, the tag should "
    "be a concatenation of their numbers delimited by semicolons.";

}  // namespace

std::string_view mwe_definition(DefinitionLength length) {
  return length == DefinitionLength::Long ? detail::kLongDefinition : detail::kShortDefinition;
}

std::string_view system_message() { return kSystemMessage; }

std::string to_llm_input(const Sentence& s) {
  std::string out;
  for (const auto& t : s.tokens) {
    if (t.surface.find_first_of("\t\r\n") != std::string::npos) {
      throw FormatError("sentence " + s.id + ": token " + std::to_string(t.index) +
                        " contains a tab or line break");
    }
    out += t.surface;
    out += '\n';
  }
  return out;
}

std::string to_llm_output(const Sentence& s) {
  to_llm_input(s);  // same word checks
  std::vector<std::string> tags(s.tokens.size());
  int number = 0;
  for (const auto& m : s.mwes) {
    ++number;
    for (int i : m.token_indices()) {
      auto& tag = tags[static_cast<std::size_t>(i - 1)];
      if (!tag.empty()) tag += ';';
      tag += std::to_string(number);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    out += s.tokens[i].surface;
    out += '\t';
    out += tags[i];
    out += '\n';
  }
  return out;
}

std::string build_prompt(const Sentence& s, DefinitionLength definition) {
  std::string out;
  out += kTaskInstruction;
  out += "\n\n";
  out += mwe_definition(definition);
  out += "\n\n";
  out += kFormatInstruction;
  out += "\n\nSentence:\n";
  out += to_llm_input(s);
  return out;
}

LlmParseResult parse_llm_output(std::string_view text, const Sentence& s) {
  LlmParseResult result;
  auto lines = detail::split(text, '\n');
  // A trailing newline produces one empty final element.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.size() != s.tokens.size()) {
    result.diagnostics.push_back({0, "expected " + std::to_string(s.tokens.size()) +
                                         " lines, got " + std::to_string(lines.size())});
  }

  std::map<int, std::vector<int>> groups;
  const std::size_t usable = std::min(lines.size(), s.tokens.size());
  for (std::size_t i = 0; i < usable; ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = detail::strip_cr(lines[i]);
    auto cols = detail::split(line, '\t');
    if (cols.size() != 2) {
      result.diagnostics.push_back(
          {line_no, "expected 2 tab-separated columns, got " + std::to_string(cols.size())});
      continue;
    }
    const auto& expected = s.tokens[i].surface;
    if (cols[0] != expected) {
      result.diagnostics.push_back(
          {line_no, "word '" + std::string(cols[0]) + "' does not echo '" + expected + "'"});
      continue;
    }
    std::string_view tag = detail::trim(cols[1]);
    if (tag.empty()) continue;
    std::set<int> numbers;
    bool ok = true;
    for (auto part : detail::split(tag, ';')) {
      auto n = detail::parse_int(detail::trim(part));
      if (!n || *n < 1) {
        ok = false;
        break;
      }
      numbers.insert(*n);
    }
    if (!ok) {
      result.diagnostics.push_back({line_no, "malformed tag '" + std::string(tag) + "'"});
      continue;
    }
    for (int n : numbers) groups[n].push_back(static_cast<int>(line_no));
  }
  for (std::size_t i = usable; i < lines.size(); ++i) {
    result.diagnostics.push_back({i + 1, "line beyond the end of the sentence"});
  }

  for (auto& [number, indices] : groups) {
    if (indices.size() < 2) {
      result.diagnostics.push_back(
          {static_cast<std::size_t>(indices.front()),
           "MWE " + std::to_string(number) + " tags a single word; dropped"});
      continue;
    }
    MweInstance m(indices, std::nullopt, std::string(source::kPredicted));
    if (std::find(result.mwes.begin(), result.mwes.end(), m) == result.mwes.end()) {
      result.mwes.push_back(std::move(m));
    }
  }
  std::sort(result.mwes.begin(), result.mwes.end());
  return result;
}

}  // namespace mwetk
