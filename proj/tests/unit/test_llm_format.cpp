#include <doctest.h>

#include <sstream>

#include "mwetk/llm_format.hpp"
#include "test_support.hpp"

using namespace mwetk;
using mwetk::testing::make_sentence;

namespace {

std::size_t word_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  std::string w;
  while (in >> w) {
    // list markers of the numbered conditions
    if (w.size() == 2 && w[1] == '.' && w[0] >= '1' && w[0] <= '9') continue;
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("input text is one word per line") {
  Sentence s = make_sentence("a", "ACL stands for Association");
  CHECK(to_llm_input(s) == "ACL\nstands\nfor\nAssociation\n");
  CHECK(to_llm_input(make_sentence("e", "")) == "");
  s.tokens[1].surface = "sta\tnds";
  CHECK_THROWS_AS(to_llm_input(s), FormatError);
}

TEST_CASE("gold output and parsing") {
  Sentence s = make_sentence("a", "ACL stands for Association for");
  s.add_mwe(MweInstance({2, 3}));
  CHECK(to_llm_output(s) == "ACL\t\nstands\t1\nfor\t1\nAssociation\t\nfor\t\n");

  auto r = parse_llm_output("ACL\t\nstands\t1\nfor\t1", s);
  REQUIRE(r.mwes.size() == 1);
  CHECK(r.mwes[0].token_indices() == std::vector<int>{2, 3});
  CHECK(r.mwes[0].source() == "predicted");
}

TEST_CASE("lenient parsing reports bad lines") {
  Sentence s = make_sentence("a", "a b c d");
  CHECK(parse_llm_output("a\t\nb\t\nc\t\nd\t\n", s).mwes.empty());

  auto single = parse_llm_output("a\t1\nb\t\nc\t\nd\t\n", s);
  CHECK(single.mwes.empty());
  CHECK_FALSE(single.diagnostics.empty());

  auto echo = parse_llm_output("a\t1\nX\t1\nc\t1\nd\t\n", s);
  REQUIRE(echo.mwes.size() == 1);
  CHECK(echo.mwes[0].token_indices() == std::vector<int>{1, 3});
  REQUIRE(echo.diagnostics.size() == 1);
  CHECK(echo.diagnostics[0].line == 2);

  auto shape = parse_llm_output("a\t1\tzz\nb\t2\nc\t2;1\nd\t1\n", s);
  REQUIRE(shape.mwes.size() == 2);
  CHECK(shape.mwes[0].token_indices() == std::vector<int>{2, 3});
  CHECK(shape.mwes[1].token_indices() == std::vector<int>{3, 4});

  auto truncated = parse_llm_output("a\t1\nb\t1\n", s);
  CHECK(truncated.mwes.size() == 1);
  CHECK(std::any_of(truncated.diagnostics.begin(), truncated.diagnostics.end(),
                    [](const LineDiagnostic& d) { return d.line == 0; }));
}

TEST_CASE("gold round trip recovers instances") {
  mwetk::testing::RandomCorpus gen(11);
  for (int i = 0; i < 200; ++i) {
    Corpus c = gen.full(4, 12);
    for (const Sentence& s : c.sentences) {
      auto r = parse_llm_output(to_llm_output(s), s);
      std::set<std::vector<int>> expected, got;
      for (const auto& m : s.mwes) expected.insert(m.token_indices());
      for (const auto& m : r.mwes) got.insert(m.token_indices());
      CHECK(got == expected);
      CHECK(r.diagnostics.empty());
    }
  }
}

TEST_CASE("prompt layout and definitions") {
  Sentence s = make_sentence("a", "ACL stands for Association");
  const std::string long_prompt = build_prompt(s, DefinitionLength::Long);
  const std::string short_prompt = build_prompt(s, DefinitionLength::Short);
  CHECK(long_prompt.ends_with("Sentence:\nACL\nstands\nfor\nAssociation\n"));
  CHECK(long_prompt.find(mwe_definition(DefinitionLength::Long)) != std::string::npos);
  CHECK(short_prompt.find(mwe_definition(DefinitionLength::Short)) != std::string::npos);

  // The two prompts differ only in the definition block.
  const auto lpos = long_prompt.find(mwe_definition(DefinitionLength::Long));
  const auto spos = short_prompt.find(mwe_definition(DefinitionLength::Short));
  CHECK(lpos == spos);
  CHECK(long_prompt.substr(0, lpos) == short_prompt.substr(0, spos));
  CHECK(long_prompt.substr(lpos + mwe_definition(DefinitionLength::Long).size()) ==
        short_prompt.substr(spos + mwe_definition(DefinitionLength::Short).size()));

  CHECK(word_count(mwe_definition(DefinitionLength::Long)) == 162);
  CHECK(word_count(mwe_definition(DefinitionLength::Short)) == 57);
  CHECK(system_message().find("(MWEs)") != std::string_view::npos);
}
