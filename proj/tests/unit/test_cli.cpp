#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mwetk/cli.hpp"
#include "mwetk/cupt.hpp"
#include "mwetk/report_json.hpp"

using namespace mwetk;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(MWETK_FIXTURE_DIR) + "/" + name; }

fs::path temp_file(const std::string& name, const std::string& content) {
  fs::path p = fs::temp_directory_path() / ("mwetk_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"stats", "--bogus"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"identify", "--max-gap", "-2", "-l", "x"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("evaluate a file against itself") {
  auto r = run({"evaluate", "--gold", fixture("eval_gold.cupt"), "--pred", fixture("eval_gold.cupt")});
  CHECK(r.code == 0);
  CHECK(r.out.find("f1\t1.0000") != std::string::npos);

  auto j = run({"evaluate", "--gold", fixture("eval_gold.cupt"), "--pred",
                fixture("eval_pred_llm.cupt"), "--json"});
  REQUIRE(j.code == 0);
  auto report = nlohmann::json::parse(j.out);
  CHECK(report["schema"] == "mwetk.eval-report/1");
  CHECK(report["f1"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("data errors exit 2 with file and line") {
  auto bad = temp_file("bad.cupt", "1\ta\ta\t_\t_\t_\t*\n2\tb\tb\t_\t_\t*\n");
  auto r = run({"stats", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(bad.string() + ":2:") != std::string::npos);

  auto stdin_run = run({"stats"}, "1\ta\ta\t_\t_\t_\t1\n");
  CHECK(stdin_run.code == 2);
  CHECK(stdin_run.err.find("<stdin>:1:") != std::string::npos);

  CHECK(run({"stats", "/nonexistent/file.cupt"}).code == 2);
  fs::remove(bad);
}

TEST_CASE("convert between formats") {
  auto json_run = run({"convert", fixture("give_try.cupt"), "--to", "json"});
  REQUIRE(json_run.code == 0);
  auto back = run({"convert", "--from", "json"}, json_run.out);
  REQUIRE(back.code == 0);
  CHECK(read_cupt_string(back.out) == read_cupt_file(fixture("give_try.cupt")));
  auto eleven = run({"convert", "--cupt11"},
                    "1\tHe\the\tPRON\t_\t_\t2\tnsubj\t_\t_\t*\n"
                    "2\tgave\tgive\tVERB\t_\t_\t0\troot\t_\t_\t1:VPC.full\n"
                    "3\tup\tup\tADP\t_\t_\t2\tcompound:prt\t_\t_\t1\n");
  REQUIRE(eleven.code == 0);
  CHECK(eleven.out.find("3\tup\tup\tADP\t2\tcompound:prt\t1\n") != std::string::npos);
}

TEST_CASE("identify uses the lexicon option or environment") {
  auto r = run({"identify", fixture("eval_gold.cupt"), "-l", fixture("lexicon_small.txt"),
                "--overlap", "longest"});
  REQUIRE(r.code == 0);
  CHECK(read_cupt_string(r.out).mwe_count() == 6);
  CHECK(run({"identify", fixture("eval_gold.cupt")}).code == (std::getenv("MWETK_LEXICON") ? 0 : 1));
  setenv("MWETK_LEXICON", fixture("lexicon_small.txt").c_str(), 1);
  CHECK(run({"identify", fixture("eval_gold.cupt")}).code == 0);
  unsetenv("MWETK_LEXICON");
}

TEST_CASE("stats, tag-types and consistency") {
  auto st = run({"stats", fixture("eval_gold.cupt"), "--json"});
  REQUIRE(st.code == 0);
  auto j = nlohmann::json::parse(st.out);
  CHECK(j["total"]["mwes"] == 7);

  auto table = run({"stats", fixture("give_try.cupt"), "--group-by", "text"});
  CHECK(table.code == 0);
  CHECK(table.out.find("total\t3\t19\t1\t") != std::string::npos);

  auto tagged = run({"tag-types", fixture("give_try.cupt"), "--force"});
  CHECK(tagged.code == 0);
  CHECK(tagged.out.find("1:VERB") != std::string::npos);

  auto report_path = fs::temp_directory_path() / "mwetk_cli_report.json";
  auto cc = run({"check-consistency", fixture("give_try.cupt"), "--report", report_path.string()});
  REQUIRE(cc.code == 0);
  nlohmann::json report;
  std::ifstream(report_path) >> report;
  REQUIRE(report["candidates"].size() == 1);

  nlohmann::json decisions{{"schema", "mwetk.consistency-decisions/1"}, {"decisions", report["candidates"]}};
  decisions["decisions"][0]["decision"] = "accept";
  auto dpath = temp_file("decisions.json", decisions.dump());
  auto applied = run({"check-consistency", fixture("give_try.cupt"), "--apply", dpath.string()});
  REQUIRE(applied.code == 0);
  CHECK(read_cupt_string(applied.out).mwe_count() == 2);
  auto again = run({"check-consistency", "-"}, applied.out);
  CHECK(nlohmann::json::parse(again.out)["candidates"].empty());

  decisions["decisions"][0]["fingerprint"] = "0000000000000000";
  auto stale = temp_file("stale.json", decisions.dump());
  CHECK(run({"check-consistency", fixture("give_try.cupt"), "--apply", stale.string()}).code == 2);
  fs::remove(report_path);
  fs::remove(dpath);
  fs::remove(stale);
}

TEST_CASE("llm-format modes") {
  auto prompts = run({"llm-format", "prompt", fixture("give_try.cupt"), "--definition", "short"});
  REQUIRE(prompts.code == 0);
  std::istringstream lines(prompts.out);
  std::string first;
  std::getline(lines, first);
  auto p = nlohmann::json::parse(first);
  CHECK(p["id"] == "r1");
  CHECK(p["prompt"].get<std::string>().ends_with("Sentence:\nI\nwould\ngive\nit\na\ntry\n.\n"));

  auto gold = run({"llm-format", "gold", fixture("give_try.cupt")});
  REQUIRE(gold.code == 0);
  auto responses = temp_file("responses.jsonl", gold.out);
  auto parsed = run({"llm-format", "parse", fixture("give_try.cupt"), "--responses", responses.string()});
  REQUIRE(parsed.code == 0);
  auto c = read_cupt_string(parsed.out);
  CHECK(c.mwe_count() == 1);
  CHECK(c.sentences[0].mwes[0].source() == "predicted");

  auto partial = temp_file("partial.jsonl", "{\"id\":\"r1\",\"output\":\"I\\t1\\n\"}\n");
  auto lenient = run({"llm-format", "parse", fixture("give_try.cupt"), "--responses", partial.string()});
  CHECK(lenient.code == 0);
  CHECK(lenient.err.find("no response for sentence r2") != std::string::npos);
  CHECK(lenient.err.find("single word") != std::string::npos);

  auto broken = temp_file("broken.jsonl", "{\"id\":\"r1\"}\n{oops\n");
  auto br = run({"llm-format", "parse", fixture("give_try.cupt"), "--responses", broken.string()});
  CHECK(br.code == 2);
  CHECK(br.err.find(broken.string() + ":1:") != std::string::npos);
  fs::remove(responses);
  fs::remove(partial);
  fs::remove(broken);
}

TEST_CASE("iaa") {
  auto r = run({"iaa", fixture("eval_gold.cupt"), fixture("eval_pred_llm.cupt"), "--json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["max"].get<double>() == doctest::Approx(0.5));
  CHECK(run({"iaa", fixture("eval_gold.cupt")}).code == 1);
}
