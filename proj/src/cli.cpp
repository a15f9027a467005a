#include "mwetk/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mwetk/annotation_server.hpp"
#include "mwetk/annotation_store.hpp"
#include "mwetk/consistency.hpp"
#include "mwetk/cupt.hpp"
#include "mwetk/evaluator.hpp"
#include "mwetk/identifier.hpp"
#include "mwetk/lexicon.hpp"
#include "mwetk/llm_format.hpp"
#include "mwetk/report_json.hpp"
#include "mwetk/type_tagger.hpp"

namespace mwetk {

using nlohmann::json;

namespace {

// A data error already carrying its file location.
class LocatedError : public Error {
 public:
  using Error::Error;
};

bool is_stdio(const std::string& path) { return path.empty() || path == "-"; }

std::string read_all(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (is_stdio(path)) {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw LocatedError(path + ": cannot open");
    buf << f.rdbuf();
  }
  return buf.str();
}

std::string display(const std::string& path) { return is_stdio(path) ? "<stdin>" : path; }

// Runs `fn`, prefixing any error with the file name (and line).
template <typename F>
auto located(const std::string& path, F fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const LocatedError&) {
    throw;
  } catch (const ParseError& e) {
    throw LocatedError(display(path) + ":" + std::to_string(e.line()) + ": " + e.reason());
  } catch (const Error& e) {
    throw LocatedError(display(path) + ": " + e.what());
  } catch (const json::exception& e) {
    throw LocatedError(display(path) + ": " + e.what());
  }
}

enum class CorpusFormat { Cupt, Cupt11, Json };

Corpus load_corpus(const std::string& path, std::istream& in, CorpusFormat fmt = CorpusFormat::Cupt,
                   const std::string& default_source = std::string(source::kGold)) {
  const std::string text = read_all(path, in);
  return located(path, [&] {
    if (fmt == CorpusFormat::Json) return corpus_from_json(json::parse(text));
    CuptReadOptions opts;
    opts.layout = fmt == CorpusFormat::Cupt11 ? ColumnLayout::Eleven : ColumnLayout::Seven;
    opts.default_source = default_source;
    return read_cupt_string(text, opts);
  });
}

Lexicon load_lexicon_path(const std::string& path, std::istream& in) {
  const std::string text = read_all(path, in);
  return located(path, [&] {
    std::istringstream s(text);
    return load_lexicon(s);
  });
}

json load_json(const std::string& path, std::istream& in) {
  const std::string text = read_all(path, in);
  return located(path, [&] { return json::parse(text); });
}

// Writes to `path`, or `out` for stdout.
template <typename F>
void emit(const std::string& path, std::ostream& out, F write) {
  if (is_stdio(path)) {
    write(out);
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LocatedError(path + ": cannot open for writing");
  write(f);
  if (!f) throw LocatedError(path + ": write failed");
}

std::string resolve_lexicon(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv("MWETK_LEXICON"); env && *env) return env;
  throw CLI::RequiredError("--lexicon (or MWETK_LEXICON)");
}

std::string fmt_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void print_stats_row(std::ostream& out, const std::string& label, const CorpusStats& st) {
  out << label << '\t' << st.sentences << '\t' << st.words << '\t' << st.mwes << '\t'
      << fmt_pct(st.density);
  for (MweType t : kAllMweTypes) {
    auto it = st.type_proportions.find(t);
    out << '\t' << (it == st.type_proportions.end() ? "0.0" : fmt_pct(it->second));
  }
  out << '\n';
}

void print_eval(std::ostream& out, const EvalReport& r) {
  out << "gold\t" << r.gold << "\npredicted\t" << r.predicted << "\ncorrect\t" << r.correct
      << "\nprecision\t" << fmt_num(r.precision) << "\nrecall\t" << fmt_num(r.recall) << "\nf1\t"
      << fmt_num(r.f1) << '\n';
  for (const auto& b : r.breakdowns) {
    out << "\nrecall by " << b.partition << '\n';
    for (const auto& c : b.categories) {
      out << c.category << '\t' << c.hits << '/' << c.gold << '\t'
          << (c.recall ? fmt_num(*c.recall) : std::string("n/a")) << '\n';
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"mwetk: multiword expression corpus toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mwetk 1.0.0");

  const std::map<std::string, CorpusFormat> formats{
      {"cupt", CorpusFormat::Cupt}, {"cupt11", CorpusFormat::Cupt11}, {"json", CorpusFormat::Json}};

  // convert
  std::string conv_in, conv_out = "-";
  CorpusFormat conv_from = CorpusFormat::Cupt, conv_to = CorpusFormat::Cupt;
  auto* convert = app.add_subcommand("convert", "Convert between CUPT, 11-column CUPT and JSON");
  convert->add_option("input", conv_in, "Input corpus")->default_val("-");
  convert->add_option("-o,--output", conv_out, "Output path");
  convert->add_option("--from", conv_from, "Input format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  convert->add_option("--to", conv_to, "Output format (cupt or json)")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  convert->add_flag("--cupt11", [&](std::int64_t) { conv_from = CorpusFormat::Cupt11; },
                    "Read the 11-column CUPT layout");

  // identify
  std::string id_in, id_out = "-", id_lex;
  MatchConfig id_cfg;
  unsigned id_threads = 1;
  auto* identify_cmd = app.add_subcommand("identify", "Lexicon-based MWE identification");
  identify_cmd->add_option("input", id_in, "Input corpus")->default_val("-");
  identify_cmd->add_option("-o,--output", id_out, "Output path");
  identify_cmd->add_option("-l,--lexicon", id_lex, "Lexicon file (default: $MWETK_LEXICON)");
  identify_cmd->add_option("--max-gap", id_cfg.max_gap, "Maximum non-member tokens in a match")
      ->check(CLI::NonNegativeNumber);
  identify_cmd->add_flag("--reorder", id_cfg.allow_reorder, "Match lemmas in any order");
  identify_cmd
      ->add_option("--overlap", id_cfg.overlap, "Overlap policy: all or longest")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OverlapPolicy>{{"all", OverlapPolicy::All},
                                               {"longest", OverlapPolicy::LongestNonOverlapping}},
          CLI::ignore_case));
  identify_cmd->add_option("-j,--threads", id_threads, "Worker threads")->check(CLI::PositiveNumber);

  // tag-types
  std::string tag_in, tag_out = "-";
  bool tag_force = false;
  auto* tag_cmd = app.add_subcommand("tag-types", "Assign syntactic types from dependency parses");
  tag_cmd->add_option("input", tag_in, "Input corpus")->default_val("-");
  tag_cmd->add_option("-o,--output", tag_out, "Output path");
  tag_cmd->add_flag("--force", tag_force, "Retag MWEs that already have a type");

  // evaluate
  std::string ev_gold, ev_pred, ev_train, ev_lex;
  bool ev_json = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against gold");
  eval_cmd->add_option("--gold", ev_gold, "Gold corpus")->required();
  eval_cmd->add_option("--pred", ev_pred, "Predicted corpus")->required();
  eval_cmd->add_option("--train", ev_train, "Training corpus for seen/unseen recall");
  eval_cmd->add_option("--lexicon", ev_lex, "Lexicon for in/not-in lexicon recall");
  eval_cmd->add_flag("--json", ev_json, "Emit a JSON report");

  // stats
  std::string st_in, st_group;
  bool st_json = false, st_drop = false;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("input", st_in, "Input corpus")->default_val("-");
  stats_cmd->add_option("--group-by", st_group, "Sentence attribute to group by (e.g. source)");
  stats_cmd->add_flag("--json", st_json, "Emit JSON");
  stats_cmd->add_flag("--drop-unclear", st_drop, "Exclude sentences flagged unclear");

  // iaa
  std::vector<std::string> iaa_in;
  bool iaa_json = false;
  auto* iaa_cmd = app.add_subcommand("iaa", "Pairwise F1 agreement between annotations");
  iaa_cmd->add_option("inputs", iaa_in, "Two or more annotations of the same text")
      ->required()
      ->expected(2, -1);
  iaa_cmd->add_flag("--json", iaa_json, "Emit JSON");

  // check-consistency
  std::string cc_in, cc_report, cc_apply, cc_out = "-";
  int cc_gap = 3;
  auto* cc_cmd = app.add_subcommand("check-consistency",
                                    "Find unlabeled occurrences of labeled MWEs");
  cc_cmd->add_option("input", cc_in, "Annotated corpus")->default_val("-");
  cc_cmd->add_option("--report", cc_report, "Write the candidate report here (default stdout)");
  cc_cmd->add_option("--apply", cc_apply, "Apply a decisions file instead of reporting");
  cc_cmd->add_option("-o,--output", cc_out, "Output corpus for --apply");
  cc_cmd->add_option("--max-gap", cc_gap, "Maximum gap")->check(CLI::NonNegativeNumber);

  // llm-format
  std::string llm_mode, llm_in, llm_responses, llm_out = "-";
  DefinitionLength llm_def = DefinitionLength::Long;
  auto* llm_cmd = app.add_subcommand("llm-format", "Prompt, gold and response handling for LLMs");
  llm_cmd->add_option("mode", llm_mode, "prompt, gold or parse")
      ->required()
      ->check(CLI::IsMember({"prompt", "gold", "parse"}));
  llm_cmd->add_option("input", llm_in, "Input corpus")->default_val("-");
  llm_cmd->add_option("--definition", llm_def, "long or short")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, DefinitionLength>{{"long", DefinitionLength::Long},
                                                  {"short", DefinitionLength::Short}},
          CLI::ignore_case));
  llm_cmd->add_option("--responses", llm_responses, "JSONL of {id, output} for parse mode");
  llm_cmd->add_option("-o,--output", llm_out, "Output path");

  // serve
  std::string sv_data, sv_host = "127.0.0.1";
  int sv_port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  serve_cmd->add_option("--data", sv_data, "Data directory (config.json, corpus.cupt)")->required();
  serve_cmd->add_option("--host", sv_host, "Bind address");
  serve_cmd->add_option("--port", sv_port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*convert) {
      if (conv_to == CorpusFormat::Cupt11) throw CLI::ValidationError("--to", "cupt11 is read-only");
      const Corpus c = load_corpus(conv_in, in, conv_from);
      emit(conv_out, out, [&](std::ostream& o) {
        if (conv_to == CorpusFormat::Json) {
          o << to_json(c).dump(1) << '\n';
        } else {
          write_cupt(c, o);
        }
      });
    } else if (*identify_cmd) {
      const std::string lex_path = resolve_lexicon(id_lex);
      const Lexicon lex = load_lexicon_path(lex_path, in);
      const Corpus c = load_corpus(id_in, in);
      const Corpus pred = located(id_in, [&] { return identify_corpus(c, lex, id_cfg, id_threads); });
      emit(id_out, out, [&](std::ostream& o) { write_cupt(pred, o); });
    } else if (*tag_cmd) {
      const Corpus c = load_corpus(tag_in, in);
      const TagResult r = tag_corpus(c, tag_force);
      for (const auto& d : r.diagnostics) {
        err << display(tag_in) << ": sentence " << d.sentence_id;
        if (!d.token_indices.empty()) err << " MWE " << span_text(*r.corpus.find(d.sentence_id), d.token_indices);
        err << ": " << d.message << '\n';
      }
      emit(tag_out, out, [&](std::ostream& o) { write_cupt(r.corpus, o); });
    } else if (*eval_cmd) {
      const Corpus gold = load_corpus(ev_gold, in);
      const Corpus pred = load_corpus(ev_pred, in, CorpusFormat::Cupt, std::string(source::kPredicted));
      EvalOptions opts;
      std::optional<Corpus> train;
      std::optional<Lexicon> lex;
      if (!ev_train.empty()) {
        train = load_corpus(ev_train, in);
        opts.train = &*train;
      }
      if (!ev_lex.empty()) {
        lex = load_lexicon_path(ev_lex, in);
        opts.lexicon = &*lex;
      }
      const EvalReport r = located(ev_pred, [&] { return evaluate(gold, pred, opts); });
      if (ev_json) {
        out << to_json(r).dump(1) << '\n';
      } else {
        print_eval(out, r);
      }
    } else if (*stats_cmd) {
      Corpus c = load_corpus(st_in, in);
      if (st_drop) c = drop_flagged(c, kUnclearFlag);
      const CorpusStats total = stats(c);
      std::vector<std::pair<std::string, CorpusStats>> groups;
      if (!st_group.empty()) groups = stats_by(c, st_group);
      if (st_json) {
        out << stats_report_json(total, st_group, groups).dump(1) << '\n';
      } else {
        out << "group\tsentences\twords\tmwes\tdensity%";
        for (MweType t : kAllMweTypes) out << '\t' << type_display_name(t) << '%';
        out << '\n';
        for (const auto& [value, st] : groups) print_stats_row(out, value.empty() ? "(none)" : value, st);
        print_stats_row(out, "total", total);
      }
    } else if (*iaa_cmd) {
      std::vector<Corpus> annotations;
      for (const auto& p : iaa_in) annotations.push_back(load_corpus(p, in));
      const IaaReport r = located(iaa_in.back(), [&] { return iaa(annotations); });
      if (iaa_json) {
        out << to_json(r, iaa_in).dump(1) << '\n';
      } else {
        for (std::size_t i = 0; i < iaa_in.size(); ++i) {
          for (std::size_t j = i + 1; j < iaa_in.size(); ++j) {
            out << iaa_in[i] << '\t' << iaa_in[j] << '\t' << fmt_num(r.pairwise_f1[i][j]) << '\n';
          }
        }
        out << "mean\t" << fmt_num(r.mean) << "\nmax\t" << fmt_num(r.max) << '\n';
      }
    } else if (*cc_cmd) {
      const Corpus c = load_corpus(cc_in, in);
      if (!cc_apply.empty()) {
        const json dj = load_json(cc_apply, in);
        const auto decisions = located(cc_apply, [&] { return decisions_from_json(dj); });
        const Corpus updated = located(cc_apply, [&] { return apply_decisions(c, decisions); });
        emit(cc_out, out, [&](std::ostream& o) { write_cupt(updated, o); });
      } else {
        MatchConfig cfg;
        cfg.max_gap = cc_gap;
        const auto report = located(cc_in, [&] {
          const LabeledSet labeled = mine_labeled_set(c);
          return consistency_report_json(c, labeled, find_candidates(c, labeled, cfg));
        });
        emit(cc_report, out, [&](std::ostream& o) { o << report.dump(1) << '\n'; });
      }
    } else if (*llm_cmd) {
      const Corpus c = load_corpus(llm_in, in);
      if (llm_mode == "prompt") {
        emit(llm_out, out, [&](std::ostream& o) {
          for (const auto& s : c.sentences) {
            const auto prompt = located(llm_in, [&] { return build_prompt(s, llm_def); });
            o << json{{"id", s.id}, {"system", system_message()}, {"prompt", prompt}}.dump() << '\n';
          }
        });
      } else if (llm_mode == "gold") {
        emit(llm_out, out, [&](std::ostream& o) {
          for (const auto& s : c.sentences) {
            const auto output = located(llm_in, [&] { return to_llm_output(s); });
            o << json{{"id", s.id}, {"input", to_llm_input(s)}, {"output", output}}.dump() << '\n';
          }
        });
      } else {
        if (llm_responses.empty()) throw CLI::RequiredError("--responses");
        const std::string text = read_all(llm_responses, in);
        std::map<std::string, std::string> responses;
        std::istringstream lines(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(lines, line)) {
          ++line_no;
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          located(llm_responses, [&] {
            try {
              const json j = json::parse(line);
              responses[j.at("id").get<std::string>()] = j.at("output").get<std::string>();
            } catch (const json::exception& e) {
              throw ParseError(line_no, e.what());
            }
            return 0;
          });
        }
        Corpus pred = c;
        for (auto& s : pred.sentences) {
          s.mwes.clear();
          auto it = responses.find(s.id);
          if (it == responses.end()) {
            err << display(llm_responses) << ": no response for sentence " << s.id << '\n';
            continue;
          }
          const LlmParseResult r = parse_llm_output(it->second, s);
          for (const auto& d : r.diagnostics) {
            err << display(llm_responses) << ": sentence " << s.id << " output line " << d.line
                << ": " << d.message << '\n';
          }
          for (const auto& m : r.mwes) s.add_mwe(m);
        }
        emit(llm_out, out, [&](std::ostream& o) { write_cupt(pred, o); });
      }
    } else if (*serve_cmd) {
      auto store = AnnotationStore::open(sv_data);
      AnnotationServer server(*store);
      const int port = server.bind(sv_host, sv_port);
      err << "mwetk: serving " << sv_data << " on http://" << sv_host << ':' << port << std::endl;
      server.listen();
    }
  } catch (const CLI::Error& e) {
    err << "mwetk: " << e.what() << '\n';
    return 1;
  } catch (const LocatedError& e) {
    err << "mwetk: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "mwetk: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace mwetk
