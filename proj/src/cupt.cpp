#include "mwetk/cupt.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "mwetk/errors.hpp"
#include "text_util.hpp"

namespace mwetk {

namespace {

constexpr std::string_view kColumnsHeader = "# global.columns = ID FORM LEMMA UPOS HEAD DEPREL MWE";
constexpr std::string_view kMetaPrefix = "meta.";
constexpr std::string_view kGlobalPrefix = "global.";

struct PendingMwe {
  std::vector<int> indices;
  std::optional<MweType> type;
  std::size_t first_line = 0;
};

struct RowInfo {
  std::size_t line = 0;
};

class SentenceBuilder {
 public:
  explicit SentenceBuilder(const CuptReadOptions& options) : options_(options) {}

  bool empty() const { return !has_comment_ && sentence_.tokens.empty(); }

  void comment(std::string_view body, std::size_t line) {
    auto eq = body.find(" = ");
    std::string key;
    std::string value;
    if (eq == std::string_view::npos) {
      // Bare `# key` or `# key =` line.
      std::string_view k = detail::trim(body);
      if (!k.empty() && k.back() == '=') k = detail::trim(k.substr(0, k.size() - 1));
      key = std::string(k);
    } else {
      key = std::string(detail::trim(body.substr(0, eq)));
      value = std::string(body.substr(eq + 3));
    }
    has_comment_ = true;
    if (key == "sent_id") {
      sentence_.id = std::string(detail::trim(value));
      id_line_ = line;
    } else if (key == "flag") {
      sentence_.flags.insert(std::string(detail::trim(value)));
    } else if (key == "mwe_source") {
      for (auto item : detail::split(detail::trim(value), ' ')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        auto num = colon == std::string_view::npos ? std::nullopt
                                                   : detail::parse_int(item.substr(0, colon));
        if (!num || colon + 1 >= item.size()) {
          throw ParseError(line, "malformed mwe_source entry '" + std::string(item) + "'");
        }
        sources_[*num] = std::string(item.substr(colon + 1));
      }
      sources_line_ = line;
    } else {
      sentence_.attrs.emplace_back(std::move(key), std::move(value));
    }
  }

  void row(std::string_view text, std::size_t line) {
    auto cols = detail::split(text, '\t');
    const bool eleven = options_.layout == ColumnLayout::Eleven;
    const std::size_t expected = eleven ? 11 : 7;
    if (cols.size() != expected) {
      throw ParseError(line, "expected " + std::to_string(expected) + " columns, got " +
                                 std::to_string(cols.size()));
    }
    if (eleven && cols[0].find_first_of("-.") != std::string_view::npos) return;

    auto id = detail::parse_int(cols[0]);
    if (!id) throw ParseError(line, "non-numeric ID '" + std::string(cols[0]) + "'");
    const int expected_id = static_cast<int>(sentence_.tokens.size()) + 1;
    if (*id != expected_id) {
      throw ParseError(line, "ID " + std::to_string(*id) + " out of sequence (expected " +
                                 std::to_string(expected_id) + ")");
    }
    if (cols[1].empty()) throw ParseError(line, "empty FORM");

    const std::string_view head_col = eleven ? cols[6] : cols[4];
    const std::string_view deprel_col = eleven ? cols[7] : cols[5];
    const std::string_view mwe_col = eleven ? cols[10] : cols[6];

    Token t;
    t.index = *id;
    t.surface = std::string(cols[1]);
    if (cols[2] != "_") t.lemma = std::string(cols[2]);
    if (cols[3] != "_") t.upos = std::string(cols[3]);
    if (head_col != "_") {
      auto head = detail::parse_int(head_col);
      if (!head) throw ParseError(line, "non-numeric HEAD '" + std::string(head_col) + "'");
      t.head = *head;
    }
    if (deprel_col != "_") t.deprel = std::string(deprel_col);
    sentence_.tokens.push_back(std::move(t));
    rows_.push_back({line});

    parse_mwe_cell(mwe_col, *id, line);
  }

  Sentence finish(std::size_t ordinal) {
    if (sentence_.id.empty()) sentence_.id = std::to_string(ordinal);
    const int n = static_cast<int>(sentence_.tokens.size());
    for (std::size_t i = 0; i < sentence_.tokens.size(); ++i) {
      const Token& t = sentence_.tokens[i];
      if (t.head && (*t.head < 0 || *t.head > n || *t.head == t.index)) {
        throw ParseError(rows_[i].line, "HEAD " + std::to_string(*t.head) + " out of range");
      }
    }
    for (const auto& [number, source] : sources_) {
      if (!pending_.count(number)) {
        throw ParseError(sources_line_, "mwe_source refers to unknown MWE " +
                                            std::to_string(number));
      }
    }
    for (auto& [number, p] : pending_) {
      if (p.indices.size() < 2) {
        throw ParseError(p.first_line,
                         "MWE " + std::to_string(number) + " appears on a single token");
      }
      auto src = sources_.find(number);
      sentence_.mwes.emplace_back(std::move(p.indices), p.type,
                                  src == sources_.end() ? options_.default_source : src->second);
    }
    sentence_.normalize_mwes();
    return std::move(sentence_);
  }

  std::size_t id_line() const { return id_line_; }

 private:
  void parse_mwe_cell(std::string_view cell, int token, std::size_t line) {
    const bool eleven = options_.layout == ColumnLayout::Eleven;
    if (cell == "*" || (eleven && cell == "_")) return;
    int previous = 0;
    for (auto part : detail::split(cell, ';')) {
      auto colon = part.find(':');
      auto num_text = part.substr(0, colon);
      auto number = detail::parse_int(num_text);
      if (!number || *number < 1) {
        throw ParseError(line, "bad MWE number '" + std::string(part) + "'");
      }
      if (!eleven && *number <= previous) throw ParseError(line, "MWE numbers not ascending");
      previous = *number;
      PendingMwe& p = pending_[*number];
      if (p.indices.empty()) p.first_line = line;
      p.indices.push_back(token);
      if (colon != std::string_view::npos) {
        auto label = part.substr(colon + 1);
        auto type = parse_type_label(label);
        if (!type) {
          if (eleven) continue;
          throw ParseError(line, "unknown MWE type '" + std::string(label) + "'");
        }
        if (p.type && *p.type != *type) {
          throw ParseError(line, "conflicting types for MWE " + std::to_string(*number));
        }
        p.type = type;
      }
    }
  }

  const CuptReadOptions& options_;
  Sentence sentence_;
  std::vector<RowInfo> rows_;
  std::map<int, PendingMwe> pending_;
  std::map<int, std::string> sources_;
  std::size_t sources_line_ = 0;
  std::size_t id_line_ = 0;
  bool has_comment_ = false;
};

bool is_corpus_comment(std::string_view body) {
  auto key = detail::trim(body);
  return key.substr(0, kMetaPrefix.size()) == kMetaPrefix ||
         key.substr(0, kGlobalPrefix.size()) == kGlobalPrefix;
}

}  // namespace

Corpus read_cupt(std::istream& in, const CuptReadOptions& options) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::optional<SentenceBuilder> builder;
  std::string raw;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (!builder || builder->empty()) {
      builder.reset();
      return;
    }
    std::size_t id_line = builder->id_line();
    Sentence s = builder->finish(corpus.sentences.size() + 1);
    if (!ids.insert(s.id).second) {
      throw ParseError(id_line ? id_line : line_no, "duplicate sentence id '" + s.id + "'");
    }
    corpus.sentences.push_back(std::move(s));
    builder.reset();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::strip_cr(raw);
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (detail::trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = detail::trim(line.substr(1));
      if (is_corpus_comment(body)) {
        auto eq = body.find(" = ");
        auto key = detail::trim(body.substr(0, eq));
        if (key.substr(0, kMetaPrefix.size()) == kMetaPrefix && eq != std::string_view::npos) {
          corpus.metadata[std::string(key.substr(kMetaPrefix.size()))] =
              std::string(body.substr(eq + 3));
        }
        continue;
      }
      if (!builder) builder.emplace(options);
      builder->comment(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1),
                       line_no);
      continue;
    }
    if (!builder) builder.emplace(options);
    builder->row(line, line_no);
  }
  flush();
  return corpus;
}

Corpus read_cupt_string(std::string_view text, const CuptReadOptions& options) {
  std::istringstream in{std::string(text)};
  return read_cupt(in, options);
}

Corpus read_cupt_file(const std::filesystem::path& path, const CuptReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_cupt(in, options);
}

std::string mwe_cell(const Sentence& s, int index) {
  std::string cell;
  int number = 0;
  for (const auto& m : s.mwes) {
    ++number;
    const auto& idx = m.token_indices();
    if (!std::binary_search(idx.begin(), idx.end(), index)) continue;
    if (!cell.empty()) cell += ';';
    cell += std::to_string(number);
    if (m.type() && idx.front() == index) {
      cell += ':';
      cell += type_label(*m.type());
    }
  }
  return cell.empty() ? "*" : cell;
}

void write_cupt(const Corpus& corpus, std::ostream& out) {
  out << kColumnsHeader << '\n';
  for (const auto& [k, v] : corpus.metadata) out << "# " << kMetaPrefix << k << " = " << v << '\n';
  out << '\n';
  auto opt = [](const std::optional<std::string>& v) -> const std::string& {
    static const std::string underscore = "_";
    return v ? *v : underscore;
  };
  for (const auto& s : corpus.sentences) {
    out << "# sent_id = " << s.id << '\n';
    for (const auto& f : s.flags) out << "# flag = " << f << '\n';
    for (const auto& [k, v] : s.attrs) {
      if (v.empty()) {
        out << "# " << k << '\n';
      } else {
        out << "# " << k << " = " << v << '\n';
      }
    }
    std::string sources;
    for (std::size_t i = 0; i < s.mwes.size(); ++i) {
      if (s.mwes[i].source() == source::kGold) continue;
      if (!sources.empty()) sources += ' ';
      sources += std::to_string(i + 1) + ":" + s.mwes[i].source();
    }
    if (!sources.empty()) out << "# mwe_source = " << sources << '\n';
    for (const auto& t : s.tokens) {
      out << t.index << '\t' << t.surface << '\t' << opt(t.lemma) << '\t' << opt(t.upos) << '\t'
          << (t.head ? std::to_string(*t.head) : "_") << '\t' << opt(t.deprel) << '\t'
          << mwe_cell(s, t.index) << '\n';
    }
    out << '\n';
  }
}

std::string write_cupt_string(const Corpus& corpus) {
  std::ostringstream out;
  write_cupt(corpus, out);
  return out.str();
}

void write_cupt_file(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_cupt(corpus, out);
}

}  // namespace mwetk
