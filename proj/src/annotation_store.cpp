#include "mwetk/annotation_store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

#include "mwetk/cupt.hpp"
#include "mwetk/report_json.hpp"

namespace mwetk {

using nlohmann::json;

namespace {

constexpr const char* kConfigSchema = "mwetk.service-config/1";

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view role_name(Role r) { return r == Role::Reviewer ? "reviewer" : "annotator"; }

json submission_json(const Submission& s) {
  return json{{"revision", s.revision}, {"rows", s.rows}, {"unclear", s.unclear}};
}

}  // namespace

ServiceConfig service_config_from_json(const json& j) {
  try {
    ServiceConfig c;
    if (j.contains("schema") && j.at("schema") != kConfigSchema) {
      throw FormatError(std::string("expected schema ") + kConfigSchema);
    }
    c.rows = j.value("rows", 9);
    if (c.rows < 1) throw FormatError("rows must be positive");
    for (const auto& uj : j.at("users")) {
      User u;
      u.id = uj.at("id").get<std::string>();
      u.token = uj.at("token").get<std::string>();
      const auto role = uj.value("role", std::string("annotator"));
      if (role == "reviewer") {
        u.role = Role::Reviewer;
      } else if (role != "annotator") {
        throw FormatError("unknown role '" + role + "'");
      }
      c.users.push_back(std::move(u));
    }
    if (auto it = j.find("assignments"); it != j.end()) {
      for (const auto& [sid, pair] : it->items()) {
        auto names = pair.get<std::vector<std::string>>();
        if (names.size() != 2 || names[0] == names[1]) {
          throw FormatError("sentence " + sid + " must be assigned to exactly two annotators");
        }
        c.assignments[sid] = {names[0], names[1]};
      }
    }
    if (auto it = j.find("consistency"); it != j.end()) {
      c.consistency_match.max_gap = it->value("max_gap", c.consistency_match.max_gap);
    }
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("service config: ") + e.what());
  }
}

json to_json(const ServiceConfig& config) {
  json users = json::array();
  for (const auto& u : config.users) {
    users.push_back({{"id", u.id}, {"token", u.token}, {"role", std::string(role_name(u.role))}});
  }
  json assignments = json::object();
  for (const auto& [sid, pair] : config.assignments) assignments[sid] = {pair[0], pair[1]};
  return json{{"schema", kConfigSchema},
              {"rows", config.rows},
              {"users", std::move(users)},
              {"assignments", std::move(assignments)},
              {"consistency", {{"max_gap", config.consistency_match.max_gap}}}};
}

std::vector<MweInstance> rows_to_mwes(const Rows& rows, int sentence_length, int max_rows,
                                      const std::string& source) {
  if (static_cast<int>(rows.size()) > max_rows) {
    throw ServiceError(422, "at most " + std::to_string(max_rows) + " rows per sentence");
  }
  std::vector<MweInstance> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<int> checks = rows[r];
    std::sort(checks.begin(), checks.end());
    checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
    if (checks.empty()) continue;
    for (int i : checks) {
      if (i < 1 || i > sentence_length) {
        throw ServiceError(422, "row " + std::to_string(r + 1) + ": token " + std::to_string(i) +
                                    " out of range");
      }
    }
    if (checks.size() == 1) {
      throw ServiceError(422, "row " + std::to_string(r + 1) +
                                  " has a single check; an MWE needs at least two words");
    }
    MweInstance m(std::move(checks), std::nullopt, source);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rows mwes_to_rows(const std::vector<MweInstance>& mwes, int row_count) {
  Rows rows;
  for (const auto& m : mwes) rows.push_back(m.token_indices());
  while (static_cast<int>(rows.size()) < row_count) rows.emplace_back();
  return rows;
}

AnnotationStore::AnnotationStore(Corpus base, ServiceConfig config,
                                 std::filesystem::path data_dir, Clock clock)
    : base_(std::move(base)),
      gold_(base_),
      config_(std::move(config)),
      data_dir_(std::move(data_dir)),
      clock_(clock ? std::move(clock) : Clock(utc_now)) {
  validate(base_);
  assign_tasks();
}

void AnnotationStore::assign_tasks() {
  std::vector<std::string> annotators;
  std::set<std::string> known;
  for (const auto& u : config_.users) {
    known.insert(u.id);
    if (u.role == Role::Annotator) annotators.push_back(u.id);
  }
  std::size_t k = 0;
  for (const auto& s : base_.sentences) {
    TaskState t;
    if (auto it = config_.assignments.find(s.id); it != config_.assignments.end()) {
      t.annotators = it->second;
      for (const auto& a : t.annotators) {
        if (!known.count(a)) throw FormatError("assignment of " + s.id + " names unknown user " + a);
      }
    } else {
      if (annotators.size() < 2) {
        throw FormatError("at least two annotator users are needed for automatic assignment");
      }
      t.annotators = {annotators[k % annotators.size()], annotators[(k + 1) % annotators.size()]};
      ++k;
    }
    tasks_.emplace(s.id, std::move(t));
    task_order_.push_back(s.id);
  }
}

std::unique_ptr<AnnotationStore> AnnotationStore::open(const std::filesystem::path& dir,
                                                       Clock clock) {
  std::ifstream cfg_in(dir / "config.json");
  if (!cfg_in) throw Error("cannot open " + (dir / "config.json").string());
  json cfg;
  try {
    cfg = json::parse(cfg_in);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config.json: ") + e.what());
  }
  auto store = std::make_unique<AnnotationStore>(read_cupt_file(dir / "corpus.cupt"),
                                                 service_config_from_json(cfg), dir,
                                                 std::move(clock));
  std::ifstream log(dir / "events.jsonl");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(log, line)) {
    ++line_no;
    if (line.empty()) continue;
    json event;
    try {
      event = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("events.jsonl: ") + e.what());
    }
    store->apply(event);
    store->events_.push_back(std::move(event));
  }
  store->write_snapshot();
  return store;
}

std::unique_ptr<AnnotationStore> AnnotationStore::replay(Corpus base, ServiceConfig config,
                                                         const std::vector<json>& events) {
  auto store = std::make_unique<AnnotationStore>(std::move(base), std::move(config));
  for (const auto& e : events) {
    store->apply(e);
    store->events_.push_back(e);
  }
  return store;
}

const User& AnnotationStore::authenticate(const std::string& bearer_token) const {
  for (const auto& u : config_.users) {
    if (!bearer_token.empty() && u.token == bearer_token) return u;
  }
  throw ServiceError(401, "unknown or missing bearer token");
}

const Sentence& AnnotationStore::base_sentence(const std::string& task_id) const {
  const Sentence* s = base_.find(task_id);
  if (!s) throw ServiceError(404, "no task " + task_id);
  return *s;
}

const AnnotationStore::TaskState& AnnotationStore::task_state(const std::string& task_id) const {
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) throw ServiceError(404, "no task " + task_id);
  return it->second;
}

void AnnotationStore::require_reviewer(const User& user) const {
  if (user.role != Role::Reviewer) throw ServiceError(403, "reviewer role required");
}

json AnnotationStore::list_tasks(const User& user) const {
  std::shared_lock lock(mutex_);
  json tasks = json::array();
  for (const auto& id : task_order_) {
    const TaskState& t = tasks_.at(id);
    const bool assigned = t.annotators[0] == user.id || t.annotators[1] == user.id;
    if (user.role != Role::Reviewer && !assigned) continue;
    json status = json::object();
    for (const auto& a : t.annotators) {
      status[a] = t.submissions.count(a) ? "submitted" : "pending";
    }
    tasks.push_back({{"id", id},
                     {"annotators", t.annotators},
                     {"status", std::move(status)},
                     {"finalized", t.finalized}});
  }
  return json{{"schema", "mwetk.task-list/1"}, {"tasks", std::move(tasks)}};
}

json AnnotationStore::task(const std::string& task_id, const User& user) const {
  std::shared_lock lock(mutex_);
  const Sentence& s = base_sentence(task_id);
  const TaskState& t = task_state(task_id);
  const bool assigned = t.annotators[0] == user.id || t.annotators[1] == user.id;
  if (user.role != Role::Reviewer && !assigned) throw ServiceError(403, "not assigned to " + task_id);

  json tokens = json::array();
  for (const auto& tok : s.tokens) tokens.push_back({{"index", tok.index}, {"surface", tok.surface}});
  json submissions = json::object();
  for (const auto& [who, sub] : t.submissions) {
    if (user.role == Role::Reviewer || who == user.id) submissions[who] = submission_json(sub);
  }
  return json{{"schema", "mwetk.task/1"},
              {"id", task_id},
              {"tokens", std::move(tokens)},
              {"rows", config_.rows},
              {"annotators", t.annotators},
              {"submissions", std::move(submissions)},
              {"finalized", t.finalized}};
}

Submission AnnotationStore::submit(const std::string& task_id, const std::string& annotator,
                                   const User& user, int expected_revision, const Rows& rows,
                                   bool unclear) {
  std::unique_lock lock(mutex_);
  const Sentence& s = base_sentence(task_id);
  const TaskState& t = task_state(task_id);
  if (user.id != annotator) throw ServiceError(403, "cannot submit for another annotator");
  if (t.annotators[0] != annotator && t.annotators[1] != annotator) {
    throw ServiceError(403, annotator + " is not assigned to " + task_id);
  }
  auto mwes = rows_to_mwes(rows, static_cast<int>(s.size()), config_.rows, annotator);
  const auto current = t.submissions.count(annotator) ? t.submissions.at(annotator).revision : 0;
  if (expected_revision != current) {
    throw ServiceError(409, "stale revision " + std::to_string(expected_revision) +
                                " (current " + std::to_string(current) + ")");
  }
  Submission sub;
  sub.revision = current + 1;
  sub.rows = mwes_to_rows(mwes, 0);
  sub.unclear = unclear;
  commit({{"type", "submit"},
          {"task", task_id},
          {"annotator", annotator},
          {"revision", sub.revision},
          {"rows", sub.rows},
          {"unclear", unclear}});
  return sub;
}

ReviewItem AnnotationStore::review_locked(const std::string& task_id) const {
  const TaskState& t = task_state(task_id);
  ReviewItem item;
  item.task_id = task_id;
  item.annotators = t.annotators;
  std::map<std::vector<int>, std::vector<std::string>> marked;
  for (const auto& a : t.annotators) {
    auto it = t.submissions.find(a);
    if (it == t.submissions.end()) throw ServiceError(409, a + " has not submitted " + task_id);
    item.unclear = item.unclear || it->second.unclear;
    for (const auto& row : it->second.rows) {
      if (!row.empty()) marked[row].push_back(a);
    }
  }
  for (auto& [indices, who] : marked) {
    item.mwes.push_back({indices, who, who.size() == 1});
  }
  return item;
}

ReviewItem AnnotationStore::review(const std::string& task_id, const User& user) const {
  std::shared_lock lock(mutex_);
  require_reviewer(user);
  base_sentence(task_id);
  return review_locked(task_id);
}

Sentence AnnotationStore::finalize(const std::string& task_id, const User& user,
                                   const FinalizeRequest& request) {
  std::unique_lock lock(mutex_);
  require_reviewer(user);
  const Sentence& s = base_sentence(task_id);
  const ReviewItem item = review_locked(task_id);

  std::map<std::vector<int>, VerdictKind> verdicts;
  for (const auto& v : request.verdicts) {
    auto indices = v.token_indices;
    std::sort(indices.begin(), indices.end());
    const bool known = std::any_of(item.mwes.begin(), item.mwes.end(),
                                   [&](const ReviewEntry& e) { return e.token_indices == indices; });
    if (!known) throw ServiceError(422, "verdict for an MWE that no annotator marked");
    verdicts[indices] = v.kind;
  }
  std::vector<std::vector<int>> gold;
  for (const auto& e : item.mwes) {
    auto it = verdicts.find(e.token_indices);
    if (e.highlight && it == verdicts.end()) {
      throw ServiceError(422, "highlighted MWE " + span_text(s, e.token_indices) +
                                  " has no verdict");
    }
    if (it == verdicts.end() || it->second == VerdictKind::Keep) gold.push_back(e.token_indices);
  }
  for (const auto& m : rows_to_mwes(request.added, static_cast<int>(s.size()),
                                    static_cast<int>(request.added.size()), "gold")) {
    if (std::find(gold.begin(), gold.end(), m.token_indices()) == gold.end()) {
      gold.push_back(m.token_indices());
    }
  }
  std::sort(gold.begin(), gold.end());

  json verdict_log = json::array();
  for (const auto& [indices, kind] : verdicts) {
    verdict_log.push_back({{"token_indices", indices},
                           {"verdict", kind == VerdictKind::Keep ? "keep" : "delete"}});
  }
  commit({{"type", "finalize"},
          {"task", task_id},
          {"reviewer", user.id},
          {"verdicts", std::move(verdict_log)},
          {"added", request.added},
          {"mwes", gold},
          {"unclear", request.unclear.value_or(item.unclear)}});
  return *gold_.find(task_id);
}

std::vector<ConsistencyCandidate> AnnotationStore::candidates_locked() const {
  const auto labeled = mine_labeled_set(gold_);
  auto all = find_candidates(gold_, labeled, config_.consistency_match);
  std::vector<ConsistencyCandidate> out;
  for (auto& c : all) {
    if (!rejected_.count({c.id(), fingerprint_hex(c.fingerprint)})) out.push_back(std::move(c));
  }
  return out;
}

std::vector<ConsistencyCandidate> AnnotationStore::consistency_candidates() const {
  std::shared_lock lock(mutex_);
  return candidates_locked();
}

int AnnotationStore::decide(const ConsistencyDecisionRequest& request, const User& user) {
  std::unique_lock lock(mutex_);
  require_reviewer(user);
  if (request.idempotency_key) {
    auto it = idempotent_results_.find(*request.idempotency_key);
    if (it != idempotent_results_.end()) return it->second;
  }
  const auto candidates = candidates_locked();
  auto it = std::find_if(candidates.begin(), candidates.end(), [&](const ConsistencyCandidate& c) {
    return c.id() == request.candidate_id;
  });
  if (it == candidates.end()) {
    throw ServiceError(410, "candidate " + request.candidate_id + " is no longer pending");
  }
  if (request.fingerprint && *request.fingerprint != it->fingerprint) {
    throw ServiceError(410, "sentence of candidate " + request.candidate_id + " has changed");
  }
  json event{{"type", "consistency"},
             {"candidate",
              {{"sentence_id", it->sentence_id},
               {"token_indices", it->token_indices},
               {"matched_entry", it->matched_entry},
               {"fingerprint", fingerprint_hex(it->fingerprint)}}},
             {"decision", request.accept ? "accept" : "reject"},
             {"reviewer", user.id}};
  if (request.idempotency_key) event["idempotency_key"] = *request.idempotency_key;
  commit(std::move(event));
  return corpus_revision_;
}

Corpus AnnotationStore::gold() const {
  std::shared_lock lock(mutex_);
  return gold_;
}

int AnnotationStore::corpus_revision() const {
  std::shared_lock lock(mutex_);
  return corpus_revision_;
}

std::vector<json> AnnotationStore::events() const {
  std::shared_lock lock(mutex_);
  return events_;
}

void AnnotationStore::commit(json event) {
  event["seq"] = events_.size() + 1;
  event["ts"] = clock_();
  if (!data_dir_.empty()) {
    std::ofstream log(data_dir_ / "events.jsonl", std::ios::app);
    if (!log) throw Error("cannot append to " + (data_dir_ / "events.jsonl").string());
    log << event.dump() << '\n';
    log.flush();
    if (!log) throw Error("write to event log failed");
  }
  const int before = corpus_revision_;
  apply(event);
  events_.push_back(std::move(event));
  if (corpus_revision_ != before) write_snapshot();
}

void AnnotationStore::apply(const json& event) {
  const auto type = event.at("type").get<std::string>();
  if (type == "submit") {
    const auto task_id = event.at("task").get<std::string>();
    auto& t = tasks_.at(task_id);
    Submission sub;
    sub.revision = event.at("revision").get<int>();
    sub.rows = event.at("rows").get<Rows>();
    sub.unclear = event.at("unclear").get<bool>();
    t.submissions[event.at("annotator").get<std::string>()] = std::move(sub);
  } else if (type == "finalize") {
    const auto task_id = event.at("task").get<std::string>();
    Sentence* s = gold_.find(task_id);
    Sentence updated = *s;
    updated.mwes.clear();
    for (const auto& indices : event.at("mwes").get<Rows>()) {
      updated.add_mwe(MweInstance(indices));
    }
    if (event.at("unclear").get<bool>()) {
      updated.flags.insert(std::string(kUnclearFlag));
    } else {
      updated.flags.erase(std::string(kUnclearFlag));
    }
    tasks_.at(task_id).finalized = true;
    if (!(updated == *s)) {
      *s = std::move(updated);
      ++corpus_revision_;
    }
  } else if (type == "consistency") {
    const ConsistencyCandidate cand = candidate_from_json(event.at("candidate"));
    if (event.at("decision") == "accept") {
      Corpus updated = apply_decisions(gold_, {{cand, CandidateStatus::Accepted}});
      if (!(updated == gold_)) {
        gold_ = std::move(updated);
        ++corpus_revision_;
      }
    } else {
      rejected_.insert({cand.id(), fingerprint_hex(cand.fingerprint)});
    }
    if (event.contains("idempotency_key")) {
      idempotent_results_[event.at("idempotency_key").get<std::string>()] = corpus_revision_;
    }
  } else {
    throw FormatError("unknown event type '" + type + "'");
  }
}

void AnnotationStore::write_snapshot() const {
  if (data_dir_.empty()) return;
  const auto tmp = data_dir_ / "snapshot.cupt.tmp";
  write_cupt_file(gold_, tmp);
  std::filesystem::rename(tmp, data_dir_ / "snapshot.cupt");
}

std::string AnnotationStore::state_dump() const {
  std::shared_lock lock(mutex_);
  json tasks = json::object();
  for (const auto& [id, t] : tasks_) {
    json subs = json::object();
    for (const auto& [who, sub] : t.submissions) subs[who] = submission_json(sub);
    tasks[id] = {{"annotators", t.annotators}, {"submissions", std::move(subs)}, {"finalized", t.finalized}};
  }
  json rejected = json::array();
  for (const auto& [id, fp] : rejected_) rejected.push_back({id, fp});
  std::ostringstream out;
  out << write_cupt_string(gold_) << "---\n"
      << json{{"corpus_revision", corpus_revision_}, {"tasks", tasks}, {"rejected", rejected}}.dump(1)
      << '\n';
  return out.str();
}

}  // namespace mwetk
