#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "mwetk/consistency.hpp"
#include "mwetk/corpus.hpp"
#include "mwetk/errors.hpp"
#include "mwetk/identifier.hpp"

namespace mwetk {

// State and rules of the double-annotation workflow. Every mutation is an
// event appended to a JSON-lines log; the in-memory state is a fold of the
// base corpus over that log, so replaying the log reproduces it exactly.
//
// Data directory layout:
//   config.json    users, bearer tokens, row count, optional assignments
//   corpus.cupt    sentences to annotate (existing MWEs count as gold)
//   events.jsonl   append-only event log
//   snapshot.cupt  gold corpus, rewritten after each corpus change

/// Failure with an HTTP status code (401, 403, 404, 409, 410, 422).
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& message) : Error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

enum class Role { Annotator, Reviewer };

struct User {
  std::string id;
  std::string token;
  Role role = Role::Annotator;
};

struct ServiceConfig {
  int rows = 9;
  std::vector<User> users;
  // sentence id -> the two annotators; unlisted sentences are assigned
  // round-robin over annotator users in config order.
  std::map<std::string, std::array<std::string, 2>> assignments;
  MatchConfig consistency_match;
};

ServiceConfig service_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ServiceConfig& config);

using Rows = std::vector<std::vector<int>>;

/// Non-empty rows become MWEs (duplicates collapse). Throws ServiceError 422
/// for single-check rows, out-of-range positions or too many rows.
std::vector<MweInstance> rows_to_mwes(const Rows& rows, int sentence_length, int max_rows,
                                      const std::string& source);
/// One row per MWE, padded with empty rows up to `row_count`.
Rows mwes_to_rows(const std::vector<MweInstance>& mwes, int row_count);

struct Submission {
  int revision = 0;
  Rows rows;
  bool unclear = false;
};

struct ReviewEntry {
  std::vector<int> token_indices;
  std::vector<std::string> annotators;
  bool highlight = false;  // marked by only one annotator
};

struct ReviewItem {
  std::string task_id;
  std::array<std::string, 2> annotators;
  std::vector<ReviewEntry> mwes;
  bool unclear = false;
};

enum class VerdictKind { Keep, Delete };

struct Verdict {
  std::vector<int> token_indices;
  VerdictKind kind = VerdictKind::Keep;
};

struct FinalizeRequest {
  std::vector<Verdict> verdicts;
  Rows added;
  std::optional<bool> unclear;  // overrides the merged flag when set
};

struct ConsistencyDecisionRequest {
  std::string candidate_id;
  std::optional<std::uint64_t> fingerprint;
  bool accept = false;
  std::optional<std::string> idempotency_key;
};

class AnnotationStore {
 public:
  using Clock = std::function<std::string()>;

  /// In-memory store; nothing is persisted when `data_dir` is empty.
  AnnotationStore(Corpus base, ServiceConfig config, std::filesystem::path data_dir = {},
                  Clock clock = {});

  /// Loads config.json and corpus.cupt from `dir` and replays events.jsonl.
  static std::unique_ptr<AnnotationStore> open(const std::filesystem::path& dir, Clock clock = {});

  /// Throws ServiceError 401 for unknown tokens.
  const User& authenticate(const std::string& bearer_token) const;

  nlohmann::json list_tasks(const User& user) const;
  nlohmann::json task(const std::string& task_id, const User& user) const;

  /// Stores a new revision; `expected_revision` must equal the current one
  /// (0 before the first submission). Returns the stored submission.
  Submission submit(const std::string& task_id, const std::string& annotator, const User& user,
                    int expected_revision, const Rows& rows, bool unclear);

  ReviewItem review(const std::string& task_id, const User& user) const;
  Sentence finalize(const std::string& task_id, const User& user, const FinalizeRequest& request);

  std::vector<ConsistencyCandidate> consistency_candidates() const;
  /// Returns the corpus revision after the decision. Throws 410 for stale
  /// or unknown candidates.
  int decide(const ConsistencyDecisionRequest& request, const User& user);

  Corpus gold() const;
  int corpus_revision() const;
  std::vector<nlohmann::json> events() const;
  const ServiceConfig& config() const { return config_; }

  /// Canonical dump of the folded state (gold corpus, submissions, review
  /// decisions); equal stores produce identical text.
  std::string state_dump() const;

  /// Rebuilds a store from a base corpus and an event list.
  static std::unique_ptr<AnnotationStore> replay(Corpus base, ServiceConfig config,
                                                 const std::vector<nlohmann::json>& events);

 private:
  struct TaskState {
    std::array<std::string, 2> annotators;
    std::map<std::string, Submission> submissions;
    bool finalized = false;
  };

  void assign_tasks();
  const Sentence& base_sentence(const std::string& task_id) const;
  const TaskState& task_state(const std::string& task_id) const;
  ReviewItem review_locked(const std::string& task_id) const;
  std::vector<ConsistencyCandidate> candidates_locked() const;
  void require_reviewer(const User& user) const;

  // Appends to the log (and file) then folds the event into the state.
  void commit(nlohmann::json event);
  void apply(const nlohmann::json& event);
  void write_snapshot() const;

  Corpus base_;
  Corpus gold_;
  ServiceConfig config_;
  std::filesystem::path data_dir_;
  Clock clock_;
  std::map<std::string, TaskState> tasks_;
  std::vector<std::string> task_order_;
  std::set<std::pair<std::string, std::string>> rejected_;  // (candidate id, fingerprint)
  std::map<std::string, int> idempotent_results_;
  std::vector<nlohmann::json> events_;
  int corpus_revision_ = 0;
  mutable std::shared_mutex mutex_;
};

}  // namespace mwetk
