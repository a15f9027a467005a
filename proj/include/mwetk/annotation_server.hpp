#pragma once

#include <memory>
#include <string>

#include "mwetk/annotation_store.hpp"

namespace mwetk {

// HTTP/JSON front end of an AnnotationStore. Requests authenticate with
// "Authorization: Bearer <token>". Every JSON body carries a "schema" member.
//
//   GET  /tasks                              task list for the caller
//   GET  /tasks/:id                          tokens and the caller's submission
//   PUT  /tasks/:id/annotations/:annotator   {revision, rows, unclear}
//   GET  /tasks/:id/review                   merged annotations (reviewer)
//   POST /tasks/:id/finalize                 {verdicts, added, unclear} (reviewer)
//   GET  /consistency                        pending candidates
//   POST /consistency                        {candidate_id, fingerprint, decision, idempotency_key}
//   GET  /corpus                             gold corpus as CUPT
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationStore& store);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

nlohmann::json to_json(const ReviewItem& item);

}  // namespace mwetk
