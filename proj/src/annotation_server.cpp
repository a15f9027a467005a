#include "mwetk/annotation_server.hpp"

#include <httplib.h>

#include "mwetk/cupt.hpp"
#include "mwetk/report_json.hpp"

namespace mwetk {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"schema", "mwetk.error/1"}, {"status", status}, {"error", message}});
}

std::string bearer(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) return {};
  return header.substr(prefix.size());
}

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw ServiceError(400, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ServiceError(400, std::string("malformed JSON: ") + e.what());
  }
}

Rows rows_from(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  try {
    return it->get<Rows>();
  } catch (const json::exception&) {
    throw ServiceError(422, std::string(key) + " must be a list of lists of token positions");
  }
}

}  // namespace

json to_json(const ReviewItem& item) {
  json mwes = json::array();
  for (const auto& e : item.mwes) {
    mwes.push_back({{"token_indices", e.token_indices},
                    {"annotators", e.annotators},
                    {"highlight", e.highlight}});
  }
  return json{{"schema", "mwetk.review/1"},
              {"task", item.task_id},
              {"annotators", item.annotators},
              {"mwes", std::move(mwes)},
              {"unclear", item.unclear}};
}

struct AnnotationServer::Impl {
  AnnotationStore& store;
  httplib::Server http;

  explicit Impl(AnnotationStore& s) : store(s) { routes(); }

  // Authenticates, runs the handler and maps exceptions to status codes.
  template <typename F>
  httplib::Server::Handler guarded(F handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        const User& user = store.authenticate(bearer(req));
        handler(req, res, user);
      } catch (const ServiceError& e) {
        send_error(res, e.status(), e.what());
      } catch (const StaleCandidate& e) {
        send_error(res, 410, e.what());
      } catch (const InvalidMwe& e) {
        send_error(res, 422, e.what());
      } catch (const json::exception& e) {
        send_error(res, 422, e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    };
  }

  void routes() {
    http.Get("/tasks", guarded([this](const auto&, auto& res, const User& user) {
      send_json(res, 200, store.list_tasks(user));
    }));

    http.Get("/tasks/:id", guarded([this](const auto& req, auto& res, const User& user) {
      send_json(res, 200, store.task(req.path_params.at("id"), user));
    }));

    http.Put("/tasks/:id/annotations/:annotator",
             guarded([this](const auto& req, auto& res, const User& user) {
               const json body = parse_body(req);
               if (!body.contains("revision") || !body.at("revision").is_number_integer()) {
                 throw ServiceError(422, "revision (integer) is required");
               }
               const auto sub = store.submit(req.path_params.at("id"),
                                             req.path_params.at("annotator"), user,
                                             body.at("revision").template get<int>(),
                                             rows_from(body, "rows"), body.value("unclear", false));
               send_json(res, 200,
                         {{"schema", "mwetk.submission/1"},
                          {"task", req.path_params.at("id")},
                          {"annotator", req.path_params.at("annotator")},
                          {"revision", sub.revision},
                          {"rows", sub.rows},
                          {"unclear", sub.unclear}});
             }));

    http.Get("/tasks/:id/review", guarded([this](const auto& req, auto& res, const User& user) {
      send_json(res, 200, to_json(store.review(req.path_params.at("id"), user)));
    }));

    http.Post("/tasks/:id/finalize", guarded([this](const auto& req, auto& res, const User& user) {
      const json body = parse_body(req);
      FinalizeRequest fr;
      for (const auto& v : body.value("verdicts", json::array())) {
        Verdict verdict;
        verdict.token_indices = v.at("token_indices").template get<std::vector<int>>();
        const auto kind = v.at("verdict").template get<std::string>();
        if (kind == "keep") {
          verdict.kind = VerdictKind::Keep;
        } else if (kind == "delete") {
          verdict.kind = VerdictKind::Delete;
        } else {
          throw ServiceError(422, "verdict must be keep or delete");
        }
        fr.verdicts.push_back(std::move(verdict));
      }
      fr.added = rows_from(body, "added");
      if (body.contains("unclear")) fr.unclear = body.at("unclear").template get<bool>();
      const Sentence s = store.finalize(req.path_params.at("id"), user, fr);
      json j = to_json(s);
      j["schema"] = "mwetk.sentence/1";
      j["corpus_revision"] = store.corpus_revision();
      send_json(res, 200, j);
    }));

    http.Get("/consistency", guarded([this](const auto&, auto& res, const User&) {
      const Corpus gold = store.gold();
      json list = json::array();
      for (const auto& c : store.consistency_candidates()) list.push_back(to_json(c, gold));
      send_json(res, 200,
                {{"schema", "mwetk.consistency-candidates/1"},
                 {"corpus_revision", store.corpus_revision()},
                 {"candidates", std::move(list)}});
    }));

    http.Post("/consistency", guarded([this](const auto& req, auto& res, const User& user) {
      const json body = parse_body(req);
      ConsistencyDecisionRequest dr;
      dr.candidate_id = body.at("candidate_id").template get<std::string>();
      if (body.contains("fingerprint")) {
        try {
          dr.fingerprint = parse_fingerprint(body.at("fingerprint").template get<std::string>());
        } catch (const FormatError& e) {
          throw ServiceError(422, e.what());
        }
      }
      const auto decision = body.at("decision").template get<std::string>();
      if (decision != "accept" && decision != "reject") {
        throw ServiceError(422, "decision must be accept or reject");
      }
      dr.accept = decision == "accept";
      if (body.contains("idempotency_key")) {
        dr.idempotency_key = body.at("idempotency_key").template get<std::string>();
      }
      const int revision = store.decide(dr, user);
      send_json(res, 200,
                {{"schema", "mwetk.consistency-decision/1"},
                 {"candidate_id", dr.candidate_id},
                 {"decision", decision},
                 {"corpus_revision", revision}});
    }));

    http.Get("/corpus", guarded([this](const auto&, auto& res, const User&) {
      res.status = 200;
      res.set_content(write_cupt_string(store.gold()), "text/plain; charset=utf-8");
    }));
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store) : impl_(std::make_unique<Impl>(store)) {}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind to " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw Error("cannot bind to " + host + ":" + std::to_string(port));
  }
  return port;
}

void AnnotationServer::listen() { impl_->http.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace mwetk
