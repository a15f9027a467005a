#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "mwetk/annotation_server.hpp"
#include "test_support.hpp"

using namespace mwetk;
using nlohmann::json;
using mwetk::testing::corpus_of;
using mwetk::testing::make_sentence;

namespace {

ServiceConfig config() {
  ServiceConfig cfg;
  cfg.users = {{"a1", "tok-a1", Role::Annotator},
               {"a2", "tok-a2", Role::Annotator},
               {"rev", "tok-rev", Role::Reviewer}};
  return cfg;
}

// Figure-1 style grid: "ACL stands for Association for Computational Linguistics".
Corpus corpus() {
  return corpus_of({make_sentence("fig1", "ACL stands|stand for Association for Computational Linguistics"),
                    make_sentence("s2", "I would give it a try"),
                    make_sentence("s3", "Would recomend giving|give this a try")});
}

class Running {
 public:
  Running() : store(corpus(), config()), server(store) {
    port = server.bind("127.0.0.1", 0);
    thread = std::thread([this] { server.listen(); });
    server.wait_until_ready();
  }
  ~Running() {
    server.stop();
    thread.join();
  }

  httplib::Client client(const std::string& token) const {
    httplib::Client c("127.0.0.1", port);
    if (!token.empty()) c.set_bearer_token_auth(token);
    c.set_read_timeout(5, 0);
    return c;
  }

  AnnotationStore store;
  AnnotationServer server;
  int port = 0;
  std::thread thread;
};

json body(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

httplib::Result put_rows(httplib::Client& c, const std::string& task, const std::string& who,
                         int revision, const json& rows) {
  return c.Put("/tasks/" + task + "/annotations/" + who,
               json{{"revision", revision}, {"rows", rows}}.dump(), "application/json");
}

}  // namespace

TEST_CASE("authentication and errors use the error schema") {
  Running srv;
  auto anon = srv.client("");
  auto r = anon.Get("/tasks");
  REQUIRE(r);
  CHECK(r->status == 401);
  CHECK(body(r)["schema"] == "mwetk.error/1");

  auto a1 = srv.client("tok-a1");
  auto missing = a1.Get("/tasks/nope");
  CHECK(missing->status == 404);
  auto bad = a1.Put("/tasks/fig1/annotations/a1", "{not json", "application/json");
  CHECK(bad->status == 400);
}

TEST_CASE("grid submissions round-trip to MWE instances") {
  Running srv;
  auto a1 = srv.client("tok-a1");
  auto a2 = srv.client("tok-a2");
  auto tasks = body(a1.Get("/tasks"));
  CHECK(tasks["schema"] == "mwetk.task-list/1");
  auto task = body(a1.Get("/tasks/fig1"));
  CHECK(task["tokens"][1]["surface"] == "stands");
  CHECK(task["rows"] == 9);

  auto r = put_rows(a1, "fig1", "a1", 0, json::array({{2, 3}, json::array(), {5, 7}}));
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(body(r)["rows"] == json::array({{2, 3}, {5, 7}}));
  CHECK(put_rows(a1, "fig1", "a1", 1, json::array({{4}}))->status == 422);
  CHECK(put_rows(a1, "fig1", "a1", 0, json::array({{2, 3}}))->status == 409);
  CHECK(put_rows(a1, "fig1", "a2", 0, json::array({{2, 3}}))->status == 403);

  CHECK(put_rows(a2, "fig1", "a2", 0, json::array({{2, 3}}))->status == 200);
  auto rev = srv.client("tok-rev");
  auto review = body(rev.Get("/tasks/fig1/review"));
  CHECK(review["schema"] == "mwetk.review/1");
  REQUIRE(review["mwes"].size() == 2);
  CHECK(review["mwes"][1]["highlight"] == true);

  auto blocked = rev.Post("/tasks/fig1/finalize", json::object().dump(), "application/json");
  CHECK(blocked->status == 422);
  json verdicts = {{"verdicts", {{{"token_indices", {5, 7}}, {"verdict", "delete"}}}}};
  auto fin = rev.Post("/tasks/fig1/finalize", verdicts.dump(), "application/json");
  REQUIRE(fin);
  CHECK(fin->status == 200);
  auto s = body(fin);
  CHECK(s["mwes"].size() == 1);
  CHECK(s["mwes"][0]["token_indices"] == json::array({2, 3}));
  CHECK(srv.store.gold().find("fig1")->mwes.at(0).token_indices() == std::vector<int>{2, 3});

  auto cupt = rev.Get("/corpus");
  CHECK(cupt->body.find("2\tstands\tstand\t_\t_\t_\t1\n") != std::string::npos);
}

TEST_CASE("concurrent double submit yields exactly one conflict") {
  for (int round = 0; round < 10; ++round) {
    Running srv;
    std::atomic<int> ok{0}, conflict{0};
    auto worker = [&] {
      auto c = srv.client("tok-a1");
      auto r = put_rows(c, "fig1", "a1", 0, json::array({{2, 3}}));
      if (r && r->status == 200) ++ok;
      if (r && r->status == 409) ++conflict;
    };
    std::thread t1(worker), t2(worker);
    t1.join();
    t2.join();
    CHECK(ok == 1);
    CHECK(conflict == 1);
  }
}

TEST_CASE("consistency endpoints") {
  Running srv;
  auto a1 = srv.client("tok-a1");
  auto a2 = srv.client("tok-a2");
  auto rev = srv.client("tok-rev");
  put_rows(a2, "s2", "a2", 0, json::array({{3, 5, 6}}));
  // s2 is assigned to a2 and a1 (round robin).
  put_rows(a1, "s2", "a1", 0, json::array({{3, 5, 6}}));
  CHECK(rev.Post("/tasks/s2/finalize", "{}", "application/json")->status == 200);

  auto list = body(rev.Get("/consistency"));
  CHECK(list["schema"] == "mwetk.consistency-candidates/1");
  REQUIRE(list["candidates"].size() == 1);
  auto cand = list["candidates"][0];
  CHECK(cand["id"] == "s3:3,5,6");
  CHECK(cand["exemplar"]["surface"] == "give ... a try");

  json decision{{"candidate_id", cand["id"]},
                {"fingerprint", cand["fingerprint"]},
                {"decision", "accept"},
                {"idempotency_key", "k1"}};
  CHECK(a1.Post("/consistency", decision.dump(), "application/json")->status == 403);
  const int before = list["corpus_revision"];
  auto first = body(rev.Post("/consistency", decision.dump(), "application/json"));
  CHECK(first["corpus_revision"] == before + 1);
  auto retry = body(rev.Post("/consistency", decision.dump(), "application/json"));
  CHECK(retry["corpus_revision"] == before + 1);
  decision.erase("idempotency_key");
  CHECK(rev.Post("/consistency", decision.dump(), "application/json")->status == 410);
  CHECK(body(rev.Get("/consistency"))["candidates"].empty());
}
