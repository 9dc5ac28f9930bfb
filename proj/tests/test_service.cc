// In-process HTTP tests: the service listens on an ephemeral port and is
// driven through httplib::Client.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "roster/io.h"
#include "roster/milp.h"
#include "roster/pipeline.h"
#include "service.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace roster;

namespace {

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kFixtures = fs::path(ROSTER_SOURCE_DIR) / "fixtures";

class Harness {
 public:
  explicit Harness(int workers = 2)
      : dir_(fs::temp_directory_path() /
             ("roster_svc_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()))),
        service_({dir_.string(), "secret", workers}) {
    service_.Install(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Harness() {
    server_.stop();
    thread_.join();
  }

  httplib::Client Client(bool auth = true) {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(120, 0);
    if (auth) c.set_bearer_token_auth("secret");
    return c;
  }
  service::Service& service() { return service_; }
  const fs::path& dir() const { return dir_; }

  // Polls until the job leaves queued/running.
  json WaitJob(const std::string& id) {
    auto c = Client();
    for (int t = 0; t < 1200; ++t) {
      const auto r = c.Get("/jobs/" + id);
      json j = json::parse(r->body);
      if (j["state"] != "queued" && j["state"] != "running") return j;
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    FAIL("job did not finish");
    return {};
  }

 private:
  fs::path dir_;
  service::Service service_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string PoolBody(const std::string& stem) { return ReadFile(kFixtures / "pools" / (stem + ".json")); }

}  // namespace

TEST_CASE("bearer token is required") {
  Harness h;
  CHECK(h.Client(false).Get("/pools")->status == 401);
  auto wrong = h.Client(false);
  wrong.set_bearer_token_auth("nope");
  CHECK(wrong.Get("/pools")->status == 401);
  CHECK(h.Client(false).Get("/health")->status == 200);
  CHECK(h.Client().Get("/pools")->status == 200);
}

TEST_CASE("pool lifecycle and validation") {
  Harness h;
  auto c = h.Client();
  CHECK(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 201);
  CHECK(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 409);
  CHECK(c.Post("/pools", "{not json", "application/json")->status == 400);

  json bad = json::parse(PoolBody("small_02"));
  bad["nurses"][1]["seniority_rank"] = 1;
  const auto dup = c.Post("/pools", bad.dump(), "application/json");
  CHECK(dup->status == 422);
  CHECK(json::parse(dup->body)["location"] == "/nurses/1/seniority_rank");

  CHECK(c.Get("/pools/nope")->status == 404);
  const json listed = json::parse(c.Get("/pools")->body);
  REQUIRE(listed.size() == 1);
  CHECK(listed[0]["id"] == "small_01");
  CHECK(fs::exists(h.dir() / "pools" / "small_01.json"));
  CHECK(c.Delete("/pools/small_01")->status == 204);
  CHECK(c.Get("/pools/small_01")->status == 404);
}

TEST_CASE("pools persist across restarts") {
  fs::path dir;
  {
    Harness h;
    dir = h.dir();
    CHECK(h.Client().Post("/pools", PoolBody("tiny_01"), "application/json")->status == 201);
  }
  service::Service again({dir.string(), "secret", 1});
  httplib::Server server;
  again.Install(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client c("127.0.0.1", port);
  c.set_bearer_token_auth("secret");
  CHECK(c.Get("/pools/tiny_01")->status == 200);
  server.stop();
  t.join();
}

TEST_CASE("employee edits keep seniority ranks contiguous") {
  Harness h;
  auto c = h.Client();
  REQUIRE(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 201);
  REQUIRE(c.Post("/pools", PoolBody("small_02"), "application/json")->status == 201);
  json twin = json::parse(PoolBody("small_01"));
  twin["pool"]["id"] = "twin";
  REQUIRE(c.Post("/pools", twin.dump(), "application/json")->status == 201);
  const json pool = json::parse(c.Get("/pools/small_01")->body);
  const int n = static_cast<int>(pool["nurses"].size());
  const int r = static_cast<int>(pool["minimums"]["values"][0].size());

  // Minimums must not increase down the seniority list, so a new junior
  // gets zeros and a promotion to the top takes the top row.
  const json zeros = json::array_t(r, 0);
  json add = {{"id", "NEW"}, {"minimums", zeros}};
  const auto added = c.Post("/pools/small_01/employees", add.dump(), "application/json");
  INFO(added->body);
  REQUIRE(added->status == 201);
  json emps = json::parse(c.Get("/pools/small_01/employees")->body);
  REQUIRE(emps.size() == static_cast<size_t>(n + 1));
  CHECK(emps.back()["id"] == "NEW");

  json bad = {{"id", "BAD"}, {"seniority_rank", n + 5}, {"minimums", zeros}};
  CHECK(c.Post("/pools/small_01/employees", bad.dump(), "application/json")->status == 422);
  bad["seniority_rank"] = 1;
  const auto inconsistent = c.Post("/pools/small_01/employees", bad.dump(), "application/json");
  CHECK(inconsistent->status == (pool["minimums"]["values"][0] == zeros ? 201 : 422));
  bad["seniority_rank"] = n + 1;
  bad["minimums"] = json::array_t(r + 1, 0);
  CHECK(c.Post("/pools/small_01/employees", bad.dump(), "application/json")->status == 422);
  if (inconsistent->status == 201) c.Delete("/pools/small_01/employees/BAD");

  json to_top = {{"seniority_rank", 1}, {"minimums", pool["minimums"]["values"][0]}};
  REQUIRE(c.Patch("/pools/small_01/employees/NEW", to_top.dump(), "application/json")->status == 200);
  emps = json::parse(c.Get("/pools/small_01/employees")->body);
  CHECK(emps[0]["id"] == "NEW");
  for (size_t x = 0; x < emps.size(); ++x) CHECK(emps[x]["seniority_rank"] == static_cast<int>(x) + 1);

  // small_02 runs on a different calendar.
  json move = {{"pool", "small_02"}, {"minimums", zeros}};
  CHECK(c.Patch("/pools/small_01/employees/NEW", move.dump(), "application/json")->status == 422);
  move["pool"] = "twin";
  const auto moved = c.Patch("/pools/small_01/employees/NEW", move.dump(), "application/json");
  INFO(moved->body);
  REQUIRE(moved->status == 200);
  CHECK(json::parse(c.Get("/pools/small_01/employees")->body).size() == static_cast<size_t>(n));
  emps = json::parse(c.Get("/pools/twin/employees")->body);
  CHECK(emps.back()["id"] == "NEW");
  CHECK(c.Delete("/pools/twin/employees/NEW")->status == 204);
  CHECK(c.Delete("/pools/twin/employees/NEW")->status == 404);
}

TEST_CASE("availability edits are validated cell by cell") {
  Harness h;
  auto c = h.Client();
  REQUIRE(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 201);
  const json pool = json::parse(c.Get("/pools/small_01")->body);
  const std::string nurse = pool["nurses"][0]["id"];

  json edit = {{"cells", {{{"nurse", nurse}, {"block", 1}, {"shift", 2}, {"score", 7}}}}};
  auto r = c.Put("/pools/small_01/availability", edit.dump(), "application/json");
  CHECK(r->status == 422);
  const json err = json::parse(r->body);
  CHECK(err["location"] == "/cells/0/score");
  CHECK(err["message"].get<std::string>().find("nurse " + nurse + " block 1 shift 2") != std::string::npos);

  edit["cells"][0]["score"] = 2;
  edit["direction"] = "descending";
  r = c.Put("/pools/small_01/availability", edit.dump(), "application/json");
  REQUIRE(r->status == 200);
  // Descending 2 is canonical 2 on a 1..3 scale.
  CHECK(json::parse(r->body)["scores"][nurse][0][1] == NormalizeScore(2, PreferenceDirection::kDescending));

  const std::string csv = "nurse_id,block,shift,score\n" + nurse + ",1,1,3\n";
  r = c.Put("/pools/small_01/availability/csv", csv, "text/csv");
  REQUIRE(r->status == 200);
  CHECK(json::parse(r->body)["scores"][nurse][0][0] == 3);
  CHECK(json::parse(r->body)["scores"][nurse][0][1] == 0);
}

TEST_CASE("demand inputs and reconcile report") {
  Harness h;
  auto c = h.Client();
  REQUIRE(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 201);
  const json pool = json::parse(c.Get("/pools/small_01")->body);
  json grid = pool["demand"]["part_time"];
  json total = grid, ft = grid, leave = grid;
  for (auto& row : total) for (auto& v : row) v = v.get<int>() + 2;
  for (auto& row : ft) for (auto& v : row) v = 3;
  for (auto& row : leave) for (auto& v : row) v = 1;
  json body = {{"total", total}, {"full_time_scheduled", ft}, {"full_time_leave", leave}};
  auto r = c.Put("/pools/small_01/demand", body.dump(), "application/json");
  REQUIRE(r->status == 200);
  CHECK(json::parse(r->body)["part_time"] == grid);

  const json rec = json::parse(c.Get("/pools/small_01/reconcile")->body);
  CHECK(rec["inputs"]["total"] == total);
  int sum = 0;
  for (const auto& row : grid) for (const auto& v : row) sum += v.get<int>();
  CHECK(rec["part_time_demand"] == sum);

  // Demand beyond availability shows up as a short shift.
  json heavy = grid;
  heavy[0][0] = 99;
  r = c.Put("/pools/small_01/demand", json{{"part_time", heavy}}.dump(), "application/json");
  REQUIRE(r->status == 200);
  const json rec2 = json::parse(c.Get("/pools/small_01/reconcile")->body);
  REQUIRE(rec2["shifts_short_of_availability"].size() >= 1);
  CHECK(rec2["shifts_short_of_availability"][0]["part_time_demand"] == 99);

  heavy[0][0] = -1;
  r = c.Put("/pools/small_01/demand", json{{"part_time", heavy}}.dump(), "application/json");
  CHECK(r->status == 422);
}

TEST_CASE("generation job matches the library run byte for byte") {
  Harness h;
  auto c = h.Client();
  REQUIRE(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 201);
  json gen = {{"selector", {{"pool", "small_01"}}}, {"cycle", "t"}, {"time_limit_seconds", 30}};
  auto r = c.Post("/generate", gen.dump(), "application/json");
  REQUIRE(r->status == 202);
  const std::string id = json::parse(r->body)["jobs"][0]["id"];
  const json job = h.WaitJob(id);
  CHECK(job["state"] == "done");
  CHECK(job["summary"]["outcome"] == "accepted");

  const InstanceFile f = LoadInstance((kFixtures / "pools" / "small_01.json").string());
  GenerationParams p = f.generation;
  p.time_limit_seconds = 30;
  auto backend = MakeDefaultBackend();
  const GenerateArtifacts lib = RenderArtifacts(Generate(f.instance, p, *backend), f.instance);
  CHECK(c.Get("/jobs/" + id + "/schedule")->body == *lib.schedule_csv);
  CHECK(c.Get("/jobs/" + id + "/report")->body == *lib.report_json);
  CHECK(c.Get("/jobs/" + id + "/swap-log")->body == *lib.swap_log_jsonl);
  CHECK(ReadFile(h.dir() / "jobs" / id / "schedule.csv") == *lib.schedule_csv);

  // The downloaded schedule verifies through the service too.
  const auto v = c.Post("/pools/small_01/verify", *lib.schedule_csv, "text/csv");
  REQUIRE(v->status == 200);
  CHECK(json::parse(v->body)["accepted"] == true);
}

TEST_CASE("zero time limit yields timed_out and no schedule") {
  Harness h;
  auto c = h.Client();
  REQUIRE(c.Post("/pools", PoolBody("small_01"), "application/json")->status == 201);
  json gen = {{"selector", {{"pool", "small_01"}}}, {"time_limit_seconds", 0}};
  const std::string id = json::parse(c.Post("/generate", gen.dump(), "application/json")->body)["jobs"][0]["id"];
  const json job = h.WaitJob(id);
  CHECK(job["state"] == "timed_out");
  CHECK(c.Get("/jobs/" + id + "/schedule")->status == 410);
  CHECK(c.Get("/jobs/" + id + "/report")->status == 410);
  CHECK(c.Get("/jobs/" + id + "/summary")->status == 200);
}

TEST_CASE("edits are refused while the pool has a job in flight") {
  Harness h(1);
  auto c = h.Client();
  REQUIRE(c.Post("/pools", PoolBody("mid_01"), "application/json")->status == 201);
  const json pool = json::parse(c.Get("/pools/mid_01")->body);
  const std::string nurse = pool["nurses"][0]["id"];
  json gen = {{"selector", {{"pool", "mid_01"}}}, {"time_limit_seconds", 2}};
  const std::string id = json::parse(c.Post("/generate", gen.dump(), "application/json")->body)["jobs"][0]["id"];
  json edit = {{"cells", {{{"nurse", nurse}, {"block", 1}, {"shift", 1}, {"score", 1}}}}};
  CHECK(c.Put("/pools/mid_01/availability", edit.dump(), "application/json")->status == 409);
  CHECK(c.Get("/jobs/" + id + "/schedule")->status == 409);
  CHECK(c.Delete("/pools/mid_01")->status == 409);
  h.WaitJob(id);
  CHECK(c.Put("/pools/mid_01/availability", edit.dump(), "application/json")->status == 200);
}

TEST_CASE("selectors fan out to one job per pool") {
  Harness h;
  auto c = h.Client();
  for (const char* stem : {"tiny_01", "tiny_02"}) {
    REQUIRE(c.Post("/pools", PoolBody(stem), "application/json")->status == 201);
  }
  json gen = {{"selector", {{"all", true}}}, {"time_limit_seconds", 10}};
  const json jobs = json::parse(c.Post("/generate", gen.dump(), "application/json")->body)["jobs"];
  CHECK(jobs.size() == 2);
  h.service().WaitIdle();
  for (const auto& j : json::parse(c.Get("/jobs")->body)) CHECK(j["state"] == "done");
  gen["selector"] = {{"unit", "no-such-unit"}};
  CHECK(c.Post("/generate", gen.dump(), "application/json")->status == 422);
  gen["selector"] = {{"bogus", 1}};
  CHECK(c.Post("/generate", gen.dump(), "application/json")->status == 422);
}
