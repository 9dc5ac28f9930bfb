#include "service.h"

#include <algorithm>
#include <filesystem>
#include <regex>
#include <sstream>

#include "roster/error.h"
#include "roster/milp.h"
#include "roster/verify.h"

namespace roster::service {

namespace fs = std::filesystem;
using nlohmann::json;
using httplib::Request;
using httplib::Response;

std::string_view JobStateName(JobState s) {
  switch (s) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
    case JobState::kTimedOut: return "timed_out";
  }
  return "?";
}

namespace {

// Thrown by handlers to produce a non-2xx response.
struct HttpError {
  int status;
  std::string code;
  std::string location;
  std::string message;
};

void SendJson(Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(DumpJson(body), "application/json");
}

[[noreturn]] void Throw(int status, std::string code, std::string location, std::string message) {
  throw HttpError{status, std::move(code), std::move(location), std::move(message)};
}

json ParseBody(const Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) Throw(400, "bad_json", "", "request body is not valid JSON");
  return body;
}

bool SafeId(const std::string& id) {
  static const std::regex re("[A-Za-z0-9_.-]{1,64}");
  return std::regex_match(id, re) && id != "." && id != "..";
}

// Re-runs the loader over an edited document so every edit gets the same
// validation and error locations as a file load.
InstanceFile Reparse(const json& doc, const std::string& base_dir) {
  InstanceFile f = InstanceFromJson(doc, base_dir);
  f.instance.Validate();
  return f;
}

int RankIndex(const json& nurses, const std::string& id) {
  for (size_t x = 0; x < nurses.size(); ++x) {
    if (nurses[x]["id"] == id) return static_cast<int>(x);
  }
  return -1;
}

// Nurses in a saved document are in seniority order; rewrite ranks 1..n.
void Renumber(json& doc) {
  for (size_t x = 0; x < doc["nurses"].size(); ++x) {
    doc["nurses"][x]["seniority_rank"] = static_cast<int>(x) + 1;
  }
}

json ZeroGrid(const PoolInstance& inst) {
  return json::array_t(inst.calendar.blocks(),
                       json::array_t(inst.calendar.shifts_per_block(), 0));
}

json GridJson(const ShiftGrid<int>& g) {
  json out = json::array();
  for (int k = 0; k < g.blocks(); ++k) {
    json row = json::array();
    for (int j = 0; j < g.shifts_per_block(); ++j) row.push_back(g(k, j));
    out.push_back(row);
  }
  return out;
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  fs::create_directories(fs::path(config_.data_dir) / "pools");
  fs::create_directories(fs::path(config_.data_dir) / "jobs");
  LoadPools();
  for (int w = 0; w < std::max(1, config_.workers); ++w) {
    workers_.emplace_back([this] { WorkerLoop(); });
  }
}

Service::~Service() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

void Service::LoadPools() {
  for (const auto& entry : fs::directory_iterator(fs::path(config_.data_dir) / "pools")) {
    if (entry.path().extension() != ".json") continue;
    InstanceFile f = LoadInstance(entry.path().string());
    const std::string id = f.instance.pool.id;
    pools_[id] = Pool{std::move(f), {}};
  }
}

void Service::SavePool(const Pool& pool) {
  SaveInstance(pool.file,
               (fs::path(config_.data_dir) / "pools" / (pool.file.instance.pool.id + ".json")).string());
}

bool Service::PoolBusy(const std::string& id) const {
  for (const auto& [_, job] : jobs_) {
    if (job.pool == id && (job.state == JobState::kQueued || job.state == JobState::kRunning)) {
      return true;
    }
  }
  return false;
}

void Service::WaitIdle() {
  std::unique_lock<std::mutex> lock(mu_);
  idle_cv_.wait(lock, [&] { return queue_.empty() && active_ == 0; });
}

void Service::WorkerLoop() {
  std::unique_lock<std::mutex> lock(mu_);
  while (true) {
    auto runnable = [&] {
      return std::find_if(queue_.begin(), queue_.end(), [&](const std::string& id) {
        return !running_pools_.count(jobs_.at(id).pool);
      });
    };
    work_cv_.wait(lock, [&] { return stopping_ || runnable() != queue_.end(); });
    if (stopping_) return;
    const auto it = runnable();
    const std::string job_id = *it;
    queue_.erase(it);
    Job& job = jobs_.at(job_id);
    job.state = JobState::kRunning;
    running_pools_.insert(job.pool);
    ++active_;
    lock.unlock();
    RunJob(job_id);
    lock.lock();
    running_pools_.erase(jobs_.at(job_id).pool);
    --active_;
    work_cv_.notify_all();
    if (queue_.empty() && active_ == 0) idle_cv_.notify_all();
  }
}

void Service::RunJob(const std::string& job_id) {
  InstanceFile snapshot;
  GenerationParams params;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const Job& job = jobs_.at(job_id);
    snapshot = pools_.at(job.pool).file;
    params = job.params;
  }
  JobState state = JobState::kFailed;
  std::string error;
  std::optional<GenerateArtifacts> artifacts;
  try {
    auto backend = MakeDefaultBackend();
    const GenerateResult result = roster::Generate(snapshot.instance, params, *backend);
    artifacts = RenderArtifacts(result, snapshot.instance);
    WriteArtifacts(*artifacts, (fs::path(config_.data_dir) / "jobs" / job_id).string());
    if (result.timed_out()) {
      state = JobState::kTimedOut;
    } else if (result.report->accepted) {
      state = JobState::kDone;
    } else {
      state = JobState::kFailed;
      error = "verifier rejected the schedule:";
      for (const std::string& name : result.report->FailureNames()) error += " " + name;
    }
  } catch (const std::exception& e) {
    error = e.what();
  }
  std::lock_guard<std::mutex> lock(mu_);
  Job& job = jobs_.at(job_id);
  job.state = state;
  job.error = error;
  job.artifacts = std::move(artifacts);
}

json Service::JobJson(const Job& job) const {
  json j = {{"id", job.id},
            {"pool", job.pool},
            {"cycle", job.cycle},
            {"selector", job.selector},
            {"mode", ArmstrongModeName(job.params.mode)},
            {"time_limit_seconds", job.params.time_limit_seconds},
            {"iteration_limit", job.params.iteration_limit},
            {"state", JobStateName(job.state)}};
  if (!job.error.empty()) j["error"] = job.error;
  if (job.artifacts) {
    j["summary"] = json::parse(job.artifacts->summary_json);
    json links = {{"summary", "/jobs/" + job.id + "/summary"}};
    if (job.artifacts->schedule_csv) {
      links["schedule"] = "/jobs/" + job.id + "/schedule";
      links["report"] = "/jobs/" + job.id + "/report";
    }
    if (job.artifacts->swap_log_jsonl) links["swap_log"] = "/jobs/" + job.id + "/swap-log";
    j["results"] = links;
  }
  return j;
}

void Service::Install(httplib::Server& server) {
  server.set_pre_routing_handler([this](const Request& req, Response& res) {
    if (req.path == "/health") return httplib::Server::HandlerResponse::Unhandled;
    const std::string want = "Bearer " + config_.token;
    if (req.get_header_value("Authorization") != want) {
      SendJson(res, 401, {{"error", "unauthorized"}, {"message", "missing or wrong bearer token"}});
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  auto wrap = [](auto h) {
    return [h](const Request& req, Response& res) {
      try {
        h(req, res);
      } catch (const HttpError& e) {
        json body = {{"error", e.code}, {"message", e.message}};
        if (!e.location.empty()) body["location"] = e.location;
        SendJson(res, e.status, body);
      } catch (const RosterError& e) {
        const int status = e.code() == ErrorCode::kIo || e.code() == ErrorCode::kInternal ? 500 : 422;
        SendJson(res, status,
                 {{"error", ErrorCodeName(e.code())}, {"location", e.location()}, {"message", e.what()}});
      } catch (const std::exception& e) {
        SendJson(res, 500, {{"error", "internal"}, {"message", e.what()}});
      }
    };
  };
  auto bind = [this, wrap](void (Service::*h)(const Request&, Response&)) {
    return wrap([this, h](const Request& req, Response& res) { (this->*h)(req, res); });
  };

  server.Get("/health", [](const Request&, Response& res) { SendJson(res, 200, {{"ok", true}}); });
  server.Get("/pools", bind(&Service::ListPools));
  server.Post("/pools", bind(&Service::CreatePool));
  server.Get("/pools/:pool", bind(&Service::GetPool));
  server.Put("/pools/:pool", bind(&Service::ReplacePool));
  server.Delete("/pools/:pool", bind(&Service::DeletePool));
  server.Get("/pools/:pool/employees", bind(&Service::ListEmployees));
  server.Post("/pools/:pool/employees", bind(&Service::AddEmployee));
  server.Patch("/pools/:pool/employees/:nurse", bind(&Service::EditEmployee));
  server.Delete("/pools/:pool/employees/:nurse", bind(&Service::RemoveEmployee));
  server.Get("/pools/:pool/availability", bind(&Service::GetAvailability));
  server.Put("/pools/:pool/availability", bind(&Service::PutAvailability));
  server.Put("/pools/:pool/availability/csv", bind(&Service::PutAvailabilityCsv));
  server.Put("/pools/:pool/demand", bind(&Service::PutDemand));
  server.Get("/pools/:pool/reconcile", bind(&Service::Reconcile));
  server.Post("/pools/:pool/verify", bind(&Service::VerifySchedule));
  server.Post("/generate", bind(&Service::Generate));
  server.Get("/jobs", bind(&Service::ListJobs));
  server.Get("/jobs/:job", bind(&Service::GetJob));
  for (const std::string which : {"summary", "schedule", "report", "swap-log"}) {
    server.Get("/jobs/:job/" + which, wrap([this, which](const Request& req, Response& res) {
                 GetArtifact(req, res, which);
               }));
  }
}

// ---- pools ---------------------------------------------------------------

void Service::ListPools(const Request&, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  json out = json::array();
  for (const auto& [id, pool] : pools_) {
    const PoolInstance& inst = pool.file.instance;
    out.push_back({{"id", id},
                   {"unit", inst.pool.unit},
                   {"designation", DesignationName(inst.pool.designation)},
                   {"nurses", inst.nurse_count()},
                   {"part_time_demand", inst.TotalDemand()},
                   {"busy", PoolBusy(id)}});
  }
  SendJson(res, 200, out);
}

void Service::CreatePool(const Request& req, Response& res) {
  const json body = ParseBody(req);
  InstanceFile f = Reparse(body, config_.data_dir);
  const std::string id = f.instance.pool.id;
  if (!SafeId(id)) Throw(422, "invalid_id", "/pool/id", "pool id must match [A-Za-z0-9_.-]{1,64}");
  std::lock_guard<std::mutex> lock(mu_);
  if (pools_.count(id)) Throw(409, "exists", "/pool/id", "pool " + id + " already exists");
  Pool pool{std::move(f), {}};
  SavePool(pool);
  pools_[id] = std::move(pool);
  SendJson(res, 201, InstanceToJson(pools_[id].file));
}

void Service::GetPool(const Request& req, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = pools_.find(req.path_params.at("pool"));
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  SendJson(res, 200, InstanceToJson(it->second.file));
}

void Service::ReplacePool(const Request& req, Response& res) {
  const std::string id = req.path_params.at("pool");
  json body = ParseBody(req);
  if (!body.is_object()) Throw(422, "schema_violation", "", "instance must be an object");
  body["pool"]["id"] = id;
  InstanceFile f = Reparse(body, config_.data_dir);
  std::lock_guard<std::mutex> lock(mu_);
  if (!pools_.count(id)) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(id)) Throw(409, "busy", "", "a generation job for this pool is queued or running");
  pools_[id].file = std::move(f);
  SavePool(pools_[id]);
  SendJson(res, 200, InstanceToJson(pools_[id].file));
}

void Service::DeletePool(const Request& req, Response& res) {
  const std::string id = req.path_params.at("pool");
  std::lock_guard<std::mutex> lock(mu_);
  if (!pools_.count(id)) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(id)) Throw(409, "busy", "", "a generation job for this pool is queued or running");
  pools_.erase(id);
  std::error_code ec;
  fs::remove(fs::path(config_.data_dir) / "pools" / (id + ".json"), ec);
  res.status = 204;
}

// ---- employees -----------------------------------------------------------

void Service::ListEmployees(const Request& req, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = pools_.find(req.path_params.at("pool"));
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  const PoolInstance& inst = it->second.file.instance;
  json out = json::array();
  for (int i = 0; i < inst.nurse_count(); ++i) {
    out.push_back({{"id", inst.nurses[i].id},
                   {"seniority_rank", inst.nurses[i].seniority_rank},
                   {"designation", DesignationName(inst.nurses[i].designation)},
                   {"minimums", inst.minimums[i]}});
  }
  SendJson(res, 200, out);
}

void Service::AddEmployee(const Request& req, Response& res) {
  const std::string pool_id = req.path_params.at("pool");
  const json body = ParseBody(req);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = pools_.find(pool_id);
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(pool_id)) Throw(409, "busy", "", "a generation job for this pool is queued or running");
  const PoolInstance& inst = it->second.file.instance;
  if (!body.contains("id") || !body["id"].is_string()) Throw(422, "schema_violation", "/id", "missing id");
  if (!body.contains("minimums")) {
    Throw(422, "schema_violation", "/minimums", "minimum shifts per block are required");
  }
  const int n = inst.nurse_count();
  const int rank = body.value("seniority_rank", n + 1);
  if (rank < 1 || rank > n + 1) {
    Throw(422, "rank_gap", "/seniority_rank", "rank must be in 1.." + std::to_string(n + 1));
  }
  json doc = InstanceToJson(it->second.file);
  json nurse = {{"id", body["id"]}, {"seniority_rank", rank}};
  if (body.contains("designation")) nurse["designation"] = body["designation"];
  doc["nurses"].insert(doc["nurses"].begin() + (rank - 1), nurse);
  doc["minimums"]["values"].insert(doc["minimums"]["values"].begin() + (rank - 1), body["minimums"]);
  doc["preferences"]["scores"][body["id"].get<std::string>()] =
      body.contains("scores") ? body["scores"] : ZeroGrid(inst);
  Renumber(doc);
  it->second.file = Reparse(doc, config_.data_dir);
  SavePool(it->second);
  SendJson(res, 201, InstanceToJson(it->second.file)["nurses"]);
}

void Service::EditEmployee(const Request& req, Response& res) {
  const std::string pool_id = req.path_params.at("pool");
  const std::string nurse_id = req.path_params.at("nurse");
  const json body = ParseBody(req);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = pools_.find(pool_id);
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(pool_id)) Throw(409, "busy", "", "a generation job for this pool is queued or running");
  json doc = InstanceToJson(it->second.file);
  const int at = RankIndex(doc["nurses"], nurse_id);
  if (at < 0) Throw(404, "not_found", "", "unknown employee");

  json nurse = doc["nurses"][at];
  json mins = body.contains("minimums") ? body["minimums"] : doc["minimums"]["values"][at];
  json scores = doc["preferences"]["scores"][nurse_id];
  json carry = doc["carry_over"].contains(nurse_id) ? doc["carry_over"][nurse_id] : json();
  if (body.contains("designation")) nurse["designation"] = body["designation"];

  auto remove_from = [&](json& d, int idx) {
    d["nurses"].erase(d["nurses"].begin() + idx);
    d["minimums"]["values"].erase(d["minimums"]["values"].begin() + idx);
    d["preferences"]["scores"].erase(nurse_id);
    d["carry_over"].erase(nurse_id);
    Renumber(d);
  };
  auto insert_into = [&](json& d, int rank) {
    d["nurses"].insert(d["nurses"].begin() + (rank - 1), nurse);
    d["minimums"]["values"].insert(d["minimums"]["values"].begin() + (rank - 1), mins);
    d["preferences"]["scores"][nurse_id] = scores;
    if (!carry.is_null()) d["carry_over"][nurse_id] = carry;
    Renumber(d);
  };

  if (body.contains("pool") && body["pool"] != pool_id) {
    // Move to another pool with the same calendar, as its most junior
    // member unless a rank is given.
    const std::string target_id = body["pool"].get<std::string>();
    auto target = pools_.find(target_id);
    if (target == pools_.end()) Throw(422, "unknown_pool", "/pool", "unknown pool " + target_id);
    if (PoolBusy(target_id)) Throw(409, "busy", "/pool", "target pool has a job queued or running");
    if (!(target->second.file.instance.calendar == it->second.file.instance.calendar)) {
      Throw(422, "dimension_mismatch", "/pool", "target pool uses a different calendar");
    }
    json tdoc = InstanceToJson(target->second.file);
    if (RankIndex(tdoc["nurses"], nurse_id) >= 0) {
      Throw(409, "exists", "/pool", "target pool already has employee " + nurse_id);
    }
    const int rank = body.value("seniority_rank", static_cast<int>(tdoc["nurses"].size()) + 1);
    remove_from(doc, at);
    insert_into(tdoc, rank);
    InstanceFile src = Reparse(doc, config_.data_dir);
    InstanceFile dst = Reparse(tdoc, config_.data_dir);
    it->second.file = std::move(src);
    target->second.file = std::move(dst);
    SavePool(it->second);
    SavePool(target->second);
    SendJson(res, 200, {{"pool", target_id}, {"nurses", InstanceToJson(target->second.file)["nurses"]}});
    return;
  }

  const int rank = body.value("seniority_rank", at + 1);
  if (rank < 1 || rank > static_cast<int>(doc["nurses"].size())) {
    Throw(422, "rank_gap", "/seniority_rank", "rank out of range");
  }
  remove_from(doc, at);
  insert_into(doc, rank);
  it->second.file = Reparse(doc, config_.data_dir);
  SavePool(it->second);
  SendJson(res, 200, InstanceToJson(it->second.file)["nurses"]);
}

void Service::RemoveEmployee(const Request& req, Response& res) {
  const std::string pool_id = req.path_params.at("pool");
  const std::string nurse_id = req.path_params.at("nurse");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = pools_.find(pool_id);
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(pool_id)) Throw(409, "busy", "", "a generation job for this pool is queued or running");
  json doc = InstanceToJson(it->second.file);
  const int at = RankIndex(doc["nurses"], nurse_id);
  if (at < 0) Throw(404, "not_found", "", "unknown employee");
  if (doc["nurses"].size() == 1) Throw(422, "schema_violation", "", "a pool needs at least one employee");
  doc["nurses"].erase(doc["nurses"].begin() + at);
  doc["minimums"]["values"].erase(doc["minimums"]["values"].begin() + at);
  doc["preferences"]["scores"].erase(nurse_id);
  doc["carry_over"].erase(nurse_id);
  Renumber(doc);
  it->second.file = Reparse(doc, config_.data_dir);
  SavePool(it->second);
  res.status = 204;
}

// ---- availability and demand ---------------------------------------------

void Service::GetAvailability(const Request& req, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = pools_.find(req.path_params.at("pool"));
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  SendJson(res, 200, InstanceToJson(it->second.file)["preferences"]);
}

// Body: {"direction": "ascending"|"descending", "scores": {id: grid}} to
// replace whole grids, and/or "cells": [{"nurse", "block", "shift",
// "score"}] with 1-based block and shift for single-cell edits.
void Service::PutAvailability(const Request& req, Response& res) {
  const std::string pool_id = req.path_params.at("pool");
  const json body = ParseBody(req);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = pools_.find(pool_id);
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(pool_id)) {
    Throw(409, "busy", "", "availability cannot change while a generation job for this pool runs");
  }
  const PoolInstance& inst = it->second.file.instance;
  const std::string direction = body.value("direction", "ascending");
  if (direction != "ascending" && direction != "descending") {
    Throw(422, "schema_violation", "/direction", "expected ascending or descending");
  }
  const PreferenceDirection dir =
      direction == "ascending" ? PreferenceDirection::kAscending : PreferenceDirection::kDescending;

  json doc = InstanceToJson(it->second.file);
  json& scores = doc["preferences"]["scores"];  // canonical
  if (body.contains("scores")) {
    if (!body["scores"].is_object()) Throw(422, "schema_violation", "/scores", "expected an object");
    // Normalise through the loader: a document with only these grids.
    json partial = doc;
    partial["preferences"] = {{"direction", direction}, {"scores", scores}};
    for (const auto& [id, grid] : body["scores"].items()) partial["preferences"]["scores"][id] = grid;
    try {
      const InstanceFile f = InstanceFromJson(partial, config_.data_dir);
      scores = InstanceToJson(f)["preferences"]["scores"];
    } catch (const RosterError& e) {
      std::string loc = e.location();
      const std::string prefix = "/preferences";
      if (loc.rfind(prefix, 0) == 0) loc = loc.substr(prefix.size());
      Throw(422, std::string(ErrorCodeName(e.code())), loc, e.what());
    }
    // Untouched nurses went through the loader with the body's direction;
    // restore their canonical grids.
    const json canonical = InstanceToJson(it->second.file)["preferences"]["scores"];
    for (const auto& [id, grid] : canonical.items()) {
      if (!body["scores"].contains(id)) scores[id] = grid;
    }
  }
  if (body.contains("cells")) {
    if (!body["cells"].is_array()) Throw(422, "schema_violation", "/cells", "expected an array");
    for (size_t x = 0; x < body["cells"].size(); ++x) {
      const json& c = body["cells"][x];
      const std::string where = "/cells/" + std::to_string(x);
      if (!c.is_object() || !c.contains("nurse") || !c["nurse"].is_string() ||
          !c.contains("block") || !c["block"].is_number_integer() || !c.contains("shift") ||
          !c["shift"].is_number_integer() || !c.contains("score") ||
          !c["score"].is_number_integer()) {
        Throw(422, "schema_violation", where, "expected {nurse, block, shift, score}");
      }
      const std::string nurse = c["nurse"];
      const int block = c["block"], shift = c["shift"], score = c["score"];
      const std::string cell = "nurse " + nurse + " block " + std::to_string(block) + " shift " +
                               std::to_string(shift);
      if (!scores.contains(nurse)) Throw(422, "unknown_nurse", where + "/nurse", "unknown nurse " + nurse);
      if (block < 1 || block > inst.calendar.blocks() || shift < 1 ||
          shift > inst.calendar.shifts_per_block()) {
        Throw(422, "dimension_mismatch", where, cell + " is outside the calendar");
      }
      int canonical = 0;
      try {
        canonical = NormalizeScore(score, dir);
      } catch (const RosterError&) {
        Throw(422, "score_out_of_range", where + "/score",
              "score " + std::to_string(score) + " for " + cell + " is outside 0..3");
      }
      scores[nurse][block - 1][shift - 1] = canonical;
    }
  }
  it->second.file = Reparse(doc, config_.data_dir);
  SavePool(it->second);
  SendJson(res, 200, InstanceToJson(it->second.file)["preferences"]);
}

void Service::PutAvailabilityCsv(const Request& req, Response& res) {
  const std::string pool_id = req.path_params.at("pool");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = pools_.find(pool_id);
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(pool_id)) {
    Throw(409, "busy", "", "availability cannot change while a generation job for this pool runs");
  }
  const std::string direction =
      req.has_param("direction") ? req.get_param_value("direction") : "ascending";
  if (direction != "ascending" && direction != "descending") {
    Throw(422, "schema_violation", "direction", "expected ascending or descending");
  }
  std::istringstream in(req.body);
  PoolInstance& inst = it->second.file.instance;
  inst.preferences = ImportAvailabilityCsv(
      in, "body", inst,
      direction == "ascending" ? PreferenceDirection::kAscending : PreferenceDirection::kDescending);
  SavePool(it->second);
  SendJson(res, 200, InstanceToJson(it->second.file)["preferences"]);
}

// Body: {"part_time": grid} or {"total": grid, "full_time_scheduled": grid,
// "full_time_leave": grid}.
void Service::PutDemand(const Request& req, Response& res) {
  const std::string pool_id = req.path_params.at("pool");
  const json body = ParseBody(req);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = pools_.find(pool_id);
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  if (PoolBusy(pool_id)) Throw(409, "busy", "", "a generation job for this pool is queued or running");
  json doc = InstanceToJson(it->second.file);
  doc["demand"] = body;
  InstanceFile f;
  try {
    f = Reparse(doc, config_.data_dir);
  } catch (const RosterError& e) {
    std::string loc = e.location();
    if (loc.rfind("/demand", 0) == 0) loc = loc.substr(7);
    Throw(422, std::string(ErrorCodeName(e.code())), loc, e.what());
  }
  DemandInputs inputs;
  if (body.contains("total")) {
    // Already validated by the loader, so the grids have the right shape.
    const auto read = [&](const char* key) -> std::optional<ShiftGrid<int>> {
      if (!body.contains(key)) return std::nullopt;
      ShiftGrid<int> g(f.instance.calendar.blocks(), f.instance.calendar.shifts_per_block(), 0);
      for (int k = 0; k < g.blocks(); ++k) {
        for (int j = 0; j < g.shifts_per_block(); ++j) g(k, j) = body[key][k][j].get<int>();
      }
      return g;
    };
    inputs.total = read("total");
    inputs.full_time_scheduled = read("full_time_scheduled");
    inputs.full_time_leave = read("full_time_leave");
  }
  it->second.file = std::move(f);
  it->second.demand_inputs = std::move(inputs);
  SavePool(it->second);
  SendJson(res, 200, InstanceToJson(it->second.file)["demand"]);
}

// Demand against what the pool can supply: per block the part-time demand,
// the sum of minimums and the block capacity, and every shift whose demand
// exceeds the number of nurses available for it.
void Service::Reconcile(const Request& req, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = pools_.find(req.path_params.at("pool"));
  if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
  const PoolInstance& inst = it->second.file.instance;
  const DemandInputs& in = it->second.demand_inputs;
  const int n = inst.nurse_count();
  json blocks = json::array();
  json short_shifts = json::array();
  for (int k = 0; k < inst.calendar.blocks(); ++k) {
    int available_cells = 0;
    for (int j = 0; j < inst.calendar.shifts_per_block(); ++j) {
      int avail = 0;
      for (int i = 0; i < n; ++i) avail += inst.preferences.available(i, k, j);
      available_cells += avail;
      if (inst.demand(k, j) > avail) {
        json s = {{"block", k + 1},
                  {"shift", j + 1},
                  {"label", inst.calendar.ShiftLabel(k, j)},
                  {"part_time_demand", inst.demand(k, j)},
                  {"available_nurses", avail}};
        if (in.total) s["total_demand"] = (*in.total)(k, j);
        short_shifts.push_back(s);
      }
    }
    blocks.push_back({{"block", k + 1},
                      {"part_time_demand", inst.TotalDemandInBlock(k)},
                      {"sum_minimums", inst.SumMinimums(k)},
                      {"capacity", n * inst.max_shifts_per_block},
                      {"available_cells", available_cells},
                      {"within_minimums", inst.TotalDemandInBlock(k) <= inst.SumMinimums(k)}});
  }
  json out = {{"pool", inst.pool.id},
              {"part_time_demand", inst.TotalDemand()},
              {"blocks", blocks},
              {"shifts_short_of_availability", short_shifts}};
  if (in.total) {
    out["inputs"] = {{"total", GridJson(*in.total)}};
    if (in.full_time_scheduled) out["inputs"]["full_time_scheduled"] = GridJson(*in.full_time_scheduled);
    if (in.full_time_leave) out["inputs"]["full_time_leave"] = GridJson(*in.full_time_leave);
  }
  SendJson(res, 200, out);
}

// ---- verification --------------------------------------------------------

void Service::VerifySchedule(const Request& req, Response& res) {
  InstanceFile f;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = pools_.find(req.path_params.at("pool"));
    if (it == pools_.end()) Throw(404, "not_found", "", "unknown pool");
    f = it->second.file;
  }
  std::istringstream in(req.body);
  const Schedule s = ParseScheduleCsv(in, "body", f.instance);
  const VerificationReport rep = Verify(s, f.instance);
  res.status = 200;
  res.set_content(DumpJson(ReportToJson(rep, f.instance)), "application/json");
}

// ---- generation jobs -----------------------------------------------------

// Body: {"selector": {"pool": id} | {"unit": u} | {"designation": d} |
// {"all": true}, "cycle": c, "mode", "time_limit_seconds",
// "iteration_limit"}. One job per selected pool.
void Service::Generate(const Request& req, Response& res) {
  const json body = ParseBody(req);
  if (!body.contains("selector") || !body["selector"].is_object() || body["selector"].size() != 1) {
    Throw(422, "schema_violation", "/selector", "expected one of pool, unit, designation, all");
  }
  const json& sel = body["selector"];
  const auto& [key, value] = *sel.items().begin();
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> chosen;
  for (const auto& [id, pool] : pools_) {
    const PoolInstance& inst = pool.file.instance;
    bool match = false;
    if (key == "pool") {
      match = value.is_string() && id == value.get<std::string>();
    } else if (key == "unit") {
      match = value.is_string() && inst.pool.unit == value.get<std::string>();
    } else if (key == "designation") {
      match = value.is_string() && DesignationName(inst.pool.designation) == value.get<std::string>();
    } else if (key == "all") {
      match = value == true;
    } else {
      Throw(422, "schema_violation", "/selector/" + key, "unknown selector " + key);
    }
    if (match) chosen.push_back(id);
  }
  if (chosen.empty()) Throw(422, "no_pools", "/selector", "selector matches no pool");

  json created = json::array();
  for (const std::string& pool_id : chosen) {
    GenerationParams p = pools_.at(pool_id).file.generation;
    if (body.contains("mode")) {
      const auto m = body["mode"].is_string() ? ParseArmstrongMode(body["mode"].get<std::string>())
                                              : std::nullopt;
      if (!m) Throw(422, "schema_violation", "/mode", "expected approx or exact");
      p.mode = *m;
    }
    if (body.contains("time_limit_seconds")) {
      if (!body["time_limit_seconds"].is_number()) {
        Throw(422, "schema_violation", "/time_limit_seconds", "expected a number");
      }
      p.time_limit_seconds = body["time_limit_seconds"].get<double>();
    }
    if (body.contains("iteration_limit")) {
      if (!body["iteration_limit"].is_number_integer() || body["iteration_limit"].get<int>() < 1) {
        Throw(422, "schema_violation", "/iteration_limit", "expected a positive integer");
      }
      p.iteration_limit = body["iteration_limit"].get<int>();
    }
    Job job;
    job.id = "job-" + std::to_string(next_job_++);
    job.pool = pool_id;
    job.cycle = body.value("cycle", "");
    job.selector = sel;
    job.params = p;
    queue_.push_back(job.id);
    created.push_back(JobJson(job));
    jobs_[job.id] = std::move(job);
  }
  work_cv_.notify_all();
  SendJson(res, 202, {{"jobs", created}});
}

void Service::ListJobs(const Request&, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  json out = json::array();
  for (const auto& [_, job] : jobs_) {
    json j = JobJson(job);
    j.erase("summary");
    out.push_back(j);
  }
  SendJson(res, 200, out);
}

void Service::GetJob(const Request& req, Response& res) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = jobs_.find(req.path_params.at("job"));
  if (it == jobs_.end()) Throw(404, "not_found", "", "unknown job");
  SendJson(res, 200, JobJson(it->second));
}

void Service::GetArtifact(const Request& req, Response& res, const std::string& which) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = jobs_.find(req.path_params.at("job"));
  if (it == jobs_.end()) Throw(404, "not_found", "", "unknown job");
  const Job& job = it->second;
  if (job.state == JobState::kQueued || job.state == JobState::kRunning) {
    Throw(409, "not_finished", "", "job is " + std::string(JobStateName(job.state)));
  }
  if (!job.artifacts) Throw(404, "no_result", "", "job failed without a result: " + job.error);
  if (which == "summary") {
    res.set_content(job.artifacts->summary_json, "application/json");
    return;
  }
  if (job.state == JobState::kTimedOut) {
    Throw(410, "timed_out", "", "time limit reached before any schedule was found; no solution is provided");
  }
  const std::optional<std::string>* body = nullptr;
  std::string type = "application/json";
  if (which == "schedule") {
    body = &job.artifacts->schedule_csv;
    type = "text/csv";
  } else if (which == "report") {
    body = &job.artifacts->report_json;
  } else {
    body = &job.artifacts->swap_log_jsonl;
    type = "application/x-ndjson";
  }
  if (!body->has_value()) Throw(404, "not_found", "", "this job has no " + which);
  res.set_content(**body, type);
}

}  // namespace roster::service
