// HTTP service over the roster core: pool, employee, availability and
// demand management, asynchronous generation jobs, artifact download and
// verification of edited schedules.
#ifndef ROSTER_TOOLS_SERVICE_H_
#define ROSTER_TOOLS_SERVICE_H_

#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "roster/io.h"
#include "roster/pipeline.h"

namespace roster::service {

struct ServiceConfig {
  std::string data_dir;  // pools/ and jobs/ live here
  std::string token;     // required as "Authorization: Bearer <token>"
  int workers = 2;       // generation jobs run concurrently across pools
};

enum class JobState { kQueued, kRunning, kDone, kFailed, kTimedOut };

std::string_view JobStateName(JobState s);

struct Job {
  std::string id;
  std::string pool;
  std::string cycle;
  nlohmann::json selector;
  GenerationParams params;
  JobState state = JobState::kQueued;
  std::string error;  // kFailed only
  std::optional<GenerateArtifacts> artifacts;
};

// Raw demand inputs kept alongside a pool for the reconcile report.
struct DemandInputs {
  std::optional<ShiftGrid<int>> total;
  std::optional<ShiftGrid<int>> full_time_scheduled;
  std::optional<ShiftGrid<int>> full_time_leave;
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Installs every route on `server`. Call once before listening.
  void Install(httplib::Server& server);

  // Blocks until no job is queued or running. Used by tests.
  void WaitIdle();

 private:
  struct Pool {
    InstanceFile file;
    DemandInputs demand_inputs;
  };

  void LoadPools();
  void SavePool(const Pool& pool);
  bool PoolBusy(const std::string& id) const;  // caller holds mu_
  void WorkerLoop();
  void RunJob(const std::string& job_id);
  nlohmann::json JobJson(const Job& job) const;

  // Route handlers; all take the request and fill the response.
  void ListPools(const httplib::Request&, httplib::Response&);
  void CreatePool(const httplib::Request&, httplib::Response&);
  void GetPool(const httplib::Request&, httplib::Response&);
  void ReplacePool(const httplib::Request&, httplib::Response&);
  void DeletePool(const httplib::Request&, httplib::Response&);
  void ListEmployees(const httplib::Request&, httplib::Response&);
  void AddEmployee(const httplib::Request&, httplib::Response&);
  void EditEmployee(const httplib::Request&, httplib::Response&);
  void RemoveEmployee(const httplib::Request&, httplib::Response&);
  void GetAvailability(const httplib::Request&, httplib::Response&);
  void PutAvailability(const httplib::Request&, httplib::Response&);
  void PutAvailabilityCsv(const httplib::Request&, httplib::Response&);
  void PutDemand(const httplib::Request&, httplib::Response&);
  void Reconcile(const httplib::Request&, httplib::Response&);
  void Generate(const httplib::Request&, httplib::Response&);
  void ListJobs(const httplib::Request&, httplib::Response&);
  void GetJob(const httplib::Request&, httplib::Response&);
  void GetArtifact(const httplib::Request&, httplib::Response&, const std::string& which);
  void VerifySchedule(const httplib::Request&, httplib::Response&);

  ServiceConfig config_;
  mutable std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable idle_cv_;
  std::map<std::string, Pool> pools_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  std::set<std::string> running_pools_;
  int active_ = 0;
  long long next_job_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace roster::service

#endif  // ROSTER_TOOLS_SERVICE_H_
