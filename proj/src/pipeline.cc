#include "roster/pipeline.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "roster/error.h"

namespace roster {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

nlohmann::json StageJson(const SolveOutcome& s) {
  nlohmann::json j;
  j["status"] = SolveStatusName(s.status);
  j["objective"] = s.schedule ? nlohmann::json(s.objective) : nlohmann::json(nullptr);
  j["seconds"] = std::round(s.wall_seconds * 1000.0) / 1000.0;
  return j;
}

CompareEntry EntryFrom(const std::string& method, const std::optional<Schedule>& schedule,
                       const PoolInstance& instance, double seconds) {
  CompareEntry e;
  e.method = method;
  e.seconds = seconds;
  if (!schedule) return e;
  e.has_schedule = true;
  e.unfilled = schedule->TotalUnfilled();
  e.satisfied = instance.TotalDemand() - e.unfilled;
  e.preference = TotalPreference(*schedule, instance);
  const VerificationReport rep = Verify(*schedule, instance);
  e.percent_first = rep.preferences.percent_first;
  e.accepted = rep.accepted;
  return e;
}

}  // namespace

GenerateResult Generate(const PoolInstance& instance, const GenerationParams& params,
                        SolverBackend& backend) {
  const auto t0 = Clock::now();
  GenerateResult out;
  out.solve = SolveTwoStage(instance, params.mode, params.time_limit_seconds, backend);
  if (out.solve.has_schedule()) {
    Schedule s = *out.solve.stage2.schedule;
    if (params.mode == ArmstrongMode::kApproximate) {
      out.repair = RunRepair(s, instance, params.iteration_limit);
      s = out.repair->schedule;
    }
    out.report = Verify(s, instance);
    out.schedule = std::move(s);
  }
  out.wall_seconds = SecondsSince(t0);
  return out;
}

nlohmann::json GenerateSummaryJson(const GenerateResult& result, const PoolInstance& instance) {
  nlohmann::json j;
  j["pool"] = instance.pool.id;
  j["mode"] = ArmstrongModeName(result.solve.mode);
  j["stage1"] = StageJson(result.solve.stage1);
  j["stage2"] = StageJson(result.solve.stage2);
  j["demand_star"] = result.solve.demand_star >= 0 ? nlohmann::json(result.solve.demand_star)
                                                   : nlohmann::json(nullptr);
  j["total_demand"] = instance.TotalDemand();
  if (result.timed_out()) {
    j["outcome"] = "no_solution";
    j["message"] = "time limit reached before any schedule was found; no solution is provided";
  } else {
    j["outcome"] = result.report->accepted ? "accepted" : "rejected";
    j["unfilled"] = result.schedule->TotalUnfilled();
    j["percent_first_preference"] =
        result.report->preferences.percent_first
            ? nlohmann::json(std::round(*result.report->preferences.percent_first * 1e4) / 1e4)
            : nlohmann::json(nullptr);
  }
  if (result.repair) {
    j["repair"] = {{"iterations_used", result.repair->iterations_used},
                   {"passes_with_swaps", result.repair->passes_with_swaps},
                   {"max_round_swap_passes", result.repair->max_round_swap_passes},
                   {"fill_rounds", result.repair->fill_rounds},
                   {"hit_iteration_limit", result.repair->hit_iteration_limit},
                   {"events", result.repair->log.size()}};
  } else {
    j["repair"] = nullptr;
  }
  j["seconds"] = std::round(result.wall_seconds * 1000.0) / 1000.0;
  return j;
}

int TotalPreference(const Schedule& schedule, const PoolInstance& instance) {
  int total = 0;
  for (int i = 0; i < schedule.nurses(); ++i) {
    for (int k = 0; k < schedule.blocks(); ++k) {
      for (int j = 0; j < schedule.shifts_per_block(); ++j) {
        if (schedule.assigned(i, k, j)) total += instance.preferences.score(i, k, j);
      }
    }
  }
  return total;
}

GenerateArtifacts RenderArtifacts(const GenerateResult& result, const PoolInstance& instance) {
  GenerateArtifacts a;
  a.summary_json = DumpJson(GenerateSummaryJson(result, instance));
  if (result.schedule) {
    a.schedule_csv = RenderScheduleCsv(*result.schedule, instance, *result.report);
    a.report_json = DumpJson(ReportToJson(*result.report, instance));
  }
  if (result.repair) a.swap_log_jsonl = SwapLogToJsonLines(result.repair->log, instance);
  return a;
}

void WriteArtifacts(const GenerateArtifacts& artifacts, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw RosterError(ErrorCode::kIo, dir, "cannot create directory: " + ec.message());
  const std::filesystem::path base(dir);
  WriteFileAtomic((base / "summary.json").string(), artifacts.summary_json);
  if (artifacts.schedule_csv) WriteFileAtomic((base / "schedule.csv").string(), *artifacts.schedule_csv);
  if (artifacts.report_json) WriteFileAtomic((base / "report.json").string(), *artifacts.report_json);
  if (artifacts.swap_log_jsonl) {
    WriteFileAtomic((base / "swap_log.jsonl").string(), *artifacts.swap_log_jsonl);
  }
}

CompareResult CompareModes(const PoolInstance& instance, double time_limit_per_stage,
                           int iteration_limit, SolverBackend& backend, int oracle_cell_cap) {
  CompareResult out;
  out.total_demand = instance.TotalDemand();
  GenerationParams p;
  p.time_limit_seconds = time_limit_per_stage;
  p.iteration_limit = iteration_limit;

  p.mode = ArmstrongMode::kExact;
  const GenerateResult exact = Generate(instance, p, backend);
  out.exact = EntryFrom("exact", exact.schedule, instance, exact.wall_seconds);

  p.mode = ArmstrongMode::kApproximate;
  const GenerateResult approx = Generate(instance, p, backend);
  out.approx = EntryFrom("approx+heuristic", approx.schedule, instance, approx.wall_seconds);

  const long long cells =
      static_cast<long long>(instance.nurse_count()) * instance.calendar.total_shifts();
  if (cells <= oracle_cell_cap) {
    const auto t0 = Clock::now();
    const OracleResult o = BruteForceSolve(instance, oracle_cell_cap);
    out.oracle = EntryFrom("oracle", o.schedule, instance, SecondsSince(t0));
  }
  return out;
}

nlohmann::json CompareToJson(const CompareResult& result) {
  auto entry = [](const CompareEntry& e) {
    nlohmann::json j;
    j["method"] = e.method;
    j["has_schedule"] = e.has_schedule;
    j["unfilled"] = e.has_schedule ? nlohmann::json(e.unfilled) : nlohmann::json(nullptr);
    j["satisfied"] = e.has_schedule ? nlohmann::json(e.satisfied) : nlohmann::json(nullptr);
    j["preference"] = e.has_schedule ? nlohmann::json(e.preference) : nlohmann::json(nullptr);
    j["percent_first_preference"] =
        e.percent_first ? nlohmann::json(std::round(*e.percent_first * 1e4) / 1e4)
                        : nlohmann::json(nullptr);
    j["accepted"] = e.accepted;
    j["seconds"] = std::round(e.seconds * 1000.0) / 1000.0;
    return j;
  };
  nlohmann::json j;
  j["total_demand"] = result.total_demand;
  j["exact"] = entry(result.exact);
  j["approx"] = entry(result.approx);
  j["oracle"] = result.oracle ? entry(*result.oracle) : nlohmann::json(nullptr);
  return j;
}

std::string CompareTable(const CompareResult& result) {
  std::string out = "method              unfilled (total)  %first    seconds  verdict\n";
  auto line = [&](const CompareEntry& e) {
    char buf[256];
    if (!e.has_schedule) {
      std::snprintf(buf, sizeof buf, "%-18s  %-16s  %-8s  %7.2f  %s\n", e.method.c_str(),
                    "no solution", "-", e.seconds, "-");
    } else {
      const std::string unfilled =
          std::to_string(e.unfilled) + " (" + std::to_string(result.total_demand) + ")";
      char pct[32] = "-";
      if (e.percent_first) std::snprintf(pct, sizeof pct, "%.1f%%", *e.percent_first);
      std::snprintf(buf, sizeof buf, "%-18s  %-16s  %-8s  %7.2f  %s\n", e.method.c_str(),
                    unfilled.c_str(), pct, e.seconds, e.accepted ? "ACCEPTED" : "REJECTED");
    }
    out += buf;
  };
  line(result.exact);
  line(result.approx);
  if (result.oracle) line(*result.oracle);
  return out;
}

}  // namespace roster
