#ifndef ROSTER_PIPELINE_H_
#define ROSTER_PIPELINE_H_

#include <optional>
#include <string>

#include <json.hpp>

#include "roster/heuristic.h"
#include "roster/io.h"
#include "roster/milp.h"
#include "roster/solve.h"
#include "roster/verify.h"

namespace roster {

struct GenerateResult {
  TwoStageOutcome solve;
  std::optional<HeuristicResult> repair;  // approximate mode only
  std::optional<Schedule> schedule;       // absent when stage one timed out
  std::optional<VerificationReport> report;
  double wall_seconds = 0.0;

  bool timed_out() const { return !schedule.has_value(); }
};

// Two-stage solve, then the repair heuristic in approximate mode, then the
// verifier on the final schedule.
GenerateResult Generate(const PoolInstance& instance, const GenerationParams& params,
                        SolverBackend& backend);

// Status, objectives, repair statistics and timings. Timings are the only
// fields that vary between identical runs.
nlohmann::json GenerateSummaryJson(const GenerateResult& result, const PoolInstance& instance);

// Files produced for one generation run. The schedule, report and swap log
// are deterministic for a given instance and backend; the summary carries
// timings.
struct GenerateArtifacts {
  std::string summary_json;
  std::optional<std::string> schedule_csv;  // absent when no schedule was produced
  std::optional<std::string> report_json;
  std::optional<std::string> swap_log_jsonl;  // approximate mode only
};

GenerateArtifacts RenderArtifacts(const GenerateResult& result, const PoolInstance& instance);
// Writes summary.json and, when present, schedule.csv, report.json and
// swap_log.jsonl into `dir`, creating it if needed.
void WriteArtifacts(const GenerateArtifacts& artifacts, const std::string& dir);

struct CompareEntry {
  std::string method;  // "exact", "approx+heuristic" or "oracle"
  bool has_schedule = false;
  int unfilled = 0;
  int satisfied = 0;
  int preference = 0;  // total canonical score of assignments
  std::optional<double> percent_first;
  bool accepted = false;
  double seconds = 0.0;
};

struct CompareResult {
  int total_demand = 0;
  CompareEntry exact;
  CompareEntry approx;
  std::optional<CompareEntry> oracle;
};

int TotalPreference(const Schedule& schedule, const PoolInstance& instance);

// Runs both modes, and the exhaustive oracle when the instance is within
// `oracle_cell_cap`.
CompareResult CompareModes(const PoolInstance& instance, double time_limit_per_stage,
                           int iteration_limit, SolverBackend& backend,
                           int oracle_cell_cap = 24);

nlohmann::json CompareToJson(const CompareResult& result);
// One line per method: unfilled (total), % first preference, run time.
std::string CompareTable(const CompareResult& result);

}  // namespace roster

#endif  // ROSTER_PIPELINE_H_
