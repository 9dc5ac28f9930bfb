#ifndef ROSTER_SOLVE_H_
#define ROSTER_SOLVE_H_

#include <optional>

#include "roster/domain.h"
#include "roster/ip_model.h"
#include "roster/milp.h"

namespace roster {

struct SolveOutcome {
  SolveStatus status = SolveStatus::kTimedOutNoSolution;
  std::optional<Schedule> schedule;  // absent when timed out without a solution
  long long objective = 0;
  int stage = 1;
  double wall_seconds = 0.0;
};

struct TwoStageOutcome {
  ArmstrongMode mode = ArmstrongMode::kApproximate;
  SolveOutcome stage1;
  SolveOutcome stage2;
  // Satisfied demand established by stage one; -1 when stage one produced
  // no solution.
  int demand_star = -1;

  bool has_schedule() const { return stage2.schedule.has_value(); }
};

// Stage one minimises unfilled demand; stage two maximises preference with
// unfilled demand held at the stage-one level and the stage-one solution as
// its start. A non-positive limit yields timed_out_no_solution for both
// stages without invoking the backend. A backend reporting infeasibility
// throws RosterError(kInternal): unfilled demand makes every instance
// feasible.
TwoStageOutcome SolveTwoStage(const PoolInstance& instance, ArmstrongMode mode,
                              double time_limit_per_stage,
                              SolverBackend& backend);

struct OracleResult {
  Schedule schedule;
  int demand_opt = 0;  // satisfied demand
  int pref_opt = 0;
  long long leaves = 0;
};

// Exhaustive lexicographic optimum over all assignment grids that meet the
// general rules and leave every seniority violation justified. Throws
// RosterError(kEnumerationCap) when nurses x shifts exceeds `cell_cap`.
OracleResult BruteForceSolve(const PoolInstance& instance, int cell_cap = 24);

}  // namespace roster

#endif  // ROSTER_SOLVE_H_
