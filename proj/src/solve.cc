#include "roster/solve.h"

#include <chrono>
#include <cmath>

#include "roster/armstrong.h"
#include "roster/error.h"

namespace roster {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SolveOutcome RunStage(const ScheduleModel& sm, int stage, double time_limit,
                      std::vector<double> start, SolverBackend& backend,
                      std::vector<double>* values_out) {
  const auto t0 = Clock::now();
  SolveOptions opts;
  opts.time_limit_seconds = time_limit;
  opts.start = std::move(start);
  opts.integral_objective = true;
  SolverResult res = backend.Solve(sm.model, opts);
  SolveOutcome out;
  out.stage = stage;
  if (res.status == SolveStatus::kInfeasible) {
    throw RosterError(ErrorCode::kInternal, "stage " + std::to_string(stage),
                      "solver reported an infeasible scheduling model");
  }
  // A stage-two start is feasible by construction; fall back to it if the
  // backend returns nothing better.
  if (res.status == SolveStatus::kTimedOutNoSolution && !opts.start.empty() &&
      sm.model.MaxViolation(opts.start) < 1e-6) {
    res.status = SolveStatus::kFeasible;
    res.values = opts.start;
    res.objective = sm.model.ObjectiveValue(opts.start);
  }
  out.status = res.status;
  if (res.status == SolveStatus::kOptimal || res.status == SolveStatus::kFeasible) {
    out.schedule = ExtractSchedule(sm, res.values);
    out.objective = std::llround(res.objective);
    *values_out = std::move(res.values);
  }
  out.wall_seconds = SecondsSince(t0);
  return out;
}

}  // namespace

TwoStageOutcome SolveTwoStage(const PoolInstance& instance, ArmstrongMode mode,
                              double time_limit_per_stage,
                              SolverBackend& backend) {
  TwoStageOutcome out;
  out.mode = mode;
  out.stage1.stage = 1;
  out.stage2.stage = 2;
  if (time_limit_per_stage <= 0.0) return out;

  const ScheduleModel s1 = BuildStage1(instance, mode);
  std::vector<double> values;
  out.stage1 = RunStage(s1, 1, time_limit_per_stage, {}, backend, &values);
  if (!out.stage1.schedule) return out;

  out.demand_star = instance.TotalDemand() - static_cast<int>(out.stage1.objective);
  const ScheduleModel s2 = BuildStage2(instance, out.demand_star, mode);
  std::vector<double> values2;
  out.stage2 = RunStage(s2, 2, time_limit_per_stage, std::move(values), backend,
                        &values2);
  return out;
}

namespace {

class Enumerator {
 public:
  explicit Enumerator(const PoolInstance& inst)
      : inst_(inst),
        n_(inst.nurse_count()),
        r_(inst.calendar.blocks()),
        q_(inst.calendar.shifts_per_block()),
        current_(Schedule::Empty(inst.nurse_count(), inst.demand)),
        block_count_(n_, std::vector<int>(r_, 0)),
        weekend_count_(n_, 0) {}

  OracleResult Run() {
    Recurse(0);
    OracleResult out;
    out.schedule = best_ ? *best_ : Schedule::Empty(n_, inst_.demand);
    out.demand_opt = best_demand_;
    out.pref_opt = best_pref_;
    out.leaves = leaves_;
    return out;
  }

 private:
  // Cells are visited position-major, nurse-minor.
  void Recurse(int cell) {
    if (cell == n_ * r_ * q_) {
      Evaluate();
      return;
    }
    const int p = cell / n_;
    const int i = cell % n_;
    const int k = p / q_, j = p % q_;
    Recurse(cell + 1);
    if (CanAssign(i, k, j, p)) {
      current_.Assign(i, k, j);
      ++block_count_[i][k];
      const bool weekend = inst_.calendar.IsWeekendShift(k, j);
      if (weekend) ++weekend_count_[i];
      Recurse(cell + 1);
      if (weekend) --weekend_count_[i];
      --block_count_[i][k];
      current_.Unassign(i, k, j);
    }
  }

  bool CanAssign(int i, int k, int j, int p) const {
    if (!inst_.preferences.available(i, k, j)) return false;
    if (current_.unfilled(k, j) <= 0) return false;
    if (block_count_[i][k] >= inst_.max_shifts_per_block) return false;
    if (inst_.calendar.IsWeekendShift(k, j) &&
        weekend_count_[i] >= inst_.max_weekend_shifts) {
      return false;
    }
    for (int back = 1; back <= 2; ++back) {
      const int pos = p - back;
      if (pos == -1 && inst_.carry_over[i].last) return false;
      if (pos == -2 && inst_.carry_over[i].second_last) return false;
      if (pos >= 0 && current_.assigned(i, pos / q_, pos % q_)) return false;
    }
    return true;
  }

  void Evaluate() {
    ++leaves_;
    const int satisfied = inst_.TotalDemand() - current_.TotalUnfilled();
    if (satisfied < best_demand_) return;
    int pref = 0;
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        for (int j = 0; j < q_; ++j) {
          if (current_.assigned(i, k, j)) pref += inst_.preferences.score(i, k, j);
        }
      }
    }
    if (best_ && satisfied == best_demand_ && pref <= best_pref_) return;
    if (!AllJustified(CheckArmstrong(current_, inst_))) return;
    best_ = current_;
    best_demand_ = satisfied;
    best_pref_ = pref;
  }

  const PoolInstance& inst_;
  int n_, r_, q_;
  Schedule current_;
  std::vector<std::vector<int>> block_count_;
  std::vector<int> weekend_count_;
  std::optional<Schedule> best_;
  int best_demand_ = -1;
  int best_pref_ = -1;
  long long leaves_ = 0;
};

}  // namespace

OracleResult BruteForceSolve(const PoolInstance& instance, int cell_cap) {
  const long long cells = static_cast<long long>(instance.nurse_count()) *
                          instance.calendar.total_shifts();
  if (cells > cell_cap) {
    throw RosterError(ErrorCode::kEnumerationCap, "instance",
                      std::to_string(cells) + " assignment cells exceed the cap of " +
                          std::to_string(cell_cap));
  }
  return Enumerator(instance).Run();
}

}  // namespace roster
