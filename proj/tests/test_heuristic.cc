#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "roster/heuristic.h"
#include "roster/milp.h"
#include "roster/solve.h"
#include "roster/synth.h"
#include "roster/verify.h"
#include "support.h"

using namespace roster;
using roster::testing::GeneralRuleBreaks;
using roster::testing::MakeInstance;

namespace {

const CycleCalendar& WeekCalendar() {
  static const CycleCalendar cal = CycleCalendar::Build(1, 7, 3, Weekday::kMonday);
  return cal;
}

std::vector<std::vector<int>> DemandOn(std::initializer_list<int> shifts) {
  std::vector<std::vector<int>> d(1, std::vector<int>(21, 0));
  for (int j : shifts) d[0][j] = 1;
  return d;
}

// Replays the log from `start`, checking the general rules after every event
// and that swaps never change the unfilled total.
void ReplayLog(const Schedule& start, const PoolInstance& inst, const std::vector<SwapEvent>& log,
               const Schedule& final_schedule) {
  Schedule s = start;
  for (const SwapEvent& e : log) {
    const int before = s.TotalUnfilled();
    if (e.kind == RepairEventKind::kFill) {
      s.Assign(e.to_nurse, e.block, e.shift);
      CHECK(s.TotalUnfilled() == before - 1);
    } else {
      CHECK(e.from_nurse != e.to_nurse);
      s.Move(e.from_nurse, e.to_nurse, e.block, e.shift);
      CHECK(s.TotalUnfilled() == before);
    }
    CHECK(GeneralRuleBreaks(s, inst).empty());
  }
  CHECK(s == final_schedule);
}

}  // namespace

TEST_CASE("greedy fill gives the shift to the most senior eligible nurse") {
  const PoolInstance inst = MakeInstance(WeekCalendar(), 2, DemandOn({4}), {1, 1});
  const Schedule start = Schedule::Empty(2, inst.demand);
  std::vector<SwapEvent> log;
  const Schedule s = GreedyFill(start, inst, &log);
  CHECK(s.assigned(0, 0, 4));
  CHECK_FALSE(s.assigned(1, 0, 4));
  REQUIRE(log.size() == 1);
  CHECK(log[0].kind == RepairEventKind::kFill);
}

TEST_CASE("greedy fill leaves a filled schedule unchanged") {
  const PoolInstance inst = MakeInstance(WeekCalendar(), 2, DemandOn({0, 6}), {1, 1});
  Schedule start = Schedule::Empty(2, inst.demand);
  start.Assign(0, 0, 0);
  start.Assign(1, 0, 6);
  std::vector<SwapEvent> log;
  CHECK(GreedyFill(start, inst, &log) == start);
  CHECK(log.empty());
}

TEST_CASE("greedy fill cannot place a shift when every nurse is at the block maximum") {
  const PoolInstance inst = MakeInstance(WeekCalendar(), 2, DemandOn({0, 6, 12}), {1, 1}, 1);
  Schedule start = Schedule::Empty(2, inst.demand);
  start.Assign(0, 0, 0);
  start.Assign(1, 0, 6);
  const Schedule s = GreedyFill(start, inst);
  CHECK(s == start);
  CHECK(s.unfilled(0, 12) == 1);
  const VerificationReport rep = Verify(s, inst);
  for (int i = 0; i < 2; ++i) {
    REQUIRE(rep.codes.applies(i, 0, 12));
    CHECK((rep.codes.mask(i, 0, 12) & kCodeM) != 0);
  }
  CHECK(rep.accepted);
}

TEST_CASE("senior two ahead hands a shift to the junior") {
  const PoolInstance inst = MakeInstance(WeekCalendar(), 2, DemandOn({0, 6, 12, 3}), {1, 1});
  Schedule s = Schedule::Empty(2, inst.demand);
  for (int j : {0, 6, 12}) s.Assign(0, 0, j);
  s.Assign(1, 0, 3);
  const HeuristicResult r = CheckAndReassign(s, inst, 50);
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].branch == SwapBranch::kSeniorTwoAhead);
  CHECK(r.log[0].from_nurse == 0);
  CHECK(r.log[0].to_nurse == 1);
  CHECK(r.log[0].shift == 0);
  CHECK(r.iterations_used == 2);
  CHECK_FALSE(r.hit_iteration_limit);
  CHECK(r.schedule.ShiftsInBlock(0, 0) == 2);
  CHECK(r.schedule.ShiftsInBlock(1, 0) == 2);
  CHECK(Verify(r.schedule, inst).accepted);
}

TEST_CASE("a schedule inside the seniority bounds needs one pass") {
  const PoolInstance inst = MakeInstance(WeekCalendar(), 2, DemandOn({0, 6, 3}), {1, 1});
  Schedule s = Schedule::Empty(2, inst.demand);
  s.Assign(0, 0, 0);
  s.Assign(0, 0, 6);
  s.Assign(1, 0, 3);
  const HeuristicResult r = CheckAndReassign(s, inst, 50);
  CHECK(r.log.empty());
  CHECK(r.iterations_used == 1);
  CHECK(r.schedule == s);
}

TEST_CASE("chain of swaps across passes") {
  // A (delta 3) hands a shift to B, which leaves B two ahead of C; C can
  // only take one of B's earlier shifts, so that swap waits for pass two.
  PoolInstance inst =
      MakeInstance(WeekCalendar(), 3, DemandOn({0, 3, 6, 9, 12, 15, 18}), {1, 1, 1});
  for (int j : {6, 9, 12, 15}) inst.preferences.set_score(2, 0, j, 0);
  Schedule s = Schedule::Empty(3, inst.demand);
  for (int j : {6, 9, 12, 15}) s.Assign(0, 0, j);
  s.Assign(1, 0, 0);
  s.Assign(1, 0, 3);
  s.Assign(2, 0, 18);
  const HeuristicResult r = CheckAndReassign(s, inst, 50);
  CHECK(r.passes_with_swaps == 2);
  CHECK(r.iterations_used == 3);
  CHECK(r.iterations_used <= 3);
  REQUIRE(r.log.size() == 2);
  CHECK(r.log[0].from_nurse == 0);
  CHECK(r.log[0].to_nurse == 1);
  CHECK(r.log[0].iteration == 1);
  CHECK(r.log[1].from_nurse == 1);
  CHECK(r.log[1].to_nurse == 2);
  CHECK(r.log[1].iteration == 2);
  CHECK(NoReturnViolations(r.log).empty());
  CHECK(Verify(r.schedule, inst).accepted);
  ReplayLog(s, inst, r.log, r.schedule);
}

TEST_CASE("iteration limit is reported") {
  PoolInstance inst =
      MakeInstance(WeekCalendar(), 3, DemandOn({0, 3, 6, 9, 12, 15, 18}), {1, 1, 1});
  for (int j : {6, 9, 12, 15}) inst.preferences.set_score(2, 0, j, 0);
  Schedule s = Schedule::Empty(3, inst.demand);
  for (int j : {6, 9, 12, 15}) s.Assign(0, 0, j);
  s.Assign(1, 0, 0);
  s.Assign(1, 0, 3);
  s.Assign(2, 0, 18);
  const HeuristicResult r = CheckAndReassign(s, inst, 1);
  CHECK(r.hit_iteration_limit);
  CHECK(r.iterations_used == 1);
}

TEST_CASE("swap log as json lines") {
  const PoolInstance inst = MakeInstance(WeekCalendar(), 2, DemandOn({0, 6, 12, 3}), {1, 1});
  Schedule s = Schedule::Empty(2, inst.demand);
  for (int j : {0, 6, 12}) s.Assign(0, 0, j);
  const HeuristicResult r = RunRepair(s, inst, 50);
  const std::string text = SwapLogToJsonLines(r.log, inst);
  std::istringstream in(text);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("kind"));
    CHECK(j.contains("to"));
    ++lines;
  }
  CHECK(lines == static_cast<int>(r.log.size()));
}

TEST_CASE("repair on approximate solutions of small pools") {
  auto backend = MakeHighsBackend();
  int no_return_breaks = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    const PoolInstance inst = SynthInstance(SynthProfile::kSmall, seed);
    const TwoStageOutcome out = SolveTwoStage(inst, ArmstrongMode::kApproximate, 60, *backend);
    REQUIRE(out.has_schedule());
    const Schedule& start = *out.stage2.schedule;
    const HeuristicResult r = RunRepair(start, inst, 50);
    CHECK_FALSE(r.hit_iteration_limit);
    ReplayLog(start, inst, r.log, r.schedule);
    CHECK(r.schedule.TotalUnfilled() <= start.TotalUnfilled());
    const VerificationReport rep = Verify(r.schedule, inst);
    CHECK(rep.general_failures.empty());
    CHECK(rep.UnjustifiedCount() == 0);
    CHECK(rep.uncoded.empty());
    no_return_breaks += static_cast<int>(NoReturnViolations(r.log).size());

    bool within_minimums = true;
    for (int k = 0; k < inst.calendar.blocks(); ++k) {
      within_minimums = within_minimums && inst.TotalDemandInBlock(k) <= inst.SumMinimums(k);
    }
    if (within_minimums && start.TotalUnfilled() == 0) CHECK(r.log.empty());
  }
  MESSAGE("no-return breaks on small corpus: " << no_return_breaks);
}
