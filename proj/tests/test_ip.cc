#include <doctest.h>

#include <algorithm>

#include "roster/armstrong.h"
#include "roster/error.h"
#include "roster/ip_model.h"
#include "roster/milp.h"
#include "roster/solve.h"
#include "roster/synth.h"
#include "support.h"

using namespace roster;
using roster::testing::GeneralRuleBreaks;
using roster::testing::MakeInstance;

namespace {

int Preference(const Schedule& s, const PoolInstance& inst) {
  int total = 0;
  for (int i = 0; i < s.nurses(); ++i) {
    for (int k = 0; k < s.blocks(); ++k) {
      for (int j = 0; j < s.shifts_per_block(); ++j) {
        if (s.assigned(i, k, j)) total += inst.preferences.score(i, k, j);
      }
    }
  }
  return total;
}

PoolInstance DefaultNinePool() {
  const CycleCalendar cal = CycleCalendar::Default();
  std::vector<std::vector<int>> demand(3, std::vector<int>(42, 1));
  return MakeInstance(cal, 9, demand, {8, 8, 8, 6, 6, 4, 4, 3, 3});
}

}  // namespace

TEST_CASE("model sizes") {
  const PoolInstance inst = DefaultNinePool();
  const ScheduleModel approx = BuildStage1(inst, ArmstrongMode::kApproximate);
  CHECK(approx.model.CountVariablesWithPrefix("X[") == 9 * 42 * 3);
  CHECK(approx.model.CountVariablesWithPrefix("S[") == 42 * 3);
  CHECK(approx.model.CountVariablesWithPrefix("sigma[") > 0);
  CHECK(approx.model.CountVariablesWithPrefix("delta[") == 0);

  const ScheduleModel exact = BuildStage1(inst, ArmstrongMode::kExact);
  CHECK(exact.model.CountVariablesWithPrefix("X[") == 1134);
  for (const char* prefix : {"delta[", "pi[", "alpha[", "beta[", "gamma[", "a[", "b[", "h[",
                             "u[", "p[", "v[", "l[", "t[", "Fdemand_minus[", "Fdemand_plus["}) {
    CAPTURE(prefix);
    CHECK(exact.model.CountVariablesWithPrefix(prefix) > 0);
  }
  CHECK(exact.model.CountVariablesWithPrefix("sigma[") == 0);

  const ScheduleModel s2 = BuildStage2(inst, inst.TotalDemand(), ArmstrongMode::kApproximate);
  CHECK(s2.model.variables().size() == approx.model.variables().size());
  CHECK(s2.model.CountConstraintsWithPrefix("unfilled_at_most_stage_one") == 1);
  CHECK_THROWS_AS(BuildStage2(inst, inst.TotalDemand() + 1, ArmstrongMode::kExact), RosterError);
  CHECK_THROWS_AS(BuildStage2(inst, -1, ArmstrongMode::kExact), RosterError);
}

TEST_CASE("zero demand solves to the empty schedule") {
  const CycleCalendar cal = CycleCalendar::Build(1, 7, 3, Weekday::kMonday);
  std::vector<std::vector<int>> demand(1, std::vector<int>(21, 0));
  const PoolInstance inst = MakeInstance(cal, 3, demand, {3, 2, 1});
  auto backend = MakeHighsBackend();
  for (ArmstrongMode mode : {ArmstrongMode::kApproximate, ArmstrongMode::kExact}) {
    const TwoStageOutcome out = SolveTwoStage(inst, mode, 30, *backend);
    REQUIRE(out.has_schedule());
    CHECK(out.stage1.objective == 0);
    CHECK(out.stage2.schedule->TotalAssigned() == 0);
  }
}

TEST_CASE("non-positive time limit yields no schedule") {
  const PoolInstance inst = DefaultNinePool();
  auto backend = MakeHighsBackend();
  for (double limit : {0.0, -1.0}) {
    const TwoStageOutcome out = SolveTwoStage(inst, ArmstrongMode::kApproximate, limit, *backend);
    CHECK(out.stage1.status == SolveStatus::kTimedOutNoSolution);
    CHECK(out.stage2.status == SolveStatus::kTimedOutNoSolution);
    CHECK_FALSE(out.stage1.schedule.has_value());
    CHECK_FALSE(out.has_schedule());
  }
}

TEST_CASE("stage two holds stage-one demand") {
  const CycleCalendar cal = CycleCalendar::Build(1, 4, 3, Weekday::kFriday);
  std::vector<std::vector<int>> demand{{1, 0, 1, 1, 0, 1, 2, 0, 0, 1, 1, 0}};
  const PoolInstance inst = MakeInstance(cal, 2, demand, {3, 2}, 4, 4);
  auto backend = MakeHighsBackend();
  const TwoStageOutcome out = SolveTwoStage(inst, ArmstrongMode::kExact, 30, *backend);
  REQUIRE(out.has_schedule());
  CHECK(out.stage2.schedule->TotalUnfilled() == out.stage1.objective);
  CHECK(out.demand_star == inst.TotalDemand() - out.stage1.objective);
  CHECK(GeneralRuleBreaks(*out.stage2.schedule, inst).empty());
}

TEST_CASE("oracle on hand-sized instances") {
  SUBCASE("one nurse, three shifts, demand on the outer two") {
    const CycleCalendar cal = CycleCalendar::Build(1, 1, 3, Weekday::kSaturday);
    const PoolInstance inst = MakeInstance(cal, 1, {{1, 0, 1}}, {1});
    // Eight assignment patterns; shifts 1 and 3 are two apart, so at most
    // one of them can be worked.
    int best = 0;
    for (int mask = 0; mask < 8; ++mask) {
      const bool a = mask & 1, b = mask & 2, c = mask & 4;
      if (b || (a && c)) continue;
      best = std::max(best, int(a) + int(c));
    }
    const OracleResult o = BruteForceSolve(inst);
    CHECK(o.demand_opt == best);
    CHECK(o.demand_opt == 1);
    CHECK(o.pref_opt == 3);
    CHECK(o.schedule.assigned(0, 0, 0) != o.schedule.assigned(0, 0, 2));
    auto backend = MakeHighsBackend();
    const TwoStageOutcome ip = SolveTwoStage(inst, ArmstrongMode::kExact, 30, *backend);
    REQUIRE(ip.has_schedule());
    CHECK(inst.TotalDemand() - ip.stage2.schedule->TotalUnfilled() == 1);
  }
  SUBCASE("no availability") {
    const CycleCalendar cal = CycleCalendar::Build(1, 2, 3, Weekday::kSaturday);
    PoolInstance inst = MakeInstance(cal, 2, {{1, 1, 1, 1, 1, 1}}, {1, 1});
    inst.preferences = AvailabilityPreference(2, 1, 6);
    const OracleResult o = BruteForceSolve(inst);
    CHECK(o.demand_opt == 0);
    CHECK(o.schedule.TotalUnfilled() == 6);
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(BruteForceSolve(DefaultNinePool()), RosterError);
  }
}

TEST_CASE("exact model matches the oracle on tiny pools") {
  auto backend = MakeHighsBackend();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    PoolInstance inst = SynthInstance(SynthProfile::kTiny, seed);
    CAPTURE(seed);
    const OracleResult o = BruteForceSolve(inst);
    const TwoStageOutcome ip = SolveTwoStage(inst, ArmstrongMode::kExact, 30, *backend);
    REQUIRE(ip.has_schedule());
    const Schedule& s = *ip.stage2.schedule;
    CHECK(inst.TotalDemand() - s.TotalUnfilled() == o.demand_opt);
    CHECK(Preference(s, inst) == o.pref_opt);
    CHECK(GeneralRuleBreaks(s, inst).empty());
    CHECK(AllJustified(CheckArmstrong(s, inst)));
  }
}

TEST_CASE("backends agree") {
  auto highs = MakeHighsBackend();
  auto enumerate = MakeEnumerationBackend();
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    const PoolInstance inst = SynthInstance(SynthProfile::kTiny, seed);
    CAPTURE(seed);
    for (ArmstrongMode mode : {ArmstrongMode::kApproximate, ArmstrongMode::kExact}) {
      const TwoStageOutcome a = SolveTwoStage(inst, mode, 60, *highs);
      const TwoStageOutcome b = SolveTwoStage(inst, mode, 60, *enumerate);
      REQUIRE(a.has_schedule());
      REQUIRE(b.has_schedule());
      CHECK(a.stage1.objective == b.stage1.objective);
      CHECK(a.stage2.objective == b.stage2.objective);
    }
  }
}

TEST_CASE("approximate mode keeps every nurse at or below minimum") {
  auto backend = MakeHighsBackend();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PoolInstance inst = SynthInstance(SynthProfile::kSmall, seed);
    const TwoStageOutcome out = SolveTwoStage(inst, ArmstrongMode::kApproximate, 60, *backend);
    REQUIRE(out.has_schedule());
    const Schedule& s = *out.stage2.schedule;
    CHECK(GeneralRuleBreaks(s, inst).empty());
    for (int i = 0; i < inst.nurse_count(); ++i) {
      for (int k = 0; k < inst.calendar.blocks(); ++k) {
        CHECK(s.ShiftsInBlock(i, k) <= inst.minimums[i][k]);
      }
    }
  }
}

TEST_CASE("three-nurse pool with full availability fills everything at top preference") {
  // 31 units over the default cycle; every available cell is most preferred.
  const CycleCalendar cal = CycleCalendar::Default();
  std::vector<std::vector<int>> demand(3, std::vector<int>(42, 0));
  int placed = 0;
  for (int k = 0; k < 3 && placed < 31; ++k) {
    for (int j = 0; j < 42 && placed < 31; j += 4) {
      demand[k][j] = 1;
      ++placed;
    }
  }
  REQUIRE(placed == 31);
  const PoolInstance inst = MakeInstance(cal, 3, demand, {6, 4, 3});
  auto backend = MakeHighsBackend();
  const TwoStageOutcome out = SolveTwoStage(inst, ArmstrongMode::kApproximate, 60, *backend);
  REQUIRE(out.has_schedule());
  CHECK(out.stage1.objective == 0);
  const Schedule& s = *out.stage2.schedule;
  CHECK(s.TotalUnfilled() == 0);
  CHECK(Preference(s, inst) == 3 * s.TotalAssigned());
}
