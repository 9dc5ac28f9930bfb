#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <sstream>

#include "roster/armstrong.h"
#include "roster/error.h"
#include "roster/synth.h"
#include "support.h"

using namespace roster;
using roster::testing::GeneralRuleBreaks;
using roster::testing::MakeInstance;

namespace {

// Random schedule that meets the general rules: visit cells in a shuffled
// order and keep each assignment only if no rule breaks.
Schedule RandomFeasibleSchedule(const PoolInstance& inst, std::mt19937_64& rng, double keep) {
  Schedule s = Schedule::Empty(inst.nurse_count(), inst.demand);
  std::vector<std::array<int, 3>> cells;
  for (int i = 0; i < inst.nurse_count(); ++i) {
    for (int k = 0; k < inst.calendar.blocks(); ++k) {
      for (int j = 0; j < inst.calendar.shifts_per_block(); ++j) cells.push_back({i, k, j});
    }
  }
  std::shuffle(cells.begin(), cells.end(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [i, k, j] : cells) {
    if (s.unfilled(k, j) <= 0 || u(rng) > keep) continue;
    s.Assign(i, k, j);
    if (!GeneralRuleBreaks(s, inst).empty()) s.Unassign(i, k, j);
  }
  return s;
}

}  // namespace

TEST_CASE("minimums from the tier chart") {
  const TierChart chart = TierChart::Default();
  const NurseBlockGrid g = AssignMinimums(9, 3, chart);
  const std::vector<int> worked_example{8, 8, 8, 6, 6, 4, 4, 3, 3};
  for (int i = 0; i < 9; ++i) {
    for (int k = 0; k < 3; ++k) CHECK(g[i][k] == worked_example[i]);
  }
  const NurseBlockGrid g7 = AssignMinimums(7, 3, chart);
  CHECK(g7[0][0] == 8);
  CHECK(g7[3][2] == 6);
  CHECK(g7[6][1] == 3);

  TierChart single = chart;
  single.SetColumn(1, {{1, 8}});
  CHECK(AssignMinimums(1, 3, single)[0] == std::vector<int>{8, 8, 8});

  TierChart without;
  without.SetColumn(7, chart.Column(7));
  try {
    AssignMinimums(9, 3, without);
    FAIL("expected an error");
  } catch (const RosterError& e) {
    CHECK(e.code() == ErrorCode::kUnknownPoolSize);
  }
}

TEST_CASE("tier chart csv") {
  const TierChart chart = TierChart::Default();
  std::istringstream in(chart.ToCsv());
  const TierChart back = TierChart::FromCsv(in, "memory");
  CHECK(back.PoolSizes() == chart.PoolSizes());
  for (int size : chart.PoolSizes()) CHECK(back.Column(size) == chart.Column(size));

  const TierChart shipped = TierChart::LoadCsv(ROSTER_SOURCE_DIR "/data/tier_chart.csv");
  CHECK(shipped.Column(9) == chart.Column(9));
  CHECK(shipped.Column(7) == chart.Column(7));

  std::istringstream bad("pool_size,seniority_rank,tier,min_shifts\n2,1,1,4\n2,2,1,6\n");
  CHECK_THROWS_AS(TierChart::FromCsv(bad, "bad"), RosterError);
  CHECK_THROWS_AS(TierChart().SetColumn(2, {{1, 8}}), RosterError);
}

TEST_CASE("deltas") {
  const CycleCalendar cal = CycleCalendar::Build(1, 14, 3, Weekday::kWednesday);
  std::vector<std::vector<int>> demand(1, std::vector<int>(42, 0));
  for (int j = 0; j < 42; j += 3) demand[0][j] = 1;
  PoolInstance inst = MakeInstance(cal, 3, demand, {8, 8, 3});
  Schedule s = Schedule::Empty(3, inst.demand);
  for (int t = 0; t < 4; ++t) s.Assign(0, 0, 3 * t);
  for (int t = 4; t < 14; ++t) s.Assign(1, 0, 3 * t);
  const DeltaTable d = ComputeDeltas(s, inst.minimums);
  CHECK(d.delta(0, 0) == -4);
  CHECK_FALSE(d.theta(0, 0));
  CHECK_FALSE(d.pi(0, 0));
  CHECK(d.delta(1, 0) == 2);
  CHECK(d.theta(1, 0));
  CHECK(d.pi(1, 0));
  CHECK(d.delta(2, 0) == -3);
}

TEST_CASE("eligibility flags") {
  const CycleCalendar cal = CycleCalendar::Build(2, 7, 3, Weekday::kMonday);
  std::vector<std::vector<int>> demand(2, std::vector<int>(21, 1));
  PoolInstance inst = MakeInstance(cal, 2, demand, {3, 2}, 4, 2);
  Schedule s = Schedule::Empty(2, inst.demand);

  SUBCASE("back-to-back window spans the block boundary") {
    s.Assign(0, 0, 20);  // last shift of block 1
    const DeltaTable d = ComputeDeltas(s, inst.minimums);
    const EligibilityFlags f = ComputeEligibility(s, inst, d);
    CHECK(f.backtoback(0, 0, 17) == 1);
    CHECK(f.backtoback(0, 0, 18) == 0);
    CHECK(f.backtoback(0, 0, 19) == 0);
    CHECK(f.backtoback(0, 0, 20) == 0);
    CHECK(f.backtoback(0, 1, 0) == 0);
    CHECK(f.backtoback(0, 1, 1) == 0);
    CHECK(f.backtoback(0, 1, 2) == 1);
    CHECK(f.backtoback(1, 1, 0) == 1);
  }
  SUBCASE("carry-over blocks the first shifts") {
    inst.carry_over[1].last = true;
    const EligibilityFlags f = ComputeEligibility(s, inst, ComputeDeltas(s, inst.minimums));
    CHECK(f.backtoback(1, 0, 0) == 0);
    CHECK(f.backtoback(1, 0, 1) == 0);
    CHECK(f.backtoback(1, 0, 2) == 1);
    inst.carry_over[1] = {true, false};
    const EligibilityFlags g = ComputeEligibility(s, inst, ComputeDeltas(s, inst.minimums));
    CHECK(g.backtoback(1, 0, 0) == 0);
    CHECK(g.backtoback(1, 0, 1) == 1);
  }
  SUBCASE("block maximum") {
    for (int j : {0, 3, 6, 9}) s.Assign(0, 0, j);
    const EligibilityFlags f = ComputeEligibility(s, inst, ComputeDeltas(s, inst.minimums));
    for (int j = 0; j < 21; ++j) CHECK(f.maxout(0, 0, j) == 0);
    for (int j = 0; j < 21; ++j) CHECK(f.maxout(0, 1, j) == 1);
    CHECK(f.is_blocked(0, 0));
  }
  SUBCASE("weekend cap") {
    // Monday start: days 5 and 6 are the weekend.
    s.Assign(0, 0, 15);
    s.Assign(0, 0, 18);
    const EligibilityFlags f = ComputeEligibility(s, inst, ComputeDeltas(s, inst.minimums));
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 21; ++j) {
        CHECK(f.weekend(0, k, j) == (cal.IsWeekendShift(k, j) ? 0 : 1));
        CHECK(f.weekend(1, k, j) == 1);
      }
    }
  }
  SUBCASE("unavailable cell") {
    inst.preferences.set_score(1, 1, 4, 0);
    const EligibilityFlags f = ComputeEligibility(s, inst, ComputeDeltas(s, inst.minimums));
    CHECK(f.available(1, 1, 4) == 0);
    CHECK_FALSE(f.eligible(1, 1, 4));
    CHECK(f.eligible(1, 1, 5));
  }
}

TEST_CASE("eligibility consistency and blocked soundness on random schedules") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const PoolInstance inst = SynthInstance(seed % 2 ? SynthProfile::kSmall : SynthProfile::kTiny, seed);
    for (double keep : {0.3, 0.7, 1.0}) {
      Schedule s = RandomFeasibleSchedule(inst, rng, keep);
      REQUIRE(GeneralRuleBreaks(s, inst).empty());
      const DeltaTable d = ComputeDeltas(s, inst.minimums);
      const EligibilityFlags f = ComputeEligibility(s, inst, d);
      for (int i = 0; i < inst.nurse_count(); ++i) {
        for (int k = 0; k < inst.calendar.blocks(); ++k) {
          CHECK(d.delta(i, k) + inst.minimums[i][k] == s.ShiftsInBlock(i, k));
          bool augmentable = false;
          for (int j = 0; j < inst.calendar.shifts_per_block(); ++j) {
            if (s.assigned(i, k, j) || s.unfilled(k, j) <= 0) {
              continue;
            }
            s.Assign(i, k, j);
            const bool legal = GeneralRuleBreaks(s, inst).empty();
            s.Unassign(i, k, j);
            augmentable = augmentable || legal;
            if (f.eligible(i, k, j)) CHECK(legal);
            ++checked;
          }
          if (f.is_blocked(i, k)) CHECK_FALSE(augmentable);
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("seniority rule check") {
  const CycleCalendar cal = CycleCalendar::Build(1, 7, 3, Weekday::kMonday);

  SUBCASE("all deltas zero") {
    std::vector<std::vector<int>> demand(1, std::vector<int>(21, 0));
    demand[0][0] = demand[0][9] = demand[0][3] = 1;
    PoolInstance inst = MakeInstance(cal, 2, demand, {2, 1});
    Schedule s = Schedule::Empty(2, inst.demand);
    s.Assign(0, 0, 0);
    s.Assign(0, 0, 9);
    s.Assign(1, 0, 3);
    CHECK(CheckArmstrong(s, inst).empty());
  }

  SUBCASE("senior two ahead with an eligible junior") {
    std::vector<std::vector<int>> demand(1, std::vector<int>(21, 0));
    for (int j : {0, 6, 12, 3}) demand[0][j] = 1;
    PoolInstance inst = MakeInstance(cal, 2, demand, {1, 1});
    Schedule s = Schedule::Empty(2, inst.demand);
    for (int j : {0, 6, 12}) s.Assign(0, 0, j);
    s.Assign(1, 0, 3);
    const auto v = CheckArmstrong(s, inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == ArmstrongRule::k2);
    CHECK(v[0].disadvantaged == 1);
    CHECK_FALSE(v[0].justified);

    // The violation is unjustified because some senior-held unit can move
    // to the junior without breaking a general rule.
    bool movable = false;
    for (int j = 0; j < 21; ++j) {
      if (!s.assigned(0, 0, j)) continue;
      Schedule t = s;
      t.Move(0, 1, 0, j);
      movable = movable || GeneralRuleBreaks(t, inst).empty();
    }
    CHECK(movable);
  }

  SUBCASE("junior below minimum while a senior is above") {
    std::vector<std::vector<int>> demand(1, std::vector<int>(21, 0));
    for (int j : {0, 6}) demand[0][j] = 1;
    PoolInstance inst = MakeInstance(cal, 2, demand, {1, 1});
    Schedule s = Schedule::Empty(2, inst.demand);
    s.Assign(0, 0, 0);
    s.Assign(0, 0, 6);
    const auto v = CheckArmstrong(s, inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == ArmstrongRule::k1B);
    CHECK(v[0].disadvantaged == 1);
    CHECK_FALSE(v[0].justified);

    // Make the junior unavailable on both shifts: now justified.
    inst.preferences.set_score(1, 0, 0, 0);
    inst.preferences.set_score(1, 0, 6, 0);
    const auto w = CheckArmstrong(s, inst);
    REQUIRE(w.size() == 1);
    CHECK(w[0].justified);
  }

  SUBCASE("senior below minimum while a junior works") {
    std::vector<std::vector<int>> demand(1, std::vector<int>(21, 0));
    demand[0][3] = 1;
    demand[0][4] = 1;
    PoolInstance inst = MakeInstance(cal, 2, demand, {2, 1});
    Schedule s = Schedule::Empty(2, inst.demand);
    s.Assign(0, 0, 3);
    s.Assign(1, 0, 4);
    const auto v = CheckArmstrong(s, inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == ArmstrongRule::k1A);
    CHECK(v[0].disadvantaged == 0);
    // The only other shift is adjacent to the senior's own, so B blocks it.
    CHECK(v[0].justified);
    bool saw_b = false;
    for (const auto& e : v[0].evidence) {
      if (e.shift == 4) saw_b = e.codes.find('B') != std::string::npos;
    }
    CHECK(saw_b);
  }
}
