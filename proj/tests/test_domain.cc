#include <doctest.h>

#include <functional>
#include <set>

#include "roster/calendar.h"
#include "roster/domain.h"
#include "roster/error.h"
#include "support.h"

using namespace roster;

namespace {

// 0-based weekend days of a block, by stepping through weekdays from the
// first day of the block.
std::vector<int> WeekendDaysByCounting(int block, int days, int first_weekday) {
  std::vector<int> out;
  for (int d = 0; d < days; ++d) {
    const int wd = (first_weekday + block * days + d) % 7;  // 0 = Monday
    if (wd == 5 || wd == 6) out.push_back(d);
  }
  return out;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RosterError& e) {
    return e.code();
  }
  FAIL("expected a RosterError");
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("default calendar layout") {
  const CycleCalendar cal = CycleCalendar::Build(3, 14, 3, Weekday::kWednesday);
  CHECK(cal.shifts_per_block() == 42);
  CHECK(cal.total_shifts() == 126);
  const std::vector<int> expected = WeekendDaysByCounting(0, 14, 2);
  CHECK(expected == std::vector<int>{3, 4, 10, 11});  // days 4, 5, 11, 12
  int sets = 0;
  for (int k = 0; k < 3; ++k) {
    CHECK(cal.WeekendDays(k) == WeekendDaysByCounting(k, 14, 2));
    CHECK(cal.WeekendDaysPerBlock(k) == 4);
    sets += static_cast<int>(cal.WeekendShiftSets(k).size());
  }
  CHECK(sets == 12);
  CHECK(cal == CycleCalendar::Default());
}

TEST_CASE("all-weekend block and Monday start") {
  const CycleCalendar sat = CycleCalendar::Build(1, 2, 3, Weekday::kSaturday);
  CHECK(sat.shifts_per_block() == 6);
  for (int j = 0; j < 6; ++j) CHECK(sat.IsWeekendShift(0, j));
  std::set<int> covered;
  for (const auto& l : sat.WeekendShiftSets(0)) covered.insert(l.begin(), l.end());
  CHECK(covered.size() == 6);

  const CycleCalendar mon = CycleCalendar::Build(3, 14, 3, Weekday::kMonday);
  CHECK(mon.WeekendDays(0) == std::vector<int>{5, 6, 12, 13});  // days 6, 7, 13, 14
  CHECK(mon.WeekendDays(0) == WeekendDaysByCounting(0, 14, 0));
}

TEST_CASE("calendar rejects bad counts") {
  CHECK(CodeOf([] { CycleCalendar::Build(0, 14, 3, Weekday::kWednesday); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { CycleCalendar::Build(3, 0, 3, Weekday::kWednesday); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { CycleCalendar::Build(3, 14, -1, Weekday::kWednesday); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("calendar properties over several layouts") {
  for (int first = 0; first < 7; ++first) {
    for (int days : {7, 10, 14}) {
      for (int spd : {1, 2, 3}) {
        const CycleCalendar cal = CycleCalendar::Build(3, days, spd, static_cast<Weekday>(first));
        for (int j = 0; j < cal.shifts_per_block(); ++j) {
          const DaySlot ds = cal.Decode(j);
          CHECK(cal.ShiftIndex(ds.day, ds.slot) == j);
        }
        for (int k = 0; k < 3; ++k) {
          std::set<int> from_sets;
          size_t total = 0;
          for (const auto& l : cal.WeekendShiftSets(k)) {
            CHECK(static_cast<int>(l.size()) == spd);
            total += l.size();
            from_sets.insert(l.begin(), l.end());
          }
          CHECK(from_sets.size() == total);  // pairwise disjoint
          std::set<int> weekend_shifts;
          for (int j = 0; j < cal.shifts_per_block(); ++j) {
            if (cal.IsWeekendShift(k, j)) weekend_shifts.insert(j);
          }
          CHECK(from_sets == weekend_shifts);
          CHECK(static_cast<int>(weekend_shifts.size()) == cal.WeekendDaysPerBlock(k) * spd);
        }
      }
    }
  }
}

TEST_CASE("part-time demand derivation") {
  ShiftGrid<int> total(1, 3, 0), ft(1, 3, 0), leave(1, 3, 0);
  total(0, 0) = 5; ft(0, 0) = 3; leave(0, 0) = 1;
  total(0, 1) = 2; ft(0, 1) = 2;
  const DemandMatrix d = DerivePartTimeDemand(total, ft, leave);
  CHECK(d(0, 0) == 3);
  CHECK(d(0, 1) == 0);
  CHECK(d(0, 2) == 0);
  total(0, 2) = 1; ft(0, 2) = 2;
  CHECK(CodeOf([&] { DerivePartTimeDemand(total, ft, leave); }) == ErrorCode::kNegativeDemand);
}

TEST_CASE("preference normalisation") {
  CHECK(NormalizeScore(1, PreferenceDirection::kDescending) == 3);
  CHECK(NormalizeScore(0, PreferenceDirection::kDescending) == 0);
  CHECK(NormalizeScore(0, PreferenceDirection::kAscending) == 0);
  CHECK(NormalizeScore(3, PreferenceDirection::kAscending) == 3);
  for (int s = 1; s <= 3; ++s) {
    const int once = NormalizeScore(s, PreferenceDirection::kDescending);
    CHECK(once >= 1);
    CHECK(once <= 3);
    CHECK(NormalizeScore(once, PreferenceDirection::kDescending) == s);
  }
  CHECK(CodeOf([] { NormalizeScore(4, PreferenceDirection::kAscending); }) ==
        ErrorCode::kScoreOutOfRange);
  NurseShiftGrid<int> raw(1, 1, 2, 0);
  raw(0, 0, 0) = 1;
  const AvailabilityPreference p = NormalizePreferences(raw, PreferenceDirection::kDescending);
  CHECK(p.score(0, 0, 0) == 3);
  CHECK(p.available(0, 0, 0));
  CHECK_FALSE(p.available(0, 0, 1));
}

TEST_CASE("instance validation") {
  const CycleCalendar cal = CycleCalendar::Build(1, 2, 3, Weekday::kSaturday);
  const std::vector<std::vector<int>> demand{{1, 0, 1, 0, 1, 0}};
  PoolInstance ok = testing::MakeInstance(cal, 2, demand, {2, 1});
  CHECK_NOTHROW(ok.Validate());

  PoolInstance dup = ok;
  dup.nurses[1].seniority_rank = 1;
  CHECK(CodeOf([&] { dup.Validate(); }) == ErrorCode::kDuplicateRank);

  PoolInstance gap = ok;
  gap.nurses[1].seniority_rank = 3;
  CHECK(CodeOf([&] { gap.Validate(); }) == ErrorCode::kRankGap);

  PoolInstance dims = ok;
  dims.demand = DemandMatrix(1, 5, 0);
  CHECK(CodeOf([&] { dims.Validate(); }) == ErrorCode::kDimensionMismatch);

  PoolInstance neg = ok;
  neg.demand(0, 2) = -1;
  CHECK(CodeOf([&] { neg.Validate(); }) == ErrorCode::kNegativeDemand);

  PoolInstance mins = ok;
  mins.minimums[1][0] = 3;
  CHECK(CodeOf([&] { mins.Validate(); }) == ErrorCode::kInconsistentMinimums);

  PoolInstance above = ok;
  above.max_shifts_per_block = 1;
  CHECK(CodeOf([&] { above.Validate(); }) == ErrorCode::kInconsistentMinimums);

  PoolInstance carry = ok;
  carry.carry_over[0] = {true, true};
  CHECK(CodeOf([&] { carry.Validate(); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("schedule mutations keep the supply identity") {
  DemandMatrix d(1, 4, 0);
  d(0, 0) = 2; d(0, 1) = 1; d(0, 3) = 1;
  Schedule s = Schedule::Empty(3, d);
  auto identity = [&] {
    for (int j = 0; j < 4; ++j) {
      if (s.StaffOnShift(0, j) + s.unfilled(0, j) != d(0, j)) return false;
    }
    return true;
  };
  CHECK(identity());
  s.Assign(0, 0, 0);
  s.Assign(1, 0, 0);
  CHECK(identity());
  CHECK(CodeOf([&] { s.Assign(2, 0, 0); }) == ErrorCode::kInternal);  // overbook
  CHECK(CodeOf([&] { s.Assign(0, 0, 2); }) == ErrorCode::kInternal);  // zero demand
  s.Move(1, 2, 0, 0);
  CHECK(identity());
  CHECK(s.assigned(2, 0, 0));
  s.Unassign(0, 0, 0);
  CHECK(identity());
  CHECK(s.TotalUnfilled() == 3);
  CHECK(s.TotalAssigned() == 1);
}
