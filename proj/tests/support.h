// Helpers shared by the unit tests. The checkers here are written against
// the rule definitions directly and do not call the library's rule code.
#ifndef ROSTER_TESTS_SUPPORT_H_
#define ROSTER_TESTS_SUPPORT_H_

#include <string>
#include <vector>

#include "roster/armstrong.h"
#include "roster/domain.h"

namespace roster::testing {

// n nurses, all available at score 3, with the given demand and minimums.
inline PoolInstance MakeInstance(const CycleCalendar& cal, int nurses,
                                 const std::vector<std::vector<int>>& demand,
                                 const std::vector<int>& minimums, int gmax = 10,
                                 int weekend_cap = 10) {
  PoolInstance inst;
  inst.calendar = cal;
  for (int i = 0; i < nurses; ++i) {
    inst.nurses.push_back({"N" + std::to_string(i + 1), i + 1, Designation::kRN});
  }
  inst.demand = DemandMatrix(cal.blocks(), cal.shifts_per_block(), 0);
  for (int k = 0; k < cal.blocks(); ++k) {
    for (int j = 0; j < cal.shifts_per_block(); ++j) inst.demand(k, j) = demand[k][j];
  }
  inst.preferences = AvailabilityPreference(nurses, cal.blocks(), cal.shifts_per_block());
  for (int i = 0; i < nurses; ++i) {
    for (int k = 0; k < cal.blocks(); ++k) {
      for (int j = 0; j < cal.shifts_per_block(); ++j) inst.preferences.set_score(i, k, j, 3);
    }
  }
  inst.carry_over.assign(nurses, {});
  inst.minimums.assign(nurses, std::vector<int>(cal.blocks(), 0));
  for (int i = 0; i < nurses; ++i) {
    for (int k = 0; k < cal.blocks(); ++k) inst.minimums[i][k] = minimums[i];
  }
  inst.max_shifts_per_block = gmax;
  inst.max_weekend_shifts = weekend_cap;
  return inst;
}

// Independent general-rule check: supply identity, no overbooking,
// availability, no two shifts within two positions (carry-over included),
// block maximum and weekend cap.
inline std::vector<std::string> GeneralRuleBreaks(const Schedule& s, const PoolInstance& inst) {
  std::vector<std::string> out;
  const int n = inst.nurse_count();
  const int r = inst.calendar.blocks();
  const int q = inst.calendar.shifts_per_block();
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < q; ++j) {
      int staff = 0;
      for (int i = 0; i < n; ++i) staff += s.assigned(i, k, j);
      if (staff > inst.demand(k, j)) out.push_back("overbooking");
      if (s.unfilled(k, j) < 0 || staff + s.unfilled(k, j) != inst.demand(k, j)) {
        out.push_back("supply");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> worked;  // global positions, carry-over at -2 and -1
    if (inst.carry_over[i].second_last) worked.push_back(-2);
    if (inst.carry_over[i].last) worked.push_back(-1);
    int weekend = 0;
    for (int k = 0; k < r; ++k) {
      int count = 0;
      for (int j = 0; j < q; ++j) {
        if (!s.assigned(i, k, j)) continue;
        ++count;
        worked.push_back(k * q + j);
        if (!inst.preferences.available(i, k, j)) out.push_back("availability");
        const int day = j / inst.calendar.shifts_per_day();
        if (inst.calendar.IsWeekendDay(k, day)) ++weekend;
      }
      if (count > inst.max_shifts_per_block) out.push_back("maxout");
    }
    if (weekend > inst.max_weekend_shifts) out.push_back("weekend");
    for (size_t a = 1; a < worked.size(); ++a) {
      if (worked[a] - worked[a - 1] <= 2) out.push_back("back_to_back");
    }
  }
  return out;
}

}  // namespace roster::testing

#endif  // ROSTER_TESTS_SUPPORT_H_
