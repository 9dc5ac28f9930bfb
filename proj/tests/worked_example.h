// Nine-nurse pool on the default calendar whose third block carries the
// totals of the worked summary example: minimums 8/8/8/6/6/4/4/3/3 and
// assigned 4/10/8/7/7/5/5/4/4. Demand equals what is staffed, so nothing is
// unfilled. Nurse 1 reaches the weekend cap in the third block; its only
// other available cells there are weekend shifts, which carry W codes.
#ifndef ROSTER_TESTS_WORKED_EXAMPLE_H_
#define ROSTER_TESTS_WORKED_EXAMPLE_H_

#include <utility>
#include <vector>

#include "roster/calendar.h"
#include "roster/domain.h"

namespace roster::testing {

struct WorkedExample {
  PoolInstance instance;
  Schedule schedule;
};

inline const std::vector<int>& WorkedExampleMinimums() {
  static const std::vector<int> g{8, 8, 8, 6, 6, 4, 4, 3, 3};
  return g;
}

inline const std::vector<int>& WorkedExampleAssigned() {
  static const std::vector<int> a{4, 10, 8, 7, 7, 5, 5, 4, 4};
  return a;
}

// 0-based shifts nurse 1 holds per block; the first two blocks are all
// weekend shifts (4 + 4), the third adds two more for a total of 10.
inline std::vector<int> WorkedExampleNurseOneShifts(int block) {
  if (block < 2) return {10, 13, 31, 34};
  return {0, 13, 20, 34};
}

// Weekend cells nurse 1 could otherwise work in the third block.
inline std::vector<int> WorkedExampleWeekendEvidence() { return {10, 31}; }

// Zero-demand cells opened to the juniors so the grid shows D codes.
inline std::vector<int> WorkedExampleDemandEvidence() { return {40, 41}; }

inline WorkedExample BuildWorkedExample() {
  const CycleCalendar cal = CycleCalendar::Default();
  const int n = 9, r = cal.blocks(), q = cal.shifts_per_block();
  const auto& g = WorkedExampleMinimums();
  const auto& a = WorkedExampleAssigned();

  std::vector<std::vector<std::vector<int>>> held(n, std::vector<std::vector<int>>(r));
  for (int k = 0; k < r; ++k) {
    held[0][k] = WorkedExampleNurseOneShifts(k);
    for (int i = 1; i < n; ++i) {
      const int offset = i % 4;
      for (int c = 0; c < a[i]; ++c) held[i][k].push_back(offset + 4 * c);
    }
  }

  PoolInstance inst;
  inst.pool.id = "worked_example";
  inst.pool.unit = "demo";
  inst.calendar = cal;
  for (int i = 0; i < n; ++i) {
    inst.nurses.push_back({"N" + std::to_string(i + 1), i + 1, Designation::kRN});
  }
  inst.demand = DemandMatrix(r, q, 0);
  inst.preferences = AvailabilityPreference(n, r, q);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < r; ++k) {
      for (int j : held[i][k]) {
        inst.demand(k, j) += 1;
        // Scores cycle 1..3 so the preference summary is not uniform.
        inst.preferences.set_score(i, k, j, 1 + (i + j) % 3);
      }
    }
  }
  for (int j : WorkedExampleWeekendEvidence()) inst.preferences.set_score(0, 2, j, 2);
  for (int i = 3; i < n; ++i) {
    for (int j : WorkedExampleDemandEvidence()) inst.preferences.set_score(i, 2, j, 3);
  }
  inst.carry_over.assign(n, {});
  inst.minimums.assign(n, std::vector<int>(r));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < r; ++k) inst.minimums[i][k] = g[i];
  }
  inst.max_shifts_per_block = 10;
  inst.max_weekend_shifts = 10;
  inst.Validate();

  Schedule s = Schedule::Empty(n, inst.demand);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < r; ++k) {
      for (int j : held[i][k]) s.Assign(i, k, j);
    }
  }
  return {std::move(inst), std::move(s)};
}

}  // namespace roster::testing

#endif  // ROSTER_TESTS_WORKED_EXAMPLE_H_
