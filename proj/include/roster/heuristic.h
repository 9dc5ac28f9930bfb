#ifndef ROSTER_HEURISTIC_H_
#define ROSTER_HEURISTIC_H_

#include <string>
#include <string_view>
#include <vector>

#include "roster/domain.h"

namespace roster {

enum class SwapBranch {
  kSeniorTwoAhead,      // senior above minimum, junior at or above, gap > 1
  kJuniorBelowMinimum,  // senior above minimum, junior below
  kJuniorAhead,         // both above minimum, junior ahead of senior
  kSeniorAtOrBelow,     // junior above minimum and senior at it, or senior below
};

std::string_view SwapBranchName(SwapBranch branch);

enum class RepairEventKind { kFill, kSwap };

struct SwapEvent {
  RepairEventKind kind = RepairEventKind::kSwap;
  int block = 0;
  int shift = 0;
  int from_nurse = -1;  // -1 for fills
  int to_nurse = 0;
  SwapBranch branch = SwapBranch::kSeniorTwoAhead;  // swaps only
  int iteration = 0;    // swap pass, 1-based; 0 for the initial fill
};

struct HeuristicResult {
  Schedule schedule;
  std::vector<SwapEvent> log;
  int iterations_used = 0;    // check-and-reassign passes run
  int passes_with_swaps = 0;
  // Most passes with swaps inside a single fill round's swap loop.
  int max_round_swap_passes = 0;
  bool hit_iteration_limit = false;
  // Fill rounds: the first greedy fill plus one for each later refill.
  int fill_rounds = 0;
};

// Assigns unfilled units to the most senior eligible nurse, scanning blocks,
// then shifts, then nurses, refreshing eligibility after every assignment.
Schedule GreedyFill(const Schedule& start, const PoolInstance& instance,
                    std::vector<SwapEvent>* log = nullptr, int iteration = 0);

// Full passes of pairwise single-unit swaps until a pass makes none or the
// pass limit is reached.
HeuristicResult CheckAndReassign(const Schedule& schedule,
                                 const PoolInstance& instance,
                                 int iteration_limit);

// Greedy fill followed by check-and-reassign. Swaps can free a nurse for a
// still-unfilled shift, so fill and reassign alternate until no unfilled
// unit has an eligible nurse, within the same pass budget.
HeuristicResult RunRepair(const Schedule& ip_output, const PoolInstance& instance,
                          int iteration_limit = 50);

// One JSON object per line, in log order.
std::string SwapLogToJsonLines(const std::vector<SwapEvent>& log,
                               const PoolInstance& instance);

// Units removed from a nurse by a swap and later handed back to the same
// nurse, as (nurse, block, shift) triples; empty when the property holds.
std::vector<std::vector<int>> NoReturnViolations(const std::vector<SwapEvent>& log);

}  // namespace roster

#endif  // ROSTER_HEURISTIC_H_
