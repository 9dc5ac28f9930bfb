#include "roster/heuristic.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "roster/armstrong.h"

namespace roster {
namespace {

struct State {
  DeltaTable deltas;
  EligibilityFlags flags;
};

State Refresh(const Schedule& s, const PoolInstance& inst) {
  State st;
  st.deltas = ComputeDeltas(s, inst.minimums);
  st.flags = ComputeEligibility(s, inst, st.deltas);
  return st;
}

bool AnyFillable(const Schedule& s, const PoolInstance& inst, const State& st) {
  for (int k = 0; k < s.blocks(); ++k) {
    for (int j = 0; j < s.shifts_per_block(); ++j) {
      if (s.unfilled(k, j) <= 0) continue;
      for (int i = 0; i < s.nurses(); ++i) {
        if (st.flags.eligible(i, k, j)) return true;
      }
    }
  }
  (void)inst;
  return false;
}

// One full check-and-reassign pass; returns the number of swaps.
int SwapPass(Schedule& s, const PoolInstance& inst, int iteration,
             std::vector<SwapEvent>& log) {
  int swaps = 0;
  State st = Refresh(s, inst);
  const int n = s.nurses();
  auto record = [&](int k, int j, int from, int to, SwapBranch branch) {
    s.Move(from, to, k, j);
    log.push_back({RepairEventKind::kSwap, k, j, from, to, branch, iteration});
    ++swaps;
    st = Refresh(s, inst);
  };
  for (int k = 0; k < s.blocks(); ++k) {
    for (int j = 0; j < s.shifts_per_block(); ++j) {
      if (inst.demand(k, j) <= 0) continue;
      for (int a = 0; a + 1 < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          if (s.assigned(a, k, j) && st.flags.eligible(b, k, j)) {
            const int da = st.deltas.delta(a, k), db = st.deltas.delta(b, k);
            if (da > 0 && db >= 0) {
              if (da - db > 1) record(k, j, a, b, SwapBranch::kSeniorTwoAhead);
            } else if (da > 0 && db < 0) {
              record(k, j, a, b, SwapBranch::kJuniorBelowMinimum);
            }
          }
          if (s.assigned(b, k, j) && st.flags.eligible(a, k, j)) {
            const int da = st.deltas.delta(a, k), db = st.deltas.delta(b, k);
            if (db > 0 && da > 0) {
              if (db - da > 0) record(k, j, b, a, SwapBranch::kJuniorAhead);
            } else if ((db > 0 && da == 0) || da < 0) {
              record(k, j, b, a, SwapBranch::kSeniorAtOrBelow);
            }
          }
        }
      }
    }
  }
  return swaps;
}

}  // namespace

std::string_view SwapBranchName(SwapBranch branch) {
  switch (branch) {
    case SwapBranch::kSeniorTwoAhead: return "senior_two_ahead";
    case SwapBranch::kJuniorBelowMinimum: return "junior_below_minimum";
    case SwapBranch::kJuniorAhead: return "junior_ahead";
    case SwapBranch::kSeniorAtOrBelow: return "senior_at_or_below";
  }
  return "unknown";
}

Schedule GreedyFill(const Schedule& start, const PoolInstance& instance,
                    std::vector<SwapEvent>* log, int iteration) {
  Schedule s = start;
  State st = Refresh(s, instance);
  for (int k = 0; k < s.blocks(); ++k) {
    for (int j = 0; j < s.shifts_per_block(); ++j) {
      for (int i = 0; i < s.nurses(); ++i) {
        if (s.unfilled(k, j) > 0 && st.flags.eligible(i, k, j)) {
          s.Assign(i, k, j);
          if (log != nullptr) {
            log->push_back({RepairEventKind::kFill, k, j, -1, i,
                            SwapBranch::kSeniorTwoAhead, iteration});
          }
          st = Refresh(s, instance);
        }
      }
    }
  }
  return s;
}

HeuristicResult CheckAndReassign(const Schedule& schedule,
                                 const PoolInstance& instance,
                                 int iteration_limit) {
  HeuristicResult out;
  out.schedule = schedule;
  while (out.iterations_used < iteration_limit) {
    ++out.iterations_used;
    const int swaps = SwapPass(out.schedule, instance, out.iterations_used, out.log);
    if (swaps == 0) return out;
    ++out.passes_with_swaps;
    out.max_round_swap_passes = out.passes_with_swaps;
  }
  out.hit_iteration_limit = true;
  return out;
}

HeuristicResult RunRepair(const Schedule& ip_output, const PoolInstance& instance,
                          int iteration_limit) {
  HeuristicResult out;
  out.schedule = GreedyFill(ip_output, instance, &out.log, 0);
  out.fill_rounds = 1;
  while (true) {
    bool clean_pass = false;
    int round_passes = 0;
    while (out.iterations_used < iteration_limit) {
      ++out.iterations_used;
      const int swaps =
          SwapPass(out.schedule, instance, out.iterations_used, out.log);
      if (swaps == 0) {
        clean_pass = true;
        break;
      }
      ++out.passes_with_swaps;
      out.max_round_swap_passes = std::max(out.max_round_swap_passes, ++round_passes);
    }
    if (!clean_pass) {
      out.hit_iteration_limit = true;
      return out;
    }
    if (!AnyFillable(out.schedule, instance, Refresh(out.schedule, instance))) {
      return out;
    }
    out.schedule =
        GreedyFill(out.schedule, instance, &out.log, out.iterations_used);
    ++out.fill_rounds;
  }
}

std::string SwapLogToJsonLines(const std::vector<SwapEvent>& log,
                               const PoolInstance& instance) {
  std::string out;
  for (const SwapEvent& e : log) {
    nlohmann::ordered_json j;
    j["kind"] = e.kind == RepairEventKind::kFill ? "fill" : "swap";
    j["iteration"] = e.iteration;
    j["block"] = e.block + 1;
    j["shift"] = e.shift + 1;
    j["label"] = instance.calendar.ShiftLabel(e.block, e.shift);
    if (e.from_nurse >= 0) {
      j["from"] = instance.nurses[e.from_nurse].id;
    } else {
      j["from"] = nullptr;
    }
    j["to"] = instance.nurses[e.to_nurse].id;
    if (e.kind == RepairEventKind::kSwap) j["branch"] = SwapBranchName(e.branch);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::vector<int>> NoReturnViolations(const std::vector<SwapEvent>& log) {
  std::set<std::tuple<int, int, int>> removed;
  std::vector<std::vector<int>> out;
  for (const SwapEvent& e : log) {
    const auto to_key = std::make_tuple(e.to_nurse, e.block, e.shift);
    if (removed.count(to_key)) out.push_back({e.to_nurse, e.block, e.shift});
    if (e.kind == RepairEventKind::kSwap) {
      removed.insert(std::make_tuple(e.from_nurse, e.block, e.shift));
    }
  }
  return out;
}

}  // namespace roster
