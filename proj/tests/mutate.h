// Single-rule schedule mutations for exercising the verifier. Each mutation
// edits the raw assignment grid of an accepted schedule and names the rule
// the verifier must report.
#ifndef ROSTER_TESTS_MUTATE_H_
#define ROSTER_TESTS_MUTATE_H_

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "roster/domain.h"
#include "support.h"

namespace roster::testing {

enum class MutationKind {
  kOverbook,
  kBackToBack,
  kBlockMaximum,
  kWeekendCap,
  kUnavailable,
  kDeltaInversion,
};

inline constexpr MutationKind kAllMutations[] = {
    MutationKind::kOverbook,   MutationKind::kBackToBack,  MutationKind::kBlockMaximum,
    MutationKind::kWeekendCap, MutationKind::kUnavailable, MutationKind::kDeltaInversion,
};

inline std::string_view MutationName(MutationKind kind) {
  switch (kind) {
    case MutationKind::kOverbook: return "overbook";
    case MutationKind::kBackToBack: return "back_to_back";
    case MutationKind::kBlockMaximum: return "block_maximum";
    case MutationKind::kWeekendCap: return "weekend_cap";
    case MutationKind::kUnavailable: return "unavailable";
    case MutationKind::kDeltaInversion: return "delta_inversion";
  }
  return "?";
}

// Failure name the verifier must include. Delta inversions may surface as
// any of the three seniority rules, so the prefix is matched instead.
inline std::string_view ExpectedFailure(MutationKind kind) {
  switch (kind) {
    case MutationKind::kOverbook: return "overbooking";
    case MutationKind::kBackToBack: return "back_to_back";
    case MutationKind::kBlockMaximum: return "max_shifts_per_block";
    case MutationKind::kWeekendCap: return "weekend_cap";
    case MutationKind::kUnavailable: return "availability";
    case MutationKind::kDeltaInversion: return "armstrong_";
  }
  return "?";
}

inline bool NamesExpected(const std::vector<std::string>& names, MutationKind kind) {
  const std::string_view want = ExpectedFailure(kind);
  return std::any_of(names.begin(), names.end(),
                     [&](const std::string& n) { return n.rfind(want, 0) == 0; });
}

class Mutator {
 public:
  Mutator(const Schedule& base, const PoolInstance& inst, std::uint64_t seed)
      : inst_(inst),
        x_(base.assignment()),
        s_(base.unfilled_grid()),
        rng_(seed),
        n_(inst.nurse_count()),
        r_(inst.calendar.blocks()),
        q_(inst.calendar.shifts_per_block()) {}

  // nullopt when the base schedule offers no place for this mutation.
  std::optional<Schedule> Apply(MutationKind kind) {
    switch (kind) {
      case MutationKind::kOverbook: return Overbook();
      case MutationKind::kBackToBack: return BackToBack();
      case MutationKind::kBlockMaximum: return BlockMaximum();
      case MutationKind::kWeekendCap: return WeekendCap();
      case MutationKind::kUnavailable: return Unavailable();
      case MutationKind::kDeltaInversion: return DeltaInversion();
    }
    return std::nullopt;
  }

 private:
  int Pick(int bound) { return std::uniform_int_distribution<int>(0, bound - 1)(rng_); }

  Schedule Result() const { return Schedule::FromParts(x_, s_); }

  // Puts nurse i on (k, j) while keeping staff + unfilled equal to demand
  // where possible: consume unfilled demand, else displace another holder.
  void Place(int i, int k, int j) {
    x_(i, k, j) = 1;
    if (s_(k, j) > 0) {
      --s_(k, j);
      return;
    }
    for (int h = 0; h < n_; ++h) {
      if (h != i && x_(h, k, j)) {
        x_(h, k, j) = 0;
        return;
      }
    }
  }

  bool NearbyShift(int i, int k, int j) const {
    const int p = k * q_ + j;
    for (int d = -2; d <= 2; ++d) {
      if (d == 0) continue;
      const int t = p + d;
      if (t == -1 && inst_.carry_over[i].last) return true;
      if (t == -2 && inst_.carry_over[i].second_last) return true;
      if (t >= 0 && t < r_ * q_ && x_(i, t / q_, t % q_)) return true;
    }
    return false;
  }

  int BlockCount(int i, int k) const {
    int c = 0;
    for (int j = 0; j < q_; ++j) c += x_(i, k, j);
    return c;
  }

  int WeekendCount(int i) const {
    int c = 0;
    for (int k = 0; k < r_; ++k) {
      for (int j = 0; j < q_; ++j) c += x_(i, k, j) && inst_.calendar.IsWeekendShift(k, j);
    }
    return c;
  }

  // Free cells of nurse i, best candidates first: available, then carrying
  // demand. Ties are shuffled.
  std::vector<int> RankedFreeCells(int i, int k, bool weekend_only) {
    std::vector<int> cells;
    for (int j = 0; j < q_; ++j) {
      if (x_(i, k, j)) continue;
      if (weekend_only && !inst_.calendar.IsWeekendShift(k, j)) continue;
      cells.push_back(j);
    }
    std::shuffle(cells.begin(), cells.end(), rng_);
    auto rank = [&](int j) {
      return (inst_.preferences.available(i, k, j) ? 0 : 2) + (inst_.demand(k, j) > 0 ? 0 : 1);
    };
    std::stable_sort(cells.begin(), cells.end(),
                     [&](int a, int b) { return rank(a) < rank(b); });
    return cells;
  }

  // Adds shifts to nurse i one at a time until `done` holds. Cells next
  // to one it already holds are used only when `spaced` is false.
  template <typename Done>
  bool FillUntil(int i, const std::vector<int>& blocks, bool weekend_only, bool spaced,
                 Done done) {
    for (int k : blocks) {
      for (int j : RankedFreeCells(i, k, weekend_only)) {
        if (done()) return true;
        if (spaced && NearbyShift(i, k, j)) continue;
        Place(i, k, j);
      }
    }
    return done();
  }

  // Tries every nurse with spaced cells first so only the intended rule
  // breaks, then allows nearby cells. Rolls back failed attempts.
  template <typename Fill>
  std::optional<Schedule> FillSomeNurse(Fill fill) {
    std::vector<int> order(n_);
    for (int i = 0; i < n_; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    const auto x0 = x_;
    const auto s0 = s_;
    for (bool spaced : {true, false}) {
      for (int i : order) {
        if (fill(i, spaced)) return Result();
        x_ = x0;
        s_ = s0;
      }
    }
    return std::nullopt;
  }

  std::optional<Schedule> Overbook() {
    std::vector<std::array<int, 3>> cells;
    for (int k = 0; k < r_; ++k) {
      for (int j = 0; j < q_; ++j) {
        if (s_(k, j) != 0) continue;
        for (int i = 0; i < n_; ++i) {
          if (!x_(i, k, j)) cells.push_back({i, k, j});
        }
      }
    }
    if (cells.empty()) return std::nullopt;
    const auto [i, k, j] = cells[Pick(static_cast<int>(cells.size()))];
    x_(i, k, j) = 1;
    return Result();
  }

  std::optional<Schedule> BackToBack() {
    std::vector<std::array<int, 2>> targets;  // nurse, global position
    for (int i = 0; i < n_; ++i) {
      for (int p = 0; p < r_ * q_; ++p) {
        if (!x_(i, p / q_, p % q_)) continue;
        for (int d : {-2, -1, 1, 2}) {
          const int t = p + d;
          if (t >= 0 && t < r_ * q_ && !x_(i, t / q_, t % q_)) targets.push_back({i, t});
        }
      }
    }
    if (targets.empty()) return std::nullopt;
    const auto [i, t] = targets[Pick(static_cast<int>(targets.size()))];
    Place(i, t / q_, t % q_);
    return Result();
  }

  std::optional<Schedule> BlockMaximum() {
    const int k = Pick(r_);
    const int target = inst_.max_shifts_per_block + 1;
    return FillSomeNurse([&](int i, bool spaced) {
      return FillUntil(i, {k}, false, spaced, [&] { return BlockCount(i, k) >= target; });
    });
  }

  std::optional<Schedule> WeekendCap() {
    std::vector<int> blocks(r_);
    for (int k = 0; k < r_; ++k) blocks[k] = k;
    std::shuffle(blocks.begin(), blocks.end(), rng_);
    const int target = inst_.max_weekend_shifts + 1;
    return FillSomeNurse([&](int i, bool spaced) {
      return FillUntil(i, blocks, true, spaced, [&] { return WeekendCount(i) >= target; });
    });
  }

  std::optional<Schedule> Unavailable() {
    std::vector<std::array<int, 3>> cells;
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        for (int j = 0; j < q_; ++j) {
          if (!x_(i, k, j) && !inst_.preferences.available(i, k, j)) cells.push_back({i, k, j});
        }
      }
    }
    if (cells.empty()) return std::nullopt;
    const auto [i, k, j] = cells[Pick(static_cast<int>(cells.size()))];
    Place(i, k, j);
    return Result();
  }

  // Hands one shift from a senior to a junior so that afterwards the senior
  // is disadvantaged: below minimum while the junior works, or more than
  // one shift behind the junior when both are at or above minimum. The
  // senior could take the shift back (it is available, spaced and under
  // both caps, and a junior holds it), so nothing justifies the inversion.
  std::optional<Schedule> DeltaInversion() {
    struct Move {
      int senior, junior, block, shift;
    };
    std::vector<Move> moves;
    for (int k = 0; k < r_; ++k) {
      for (int i = 0; i < n_; ++i) {
        const int di = BlockCount(i, k) - inst_.minimums[i][k];
        for (int v = i + 1; v < n_; ++v) {
          const int dv = BlockCount(v, k) - inst_.minimums[v][k];
          const int di2 = di - 1, dv2 = dv + 1;
          const bool senior_behind = di2 < 0 || (dv2 >= 0 && di2 < dv2);
          if (!senior_behind) continue;
          for (int j = 0; j < q_; ++j) {
            if (!x_(i, k, j) || x_(v, k, j) || !inst_.preferences.available(v, k, j)) continue;
            moves.push_back({i, v, k, j});
          }
        }
      }
    }
    std::shuffle(moves.begin(), moves.end(), rng_);
    for (const Move& m : moves) {
      x_(m.senior, m.block, m.shift) = 0;
      x_(m.junior, m.block, m.shift) = 1;
      if (GeneralRuleBreaks(Result(), inst_).empty()) return Result();
      x_(m.senior, m.block, m.shift) = 1;
      x_(m.junior, m.block, m.shift) = 0;
    }
    return std::nullopt;
  }

  const PoolInstance& inst_;
  NurseShiftGrid<std::uint8_t> x_;
  ShiftGrid<int> s_;
  std::mt19937_64 rng_;
  int n_, r_, q_;
};

}  // namespace roster::testing

#endif  // ROSTER_TESTS_MUTATE_H_
