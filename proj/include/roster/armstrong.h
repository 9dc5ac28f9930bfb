#ifndef ROSTER_ARMSTRONG_H_
#define ROSTER_ARMSTRONG_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "roster/domain.h"

namespace roster {

struct TierEntry {
  int tier = 0;
  int min_shifts = 0;

  friend bool operator==(const TierEntry&, const TierEntry&) = default;
};

// (pool size, seniority rank) -> (tier, minimum shifts per block).
class TierChart {
 public:
  // The shipped chart: pool sizes 7 and 9.
  static TierChart Default();
  // CSV with header pool_size,seniority_rank,tier,min_shifts. `source` is
  // used in error locations.
  static TierChart FromCsv(std::istream& in, const std::string& source);
  static TierChart LoadCsv(const std::string& path);

  // Throws RosterError(kInconsistentMinimums) if the column breaks the chart
  // invariants (ranks 1..size, tiers non-decreasing, minimums non-increasing).
  void SetColumn(int pool_size, std::vector<TierEntry> entries);

  bool HasPoolSize(int pool_size) const;
  std::vector<int> PoolSizes() const;
  // Throws RosterError(kUnknownPoolSize).
  const std::vector<TierEntry>& Column(int pool_size) const;

  std::string ToCsv() const;

 private:
  std::map<int, std::vector<TierEntry>> columns_;
};

// g[i][k], identical across blocks.
NurseBlockGrid AssignMinimums(int pool_size, int blocks, const TierChart& chart);

class DeltaTable {
 public:
  DeltaTable() = default;
  DeltaTable(int nurses, int blocks)
      : delta_(nurses, std::vector<int>(blocks, 0)) {}

  int nurses() const { return static_cast<int>(delta_.size()); }
  int blocks() const { return delta_.empty() ? 0 : static_cast<int>(delta_[0].size()); }

  int delta(int nurse, int block) const { return delta_[nurse][block]; }
  void set_delta(int nurse, int block, int value) { delta_[nurse][block] = value; }
  bool theta(int nurse, int block) const { return delta_[nurse][block] >= 0; }
  bool pi(int nurse, int block) const { return delta_[nurse][block] >= 1; }

 private:
  std::vector<std::vector<int>> delta_;
};

DeltaTable ComputeDeltas(const Schedule& schedule, const NurseBlockGrid& g);

// How the seniority demand flag is evaluated.
//   kExact: a nurse below minimum only loses a shift to seniors who are not
//     above their own minimum; a nurse at or above minimum only loses it to
//     seniors within one shift of their delta and juniors not above it.
//   kApproximate: any senior assignment counts against the shift's demand.
enum class DemandRule { kExact, kApproximate };

// Per-cell obstacle flags; each is 1 when that obstacle is absent.
struct EligibilityFlags {
  NurseShiftGrid<std::uint8_t> available;
  NurseShiftGrid<std::uint8_t> maxout;
  NurseShiftGrid<std::uint8_t> backtoback;
  NurseShiftGrid<std::uint8_t> weekend;
  NurseShiftGrid<std::uint8_t> demand;
  NurseShiftGrid<std::uint8_t> combined;
  std::vector<std::vector<std::uint8_t>> blocked;  // M[i][k]

  bool eligible(int nurse, int block, int shift) const {
    return combined(nurse, block, shift) != 0;
  }
  bool is_blocked(int nurse, int block) const { return blocked[nurse][block] != 0; }
};

EligibilityFlags ComputeEligibility(const Schedule& schedule,
                                    const PoolInstance& instance,
                                    const DeltaTable& deltas,
                                    DemandRule rule = DemandRule::kExact);

// Per-nurse weekend shift count over the whole cycle.
std::vector<int> WeekendTotals(const Schedule& schedule,
                               const CycleCalendar& calendar);

// True if nurse holds a shift within two positions of (block, shift),
// including the cell itself, looking back into the carry-over at the start of
// the horizon.
bool HasNearbyShift(const Schedule& schedule, const CarryOverState& carry_over,
                    int nurse, int block, int shift);

// Letters for the obstacles on one cell: A (unavailable), B, D, M, W.
std::string BlockingCodes(const EligibilityFlags& flags, int nurse, int block,
                          int shift);

enum class ArmstrongRule { k1A, k1B, k2 };

std::string ArmstrongRuleName(ArmstrongRule rule);

struct ShiftEvidence {
  int shift = 0;
  std::string codes;
};

struct RuleViolation {
  ArmstrongRule rule = ArmstrongRule::k1A;
  int block = 0;
  int senior = 0;
  int junior = 0;
  // The nurse whose delta is too low relative to the other.
  int disadvantaged = 0;
  bool justified = false;
  // When justified: every available shift of the disadvantaged nurse in the
  // block together with its blocking codes.
  std::vector<ShiftEvidence> evidence;
};

// Pairwise rule check over every (senior, junior, block). Assumes the
// schedule meets the general rules; a violation is justified iff the
// disadvantaged nurse can take no further shift in the block.
std::vector<RuleViolation> CheckArmstrong(const Schedule& schedule,
                                          const PoolInstance& instance);
std::vector<RuleViolation> CheckArmstrong(const Schedule& schedule,
                                          const PoolInstance& instance,
                                          const DeltaTable& deltas,
                                          const EligibilityFlags& flags);

bool AllJustified(const std::vector<RuleViolation>& violations);

}  // namespace roster

#endif  // ROSTER_ARMSTRONG_H_
