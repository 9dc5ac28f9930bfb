#ifndef ROSTER_DOMAIN_H_
#define ROSTER_DOMAIN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roster/calendar.h"

namespace roster {

enum class Designation { kRN, kRPN, kPSW };

std::string_view DesignationName(Designation d);
std::optional<Designation> ParseDesignation(std::string_view text);

struct Nurse {
  std::string id;
  int seniority_rank = 0;  // 1 = most senior
  Designation designation = Designation::kRN;

  friend bool operator==(const Nurse&, const Nurse&) = default;
};

// Dense (block, shift) grid.
template <typename T>
class ShiftGrid {
 public:
  ShiftGrid() = default;
  ShiftGrid(int blocks, int shifts_per_block, T init = T{})
      : blocks_(blocks),
        shifts_(shifts_per_block),
        data_(static_cast<size_t>(blocks) * shifts_per_block, init) {}

  int blocks() const { return blocks_; }
  int shifts_per_block() const { return shifts_; }

  T& operator()(int block, int shift) { return data_[Index(block, shift)]; }
  const T& operator()(int block, int shift) const {
    return data_[Index(block, shift)];
  }

  const std::vector<T>& values() const { return data_; }

  friend bool operator==(const ShiftGrid&, const ShiftGrid&) = default;

 private:
  size_t Index(int block, int shift) const {
    return static_cast<size_t>(block) * shifts_ + shift;
  }

  int blocks_ = 0;
  int shifts_ = 0;
  std::vector<T> data_;
};

// Dense (nurse, block, shift) grid.
template <typename T>
class NurseShiftGrid {
 public:
  NurseShiftGrid() = default;
  NurseShiftGrid(int nurses, int blocks, int shifts_per_block, T init = T{})
      : nurses_(nurses),
        blocks_(blocks),
        shifts_(shifts_per_block),
        data_(static_cast<size_t>(nurses) * blocks * shifts_per_block, init) {}

  int nurses() const { return nurses_; }
  int blocks() const { return blocks_; }
  int shifts_per_block() const { return shifts_; }

  T& operator()(int nurse, int block, int shift) {
    return data_[Index(nurse, block, shift)];
  }
  const T& operator()(int nurse, int block, int shift) const {
    return data_[Index(nurse, block, shift)];
  }

  const std::vector<T>& values() const { return data_; }

  friend bool operator==(const NurseShiftGrid&,
                         const NurseShiftGrid&) = default;

 private:
  size_t Index(int nurse, int block, int shift) const {
    return (static_cast<size_t>(nurse) * blocks_ + block) * shifts_ + shift;
  }

  int nurses_ = 0;
  int blocks_ = 0;
  int shifts_ = 0;
  std::vector<T> data_;
};

// Per (nurse, block) values such as minimum shift requirements.
using NurseBlockGrid = std::vector<std::vector<int>>;

using DemandMatrix = ShiftGrid<int>;

enum class PreferenceDirection {
  kAscending,   // 3 = most preferred (canonical)
  kDescending,  // 1 = most preferred, as on the printed collection form
};

// Canonical availability and preference scores: 0 = unavailable,
// 1..3 = least..most preferred. Availability is derived from the score, so
// "score > 0 iff available" holds by construction.
class AvailabilityPreference {
 public:
  AvailabilityPreference() = default;
  AvailabilityPreference(int nurses, int blocks, int shifts_per_block)
      : scores_(nurses, blocks, shifts_per_block, 0) {}

  bool available(int nurse, int block, int shift) const {
    return scores_(nurse, block, shift) > 0;
  }
  int score(int nurse, int block, int shift) const {
    return scores_(nurse, block, shift);
  }
  // Throws RosterError(kScoreOutOfRange) outside 0..3.
  void set_score(int nurse, int block, int shift, int score);

  const NurseShiftGrid<std::uint8_t>& scores() const { return scores_; }
  int nurses() const { return scores_.nurses(); }

  friend bool operator==(const AvailabilityPreference&,
                         const AvailabilityPreference&) = default;

 private:
  NurseShiftGrid<std::uint8_t> scores_;
};

// Whether each nurse worked the second-to-last and the last shift of the
// previous horizon.
struct CarryOver {
  bool second_last = false;
  bool last = false;

  friend bool operator==(const CarryOver&, const CarryOver&) = default;
};
using CarryOverState = std::vector<CarryOver>;

// Binary assignment X plus unfilled demand S.
//
// The mutating members keep sum_i X(i,k,j) + S(k,j) constant, so a schedule
// built from a demand matrix through Assign/Unassign/Move always satisfies
// the supply identity. FromParts exists for loaders and deliberately skips
// that check; the verifier reports any resulting inconsistency.
class Schedule {
 public:
  Schedule() = default;
  // All demand unfilled, nobody assigned.
  static Schedule Empty(int nurses, const DemandMatrix& demand);
  static Schedule FromParts(NurseShiftGrid<std::uint8_t> assigned,
                            ShiftGrid<int> unfilled);

  int nurses() const { return x_.nurses(); }
  int blocks() const { return x_.blocks(); }
  int shifts_per_block() const { return x_.shifts_per_block(); }

  bool assigned(int nurse, int block, int shift) const {
    return x_(nurse, block, shift) != 0;
  }
  int unfilled(int block, int shift) const { return s_(block, shift); }

  // Requires unfilled(block, shift) > 0 and the cell to be empty.
  void Assign(int nurse, int block, int shift);
  // Requires the cell to be assigned; the unit becomes unfilled again.
  void Unassign(int nurse, int block, int shift);
  // Hands one unit from `from` to `to` without touching S.
  void Move(int from, int to, int block, int shift);

  int ShiftsInBlock(int nurse, int block) const;
  int StaffOnShift(int block, int shift) const;
  int TotalAssigned() const;
  int TotalUnfilled() const;

  const NurseShiftGrid<std::uint8_t>& assignment() const { return x_; }
  const ShiftGrid<int>& unfilled_grid() const { return s_; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  NurseShiftGrid<std::uint8_t> x_;
  ShiftGrid<int> s_;
};

struct PoolInfo {
  std::string id;
  std::string unit;
  Designation designation = Designation::kRN;

  friend bool operator==(const PoolInfo&, const PoolInfo&) = default;
};

// One scheduling pool: the unit of optimisation.
struct PoolInstance {
  PoolInfo pool;
  CycleCalendar calendar = CycleCalendar::Default();
  std::vector<Nurse> nurses;  // seniority order, index 0 = rank 1
  DemandMatrix demand;
  AvailabilityPreference preferences;
  CarryOverState carry_over;
  NurseBlockGrid minimums;  // g[i][k]
  int max_shifts_per_block = 10;
  int max_weekend_shifts = 10;

  int nurse_count() const { return static_cast<int>(nurses.size()); }
  int TotalDemand() const;
  int TotalDemandInBlock(int block) const;
  int SumMinimums(int block) const;

  // Throws RosterError on the first broken invariant (rank gaps or
  // duplicates, dimension mismatches, minimums above the block maximum or
  // increasing with rank, negative demand).
  void Validate() const;

  friend bool operator==(const PoolInstance&, const PoolInstance&) = default;
};

// Part-time demand = total - (full-time scheduled - full-time on leave).
// Throws RosterError(kNegativeDemand) naming the first inconsistent shift.
DemandMatrix DerivePartTimeDemand(const DemandMatrix& total,
                                  const ShiftGrid<int>& full_time_scheduled,
                                  const ShiftGrid<int>& full_time_leave);

// Maps collection-form scores to the canonical direction. Zero stays zero
// (unavailable); under kDescending a non-zero s becomes 4 - s.
AvailabilityPreference NormalizePreferences(
    const NurseShiftGrid<int>& raw, PreferenceDirection direction);
int NormalizeScore(int raw, PreferenceDirection direction);

}  // namespace roster

#endif  // ROSTER_DOMAIN_H_
