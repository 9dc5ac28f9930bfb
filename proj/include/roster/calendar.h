#ifndef ROSTER_CALENDAR_H_
#define ROSTER_CALENDAR_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roster {

enum class Weekday {
  kMonday = 0,
  kTuesday,
  kWednesday,
  kThursday,
  kFriday,
  kSaturday,
  kSunday,
};

std::string_view WeekdayName(Weekday day);
std::string_view WeekdayShortName(Weekday day);
// Accepts full English names and three-letter abbreviations, any case.
std::optional<Weekday> ParseWeekday(std::string_view text);

struct DaySlot {
  int day = 0;   // 0-based day within the block
  int slot = 0;  // 0-based slot within the day (morning, evening, night)
};

// Indexing of blocks, days and shifts for one scheduling horizon.
//
// All indices are 0-based. Shift j of a block is day * shifts_per_day + slot,
// so consecutive indices are consecutive shifts in time; the no-back-to-back
// rule is expressed directly on these indices and continues across block
// boundaries.
class CycleCalendar {
 public:
  // Throws RosterError(kInvalidArgument) on non-positive counts, or if some
  // block contains no weekend day.
  static CycleCalendar Build(int blocks, int days_per_block,
                             int shifts_per_day, Weekday first_weekday);
  // 3 blocks x 14 days x 3 shifts, starting on a Wednesday.
  static CycleCalendar Default();

  int blocks() const { return blocks_; }
  int days_per_block() const { return days_per_block_; }
  int shifts_per_day() const { return shifts_per_day_; }
  Weekday first_weekday() const { return first_weekday_; }
  int shifts_per_block() const { return days_per_block_ * shifts_per_day_; }
  int total_shifts() const { return blocks_ * shifts_per_block(); }

  int ShiftIndex(int day, int slot) const {
    return day * shifts_per_day_ + slot;
  }
  DaySlot Decode(int shift) const {
    return {shift / shifts_per_day_, shift % shifts_per_day_};
  }

  Weekday WeekdayOf(int block, int day) const;
  bool IsWeekendDay(int block, int day) const;
  bool IsWeekendShift(int block, int shift) const {
    return weekend_shift_[block * shifts_per_block() + shift];
  }

  // Weekend days of a block (0-based day indices).
  std::vector<int> WeekendDays(int block) const;
  int WeekendDaysPerBlock(int block) const {
    return static_cast<int>(WeekendDays(block).size());
  }
  // The sets L_m: one entry per weekend day of the block, each holding the
  // shift indices of that day.
  std::vector<std::vector<int>> WeekendShiftSets(int block) const;

  // "Wed01-M" style label for a column header.
  std::string ShiftLabel(int block, int shift) const;

  friend bool operator==(const CycleCalendar& a, const CycleCalendar& b) {
    return a.blocks_ == b.blocks_ && a.days_per_block_ == b.days_per_block_ &&
           a.shifts_per_day_ == b.shifts_per_day_ &&
           a.first_weekday_ == b.first_weekday_;
  }

 private:
  CycleCalendar() = default;

  int blocks_ = 0;
  int days_per_block_ = 0;
  int shifts_per_day_ = 0;
  Weekday first_weekday_ = Weekday::kWednesday;
  std::vector<bool> weekend_shift_;
};

}  // namespace roster

#endif  // ROSTER_CALENDAR_H_
