#include "roster/calendar.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "roster/error.h"

namespace roster {
namespace {

constexpr std::array<std::string_view, 7> kNames = {
    "Monday", "Tuesday",  "Wednesday", "Thursday",
    "Friday", "Saturday", "Sunday"};
constexpr std::array<std::string_view, 7> kShortNames = {
    "Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
constexpr std::array<char, 3> kSlotLetters = {'M', 'E', 'N'};

std::string Lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view WeekdayName(Weekday day) {
  return kNames[static_cast<int>(day)];
}

std::string_view WeekdayShortName(Weekday day) {
  return kShortNames[static_cast<int>(day)];
}

std::optional<Weekday> ParseWeekday(std::string_view text) {
  const std::string lowered = Lower(text);
  for (int d = 0; d < 7; ++d) {
    if (lowered == Lower(kNames[d]) || lowered == Lower(kShortNames[d])) {
      return static_cast<Weekday>(d);
    }
  }
  return std::nullopt;
}

CycleCalendar CycleCalendar::Build(int blocks, int days_per_block,
                                   int shifts_per_day, Weekday first_weekday) {
  if (blocks < 1 || days_per_block < 1 || shifts_per_day < 1) {
    throw RosterError(ErrorCode::kInvalidArgument, "calendar",
                      "calendar counts must all be at least 1");
  }
  CycleCalendar cal;
  cal.blocks_ = blocks;
  cal.days_per_block_ = days_per_block;
  cal.shifts_per_day_ = shifts_per_day;
  cal.first_weekday_ = first_weekday;
  cal.weekend_shift_.assign(cal.total_shifts(), false);
  for (int k = 0; k < blocks; ++k) {
    bool any_weekend = false;
    for (int d = 0; d < days_per_block; ++d) {
      if (!cal.IsWeekendDay(k, d)) continue;
      any_weekend = true;
      for (int t = 0; t < shifts_per_day; ++t) {
        cal.weekend_shift_[k * cal.shifts_per_block() + cal.ShiftIndex(d, t)] =
            true;
      }
    }
    if (!any_weekend) {
      throw RosterError(ErrorCode::kInvalidArgument,
                        "calendar/block/" + std::to_string(k + 1),
                        "every block must contain at least one weekend day");
    }
  }
  return cal;
}

CycleCalendar CycleCalendar::Default() {
  return Build(3, 14, 3, Weekday::kWednesday);
}

Weekday CycleCalendar::WeekdayOf(int block, int day) const {
  const int offset = block * days_per_block_ + day;
  return static_cast<Weekday>((static_cast<int>(first_weekday_) + offset) % 7);
}

bool CycleCalendar::IsWeekendDay(int block, int day) const {
  const Weekday w = WeekdayOf(block, day);
  return w == Weekday::kSaturday || w == Weekday::kSunday;
}

std::vector<int> CycleCalendar::WeekendDays(int block) const {
  std::vector<int> days;
  for (int d = 0; d < days_per_block_; ++d) {
    if (IsWeekendDay(block, d)) days.push_back(d);
  }
  return days;
}

std::vector<std::vector<int>> CycleCalendar::WeekendShiftSets(
    int block) const {
  std::vector<std::vector<int>> sets;
  for (int d : WeekendDays(block)) {
    std::vector<int> shifts;
    for (int t = 0; t < shifts_per_day_; ++t) shifts.push_back(ShiftIndex(d, t));
    sets.push_back(std::move(shifts));
  }
  return sets;
}

std::string CycleCalendar::ShiftLabel(int block, int shift) const {
  const DaySlot ds = Decode(shift);
  std::string label(WeekdayShortName(WeekdayOf(block, ds.day)));
  const int day_number = ds.day + 1;
  if (day_number < 10) label += '0';
  label += std::to_string(day_number);
  label += '-';
  if (shifts_per_day_ <= static_cast<int>(kSlotLetters.size())) {
    label += kSlotLetters[ds.slot];
  } else {
    label += 'S' + std::to_string(ds.slot + 1);
  }
  return label;
}

}  // namespace roster
