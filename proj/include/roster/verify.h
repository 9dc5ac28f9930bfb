#ifndef ROSTER_VERIFY_H_
#define ROSTER_VERIFY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roster/armstrong.h"
#include "roster/domain.h"

namespace roster {

enum class GeneralRule {
  kDimensions,
  kSupplyIdentity,  // sum X + S != d
  kOverbooking,     // sum X > d
  kAvailability,
  kBackToBack,
  kMaxOut,
  kWeekendCap,
};

std::string_view GeneralRuleName(GeneralRule rule);

struct GeneralFailure {
  GeneralRule rule = GeneralRule::kSupplyIdentity;
  int nurse = -1;  // -1 for shift-level failures
  int block = 0;
  int shift = 0;
  std::string detail;
};

// Bit set over the unassigned-shift codes.
enum CodeBit : std::uint8_t {
  kCodeB = 1,  // back-to-back
  kCodeD = 2,  // demand already filled per seniority, or no demand
  kCodeM = 4,  // block maximum reached
  kCodeW = 8,  // weekend cap reached
};

std::string CodeString(std::uint8_t mask);
// Inverse of CodeString; nullopt on an unknown letter.
std::optional<std::uint8_t> ParseCodes(std::string_view text);

struct CodeGrid {
  // Meaningful only where applies() is true (available and unassigned).
  NurseShiftGrid<std::uint8_t> mask;
  NurseShiftGrid<std::uint8_t> applicable;

  bool applies(int nurse, int block, int shift) const {
    return applicable(nurse, block, shift) != 0;
  }
};

struct CellRef {
  int nurse = 0;
  int block = 0;
  int shift = 0;
};

struct NurseSummary {
  std::vector<int> assigned;  // per block
  std::vector<int> minimum;
  std::vector<int> delta;
  int weekend_shifts = 0;
};

struct NursePreferenceSummary {
  int assigned = 0;
  int count_by_score[4] = {0, 0, 0, 0};  // index = canonical score
  // Percent of assigned shifts at each score 1..3; absent with no shifts.
  std::optional<double> percent_by_score[4];
};

struct PreferenceSummary {
  std::vector<NursePreferenceSummary> nurses;
  int assigned = 0;
  int first_preference = 0;
  std::optional<double> percent_first;  // absent when nothing is assigned
  ShiftGrid<double> shift_mean;         // NaN where nobody is assigned
};

PreferenceSummary SummarizePreferences(const Schedule& schedule,
                                       const PoolInstance& instance);

struct VerificationReport {
  std::vector<GeneralFailure> general_failures;
  std::vector<RuleViolation> violations;
  CodeGrid codes;
  std::vector<CellRef> uncoded;  // available, unassigned, no code
  std::vector<NurseSummary> nurse_summary;
  PreferenceSummary preferences;
  int total_demand = 0;
  int total_unfilled = 0;
  bool accepted = false;

  int UnjustifiedCount() const;
  // General rule names, "armstrong_1A"/"armstrong_1B"/"armstrong_2" for
  // unjustified violations, and "uncoded_cell".
  std::vector<std::string> FailureNames() const;
};

// Recomputes everything from the schedule and instance alone.
VerificationReport Verify(const Schedule& schedule, const PoolInstance& instance);

}  // namespace roster

#endif  // ROSTER_VERIFY_H_
