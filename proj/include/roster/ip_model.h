#ifndef ROSTER_IP_MODEL_H_
#define ROSTER_IP_MODEL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roster/domain.h"
#include "roster/milp.h"

namespace roster {

enum class ArmstrongMode { kApproximate, kExact };

std::string_view ArmstrongModeName(ArmstrongMode mode);
// Accepts "approx", "approximate" and "exact".
std::optional<ArmstrongMode> ParseArmstrongMode(std::string_view text);

// A model together with the column indices of X and S.
struct ScheduleModel {
  MilpModel model;
  NurseShiftGrid<int> x;
  ShiftGrid<int> s;
};

// Minimise total unfilled demand under the general rules and the chosen
// seniority constraint set. Every "10" in the printed big-M constants is
// taken as the instance's per-block maximum.
ScheduleModel BuildStage1(const PoolInstance& instance, ArmstrongMode mode);

// Same constraints, total unfilled demand capped at total - demand_star, and
// total canonical preference maximised. Column order matches BuildStage1 so a
// stage-one solution is a valid start.
// Throws RosterError(kInvalidArgument) if demand_star is outside
// 0..total demand.
ScheduleModel BuildStage2(const PoolInstance& instance, int demand_star,
                          ArmstrongMode mode);

Schedule ExtractSchedule(const ScheduleModel& model,
                         const std::vector<double>& values);

}  // namespace roster

#endif  // ROSTER_IP_MODEL_H_
