#include "roster/verify.h"

#include <cmath>
#include <limits>

namespace roster {

std::string_view GeneralRuleName(GeneralRule rule) {
  switch (rule) {
    case GeneralRule::kDimensions: return "dimensions";
    case GeneralRule::kSupplyIdentity: return "supply_identity";
    case GeneralRule::kOverbooking: return "overbooking";
    case GeneralRule::kAvailability: return "availability";
    case GeneralRule::kBackToBack: return "back_to_back";
    case GeneralRule::kMaxOut: return "max_shifts_per_block";
    case GeneralRule::kWeekendCap: return "weekend_cap";
  }
  return "unknown";
}

std::string CodeString(std::uint8_t mask) {
  std::string out;
  if (mask & kCodeB) out += 'B';
  if (mask & kCodeD) out += 'D';
  if (mask & kCodeM) out += 'M';
  if (mask & kCodeW) out += 'W';
  return out;
}

std::optional<std::uint8_t> ParseCodes(std::string_view text) {
  std::uint8_t mask = 0;
  for (char c : text) {
    switch (c) {
      case 'B': mask |= kCodeB; break;
      case 'D': mask |= kCodeD; break;
      case 'M': mask |= kCodeM; break;
      case 'W': mask |= kCodeW; break;
      default: return std::nullopt;
    }
  }
  return mask;
}

int VerificationReport::UnjustifiedCount() const {
  int count = 0;
  for (const auto& v : violations) count += v.justified ? 0 : 1;
  return count;
}

std::vector<std::string> VerificationReport::FailureNames() const {
  std::vector<std::string> names;
  for (const auto& f : general_failures) names.emplace_back(GeneralRuleName(f.rule));
  for (const auto& v : violations) {
    if (!v.justified) names.push_back("armstrong_" + ArmstrongRuleName(v.rule));
  }
  if (!uncoded.empty()) names.push_back("uncoded_cell");
  return names;
}

PreferenceSummary SummarizePreferences(const Schedule& schedule,
                                       const PoolInstance& instance) {
  const int n = schedule.nurses();
  const int r = schedule.blocks();
  const int q = schedule.shifts_per_block();
  PreferenceSummary out;
  out.nurses.resize(n);
  out.shift_mean = ShiftGrid<double>(r, q, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < q; ++j) {
      int staff = 0, sum = 0;
      for (int i = 0; i < n; ++i) {
        if (!schedule.assigned(i, k, j)) continue;
        const int s = instance.preferences.score(i, k, j);
        ++out.nurses[i].assigned;
        ++out.nurses[i].count_by_score[s];
        ++staff;
        sum += s;
      }
      if (staff > 0) out.shift_mean(k, j) = static_cast<double>(sum) / staff;
    }
  }
  for (auto& ns : out.nurses) {
    out.assigned += ns.assigned;
    out.first_preference += ns.count_by_score[3];
    if (ns.assigned == 0) continue;
    for (int s = 1; s <= 3; ++s) {
      ns.percent_by_score[s] = 100.0 * ns.count_by_score[s] / ns.assigned;
    }
  }
  if (out.assigned > 0) {
    out.percent_first = 100.0 * out.first_preference / out.assigned;
  }
  return out;
}

namespace {

void CheckGeneralRules(const Schedule& s, const PoolInstance& inst,
                       std::vector<GeneralFailure>& out) {
  const int n = s.nurses();
  const int r = s.blocks();
  const int q = s.shifts_per_block();
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < q; ++j) {
      const int staff = s.StaffOnShift(k, j);
      const int d = inst.demand(k, j);
      if (staff > d) {
        out.push_back({GeneralRule::kOverbooking, -1, k, j,
                       std::to_string(staff) + " assigned, demand " +
                           std::to_string(d)});
      } else if (s.unfilled(k, j) < 0 || staff + s.unfilled(k, j) != d) {
        out.push_back({GeneralRule::kSupplyIdentity, -1, k, j,
                       std::to_string(staff) + " assigned + " +
                           std::to_string(s.unfilled(k, j)) +
                           " unfilled != demand " + std::to_string(d)});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    int weekend = 0;
    for (int k = 0; k < r; ++k) {
      int in_block = 0;
      for (int j = 0; j < q; ++j) {
        if (!s.assigned(i, k, j)) continue;
        ++in_block;
        if (inst.calendar.IsWeekendShift(k, j)) ++weekend;
        if (!inst.preferences.available(i, k, j)) {
          out.push_back({GeneralRule::kAvailability, i, k, j,
                         "assigned to an unavailable shift"});
        }
        const int p = k * q + j;
        for (int back = 1; back <= 2; ++back) {
          const int pos = p - back;
          bool clash = false;
          if (pos >= 0) {
            clash = s.assigned(i, pos / q, pos % q);
          } else if (pos == -1) {
            clash = inst.carry_over[i].last;
          } else {
            clash = inst.carry_over[i].second_last;
          }
          if (clash) {
            out.push_back({GeneralRule::kBackToBack, i, k, j,
                           "another shift " + std::to_string(back) +
                               " position(s) earlier"});
          }
        }
      }
      if (in_block > inst.max_shifts_per_block) {
        out.push_back({GeneralRule::kMaxOut, i, k, 0,
                       std::to_string(in_block) + " shifts in block, maximum " +
                           std::to_string(inst.max_shifts_per_block)});
      }
    }
    if (weekend > inst.max_weekend_shifts) {
      out.push_back({GeneralRule::kWeekendCap, i, 0, 0,
                     std::to_string(weekend) + " weekend shifts, cap " +
                         std::to_string(inst.max_weekend_shifts)});
    }
  }
}

}  // namespace

VerificationReport Verify(const Schedule& schedule, const PoolInstance& instance) {
  VerificationReport rep;
  const int n = instance.nurse_count();
  const int r = instance.calendar.blocks();
  const int q = instance.calendar.shifts_per_block();
  if (schedule.nurses() != n || schedule.blocks() != r ||
      schedule.shifts_per_block() != q ||
      schedule.unfilled_grid().blocks() != r ||
      schedule.unfilled_grid().shifts_per_block() != q) {
    rep.general_failures.push_back(
        {GeneralRule::kDimensions, -1, 0, 0, "schedule does not match the instance"});
    return rep;
  }
  rep.total_demand = instance.TotalDemand();
  rep.total_unfilled = schedule.TotalUnfilled();
  CheckGeneralRules(schedule, instance, rep.general_failures);

  const DeltaTable deltas = ComputeDeltas(schedule, instance.minimums);
  const EligibilityFlags flags = ComputeEligibility(schedule, instance, deltas);
  rep.violations = CheckArmstrong(schedule, instance, deltas, flags);

  rep.codes.mask = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  rep.codes.applicable = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < r; ++k) {
      for (int j = 0; j < q; ++j) {
        if (schedule.assigned(i, k, j) || !instance.preferences.available(i, k, j)) {
          continue;
        }
        std::uint8_t m = 0;
        if (!flags.backtoback(i, k, j)) m |= kCodeB;
        if (!flags.demand(i, k, j)) m |= kCodeD;
        if (!flags.maxout(i, k, j)) m |= kCodeM;
        if (!flags.weekend(i, k, j)) m |= kCodeW;
        rep.codes.applicable(i, k, j) = 1;
        rep.codes.mask(i, k, j) = m;
        if (m == 0) rep.uncoded.push_back({i, k, j});
      }
    }
  }

  const std::vector<int> weekend = WeekendTotals(schedule, instance.calendar);
  for (int i = 0; i < n; ++i) {
    NurseSummary ns;
    for (int k = 0; k < r; ++k) {
      ns.assigned.push_back(schedule.ShiftsInBlock(i, k));
      ns.minimum.push_back(instance.minimums[i][k]);
      ns.delta.push_back(deltas.delta(i, k));
    }
    ns.weekend_shifts = weekend[i];
    rep.nurse_summary.push_back(std::move(ns));
  }
  rep.preferences = SummarizePreferences(schedule, instance);
  rep.accepted = rep.general_failures.empty() && rep.UnjustifiedCount() == 0 &&
                 rep.uncoded.empty();
  return rep;
}

}  // namespace roster
