#include "roster/domain.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <string>

#include "roster/error.h"

namespace roster {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kSchemaViolation: return "schema_violation";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kRankGap: return "rank_gap";
    case ErrorCode::kDuplicateRank: return "duplicate_rank";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kUnknownPoolSize: return "unknown_pool_size";
    case ErrorCode::kUnknownNurse: return "unknown_nurse";
    case ErrorCode::kScoreOutOfRange: return "score_out_of_range";
    case ErrorCode::kNegativeDemand: return "negative_demand";
    case ErrorCode::kInconsistentMinimums: return "inconsistent_minimums";
    case ErrorCode::kEnumerationCap: return "enumeration_cap";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "unknown";
}

std::string_view DesignationName(Designation d) {
  switch (d) {
    case Designation::kRN: return "RN";
    case Designation::kRPN: return "RPN";
    case Designation::kPSW: return "PSW";
  }
  return "RN";
}

std::optional<Designation> ParseDesignation(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "RN") return Designation::kRN;
  if (upper == "RPN") return Designation::kRPN;
  if (upper == "PSW") return Designation::kPSW;
  return std::nullopt;
}

void AvailabilityPreference::set_score(int nurse, int block, int shift,
                                       int score) {
  if (score < 0 || score > 3) {
    throw RosterError(ErrorCode::kScoreOutOfRange,
                      "nurse " + std::to_string(nurse + 1) + " block " +
                          std::to_string(block + 1) + " shift " +
                          std::to_string(shift + 1),
                      "preference score " + std::to_string(score) +
                          " outside 0..3");
  }
  scores_(nurse, block, shift) = static_cast<std::uint8_t>(score);
}

Schedule Schedule::Empty(int nurses, const DemandMatrix& demand) {
  Schedule s;
  s.x_ = NurseShiftGrid<std::uint8_t>(nurses, demand.blocks(),
                                      demand.shifts_per_block(), 0);
  s.s_ = demand;
  return s;
}

Schedule Schedule::FromParts(NurseShiftGrid<std::uint8_t> assigned,
                             ShiftGrid<int> unfilled) {
  Schedule s;
  s.x_ = std::move(assigned);
  s.s_ = std::move(unfilled);
  return s;
}

void Schedule::Assign(int nurse, int block, int shift) {
  if (x_(nurse, block, shift) != 0 || s_(block, shift) <= 0) {
    throw RosterError(ErrorCode::kInternal, "schedule",
                      "assignment would overbook or duplicate a shift");
  }
  x_(nurse, block, shift) = 1;
  --s_(block, shift);
}

void Schedule::Unassign(int nurse, int block, int shift) {
  if (x_(nurse, block, shift) == 0) {
    throw RosterError(ErrorCode::kInternal, "schedule",
                      "unassigning a shift the nurse does not hold");
  }
  x_(nurse, block, shift) = 0;
  ++s_(block, shift);
}

void Schedule::Move(int from, int to, int block, int shift) {
  if (x_(from, block, shift) == 0 || x_(to, block, shift) != 0) {
    throw RosterError(ErrorCode::kInternal, "schedule",
                      "move requires holder and empty receiver");
  }
  x_(from, block, shift) = 0;
  x_(to, block, shift) = 1;
}

int Schedule::ShiftsInBlock(int nurse, int block) const {
  int total = 0;
  for (int j = 0; j < shifts_per_block(); ++j) total += x_(nurse, block, j);
  return total;
}

int Schedule::StaffOnShift(int block, int shift) const {
  int total = 0;
  for (int i = 0; i < nurses(); ++i) total += x_(i, block, shift);
  return total;
}

int Schedule::TotalAssigned() const {
  return std::accumulate(x_.values().begin(), x_.values().end(), 0);
}

int Schedule::TotalUnfilled() const {
  return std::accumulate(s_.values().begin(), s_.values().end(), 0);
}

int PoolInstance::TotalDemand() const {
  return std::accumulate(demand.values().begin(), demand.values().end(), 0);
}

int PoolInstance::TotalDemandInBlock(int block) const {
  int total = 0;
  for (int j = 0; j < calendar.shifts_per_block(); ++j) total += demand(block, j);
  return total;
}

int PoolInstance::SumMinimums(int block) const {
  int total = 0;
  for (const auto& row : minimums) total += row[block];
  return total;
}

void PoolInstance::Validate() const {
  const int n = nurse_count();
  const int r = calendar.blocks();
  const int q = calendar.shifts_per_block();
  if (n < 1) {
    throw RosterError(ErrorCode::kSchemaViolation, "/nurses",
                      "a pool needs at least one nurse");
  }
  std::set<int> ranks;
  for (int i = 0; i < n; ++i) {
    const int rank = nurses[i].seniority_rank;
    if (!ranks.insert(rank).second) {
      throw RosterError(ErrorCode::kDuplicateRank,
                        "/nurses/" + std::to_string(i),
                        "duplicate seniority rank " + std::to_string(rank));
    }
    if (rank != i + 1) {
      throw RosterError(ErrorCode::kRankGap, "/nurses/" + std::to_string(i),
                        "nurse " + nurses[i].id + " has rank " +
                            std::to_string(rank) + ", expected " +
                            std::to_string(i + 1));
    }
  }
  if (demand.blocks() != r || demand.shifts_per_block() != q) {
    throw RosterError(ErrorCode::kDimensionMismatch, "/demand",
                      "demand grid does not match the calendar");
  }
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < q; ++j) {
      if (demand(k, j) < 0) {
        throw RosterError(ErrorCode::kNegativeDemand,
                          "/demand/" + std::to_string(k) + "/" +
                              std::to_string(j),
                          "negative demand");
      }
    }
  }
  const auto& scores = preferences.scores();
  if (scores.nurses() != n || scores.blocks() != r ||
      scores.shifts_per_block() != q) {
    throw RosterError(ErrorCode::kDimensionMismatch, "/preferences",
                      "preference grid does not match pool and calendar");
  }
  if (static_cast<int>(carry_over.size()) != n) {
    throw RosterError(ErrorCode::kDimensionMismatch, "/carry_over",
                      "carry-over state needs one entry per nurse");
  }
  for (int i = 0; i < n; ++i) {
    if (carry_over[i].second_last && carry_over[i].last) {
      throw RosterError(ErrorCode::kInvalidArgument,
                        "/carry_over/" + std::to_string(i),
                        "carry-over marks two consecutive shifts worked");
    }
  }
  if (max_shifts_per_block < 1 || max_weekend_shifts < 0) {
    throw RosterError(ErrorCode::kInvalidArgument, "/limits",
                      "invalid shift limits");
  }
  if (static_cast<int>(minimums.size()) != n) {
    throw RosterError(ErrorCode::kDimensionMismatch, "/minimums",
                      "minimums need one row per nurse");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(minimums[i].size()) != r) {
      throw RosterError(ErrorCode::kDimensionMismatch,
                        "/minimums/" + std::to_string(i),
                        "minimums need one entry per block");
    }
    for (int k = 0; k < r; ++k) {
      const int g = minimums[i][k];
      const std::string where =
          "/minimums/" + std::to_string(i) + "/" + std::to_string(k);
      if (g < 0 || g > max_shifts_per_block) {
        throw RosterError(ErrorCode::kInconsistentMinimums, where,
                          "minimum shift requirement outside 0..max");
      }
      if (i > 0 && g > minimums[i - 1][k]) {
        throw RosterError(ErrorCode::kInconsistentMinimums, where,
                          "minimum exceeds that of a more senior nurse");
      }
    }
  }
}

DemandMatrix DerivePartTimeDemand(const DemandMatrix& total,
                                  const ShiftGrid<int>& full_time_scheduled,
                                  const ShiftGrid<int>& full_time_leave) {
  if (total.blocks() != full_time_scheduled.blocks() ||
      total.blocks() != full_time_leave.blocks() ||
      total.shifts_per_block() != full_time_scheduled.shifts_per_block() ||
      total.shifts_per_block() != full_time_leave.shifts_per_block()) {
    throw RosterError(ErrorCode::kDimensionMismatch, "demand",
                      "full-time grids do not match the demand grid");
  }
  DemandMatrix out(total.blocks(), total.shifts_per_block(), 0);
  for (int k = 0; k < total.blocks(); ++k) {
    for (int j = 0; j < total.shifts_per_block(); ++j) {
      const int covered = full_time_scheduled(k, j) - full_time_leave(k, j);
      const int d = total(k, j) - covered;
      if (covered < 0 || d < 0) {
        throw RosterError(ErrorCode::kNegativeDemand,
                          "block " + std::to_string(k + 1) + " shift " +
                              std::to_string(j + 1),
                          "full-time coverage inconsistent with total demand");
      }
      out(k, j) = d;
    }
  }
  return out;
}

int NormalizeScore(int raw, PreferenceDirection direction) {
  if (raw < 0 || raw > 3) {
    throw RosterError(ErrorCode::kScoreOutOfRange, "score",
                      "preference score " + std::to_string(raw) +
                          " outside 0..3");
  }
  if (raw == 0 || direction == PreferenceDirection::kAscending) return raw;
  return 4 - raw;
}

AvailabilityPreference NormalizePreferences(const NurseShiftGrid<int>& raw,
                                            PreferenceDirection direction) {
  AvailabilityPreference out(raw.nurses(), raw.blocks(),
                             raw.shifts_per_block());
  for (int i = 0; i < raw.nurses(); ++i) {
    for (int k = 0; k < raw.blocks(); ++k) {
      for (int j = 0; j < raw.shifts_per_block(); ++j) {
        out.set_score(i, k, j, NormalizeScore(raw(i, k, j), direction));
      }
    }
  }
  return out;
}

}  // namespace roster
