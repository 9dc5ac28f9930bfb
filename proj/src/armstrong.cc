#include "roster/armstrong.h"

#include <fstream>
#include <sstream>

#include "roster/error.h"

namespace roster {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
    size_t start = cell.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? "" : cell.substr(start));
  }
  return out;
}

int ParseInt(const std::string& text, const std::string& where) {
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw RosterError(ErrorCode::kSchemaViolation, where,
                      "expected an integer, got '" + text + "'");
  }
}

}  // namespace

TierChart TierChart::Default() {
  TierChart chart;
  chart.SetColumn(7, {{1, 8}, {1, 8}, {2, 6}, {2, 6}, {3, 4}, {3, 4}, {4, 3}});
  chart.SetColumn(9, {{1, 8}, {1, 8}, {1, 8}, {2, 6}, {2, 6}, {3, 4}, {3, 4},
                      {4, 3}, {4, 3}});
  return chart;
}

TierChart TierChart::FromCsv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::map<int, std::map<int, TierEntry>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = SplitCsvLine(line);
    if (!header_seen) {
      if (cells != std::vector<std::string>{"pool_size", "seniority_rank",
                                            "tier", "min_shifts"}) {
        throw RosterError(ErrorCode::kSchemaViolation, where,
                          "tier chart header must be "
                          "pool_size,seniority_rank,tier,min_shifts");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 4) {
      throw RosterError(ErrorCode::kSchemaViolation, where,
                        "tier chart rows need 4 columns");
    }
    const int size = ParseInt(cells[0], where);
    const int rank = ParseInt(cells[1], where);
    TierEntry e{ParseInt(cells[2], where), ParseInt(cells[3], where)};
    if (!rows[size].emplace(rank, e).second) {
      throw RosterError(ErrorCode::kDuplicateRank, where,
                        "rank " + std::to_string(rank) + " repeated for pool size " +
                            std::to_string(size));
    }
  }
  TierChart chart;
  for (auto& [size, by_rank] : rows) {
    std::vector<TierEntry> column;
    int expected = 1;
    for (auto& [rank, e] : by_rank) {
      if (rank != expected) {
        throw RosterError(ErrorCode::kRankGap,
                          source + ":pool_size=" + std::to_string(size),
                          "ranks must run 1..pool_size without gaps");
      }
      column.push_back(e);
      ++expected;
    }
    chart.SetColumn(size, std::move(column));
  }
  return chart;
}

TierChart TierChart::LoadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RosterError(ErrorCode::kIo, path, "cannot open tier chart");
  return FromCsv(in, path);
}

void TierChart::SetColumn(int pool_size, std::vector<TierEntry> entries) {
  const std::string where = "tier_chart/pool_size=" + std::to_string(pool_size);
  if (pool_size < 1 || static_cast<int>(entries.size()) != pool_size) {
    throw RosterError(ErrorCode::kInconsistentMinimums, where,
                      "a column needs exactly one entry per rank");
  }
  for (int r = 0; r < pool_size; ++r) {
    const TierEntry& e = entries[r];
    if (e.tier < 1 || e.tier > 4 || e.min_shifts < 0) {
      throw RosterError(ErrorCode::kInconsistentMinimums, where,
                        "tier must be 1..4 and minimum non-negative");
    }
    if (r > 0 && (e.tier < entries[r - 1].tier ||
                  e.min_shifts > entries[r - 1].min_shifts)) {
      throw RosterError(ErrorCode::kInconsistentMinimums, where,
                        "tiers must not decrease and minimums must not "
                        "increase with rank");
    }
  }
  columns_[pool_size] = std::move(entries);
}

bool TierChart::HasPoolSize(int pool_size) const {
  return columns_.count(pool_size) > 0;
}

std::vector<int> TierChart::PoolSizes() const {
  std::vector<int> out;
  for (const auto& [size, column] : columns_) out.push_back(size);
  return out;
}

const std::vector<TierEntry>& TierChart::Column(int pool_size) const {
  auto it = columns_.find(pool_size);
  if (it == columns_.end()) {
    throw RosterError(ErrorCode::kUnknownPoolSize,
                      "tier_chart/pool_size=" + std::to_string(pool_size),
                      "tier chart has no column for pool size " +
                          std::to_string(pool_size) +
                          "; supply minimum overrides");
  }
  return it->second;
}

std::string TierChart::ToCsv() const {
  std::string out = "pool_size,seniority_rank,tier,min_shifts\n";
  for (const auto& [size, column] : columns_) {
    for (size_t r = 0; r < column.size(); ++r) {
      out += std::to_string(size) + "," + std::to_string(r + 1) + "," +
             std::to_string(column[r].tier) + "," +
             std::to_string(column[r].min_shifts) + "\n";
    }
  }
  return out;
}

NurseBlockGrid AssignMinimums(int pool_size, int blocks, const TierChart& chart) {
  const auto& column = chart.Column(pool_size);
  NurseBlockGrid g(pool_size, std::vector<int>(blocks, 0));
  for (int i = 0; i < pool_size; ++i) {
    for (int k = 0; k < blocks; ++k) g[i][k] = column[i].min_shifts;
  }
  return g;
}

DeltaTable ComputeDeltas(const Schedule& schedule, const NurseBlockGrid& g) {
  DeltaTable table(schedule.nurses(), schedule.blocks());
  for (int i = 0; i < schedule.nurses(); ++i) {
    for (int k = 0; k < schedule.blocks(); ++k) {
      table.set_delta(i, k, schedule.ShiftsInBlock(i, k) - g[i][k]);
    }
  }
  return table;
}

std::vector<int> WeekendTotals(const Schedule& schedule,
                               const CycleCalendar& calendar) {
  std::vector<int> totals(schedule.nurses(), 0);
  for (int i = 0; i < schedule.nurses(); ++i) {
    for (int k = 0; k < schedule.blocks(); ++k) {
      for (int j = 0; j < schedule.shifts_per_block(); ++j) {
        if (calendar.IsWeekendShift(k, j) && schedule.assigned(i, k, j)) {
          ++totals[i];
        }
      }
    }
  }
  return totals;
}

bool HasNearbyShift(const Schedule& schedule, const CarryOverState& carry_over,
                    int nurse, int block, int shift) {
  const int q = schedule.shifts_per_block();
  const int horizon = schedule.blocks() * q;
  const int p = block * q + shift;
  for (int pos = p - 2; pos <= p + 2; ++pos) {
    if (pos >= horizon) break;
    if (pos == -1 && carry_over[nurse].last) return true;
    if (pos == -2 && carry_over[nurse].second_last) return true;
    if (pos >= 0 && schedule.assigned(nurse, pos / q, pos % q)) return true;
  }
  return false;
}

EligibilityFlags ComputeEligibility(const Schedule& schedule,
                                    const PoolInstance& instance,
                                    const DeltaTable& deltas, DemandRule rule) {
  const int n = schedule.nurses();
  const int r = schedule.blocks();
  const int q = schedule.shifts_per_block();
  EligibilityFlags f;
  f.available = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  f.maxout = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  f.backtoback = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  f.weekend = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  f.demand = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  f.combined = NurseShiftGrid<std::uint8_t>(n, r, q, 0);
  f.blocked.assign(n, std::vector<std::uint8_t>(r, 1));

  const std::vector<int> weekend_totals =
      WeekendTotals(schedule, instance.calendar);

  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < q; ++j) {
      const int d = instance.demand(k, j);
      for (int i = 0; i < n; ++i) {
        const bool available = instance.preferences.available(i, k, j);
        const bool maxout =
            schedule.ShiftsInBlock(i, k) < instance.max_shifts_per_block;
        const bool b2b =
            !HasNearbyShift(schedule, instance.carry_over, i, k, j);
        const bool weekend = !instance.calendar.IsWeekendShift(k, j) ||
                             weekend_totals[i] < instance.max_weekend_shifts;

        int taken = 0;
        if (rule == DemandRule::kApproximate) {
          for (int h = 0; h < i; ++h) taken += schedule.assigned(h, k, j);
        } else if (!deltas.theta(i, k)) {
          for (int h = 0; h < i; ++h) {
            if (schedule.assigned(h, k, j) && deltas.delta(h, k) <= 0) ++taken;
          }
        } else {
          const int di = deltas.delta(i, k);
          for (int h = 0; h < n; ++h) {
            if (h == i || !schedule.assigned(h, k, j)) continue;
            const int dh = deltas.delta(h, k);
            if ((h < i && dh <= di + 1) || (h > i && dh <= di)) ++taken;
          }
        }
        const bool demand = taken < d;

        f.available(i, k, j) = available;
        f.maxout(i, k, j) = maxout;
        f.backtoback(i, k, j) = b2b;
        f.weekend(i, k, j) = weekend;
        f.demand(i, k, j) = demand;
        const bool all = available && maxout && b2b && weekend && demand;
        f.combined(i, k, j) = all;
        if (all) f.blocked[i][k] = 0;
      }
    }
  }
  return f;
}

std::string BlockingCodes(const EligibilityFlags& flags, int nurse, int block,
                          int shift) {
  std::string codes;
  if (!flags.available(nurse, block, shift)) codes += 'A';
  if (!flags.backtoback(nurse, block, shift)) codes += 'B';
  if (!flags.demand(nurse, block, shift)) codes += 'D';
  if (!flags.maxout(nurse, block, shift)) codes += 'M';
  if (!flags.weekend(nurse, block, shift)) codes += 'W';
  return codes;
}

std::string ArmstrongRuleName(ArmstrongRule rule) {
  switch (rule) {
    case ArmstrongRule::k1A: return "1A";
    case ArmstrongRule::k1B: return "1B";
    case ArmstrongRule::k2: return "2";
  }
  return "?";
}

std::vector<RuleViolation> CheckArmstrong(const Schedule& schedule,
                                          const PoolInstance& instance) {
  const DeltaTable deltas = ComputeDeltas(schedule, instance.minimums);
  const EligibilityFlags flags = ComputeEligibility(schedule, instance, deltas);
  return CheckArmstrong(schedule, instance, deltas, flags);
}

std::vector<RuleViolation> CheckArmstrong(const Schedule& schedule,
                                          const PoolInstance& instance,
                                          const DeltaTable& deltas,
                                          const EligibilityFlags& flags) {
  std::vector<RuleViolation> out;
  const int n = schedule.nurses();
  const int q = schedule.shifts_per_block();
  auto emit = [&](ArmstrongRule rule, int k, int i, int ip, int low) {
    RuleViolation v;
    v.rule = rule;
    v.block = k;
    v.senior = i;
    v.junior = ip;
    v.disadvantaged = low;
    v.justified = flags.is_blocked(low, k);
    if (v.justified) {
      for (int j = 0; j < q; ++j) {
        if (!instance.preferences.available(low, k, j)) continue;
        v.evidence.push_back({j, BlockingCodes(flags, low, k, j)});
      }
    }
    out.push_back(std::move(v));
  };
  for (int k = 0; k < schedule.blocks(); ++k) {
    for (int i = 0; i < n; ++i) {
      for (int ip = i + 1; ip < n; ++ip) {
        const int di = deltas.delta(i, k);
        const int dj = deltas.delta(ip, k);
        const bool junior_has_shifts = schedule.ShiftsInBlock(ip, k) > 0;
        if (di < 0 && junior_has_shifts) emit(ArmstrongRule::k1A, k, i, ip, i);
        if (dj < 0 && di > 0) emit(ArmstrongRule::k1B, k, i, ip, ip);
        if (di >= 0 && dj >= 0) {
          if (di < dj) emit(ArmstrongRule::k2, k, i, ip, i);
          if (di > dj + 1) emit(ArmstrongRule::k2, k, i, ip, ip);
        }
      }
    }
  }
  return out;
}

bool AllJustified(const std::vector<RuleViolation>& violations) {
  for (const auto& v : violations) {
    if (!v.justified) return false;
  }
  return true;
}

}  // namespace roster
