#include "roster/synth.h"

#include <algorithm>
#include <random>
#include <string>

namespace roster {
namespace {

using Rng = std::mt19937_64;

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool Chance(Rng& rng, double p) { return Uniform(rng, 0.0, 1.0) < p; }

std::vector<Nurse> MakeNurses(int n) {
  std::vector<Nurse> nurses;
  for (int i = 0; i < n; ++i) {
    nurses.push_back({"N" + std::to_string(i + 1), i + 1, Designation::kRN});
  }
  return nurses;
}

// Non-increasing random minimums, identical across blocks.
NurseBlockGrid RandomMinimums(Rng& rng, int n, int blocks, int gmax) {
  NurseBlockGrid g(n, std::vector<int>(blocks, 0));
  int prev = gmax;
  for (int i = 0; i < n; ++i) {
    const int v = UniformInt(rng, 0, prev);
    for (int k = 0; k < blocks; ++k) g[i][k] = v;
    prev = v;
  }
  return g;
}

// Scatter `units` demand units over the block, at most `cap` per shift.
void ScatterDemand(Rng& rng, DemandMatrix& d, int block, int units, int cap) {
  const int q = d.shifts_per_block();
  units = std::min(units, q * cap);
  while (units > 0) {
    const int j = UniformInt(rng, 0, q - 1);
    if (d(block, j) < cap) {
      ++d(block, j);
      --units;
    }
  }
}

void RandomPreferences(Rng& rng, PoolInstance& inst, double p_lo, double p_hi) {
  const int n = inst.nurse_count();
  const int r = inst.calendar.blocks();
  const int q = inst.calendar.shifts_per_block();
  inst.preferences = AvailabilityPreference(n, r, q);
  for (int i = 0; i < n; ++i) {
    const double p = Uniform(rng, p_lo, p_hi);
    for (int k = 0; k < r; ++k) {
      for (int j = 0; j < q; ++j) {
        if (Chance(rng, p)) inst.preferences.set_score(i, k, j, UniformInt(rng, 1, 3));
      }
    }
  }
}

void RandomCarryOver(Rng& rng, PoolInstance& inst, double p) {
  inst.carry_over.assign(inst.nurse_count(), {});
  for (auto& c : inst.carry_over) {
    if (Chance(rng, p)) {
      if (Chance(rng, 0.5)) {
        c.last = true;
      } else {
        c.second_last = true;
      }
    }
  }
}

PoolInstance Tiny(Rng& rng) {
  struct Layout {
    int days, spd;
    Weekday first;
  };
  static const Layout kLayouts[] = {
      {2, 3, Weekday::kSaturday},
      {4, 2, Weekday::kFriday},
      {8, 1, Weekday::kMonday},
      {2, 4, Weekday::kSunday},
      {3, 2, Weekday::kThursday},
  };
  const Layout& l = kLayouts[UniformInt(rng, 0, 4)];
  PoolInstance inst;
  inst.calendar = CycleCalendar::Build(1, l.days, l.spd, l.first);
  const int n = UniformInt(rng, 1, 2);
  const int q = inst.calendar.shifts_per_block();
  inst.nurses = MakeNurses(n);
  inst.max_shifts_per_block = UniformInt(rng, 1, 4);
  inst.max_weekend_shifts = UniformInt(rng, 0, 4);
  inst.minimums = RandomMinimums(rng, n, 1, inst.max_shifts_per_block);
  inst.demand = DemandMatrix(1, q, 0);
  for (int j = 0; j < q; ++j) {
    inst.demand(0, j) = Chance(rng, 0.35) ? 0 : UniformInt(rng, 1, 2);
  }
  RandomPreferences(rng, inst, 0.4, 0.9);
  RandomCarryOver(rng, inst, 0.3);
  return inst;
}

PoolInstance Small(Rng& rng) {
  PoolInstance inst;
  const int blocks = UniformInt(rng, 1, 2);
  inst.calendar = CycleCalendar::Build(blocks, 7, 3,
                                       static_cast<Weekday>(UniformInt(rng, 0, 6)));
  const int n = UniformInt(rng, 2, 4);
  const int q = inst.calendar.shifts_per_block();
  inst.nurses = MakeNurses(n);
  inst.max_shifts_per_block = UniformInt(rng, 3, 5);
  inst.max_weekend_shifts = UniformInt(rng, 1, 2 * blocks + 2);
  inst.minimums = RandomMinimums(rng, n, blocks, inst.max_shifts_per_block);
  inst.demand = DemandMatrix(blocks, q, 0);
  for (int k = 0; k < blocks; ++k) {
    const double factor = Uniform(rng, 0.4, 1.6);
    const int units = static_cast<int>(factor * std::max(1, inst.SumMinimums(k)) + 0.5);
    ScatterDemand(rng, inst.demand, k, units, 2);
  }
  RandomPreferences(rng, inst, 0.3, 0.8);
  RandomCarryOver(rng, inst, 0.3);
  return inst;
}

PoolInstance MidSize(Rng& rng) {
  PoolInstance inst;
  const int n = UniformInt(rng, 3, 12);
  const int r = inst.calendar.blocks();
  const int q = inst.calendar.shifts_per_block();
  inst.nurses = MakeNurses(n);
  inst.minimums = NominalTierMinimums(n, r, inst.max_shifts_per_block);
  inst.demand = DemandMatrix(r, q, 0);
  for (int k = 0; k < r; ++k) {
    const double factor = Uniform(rng, 0.4, 1.5);
    ScatterDemand(rng, inst.demand, k,
                  static_cast<int>(factor * inst.SumMinimums(k) + 0.5), 3);
  }
  RandomPreferences(rng, inst, 0.25, 0.85);
  RandomCarryOver(rng, inst, 0.2);
  return inst;
}

}  // namespace

std::string_view SynthProfileName(SynthProfile profile) {
  switch (profile) {
    case SynthProfile::kTiny: return "tiny";
    case SynthProfile::kSmall: return "small";
    case SynthProfile::kMidSize: return "midsize";
  }
  return "unknown";
}

std::optional<SynthProfile> ParseSynthProfile(std::string_view text) {
  if (text == "tiny") return SynthProfile::kTiny;
  if (text == "small") return SynthProfile::kSmall;
  if (text == "midsize" || text == "mid") return SynthProfile::kMidSize;
  return std::nullopt;
}

NurseBlockGrid NominalTierMinimums(int nurses, int blocks, int max_per_block) {
  static const int kNominal[] = {8, 6, 4, 3};
  NurseBlockGrid g(nurses, std::vector<int>(blocks, 0));
  for (int i = 0; i < nurses; ++i) {
    const int rank = i + 1;
    const int tier = (4 * rank + nurses - 1) / nurses;  // ceil(4 rank / n)
    const int v = std::min(kNominal[tier - 1], max_per_block);
    for (int k = 0; k < blocks; ++k) g[i][k] = v;
  }
  return g;
}

PoolInstance SynthInstance(SynthProfile profile, std::uint64_t seed) {
  Rng rng(seed);
  PoolInstance inst;
  switch (profile) {
    case SynthProfile::kTiny: inst = Tiny(rng); break;
    case SynthProfile::kSmall: inst = Small(rng); break;
    case SynthProfile::kMidSize: inst = MidSize(rng); break;
  }
  inst.pool = {std::string(SynthProfileName(profile)) + "-" + std::to_string(seed),
               "synthetic", Designation::kRN};
  inst.Validate();
  return inst;
}

}  // namespace roster
