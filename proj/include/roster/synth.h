#ifndef ROSTER_SYNTH_H_
#define ROSTER_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "roster/domain.h"

namespace roster {

// Randomised test pools. The same profile and seed always give the same
// instance on a given standard library.
enum class SynthProfile {
  kTiny,     // 1-2 nurses, one block of at most 8 shifts; within the oracle cap
  kSmall,    // 2-4 nurses, one or two 7-day blocks; small enough for exact mode
  kMidSize,  // 3-12 nurses, default calendar
};

std::string_view SynthProfileName(SynthProfile profile);
std::optional<SynthProfile> ParseSynthProfile(std::string_view text);

// Minimums follow the nominal tier ladder 8/6/4/3 with tier = ceil(4 * rank / n),
// capped at the block maximum.
NurseBlockGrid NominalTierMinimums(int nurses, int blocks, int max_per_block);

PoolInstance SynthInstance(SynthProfile profile, std::uint64_t seed);

}  // namespace roster

#endif  // ROSTER_SYNTH_H_
