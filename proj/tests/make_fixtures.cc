// Regenerates fixtures/ from the builders. Usage: make_fixtures <repo root>
#include <filesystem>
#include <iostream>
#include <string>

#include <json.hpp>

#include "roster/io.h"
#include "roster/synth.h"
#include "roster/verify.h"
#include "worked_example.h"

namespace fs = std::filesystem;
using namespace roster;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <repo root>\n";
    return 2;
  }
  const fs::path root = fs::path(argv[1]) / "fixtures";
  fs::create_directories(root / "pools");
  fs::create_directories(root / "worked_example");

  const testing::WorkedExample fx = testing::BuildWorkedExample();
  nlohmann::json t2 = InstanceToJson({fx.instance, {}});
  t2["minimums"] = {{"tier_chart", "default"}};
  WriteFileAtomic((root / "pools" / "worked_example.json").string(), DumpJson(t2));
  SaveScheduleCsv(fx.schedule, fx.instance, (root / "worked_example" / "schedule.csv").string());

  nlohmann::json pools = nlohmann::json::array({"pools/worked_example.json"});
  auto add = [&](SynthProfile profile, const std::string& stem, std::uint64_t seed) {
    InstanceFile f{SynthInstance(profile, seed), {}};
    f.instance.pool.id = stem;
    const std::string rel = "pools/" + stem + ".json";
    SaveInstance(f, (root / rel).string());
    pools.push_back(rel);
  };
  for (std::uint64_t s = 1; s <= 4; ++s) add(SynthProfile::kMidSize, "mid_0" + std::to_string(s), s);
  for (std::uint64_t s = 1; s <= 4; ++s) add(SynthProfile::kSmall, "small_0" + std::to_string(s), s);
  for (std::uint64_t s = 1; s <= 2; ++s) add(SynthProfile::kTiny, "tiny_0" + std::to_string(s), s);

  const nlohmann::json manifest = {{"schema_version", 1}, {"cycle", "fixture-cycle"}, {"pools", pools}};
  WriteFileAtomic((root / "cycle.json").string(), DumpJson(manifest));
  std::cout << "wrote " << pools.size() << " pools under " << root.string() << "\n";
  return 0;
}
