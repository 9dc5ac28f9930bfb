#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "roster/error.h"
#include "roster/io.h"
#include "roster/synth.h"
#include "roster/verify.h"
#include "worked_example.h"

using namespace roster;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("roster_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RosterError ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RosterError& e) {
    return e;
  }
  FAIL("expected a RosterError");
  return RosterError(ErrorCode::kInternal, "", "");
}

json SmallDoc() {
  json scores = json::object();
  const json row = json::array({json::array({1, 0, 2, 3, 0, 1})});
  scores["a"] = row;
  scores["b"] = row;
  return json{
      {"schema_version", 1},
      {"pool", {{"id", "p1"}, {"unit", "4W"}, {"designation", "RN"}}},
      {"calendar",
       {{"blocks", 1}, {"days_per_block", 2}, {"shifts_per_day", 3}, {"first_weekday", "Saturday"}}},
      {"limits", {{"max_shifts_per_block", 2}, {"max_weekend_shifts", 2}}},
      {"nurses", json::array({{{"id", "b"}, {"seniority_rank", 2}},
                              {{"id", "a"}, {"seniority_rank", 1}}})},
      {"demand", {{"part_time", json::array({json::array({1, 0, 1, 1, 0, 0})})}}},
      {"preferences", {{"direction", "ascending"}, {"scores", scores}}},
      {"minimums", {{"values", json::array({json::array({2}), json::array({1})})}}},
  };
}

}  // namespace

TEST_CASE("instance json loads in seniority order") {
  const InstanceFile f = InstanceFromJson(SmallDoc(), ".");
  const PoolInstance& inst = f.instance;
  CHECK(inst.nurses[0].id == "a");
  CHECK(inst.nurses[1].id == "b");
  CHECK(inst.calendar.shifts_per_block() == 6);
  CHECK(inst.TotalDemand() == 3);
  CHECK(inst.preferences.score(0, 0, 3) == 3);
  CHECK_FALSE(inst.preferences.available(1, 0, 1));
  CHECK(inst.minimums[0][0] == 2);
  CHECK(f.generation == GenerationParams{});
}

TEST_CASE("descending scores are normalised") {
  json doc = SmallDoc();
  doc["preferences"]["direction"] = "descending";
  const PoolInstance inst = InstanceFromJson(doc, ".").instance;
  CHECK(inst.preferences.score(0, 0, 0) == 3);
  CHECK(inst.preferences.score(0, 0, 3) == 1);
  CHECK(inst.preferences.score(0, 0, 1) == 0);
}

TEST_CASE("derived demand") {
  json doc = SmallDoc();
  doc["demand"] = {{"total", json::array({json::array({3, 1, 1, 1, 0, 0})})},
                   {"full_time_scheduled", json::array({json::array({2, 1, 0, 0, 0, 0})})},
                   {"full_time_leave", json::array({json::array({1, 0, 0, 0, 0, 0})})}};
  const PoolInstance inst = InstanceFromJson(doc, ".").instance;
  CHECK(inst.demand(0, 0) == 2);
  CHECK(inst.demand(0, 1) == 0);
  doc["demand"]["full_time_scheduled"][0][2] = 2;
  CHECK(ErrorOf([&] { InstanceFromJson(doc, "."); }).code() == ErrorCode::kNegativeDemand);
}

TEST_CASE("loader errors name the offending field") {
  SUBCASE("duplicate rank names both nurses") {
    json doc = SmallDoc();
    doc["nurses"][0]["seniority_rank"] = 1;
    const RosterError e = ErrorOf([&] { InstanceFromJson(doc, "."); });
    CHECK(e.code() == ErrorCode::kDuplicateRank);
    const std::string msg = e.what();
    CHECK(msg.find("a") != std::string::npos);
    CHECK(msg.find("b") != std::string::npos);
    CHECK(e.location() == "/nurses/1/seniority_rank");
  }
  SUBCASE("rank gap") {
    json doc = SmallDoc();
    doc["nurses"][0]["seniority_rank"] = 3;
    CHECK(ErrorOf([&] { InstanceFromJson(doc, "."); }).code() == ErrorCode::kRankGap);
  }
  SUBCASE("short availability row") {
    json doc = SmallDoc();
    doc["preferences"]["scores"]["b"][0].erase(5);
    const RosterError e = ErrorOf([&] { InstanceFromJson(doc, "."); });
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
    CHECK(e.location().rfind("/preferences/scores/b", 0) == 0);
  }
  SUBCASE("missing nurse grid") {
    json doc = SmallDoc();
    doc["preferences"]["scores"].erase("b");
    CHECK(ErrorOf([&] { InstanceFromJson(doc, "."); }).code() == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("unknown nurse") {
    json doc = SmallDoc();
    doc["preferences"]["scores"]["z"] = doc["preferences"]["scores"]["a"];
    CHECK(ErrorOf([&] { InstanceFromJson(doc, "."); }).code() == ErrorCode::kUnknownNurse);
  }
  SUBCASE("score out of range") {
    json doc = SmallDoc();
    doc["preferences"]["scores"]["a"][0][2] = 4;
    const RosterError e = ErrorOf([&] { InstanceFromJson(doc, "."); });
    CHECK(e.code() == ErrorCode::kScoreOutOfRange);
    CHECK(e.location() == "/preferences/scores/a/0/2");
  }
  SUBCASE("version") {
    json doc = SmallDoc();
    doc["schema_version"] = 2;
    CHECK(ErrorOf([&] { InstanceFromJson(doc, "."); }).code() == ErrorCode::kUnsupportedVersion);
  }
  SUBCASE("tier chart without the pool size") {
    json doc = SmallDoc();
    doc["minimums"] = {{"tier_chart", "default"}};
    CHECK(ErrorOf([&] { InstanceFromJson(doc, "."); }).code() == ErrorCode::kUnknownPoolSize);
  }
}

TEST_CASE("default tier chart resolves minimums") {
  const roster::testing::WorkedExample fx = roster::testing::BuildWorkedExample();
  InstanceFile f{fx.instance, {}};
  json doc = InstanceToJson(f);
  doc["minimums"] = {{"tier_chart", "default"}};
  const PoolInstance inst = InstanceFromJson(doc, ".").instance;
  for (int i = 0; i < 9; ++i) {
    CHECK(inst.minimums[i][2] == roster::testing::WorkedExampleMinimums()[i]);
  }
}

TEST_CASE("save and load round trip") {
  const fs::path dir = ScratchDir("roundtrip");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    InstanceFile f{SynthInstance(SynthProfile::kMidSize, seed), {}};
    f.generation.mode = ArmstrongMode::kExact;
    f.generation.time_limit_seconds = 12.5;
    const std::string path = (dir / ("p" + std::to_string(seed) + ".json")).string();
    SaveInstance(f, path);
    const InstanceFile back = LoadInstance(path);
    CHECK(back.instance == f.instance);
    CHECK(back.generation == f.generation);
    // Re-export is byte identical.
    const std::string again = (dir / "again.json").string();
    SaveInstance(back, again);
    CHECK(ReadFile(again) == ReadFile(path));
  }
}

TEST_CASE("availability csv import") {
  const PoolInstance inst = InstanceFromJson(SmallDoc(), ".").instance;
  SUBCASE("values") {
    std::istringstream in("nurse_id,block,shift,score\na,1,1,1\nb,1,6,3\n");
    const AvailabilityPreference p =
        ImportAvailabilityCsv(in, "av.csv", inst, PreferenceDirection::kDescending);
    CHECK(p.score(0, 0, 0) == 3);
    CHECK(p.score(1, 0, 5) == 1);
    CHECK_FALSE(p.available(0, 0, 1));
  }
  SUBCASE("header only means nobody is available") {
    std::istringstream in("nurse_id,block,shift,score\n");
    const AvailabilityPreference p =
        ImportAvailabilityCsv(in, "av.csv", inst, PreferenceDirection::kAscending);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 6; ++j) CHECK_FALSE(p.available(i, 0, j));
    }
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    const RosterError e = ErrorOf(
        [&] { ImportAvailabilityCsv(in, "av.csv", inst, PreferenceDirection::kAscending); });
    CHECK(e.code() == ErrorCode::kSchemaViolation);
  }
  SUBCASE("bad score names the line") {
    std::istringstream in("nurse_id,block,shift,score\na,1,1,2\na,1,2,7\n");
    const RosterError e = ErrorOf(
        [&] { ImportAvailabilityCsv(in, "av.csv", inst, PreferenceDirection::kAscending); });
    CHECK(e.code() == ErrorCode::kScoreOutOfRange);
    CHECK(e.location() == "av.csv:3");
  }
  SUBCASE("unknown nurse, bad cell, duplicate") {
    std::istringstream unknown("nurse_id,block,shift,score\nz,1,1,2\n");
    CHECK(ErrorOf([&] {
            ImportAvailabilityCsv(unknown, "av.csv", inst, PreferenceDirection::kAscending);
          }).code() == ErrorCode::kUnknownNurse);
    std::istringstream cell("nurse_id,block,shift,score\na,1,7,2\n");
    CHECK(ErrorOf([&] {
            ImportAvailabilityCsv(cell, "av.csv", inst, PreferenceDirection::kAscending);
          }).code() == ErrorCode::kDimensionMismatch);
    std::istringstream dup("nurse_id,block,shift,score\na,1,1,2\na,1,1,3\n");
    CHECK(ErrorOf([&] {
            ImportAvailabilityCsv(dup, "av.csv", inst, PreferenceDirection::kAscending);
          }).location() == "av.csv:3");
  }
}

TEST_CASE("schedule csv files") {
  const fs::path dir = ScratchDir("schedule");
  const roster::testing::WorkedExample fx = roster::testing::BuildWorkedExample();
  const std::string path = (dir / "s.csv").string();
  SaveScheduleCsv(fx.schedule, fx.instance, path);
  CHECK(LoadScheduleCsv(path, fx.instance) == fx.schedule);

  std::string text = ReadFile(path);
  const size_t at = text.find(",X,");
  REQUIRE(at != std::string::npos);
  text.replace(at + 1, 1, "Q");
  std::istringstream bad(text);
  CHECK(ErrorOf([&] { ParseScheduleCsv(bad, "s.csv", fx.instance); }).code() ==
        ErrorCode::kSchemaViolation);
}

TEST_CASE("unwritable path") {
  const fs::path dir = ScratchDir("unwritable");
  const std::string path = (dir / "missing" / "out.json").string();
  const RosterError e = ErrorOf([&] { WriteFileAtomic(path, "x"); });
  CHECK(e.code() == ErrorCode::kIo);
  CHECK(e.location() == path);
  CHECK(ErrorOf([&] { ReadFile(path); }).code() == ErrorCode::kIo);
}

TEST_CASE("manifest") {
  const fs::path dir = ScratchDir("manifest");
  fs::create_directories(dir / "pools");
  std::ofstream(dir / "cycle.json")
      << R"({"schema_version": 1, "cycle": "2026-C1", "pools": ["pools/a.json", "pools/b.json"]})";
  const CycleManifest m = LoadManifest((dir / "cycle.json").string());
  CHECK(m.cycle == "2026-C1");
  REQUIRE(m.pools.size() == 2);
  CHECK(fs::path(m.pools[0]) == dir / "pools" / "a.json");

  std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "cycle": "x"})";
  CHECK(ErrorOf([&] { LoadManifest((dir / "bad.json").string()); }).code() ==
        ErrorCode::kSchemaViolation);
}

TEST_CASE("dump json is stable") {
  const json a = json::parse(R"({"b": 1, "a": [1, 2]})");
  CHECK(DumpJson(a) == "{\n  \"a\": [1, 2],\n  \"b\": 1\n}\n");
  const json nested = json::parse(R"({"g": [[1, 2], []], "e": {}, "s": "x\"y"})");
  CHECK(DumpJson(nested) ==
        "{\n  \"e\": {},\n  \"g\": [\n    [1, 2],\n    []\n  ],\n  \"s\": \"x\\\"y\"\n}\n");
  CHECK(json::parse(DumpJson(nested)) == nested);
}

TEST_CASE("committed worked example fixture matches the builder") {
  const std::string root = ROSTER_SOURCE_DIR;
  const roster::testing::WorkedExample fx = roster::testing::BuildWorkedExample();
  const InstanceFile f = LoadInstance(root + "/fixtures/pools/worked_example.json");
  CHECK(f.instance == fx.instance);
  CHECK(LoadScheduleCsv(root + "/fixtures/worked_example/schedule.csv", f.instance) == fx.schedule);
  CHECK(LoadManifest(root + "/fixtures/cycle.json").pools.size() == 11);
}
