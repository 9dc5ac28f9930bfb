// sched-cli: batch front end over the roster core.
//
// Exit codes: 0 accepted / success, 1 rejected or no solution, 2 input or
// usage error.
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roster/error.h"
#include "roster/heuristic.h"
#include "roster/io.h"
#include "roster/milp.h"
#include "roster/pipeline.h"
#include "roster/synth.h"
#include "roster/verify.h"

namespace fs = std::filesystem;
using namespace roster;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitInput = 2;

void PrintError(const RosterError& e) {
  std::cerr << "error: " << ErrorCodeName(e.code());
  if (!e.location().empty()) std::cerr << " at " << e.location();
  std::cerr << ": " << e.what() << "\n";
}

struct GenerateFlags {
  std::optional<std::string> mode;
  std::optional<double> time_limit;
  std::optional<int> iteration_limit;
  std::string out;
  int jobs = 1;
};

GenerationParams Resolve(GenerationParams p, const GenerateFlags& f) {
  if (f.mode) p.mode = *ParseArmstrongMode(*f.mode);  // checked by the option validator
  if (f.time_limit) p.time_limit_seconds = *f.time_limit;
  if (f.iteration_limit) p.iteration_limit = *f.iteration_limit;
  return p;
}

std::string Verdict(const VerificationReport& rep) {
  if (rep.accepted) return "ACCEPTED";
  std::string out = "REJECTED:";
  for (const std::string& name : rep.FailureNames()) out += " " + name;
  return out;
}

// Runs one pool; returns its exit code and a one-line status.
int GenerateOne(const InstanceFile& file, const GenerateFlags& flags, const std::string& out_dir,
                std::string* line) {
  const PoolInstance& inst = file.instance;
  const GenerationParams params = Resolve(file.generation, flags);
  auto backend = MakeDefaultBackend();
  const GenerateResult result = Generate(inst, params, *backend);
  WriteArtifacts(RenderArtifacts(result, inst), out_dir);
  const std::string pool = inst.pool.id.empty() ? "pool" : inst.pool.id;
  if (result.timed_out()) {
    *line = pool + ": no solution (time limit reached before any schedule was found)";
    return kExitRejected;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: unfilled %d of %d, ", pool.c_str(),
                result.schedule->TotalUnfilled(), inst.TotalDemand());
  *line = buf + Verdict(*result.report);
  if (result.repair && result.repair->hit_iteration_limit) {
    *line += " (warning: repair hit the iteration limit)";
  }
  return result.report->accepted ? kExitOk : kExitRejected;
}

bool IsManifest(const std::string& path) {
  const nlohmann::json doc = nlohmann::json::parse(ReadFile(path), nullptr, false);
  return doc.is_object() && doc.contains("pools");
}

int RunGenerate(const std::string& input, const GenerateFlags& flags) {
  if (!IsManifest(input)) {
    const InstanceFile file = LoadInstance(input);
    std::string line;
    const int code = GenerateOne(file, flags, flags.out, &line);
    std::cout << line << "\n";
    return code;
  }
  const CycleManifest manifest = LoadManifest(input);
  // Load everything first so input errors surface before any solving.
  std::vector<InstanceFile> files;
  for (const std::string& p : manifest.pools) files.push_back(LoadInstance(p));
  std::vector<std::string> lines(files.size());
  std::vector<int> codes(files.size(), kExitOk);
  std::vector<std::string> errors(files.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t x = next++; x < files.size(); x = next++) {
      const std::string id = files[x].instance.pool.id.empty()
                                 ? fs::path(manifest.pools[x]).stem().string()
                                 : files[x].instance.pool.id;
      try {
        codes[x] = GenerateOne(files[x], flags, (fs::path(flags.out) / id).string(), &lines[x]);
      } catch (const RosterError& e) {
        errors[x] = "error: " + std::string(ErrorCodeName(e.code())) + " at " + e.location() +
                    ": " + e.what();
      } catch (const std::exception& e) {
        errors[x] = std::string("error: ") + e.what();
      }
    }
  };
  const int threads = std::clamp(flags.jobs, 1, static_cast<int>(files.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = kExitOk;
  for (size_t x = 0; x < files.size(); ++x) {
    if (!errors[x].empty()) {
      std::cerr << errors[x] << "\n";
      code = kExitInput;
      continue;
    }
    std::cout << lines[x] << "\n";
    code = std::max(code, codes[x]);
  }
  return code;
}

int RunVerify(const std::string& instance_path, const std::string& schedule_path,
              const std::string& report_path) {
  const InstanceFile file = LoadInstance(instance_path);
  const Schedule s = LoadScheduleCsv(schedule_path, file.instance);
  const VerificationReport rep = Verify(s, file.instance);
  if (!report_path.empty()) WriteFileAtomic(report_path, DumpJson(ReportToJson(rep, file.instance)));
  std::cout << Verdict(rep) << "\n";
  if (!rep.accepted) {
    const nlohmann::json j = ReportToJson(rep, file.instance);
    for (const auto& f : j["general_failures"]) std::cout << "  " << f.dump() << "\n";
    for (const auto& v : j["armstrong_violations"]) {
      if (!v.value("justified", false)) std::cout << "  " << v.dump() << "\n";
    }
    for (const auto& c : j["uncoded_cells"]) std::cout << "  uncoded " << c.dump() << "\n";
  }
  return rep.accepted ? kExitOk : kExitRejected;
}

int RunReport(const std::string& instance_path, const std::string& schedule_path,
              const std::string& out) {
  const InstanceFile file = LoadInstance(instance_path);
  const Schedule s = LoadScheduleCsv(schedule_path, file.instance);
  const VerificationReport rep = Verify(s, file.instance);
  const std::string grid = RenderScheduleCsv(s, file.instance, rep);
  const std::string report = DumpJson(ReportToJson(rep, file.instance));
  if (out.empty()) {
    std::cout << grid;
  } else {
    fs::create_directories(out);
    WriteFileAtomic((fs::path(out) / "schedule.csv").string(), grid);
    WriteFileAtomic((fs::path(out) / "report.json").string(), report);
    std::cout << Verdict(rep) << "\n";
  }
  return rep.accepted ? kExitOk : kExitRejected;
}

int RunRepairCommand(const std::string& instance_path, const std::string& schedule_path,
                     int iteration_limit, const std::string& out) {
  const InstanceFile file = LoadInstance(instance_path);
  const Schedule start = LoadScheduleCsv(schedule_path, file.instance);
  const HeuristicResult r = RunRepair(start, file.instance, iteration_limit);
  const VerificationReport rep = Verify(r.schedule, file.instance);
  fs::create_directories(out);
  WriteFileAtomic((fs::path(out) / "schedule.csv").string(),
                  RenderScheduleCsv(r.schedule, file.instance, rep));
  WriteFileAtomic((fs::path(out) / "report.json").string(),
                  DumpJson(ReportToJson(rep, file.instance)));
  WriteFileAtomic((fs::path(out) / "swap_log.jsonl").string(),
                  SwapLogToJsonLines(r.log, file.instance));
  std::cout << r.log.size() << " events over " << r.iterations_used << " passes; "
            << Verdict(rep) << "\n";
  if (r.hit_iteration_limit) std::cout << "warning: iteration limit reached\n";
  return rep.accepted ? kExitOk : kExitRejected;
}

int RunCompare(const std::string& instance_path, double time_limit, int iteration_limit,
               bool as_json) {
  const InstanceFile file = LoadInstance(instance_path);
  auto backend = MakeDefaultBackend();
  const CompareResult c = CompareModes(file.instance, time_limit, iteration_limit, *backend);
  if (as_json) {
    std::cout << DumpJson(CompareToJson(c));
  } else {
    std::cout << CompareTable(c);
  }
  return kExitOk;
}

int RunValidate(const std::string& path) {
  const InstanceFile file = LoadInstance(path);
  const PoolInstance& inst = file.instance;
  std::cout << "ok: pool " << (inst.pool.id.empty() ? "-" : inst.pool.id) << ", "
            << inst.nurse_count() << " nurses, " << inst.calendar.blocks() << " blocks of "
            << inst.calendar.shifts_per_block() << " shifts, part-time demand "
            << inst.TotalDemand() << "\n";
  return kExitOk;
}

int RunSynth(const std::string& profile, std::uint64_t seed, const std::string& out) {
  const auto p = ParseSynthProfile(profile);
  if (!p) throw RosterError(ErrorCode::kInvalidArgument, "--profile", "unknown profile " + profile);
  InstanceFile file{SynthInstance(*p, seed), {}};
  const std::string text = DumpJson(InstanceToJson(file));
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFileAtomic(out, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Part-time nurse schedule generation and verification"};
  app.require_subcommand(1);

  std::string instance, schedule, out, report_path, profile = "midsize";
  GenerateFlags gen;
  int iteration_limit = 50;
  double time_limit = 300.0;
  bool as_json = false;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "Load and validate an instance file");
  validate->add_option("instance", instance, "Instance JSON")->required();

  auto* generate = app.add_subcommand("generate", "Generate a schedule for a pool or a cycle");
  generate->add_option("instance", instance, "Instance JSON or cycle manifest")->required();
  generate->add_option("--mode", gen.mode, "approx or exact")
      ->check(CLI::IsMember({"approx", "approximate", "exact"}));
  generate->add_option("--time-limit", gen.time_limit, "Seconds per solver stage");
  generate->add_option("--iteration-limit", gen.iteration_limit, "Repair pass limit")
      ->check(CLI::PositiveNumber);
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--jobs", gen.jobs, "Pools solved concurrently from a manifest")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Verify a schedule against its instance");
  verify->add_option("instance", instance, "Instance JSON")->required();
  verify->add_option("schedule", schedule, "Schedule CSV")->required();
  verify->add_option("--report", report_path, "Write the JSON report here");

  auto* report = app.add_subcommand("report", "Render the schedule grid and report");
  report->add_option("instance", instance, "Instance JSON")->required();
  report->add_option("schedule", schedule, "Schedule CSV")->required();
  report->add_option("--out", out, "Output directory (grid to stdout when absent)");

  auto* repair = app.add_subcommand("repair", "Run the repair heuristic on a schedule");
  repair->add_option("instance", instance, "Instance JSON")->required();
  repair->add_option("schedule", schedule, "Schedule CSV")->required();
  repair->add_option("--iteration-limit", iteration_limit, "Pass limit")
      ->check(CLI::PositiveNumber);
  repair->add_option("--out", out, "Output directory")->required();

  auto* compare = app.add_subcommand("compare", "Compare exact and approximate modes");
  compare->add_option("instance", instance, "Instance JSON")->required();
  compare->add_option("--time-limit", time_limit, "Seconds per solver stage");
  compare->add_option("--iteration-limit", iteration_limit, "Repair pass limit")
      ->check(CLI::PositiveNumber);
  compare->add_flag("--json", as_json, "Print JSON instead of a table");

  auto* synth = app.add_subcommand("synth", "Write a random test instance");
  synth->add_option("--profile", profile, "tiny, small or midsize");
  synth->add_option("--seed", seed, "Generator seed");
  synth->add_option("--out", out, "Output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*validate) return RunValidate(instance);
    if (*generate) return RunGenerate(instance, gen);
    if (*verify) return RunVerify(instance, schedule, report_path);
    if (*report) return RunReport(instance, schedule, out);
    if (*repair) return RunRepairCommand(instance, schedule, iteration_limit, out);
    if (*compare) return RunCompare(instance, time_limit, iteration_limit, as_json);
    if (*synth) return RunSynth(profile, seed, out);
  } catch (const RosterError& e) {
    PrintError(e);
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
