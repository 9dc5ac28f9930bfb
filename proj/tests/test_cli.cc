// Runs the sched-cli binary end to end and checks exit codes and output.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = ROSTER_SOURCE_DIR;
const std::string kCli = SCHED_CLI_PATH;

struct Run {
  int code;
  std::string out;
};

Run Exec(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path Scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roster_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool Has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("verify accepts the committed fixture") {
  const Run r = Exec("verify " + (kRoot / "fixtures/pools/worked_example.json").string() + " " +
                         (kRoot / "fixtures/worked_example/schedule.csv").string());
  CHECK(r.code == 0);
  CHECK(Has(r.out, "ACCEPTED"));
}

TEST_CASE("verify rejects a corrupted schedule and names the rule") {
  const fs::path dir = Scratch("corrupt");
  std::string csv = Slurp(kRoot / "fixtures/worked_example/schedule.csv");
  // First cell of the first nurse row is unavailable; book it anyway.
  const size_t row = csv.find("\n1,N1,");
  REQUIRE(row != std::string::npos);
  REQUIRE(csv[row + 6] == '.');
  csv[row + 6] = 'X';
  std::ofstream(dir / "bad.csv") << csv;
  const Run r = Exec("verify " + (kRoot / "fixtures/pools/worked_example.json").string() + " " +
                     (dir / "bad.csv").string() + " --report " + (dir / "report.json").string());
  CHECK(r.code == 1);
  CHECK(Has(r.out, "REJECTED"));
  CHECK(Has(r.out, "availability"));
  CHECK(Has(Slurp(dir / "report.json"), "\"accepted\": false"));
}

TEST_CASE("zero time limit reports no solution") {
  const fs::path dir = Scratch("zero");
  const Run r = Exec("generate " + (kRoot / "fixtures/pools/small_01.json").string() +
                     " --time-limit 0 --out " + dir.string());
  CHECK(r.code == 1);
  CHECK(Has(r.out, "no solution"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK_FALSE(fs::exists(dir / "schedule.csv"));
}

TEST_CASE("input errors exit with 2") {
  CHECK(Exec("validate /nonexistent/pool.json").code == 2);
  CHECK(Exec("generate --bogus-flag x").code == 2);
  const fs::path dir = Scratch("badpool");
  std::ofstream(dir / "p.json") << "{\"schema_version\": 1";
  const Run r = Exec("validate " + (dir / "p.json").string());
  CHECK(r.code == 2);
  CHECK(Exec("--help").code == 0);
}

TEST_CASE("synth then validate") {
  const fs::path dir = Scratch("synth");
  REQUIRE(Exec("synth --profile small --seed 9 --out " + (dir / "p.json").string()).code == 0);
  const Run r = Exec("validate " + (dir / "p.json").string());
  CHECK(r.code == 0);
  CHECK(Has(r.out, "ok:"));
}

TEST_CASE("generate then verify round trip") {
  const fs::path dir = Scratch("gen");
  const std::string pool = (kRoot / "fixtures/pools/small_02.json").string();
  const Run g = Exec("generate " + pool + " --time-limit 30 --out " + dir.string());
  CHECK(g.code == 0);
  REQUIRE(fs::exists(dir / "schedule.csv"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "swap_log.jsonl"));
  const Run v = Exec("verify " + pool + " " + (dir / "schedule.csv").string());
  CHECK(v.code == 0);
  CHECK(Has(v.out, "ACCEPTED"));
  // The re-rendered report matches the one written during generation.
  const fs::path again = Scratch("gen_report");
  REQUIRE(Exec("report " + pool + " " + (dir / "schedule.csv").string() + " --out " + again.string()).code == 0);
  CHECK(Slurp(again / "report.json") == Slurp(dir / "report.json"));
}
