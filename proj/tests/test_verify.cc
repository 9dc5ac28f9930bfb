#include <doctest.h>

#include <cmath>
#include <sstream>

#include "roster/armstrong.h"
#include "roster/io.h"
#include "roster/milp.h"
#include "roster/pipeline.h"
#include "roster/synth.h"
#include "roster/verify.h"
#include "mutate.h"
#include "support.h"
#include "worked_example.h"

using namespace roster;
using namespace roster::testing;

namespace {

bool Names(const VerificationReport& rep, const std::string& name) {
  const auto names = rep.FailureNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

TEST_CASE("worked example fixture") {
  const WorkedExample fx = BuildWorkedExample();
  CHECK(GeneralRuleBreaks(fx.schedule, fx.instance).empty());
  const VerificationReport rep = Verify(fx.schedule, fx.instance);

  const std::vector<int> want_delta{-4, 2, 0, 1, 1, 1, 1, 1, 1};
  for (int i = 0; i < 9; ++i) {
    CAPTURE(i);
    CHECK(rep.nurse_summary[i].assigned[2] == WorkedExampleAssigned()[i]);
    CHECK(rep.nurse_summary[i].minimum[2] == WorkedExampleMinimums()[i]);
    CHECK(rep.nurse_summary[i].delta[2] == want_delta[i]);
  }
  CHECK(rep.nurse_summary[0].weekend_shifts == 10);

  // Nurse 1 is behind every junior that works, and only W blocks it.
  int nurse_one = 0;
  for (const RuleViolation& v : rep.violations) {
    if (v.block != 2 || v.disadvantaged != 0) continue;
    ++nurse_one;
    CHECK(v.rule == ArmstrongRule::k1A);
    CHECK(v.justified);
  }
  CHECK(nurse_one == 8);
  for (int j : WorkedExampleWeekendEvidence()) {
    REQUIRE(rep.codes.applies(0, 2, j));
    CHECK((rep.codes.mask(0, 2, j) & kCodeW) != 0);
  }
  for (int i = 3; i < 9; ++i) {
    for (int j : WorkedExampleDemandEvidence()) CHECK((rep.codes.mask(i, 2, j) & kCodeD) != 0);
  }
  CHECK(rep.general_failures.empty());
  CHECK(rep.uncoded.empty());
  CHECK(rep.UnjustifiedCount() == 0);
  CHECK(rep.accepted);
  CHECK(rep.total_unfilled == 0);
}

TEST_CASE("worked example without the weekend evidence") {
  // Drop nurse 1 below the weekend cap: the weekend cells reopen and the
  // 1A violations lose their justification.
  WorkedExample fx = BuildWorkedExample();
  fx.instance.max_weekend_shifts = 11;
  const VerificationReport rep = Verify(fx.schedule, fx.instance);
  CHECK_FALSE(rep.accepted);
  CHECK(Names(rep, "armstrong_1A"));
  CHECK(rep.general_failures.empty());
}

TEST_CASE("supply corruption is rejected") {
  const WorkedExample fx = BuildWorkedExample();
  NurseShiftGrid<std::uint8_t> x = fx.schedule.assignment();
  ShiftGrid<int> s = fx.schedule.unfilled_grid();
  s(0, 1) += 1;
  const VerificationReport rep = Verify(Schedule::FromParts(x, s), fx.instance);
  CHECK_FALSE(rep.accepted);
  CHECK(Names(rep, "supply_identity"));

  ShiftGrid<int> neg = fx.schedule.unfilled_grid();
  neg(0, 41) = -1;
  CHECK(Names(Verify(Schedule::FromParts(x, neg), fx.instance), "supply_identity"));
}

TEST_CASE("dimension mismatch is reported, not thrown") {
  const WorkedExample fx = BuildWorkedExample();
  const Schedule small = Schedule::Empty(3, fx.instance.demand);
  VerificationReport rep;
  CHECK_NOTHROW(rep = Verify(small, fx.instance));
  CHECK_FALSE(rep.accepted);
  CHECK(Names(rep, "dimensions"));
}

TEST_CASE("single mutations are rejected with the right rule") {
  struct Base {
    PoolInstance inst;
    Schedule schedule;
  };
  std::vector<Base> bases;
  {
    WorkedExample fx = BuildWorkedExample();
    bases.push_back({std::move(fx.instance), std::move(fx.schedule)});
  }
  auto backend = MakeHighsBackend();
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    PoolInstance inst = SynthInstance(SynthProfile::kSmall, seed);
    const GenerateResult g = Generate(inst, GenerationParams{}, *backend);
    REQUIRE(g.report.has_value());
    REQUIRE(g.report->accepted);
    bases.push_back({inst, *g.schedule});
  }
  for (MutationKind kind : kAllMutations) {
    int applied = 0;
    for (size_t b = 0; b < bases.size(); ++b) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CAPTURE(MutationName(kind));
        CAPTURE(b);
        CAPTURE(seed);
        Mutator m(bases[b].schedule, bases[b].inst, seed);
        const auto mutated = m.Apply(kind);
        if (!mutated) continue;
        ++applied;
        const VerificationReport rep = Verify(*mutated, bases[b].inst);
        CHECK_FALSE(rep.accepted);
        CHECK(NamesExpected(rep.FailureNames(), kind));
      }
    }
    CAPTURE(MutationName(kind));
    CHECK(applied >= 10);
  }
}

TEST_CASE("preference summary") {
  const CycleCalendar cal = CycleCalendar::Build(1, 2, 3, Weekday::kSaturday);
  PoolInstance inst = MakeInstance(cal, 2, {{1, 0, 0, 1, 0, 0}}, {2, 1});
  inst.preferences.set_score(0, 0, 0, 3);
  inst.preferences.set_score(0, 0, 3, 1);
  Schedule s = Schedule::Empty(2, inst.demand);

  SUBCASE("nothing assigned") {
    const PreferenceSummary p = SummarizePreferences(s, inst);
    CHECK(p.assigned == 0);
    CHECK_FALSE(p.percent_first.has_value());
    CHECK_FALSE(p.nurses[0].percent_by_score[3].has_value());
    CHECK(std::isnan(p.shift_mean(0, 0)));
  }
  SUBCASE("half first choice") {
    s.Assign(0, 0, 0);
    s.Assign(0, 0, 3);
    const PreferenceSummary p = SummarizePreferences(s, inst);
    CHECK(p.assigned == 2);
    CHECK(p.first_preference == 1);
    REQUIRE(p.percent_first.has_value());
    CHECK(*p.percent_first == doctest::Approx(50.0));
    CHECK(p.nurses[0].count_by_score[1] == 1);
    CHECK(p.nurses[0].count_by_score[3] == 1);
    CHECK(*p.nurses[0].percent_by_score[1] == doctest::Approx(50.0));
    CHECK_FALSE(p.nurses[1].percent_by_score[3].has_value());
    CHECK(p.shift_mean(0, 0) == 3.0);
    CHECK(p.shift_mean(0, 3) == 1.0);
  }
  SUBCASE("all first choice") {
    s.Assign(0, 0, 0);
    const PreferenceSummary p = SummarizePreferences(s, inst);
    CHECK(*p.percent_first == doctest::Approx(100.0));
  }
}

TEST_CASE("code strings") {
  CHECK(CodeString(kCodeB | kCodeW) == "BW");
  CHECK(CodeString(0).empty());
  for (std::uint8_t m = 0; m < 16; ++m) CHECK(ParseCodes(CodeString(m)) == m);
  CHECK_FALSE(ParseCodes("BX").has_value());
}

TEST_CASE("schedule csv round trip") {
  const WorkedExample fx = BuildWorkedExample();
  const VerificationReport rep = Verify(fx.schedule, fx.instance);
  const std::string text = RenderScheduleCsv(fx.schedule, fx.instance, rep);
  std::istringstream in(text);
  const Schedule back = ParseScheduleCsv(in, "worked_example.csv", fx.instance);
  CHECK(back == fx.schedule);
  // W evidence is visible in the grid.
  CHECK(text.find(",W,") != std::string::npos);
  CHECK(RenderScheduleCsv(back, fx.instance, Verify(back, fx.instance)) == text);
}

TEST_CASE("report json") {
  const WorkedExample fx = BuildWorkedExample();
  const nlohmann::json j = ReportToJson(Verify(fx.schedule, fx.instance), fx.instance);
  CHECK(j["accepted"] == true);
  CHECK(j["failures"].empty());
  CHECK(j["nurses"].size() == 9);
  CHECK(j["nurses"][0]["delta"][2] == -4);
}
