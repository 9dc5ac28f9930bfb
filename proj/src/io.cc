#include "roster/io.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "roster/error.h"

namespace roster {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void Fail(ErrorCode code, const std::string& where, const std::string& msg) {
  throw RosterError(code, where, msg);
}

const json& Require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    Fail(ErrorCode::kSchemaViolation, where, "missing field \"" + key + "\"");
  }
  return obj.at(key);
}

int AsInt(const json& v, const std::string& where) {
  if (!v.is_number_integer()) Fail(ErrorCode::kSchemaViolation, where, "expected an integer");
  return v.get<int>();
}

double AsNumber(const json& v, const std::string& where) {
  if (!v.is_number()) Fail(ErrorCode::kSchemaViolation, where, "expected a number");
  return v.get<double>();
}

bool AsBool(const json& v, const std::string& where) {
  if (!v.is_boolean()) Fail(ErrorCode::kSchemaViolation, where, "expected a boolean");
  return v.get<bool>();
}

std::string AsString(const json& v, const std::string& where) {
  if (!v.is_string()) Fail(ErrorCode::kSchemaViolation, where, "expected a string");
  return v.get<std::string>();
}

const json& AsArray(const json& v, const std::string& where, size_t size) {
  if (!v.is_array()) Fail(ErrorCode::kSchemaViolation, where, "expected an array");
  if (v.size() != size) {
    Fail(ErrorCode::kDimensionMismatch, where,
         "expected " + std::to_string(size) + " entries, found " + std::to_string(v.size()));
  }
  return v;
}

// blocks x shifts integer grid.
ShiftGrid<int> ReadShiftGrid(const json& v, const std::string& where, int r, int q) {
  ShiftGrid<int> grid(r, q, 0);
  AsArray(v, where, r);
  for (int k = 0; k < r; ++k) {
    const std::string wk = where + "/" + std::to_string(k);
    AsArray(v[k], wk, q);
    for (int j = 0; j < q; ++j) grid(k, j) = AsInt(v[k][j], wk + "/" + std::to_string(j));
  }
  return grid;
}

json WriteShiftGrid(const ShiftGrid<int>& grid) {
  json out = json::array();
  for (int k = 0; k < grid.blocks(); ++k) {
    json row = json::array();
    for (int j = 0; j < grid.shifts_per_block(); ++j) row.push_back(grid(k, j));
    out.push_back(row);
  }
  return out;
}

void CheckId(const std::string& id, const std::string& where) {
  if (id.empty() || id.find_first_of(",\"\n\r") != std::string::npos) {
    Fail(ErrorCode::kSchemaViolation, where,
         "nurse id must be non-empty without commas, quotes or line breaks");
  }
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string Trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::optional<int> ParseInt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  size_t pos = 0;
  try {
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

std::string FormatFixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json OptionalPercent(const std::optional<double>& v) {
  if (!v) return nullptr;
  return std::round(*v * 1e4) / 1e4;
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, path, "cannot open for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      Fail(ErrorCode::kIo, path, "write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    Fail(ErrorCode::kIo, path, "rename failed");
  }
}

namespace {

bool AllScalars(const json& a) {
  return std::none_of(a.begin(), a.end(),
                      [](const json& v) { return v.is_array() || v.is_object(); });
}

void DumpInto(const json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (v.is_object() && !v.empty()) {
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      DumpInto(it.value(), depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (v.is_array() && !v.empty() && !AllScalars(v)) {
    out += "[\n";
    for (size_t x = 0; x < v.size(); ++x) {
      if (x) out += ",\n";
      out += pad;
      DumpInto(v[x], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else if (v.is_array()) {
    out += "[";
    for (size_t x = 0; x < v.size(); ++x) {
      if (x) out += ", ";
      out += v[x].dump();
    }
    out += "]";
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string DumpJson(const json& doc) {
  std::string out;
  DumpInto(doc, 0, out);
  return out + "\n";
}

InstanceFile InstanceFromJson(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) Fail(ErrorCode::kSchemaViolation, "", "instance must be an object");
  const int version = AsInt(Require(doc, "schema_version", ""), "/schema_version");
  if (version != kInstanceSchemaVersion) {
    Fail(ErrorCode::kUnsupportedVersion, "/schema_version",
         "unsupported schema version " + std::to_string(version));
  }
  InstanceFile file;
  PoolInstance& inst = file.instance;

  if (doc.contains("pool")) {
    const json& p = doc["pool"];
    if (p.contains("id")) inst.pool.id = AsString(p["id"], "/pool/id");
    if (p.contains("unit")) inst.pool.unit = AsString(p["unit"], "/pool/unit");
    if (p.contains("designation")) {
      const auto d = ParseDesignation(AsString(p["designation"], "/pool/designation"));
      if (!d) Fail(ErrorCode::kSchemaViolation, "/pool/designation", "expected RN, RPN or PSW");
      inst.pool.designation = *d;
    }
  }

  if (doc.contains("calendar")) {
    const json& c = doc["calendar"];
    const CycleCalendar def = CycleCalendar::Default();
    const int blocks = c.contains("blocks") ? AsInt(c["blocks"], "/calendar/blocks") : def.blocks();
    const int days = c.contains("days_per_block")
                         ? AsInt(c["days_per_block"], "/calendar/days_per_block")
                         : def.days_per_block();
    const int spd = c.contains("shifts_per_day")
                        ? AsInt(c["shifts_per_day"], "/calendar/shifts_per_day")
                        : def.shifts_per_day();
    Weekday first = def.first_weekday();
    if (c.contains("first_weekday")) {
      const auto w = ParseWeekday(AsString(c["first_weekday"], "/calendar/first_weekday"));
      if (!w) Fail(ErrorCode::kSchemaViolation, "/calendar/first_weekday", "unknown weekday");
      first = *w;
    }
    try {
      inst.calendar = CycleCalendar::Build(blocks, days, spd, first);
    } catch (const RosterError& e) {
      Fail(e.code(), "/calendar", e.what());
    }
  }
  const int r = inst.calendar.blocks();
  const int q = inst.calendar.shifts_per_block();

  if (doc.contains("limits")) {
    const json& l = doc["limits"];
    if (l.contains("max_shifts_per_block")) {
      inst.max_shifts_per_block = AsInt(l["max_shifts_per_block"], "/limits/max_shifts_per_block");
    }
    if (l.contains("max_weekend_shifts")) {
      inst.max_weekend_shifts = AsInt(l["max_weekend_shifts"], "/limits/max_weekend_shifts");
    }
  }

  const json& nurses = Require(doc, "nurses", "");
  if (!nurses.is_array() || nurses.empty()) {
    Fail(ErrorCode::kSchemaViolation, "/nurses", "expected a non-empty array");
  }
  std::map<int, std::string> by_rank;
  std::set<std::string> ids;
  std::vector<Nurse> listed;
  for (size_t x = 0; x < nurses.size(); ++x) {
    const std::string w = "/nurses/" + std::to_string(x);
    Nurse nurse;
    nurse.id = AsString(Require(nurses[x], "id", w), w + "/id");
    CheckId(nurse.id, w + "/id");
    nurse.seniority_rank = AsInt(Require(nurses[x], "seniority_rank", w), w + "/seniority_rank");
    nurse.designation = inst.pool.designation;
    if (nurses[x].contains("designation")) {
      const auto d = ParseDesignation(AsString(nurses[x]["designation"], w + "/designation"));
      if (!d) Fail(ErrorCode::kSchemaViolation, w + "/designation", "expected RN, RPN or PSW");
      nurse.designation = *d;
    }
    if (!ids.insert(nurse.id).second) {
      Fail(ErrorCode::kSchemaViolation, w + "/id", "duplicate nurse id " + nurse.id);
    }
    auto [it, fresh] = by_rank.emplace(nurse.seniority_rank, nurse.id);
    if (!fresh) {
      Fail(ErrorCode::kDuplicateRank, w + "/seniority_rank",
           "nurses " + it->second + " and " + nurse.id + " share seniority rank " +
               std::to_string(nurse.seniority_rank));
    }
    listed.push_back(nurse);
  }
  int expect = 1;
  for (const auto& [rank, id] : by_rank) {
    if (rank != expect) {
      Fail(ErrorCode::kRankGap, "/nurses",
           "seniority ranks must be 1.." + std::to_string(listed.size()) + "; nurse " + id +
               " has rank " + std::to_string(rank) + ", expected " + std::to_string(expect));
    }
    ++expect;
  }
  inst.nurses.resize(listed.size());
  for (const Nurse& nurse : listed) inst.nurses[nurse.seniority_rank - 1] = nurse;
  const int n = inst.nurse_count();
  std::map<std::string, int> index_of;
  for (int i = 0; i < n; ++i) index_of[inst.nurses[i].id] = i;
  auto nurse_index = [&](const std::string& id, const std::string& where) {
    auto it = index_of.find(id);
    if (it == index_of.end()) Fail(ErrorCode::kUnknownNurse, where, "unknown nurse id " + id);
    return it->second;
  };

  const json& demand = Require(doc, "demand", "");
  if (demand.contains("part_time")) {
    inst.demand = ReadShiftGrid(demand["part_time"], "/demand/part_time", r, q);
  } else {
    const ShiftGrid<int> total = ReadShiftGrid(Require(demand, "total", "/demand"), "/demand/total", r, q);
    const ShiftGrid<int> ft = demand.contains("full_time_scheduled")
                                  ? ReadShiftGrid(demand["full_time_scheduled"],
                                                  "/demand/full_time_scheduled", r, q)
                                  : ShiftGrid<int>(r, q, 0);
    const ShiftGrid<int> leave = demand.contains("full_time_leave")
                                     ? ReadShiftGrid(demand["full_time_leave"],
                                                     "/demand/full_time_leave", r, q)
                                     : ShiftGrid<int>(r, q, 0);
    try {
      inst.demand = DerivePartTimeDemand(total, ft, leave);
    } catch (const RosterError& e) {
      Fail(e.code(), "/demand/" + e.location(), e.what());
    }
  }

  const json& prefs = Require(doc, "preferences", "");
  PreferenceDirection direction = PreferenceDirection::kAscending;
  if (prefs.contains("direction")) {
    const std::string d = AsString(prefs["direction"], "/preferences/direction");
    if (d == "ascending") {
      direction = PreferenceDirection::kAscending;
    } else if (d == "descending") {
      direction = PreferenceDirection::kDescending;
    } else {
      Fail(ErrorCode::kSchemaViolation, "/preferences/direction",
           "expected \"ascending\" or \"descending\"");
    }
  }
  const json& scores = Require(prefs, "scores", "/preferences");
  if (!scores.is_object()) {
    Fail(ErrorCode::kSchemaViolation, "/preferences/scores", "expected an object keyed by nurse id");
  }
  inst.preferences = AvailabilityPreference(n, r, q);
  std::vector<bool> seen(n, false);
  for (const auto& [id, grid] : scores.items()) {
    const std::string w = "/preferences/scores/" + id;
    const int i = nurse_index(id, w);
    seen[i] = true;
    const ShiftGrid<int> raw = ReadShiftGrid(grid, w, r, q);
    for (int k = 0; k < r; ++k) {
      for (int j = 0; j < q; ++j) {
        const std::string wc = w + "/" + std::to_string(k) + "/" + std::to_string(j);
        try {
          inst.preferences.set_score(i, k, j, NormalizeScore(raw(k, j), direction));
        } catch (const RosterError& e) {
          Fail(ErrorCode::kScoreOutOfRange, wc, e.what());
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) {
      Fail(ErrorCode::kDimensionMismatch, "/preferences/scores",
           "no preference grid for nurse " + inst.nurses[i].id);
    }
  }

  inst.carry_over.assign(n, {});
  if (doc.contains("carry_over")) {
    const json& co = doc["carry_over"];
    if (!co.is_object()) Fail(ErrorCode::kSchemaViolation, "/carry_over", "expected an object");
    for (const auto& [id, v] : co.items()) {
      const std::string w = "/carry_over/" + id;
      const int i = nurse_index(id, w);
      if (v.contains("second_last")) {
        inst.carry_over[i].second_last = AsBool(v["second_last"], w + "/second_last");
      }
      if (v.contains("last")) inst.carry_over[i].last = AsBool(v["last"], w + "/last");
    }
  }

  const json& mins = Require(doc, "minimums", "");
  if (mins.contains("values")) {
    const json& vals = AsArray(mins["values"], "/minimums/values", n);
    inst.minimums.assign(n, std::vector<int>(r, 0));
    for (int i = 0; i < n; ++i) {
      const std::string w = "/minimums/values/" + std::to_string(i);
      AsArray(vals[i], w, r);
      for (int k = 0; k < r; ++k) inst.minimums[i][k] = AsInt(vals[i][k], w + "/" + std::to_string(k));
    }
  } else {
    const std::string chart_ref = AsString(Require(mins, "tier_chart", "/minimums"),
                                           "/minimums/tier_chart");
    TierChart chart;
    if (chart_ref == "default") {
      chart = TierChart::Default();
    } else {
      const fs::path p = fs::path(chart_ref).is_absolute() ? fs::path(chart_ref)
                                                           : fs::path(base_dir) / chart_ref;
      chart = TierChart::LoadCsv(p.string());
    }
    try {
      inst.minimums = AssignMinimums(n, r, chart);
    } catch (const RosterError& e) {
      Fail(e.code(), "/minimums/tier_chart", e.what());
    }
  }

  if (doc.contains("generation")) {
    const json& g = doc["generation"];
    if (g.contains("mode")) {
      const auto m = ParseArmstrongMode(AsString(g["mode"], "/generation/mode"));
      if (!m) Fail(ErrorCode::kSchemaViolation, "/generation/mode", "expected approx or exact");
      file.generation.mode = *m;
    }
    if (g.contains("time_limit_seconds")) {
      file.generation.time_limit_seconds =
          AsNumber(g["time_limit_seconds"], "/generation/time_limit_seconds");
    }
    if (g.contains("iteration_limit")) {
      file.generation.iteration_limit = AsInt(g["iteration_limit"], "/generation/iteration_limit");
      if (file.generation.iteration_limit < 1) {
        Fail(ErrorCode::kInvalidArgument, "/generation/iteration_limit", "must be at least 1");
      }
    }
  }

  inst.Validate();
  return file;
}

InstanceFile LoadInstance(const std::string& path) {
  const std::string text = ReadFile(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kSchemaViolation, path, std::string("invalid JSON: ") + e.what());
  }
  return InstanceFromJson(doc, fs::path(path).parent_path().string());
}

json InstanceToJson(const InstanceFile& file) {
  const PoolInstance& inst = file.instance;
  json doc;
  doc["schema_version"] = kInstanceSchemaVersion;
  doc["pool"] = {{"id", inst.pool.id},
                 {"unit", inst.pool.unit},
                 {"designation", DesignationName(inst.pool.designation)}};
  doc["calendar"] = {{"blocks", inst.calendar.blocks()},
                     {"days_per_block", inst.calendar.days_per_block()},
                     {"shifts_per_day", inst.calendar.shifts_per_day()},
                     {"first_weekday", WeekdayName(inst.calendar.first_weekday())}};
  doc["limits"] = {{"max_shifts_per_block", inst.max_shifts_per_block},
                   {"max_weekend_shifts", inst.max_weekend_shifts}};
  json nurses = json::array();
  for (const Nurse& nurse : inst.nurses) {
    nurses.push_back({{"id", nurse.id},
                      {"seniority_rank", nurse.seniority_rank},
                      {"designation", DesignationName(nurse.designation)}});
  }
  doc["nurses"] = nurses;
  doc["demand"] = {{"part_time", WriteShiftGrid(inst.demand)}};
  json scores = json::object();
  for (int i = 0; i < inst.nurse_count(); ++i) {
    ShiftGrid<int> g(inst.calendar.blocks(), inst.calendar.shifts_per_block(), 0);
    for (int k = 0; k < g.blocks(); ++k) {
      for (int j = 0; j < g.shifts_per_block(); ++j) g(k, j) = inst.preferences.score(i, k, j);
    }
    scores[inst.nurses[i].id] = WriteShiftGrid(g);
  }
  doc["preferences"] = {{"direction", "ascending"}, {"scores", scores}};
  json carry = json::object();
  for (int i = 0; i < inst.nurse_count(); ++i) {
    const CarryOver& c = inst.carry_over[i];
    if (c.second_last || c.last) {
      carry[inst.nurses[i].id] = {{"second_last", c.second_last}, {"last", c.last}};
    }
  }
  doc["carry_over"] = carry;
  doc["minimums"] = {{"values", inst.minimums}};
  doc["generation"] = {{"mode", ArmstrongModeName(file.generation.mode)},
                       {"time_limit_seconds", file.generation.time_limit_seconds},
                       {"iteration_limit", file.generation.iteration_limit}};
  return doc;
}

void SaveInstance(const InstanceFile& file, const std::string& path) {
  WriteFileAtomic(path, DumpJson(InstanceToJson(file)));
}

AvailabilityPreference ImportAvailabilityCsv(std::istream& in, const std::string& source,
                                             const PoolInstance& instance,
                                             PreferenceDirection direction) {
  const int n = instance.nurse_count();
  const int r = instance.calendar.blocks();
  const int q = instance.calendar.shifts_per_block();
  AvailabilityPreference out(n, r, q);
  std::map<std::string, int> index_of;
  for (int i = 0; i < n; ++i) index_of[instance.nurses[i].id] = i;
  std::set<std::tuple<int, int, int>> seen;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(line_no);
    std::vector<std::string> cells = SplitCsv(line);
    for (auto& c : cells) c = Trim(c);
    if (!header) {
      if (cells != std::vector<std::string>{"nurse_id", "block", "shift", "score"}) {
        Fail(ErrorCode::kSchemaViolation, where, "expected header nurse_id,block,shift,score");
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) Fail(ErrorCode::kSchemaViolation, where, "expected 4 columns");
    auto it = index_of.find(cells[0]);
    if (it == index_of.end()) Fail(ErrorCode::kUnknownNurse, where, "unknown nurse id " + cells[0]);
    const auto block = ParseInt(cells[1]);
    const auto shift = ParseInt(cells[2]);
    const auto score = ParseInt(cells[3]);
    if (!block || !shift || !score) Fail(ErrorCode::kSchemaViolation, where, "expected integers");
    if (*block < 1 || *block > r || *shift < 1 || *shift > q) {
      Fail(ErrorCode::kDimensionMismatch, where,
           "block " + cells[1] + " shift " + cells[2] + " outside the calendar");
    }
    if (!seen.insert({it->second, *block, *shift}).second) {
      Fail(ErrorCode::kSchemaViolation, where, "cell listed twice");
    }
    try {
      out.set_score(it->second, *block - 1, *shift - 1, NormalizeScore(*score, direction));
    } catch (const RosterError& e) {
      Fail(ErrorCode::kScoreOutOfRange, where, e.what());
    }
  }
  if (!header) Fail(ErrorCode::kSchemaViolation, source, "empty file, expected a header row");
  return out;
}

AvailabilityPreference ImportAvailabilityCsvFile(const std::string& path,
                                                 const PoolInstance& instance,
                                                 PreferenceDirection direction) {
  std::istringstream in(ReadFile(path));
  return ImportAvailabilityCsv(in, path, instance, direction);
}

std::string RenderScheduleCsv(const Schedule& schedule, const PoolInstance& instance,
                              const VerificationReport& report) {
  const int n = instance.nurse_count();
  const int r = instance.calendar.blocks();
  const int q = instance.calendar.shifts_per_block();
  const bool have_codes = report.codes.mask.nurses() == n;
  std::ostringstream out;
  for (int k = 0; k < r; ++k) {
    out << "block,row";
    for (int j = 0; j < q; ++j) out << ',' << instance.calendar.ShiftLabel(k, j);
    out << ",assigned,minimum,delta\n";
    out << k + 1 << ",weekend";
    for (int j = 0; j < q; ++j) out << ',' << (instance.calendar.IsWeekendShift(k, j) ? "W" : "");
    out << ",,,\n";
    for (int i = 0; i < n; ++i) {
      out << k + 1 << ',' << instance.nurses[i].id;
      for (int j = 0; j < q; ++j) {
        out << ',';
        if (schedule.assigned(i, k, j)) {
          out << 'X';
        } else if (!instance.preferences.available(i, k, j)) {
          out << '.';
        } else if (have_codes) {
          out << CodeString(report.codes.mask(i, k, j));
        }
      }
      const int assigned = schedule.ShiftsInBlock(i, k);
      out << ',' << assigned << ',' << instance.minimums[i][k] << ','
          << assigned - instance.minimums[i][k] << '\n';
    }
    out << k + 1 << ",demand";
    for (int j = 0; j < q; ++j) out << ',' << instance.demand(k, j);
    out << ",,,\n";
    out << k + 1 << ",unfilled";
    for (int j = 0; j < q; ++j) out << ',' << schedule.unfilled(k, j);
    out << ",,,\n";
    const PreferenceSummary prefs = SummarizePreferences(schedule, instance);
    out << k + 1 << ",avg_preference";
    for (int j = 0; j < q; ++j) {
      out << ',';
      const double m = prefs.shift_mean(k, j);
      if (!std::isnan(m)) out << FormatFixed(m, 2);
    }
    out << ",,,\n";
  }
  return out.str();
}

Schedule ParseScheduleCsv(std::istream& in, const std::string& source,
                          const PoolInstance& instance) {
  const int n = instance.nurse_count();
  const int r = instance.calendar.blocks();
  const int q = instance.calendar.shifts_per_block();
  NurseShiftGrid<std::uint8_t> x(n, r, q, 0);
  ShiftGrid<int> s(r, q, 0);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  const int rows_per_block = n + 5;
  if (static_cast<int>(lines.size()) != rows_per_block * r) {
    Fail(ErrorCode::kSchemaViolation, source,
         "expected " + std::to_string(rows_per_block * r) + " rows, found " +
             std::to_string(lines.size()));
  }
  const size_t width = static_cast<size_t>(q) + 5;
  for (int k = 0; k < r; ++k) {
    for (int row = 0; row < rows_per_block; ++row) {
      const int line_index = k * rows_per_block + row;
      const std::string where = source + ":" + std::to_string(line_index + 1);
      const std::vector<std::string> cells = SplitCsv(lines[line_index]);
      if (cells.size() != width) {
        Fail(ErrorCode::kSchemaViolation, where,
             "expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()));
      }
      if (row == 0) {
        if (cells[0] != "block" || cells[1] != "row") {
          Fail(ErrorCode::kSchemaViolation, where, "expected a block header row");
        }
        continue;
      }
      if (cells[0] != std::to_string(k + 1)) {
        Fail(ErrorCode::kSchemaViolation, where, "expected block " + std::to_string(k + 1));
      }
      if (row == 1) {
        if (cells[1] != "weekend") Fail(ErrorCode::kSchemaViolation, where, "expected weekend row");
        continue;
      }
      if (row >= 2 && row < 2 + n) {
        const int i = row - 2;
        if (cells[1] != instance.nurses[i].id) {
          Fail(ErrorCode::kSchemaViolation, where,
               "expected nurse " + instance.nurses[i].id + ", found " + cells[1]);
        }
        for (int j = 0; j < q; ++j) {
          const std::string& c = cells[2 + j];
          if (c == "X") {
            x(i, k, j) = 1;
          } else if (c != "." && !ParseCodes(c)) {
            Fail(ErrorCode::kSchemaViolation, where,
                 "bad cell \"" + c + "\" at shift " + std::to_string(j + 1));
          }
        }
        continue;
      }
      if (row == 2 + n + 1) {
        if (cells[1] != "unfilled") Fail(ErrorCode::kSchemaViolation, where, "expected unfilled row");
        for (int j = 0; j < q; ++j) {
          const auto v = ParseInt(cells[2 + j]);
          if (!v) Fail(ErrorCode::kSchemaViolation, where, "bad unfilled count at shift " + std::to_string(j + 1));
          s(k, j) = *v;
        }
      } else if (row == 2 + n && cells[1] != "demand") {
        Fail(ErrorCode::kSchemaViolation, where, "expected demand row");
      } else if (row == 2 + n + 2 && cells[1] != "avg_preference") {
        Fail(ErrorCode::kSchemaViolation, where, "expected avg_preference row");
      }
    }
  }
  return Schedule::FromParts(std::move(x), std::move(s));
}

Schedule LoadScheduleCsv(const std::string& path, const PoolInstance& instance) {
  std::istringstream in(ReadFile(path));
  return ParseScheduleCsv(in, path, instance);
}

void SaveScheduleCsv(const Schedule& schedule, const PoolInstance& instance,
                     const std::string& path) {
  WriteFileAtomic(path, RenderScheduleCsv(schedule, instance, Verify(schedule, instance)));
}

json ReportToJson(const VerificationReport& report, const PoolInstance& instance) {
  const auto& cal = instance.calendar;
  auto nurse_id = [&](int i) -> json {
    if (i < 0) return nullptr;
    return instance.nurses[i].id;
  };
  json doc;
  doc["accepted"] = report.accepted;
  doc["total_demand"] = report.total_demand;
  doc["total_unfilled"] = report.total_unfilled;
  doc["failures"] = report.FailureNames();
  json general = json::array();
  for (const auto& f : report.general_failures) {
    general.push_back({{"rule", GeneralRuleName(f.rule)},
                       {"nurse", nurse_id(f.nurse)},
                       {"block", f.block + 1},
                       {"shift", f.shift + 1},
                       {"label", f.rule == GeneralRule::kDimensions ? ""
                                                                    : cal.ShiftLabel(f.block, f.shift)},
                       {"detail", f.detail}});
  }
  doc["general_failures"] = general;
  json violations = json::array();
  for (const auto& v : report.violations) {
    json evidence = json::array();
    for (const auto& e : v.evidence) {
      evidence.push_back({{"shift", e.shift + 1},
                          {"label", cal.ShiftLabel(v.block, e.shift)},
                          {"codes", e.codes}});
    }
    violations.push_back({{"rule", ArmstrongRuleName(v.rule)},
                          {"block", v.block + 1},
                          {"senior", nurse_id(v.senior)},
                          {"junior", nurse_id(v.junior)},
                          {"disadvantaged", nurse_id(v.disadvantaged)},
                          {"justified", v.justified},
                          {"evidence", evidence}});
  }
  doc["armstrong_violations"] = violations;
  json uncoded = json::array();
  for (const auto& c : report.uncoded) {
    uncoded.push_back({{"nurse", nurse_id(c.nurse)},
                       {"block", c.block + 1},
                       {"shift", c.shift + 1},
                       {"label", cal.ShiftLabel(c.block, c.shift)}});
  }
  doc["uncoded_cells"] = uncoded;
  json nurses = json::array();
  for (size_t i = 0; i < report.nurse_summary.size(); ++i) {
    const auto& ns = report.nurse_summary[i];
    json entry = {{"id", instance.nurses[i].id},
                  {"seniority_rank", instance.nurses[i].seniority_rank},
                  {"assigned", ns.assigned},
                  {"minimum", ns.minimum},
                  {"delta", ns.delta},
                  {"weekend_shifts", ns.weekend_shifts}};
    if (i < report.preferences.nurses.size()) {
      const auto& np = report.preferences.nurses[i];
      entry["preference"] = {
          {"assigned", np.assigned},
          {"count_by_score", {{"1", np.count_by_score[1]}, {"2", np.count_by_score[2]}, {"3", np.count_by_score[3]}}},
          {"percent_by_score",
           {{"1", OptionalPercent(np.percent_by_score[1])},
            {"2", OptionalPercent(np.percent_by_score[2])},
            {"3", OptionalPercent(np.percent_by_score[3])}}}};
    }
    nurses.push_back(entry);
  }
  doc["nurses"] = nurses;
  doc["preference"] = {{"assigned", report.preferences.assigned},
                       {"first_preference", report.preferences.first_preference},
                       {"percent_first", OptionalPercent(report.preferences.percent_first)}};
  return doc;
}

CycleManifest LoadManifest(const std::string& path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kSchemaViolation, path, std::string("invalid JSON: ") + e.what());
  }
  const int version = AsInt(Require(doc, "schema_version", ""), "/schema_version");
  if (version != kInstanceSchemaVersion) {
    Fail(ErrorCode::kUnsupportedVersion, "/schema_version", "unsupported schema version");
  }
  CycleManifest m;
  m.cycle = AsString(Require(doc, "cycle", ""), "/cycle");
  const json& pools = Require(doc, "pools", "");
  if (!pools.is_array()) Fail(ErrorCode::kSchemaViolation, "/pools", "expected an array");
  const fs::path base = fs::path(path).parent_path();
  for (size_t x = 0; x < pools.size(); ++x) {
    const std::string p = AsString(pools[x], "/pools/" + std::to_string(x));
    m.pools.push_back(fs::path(p).is_absolute() ? p : (base / p).string());
  }
  return m;
}

}  // namespace roster
