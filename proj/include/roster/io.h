#ifndef ROSTER_IO_H_
#define ROSTER_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "roster/armstrong.h"
#include "roster/domain.h"
#include "roster/ip_model.h"
#include "roster/verify.h"

namespace roster {

inline constexpr int kInstanceSchemaVersion = 1;

struct GenerationParams {
  ArmstrongMode mode = ArmstrongMode::kApproximate;
  double time_limit_seconds = 300.0;
  int iteration_limit = 50;

  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

struct InstanceFile {
  PoolInstance instance;
  GenerationParams generation;
};

// `base_dir` resolves a relative tier-chart path. Every failure is a
// RosterError whose location is a JSON pointer into the document.
InstanceFile InstanceFromJson(const nlohmann::json& doc, const std::string& base_dir);
InstanceFile LoadInstance(const std::string& path);

// Writes resolved values only: part-time demand, explicit minimums and
// canonical (ascending) scores.
nlohmann::json InstanceToJson(const InstanceFile& file);
void SaveInstance(const InstanceFile& file, const std::string& path);

// CSV rows nurse_id,block,shift,score with 1-based block and shift. Cells not
// listed are unavailable. Errors carry "<source>:<line>".
AvailabilityPreference ImportAvailabilityCsv(std::istream& in, const std::string& source,
                                             const PoolInstance& instance,
                                             PreferenceDirection direction);
AvailabilityPreference ImportAvailabilityCsvFile(const std::string& path,
                                                 const PoolInstance& instance,
                                                 PreferenceDirection direction);

// Schedule grid. Per block: a header row, a weekend marker row, one row per
// nurse in seniority order, then demand, unfilled and average-preference
// rows. Assigned cells hold "X", available unassigned cells their code
// letters (possibly empty) and unavailable cells ".".
std::string RenderScheduleCsv(const Schedule& schedule, const PoolInstance& instance,
                              const VerificationReport& report);
// Reads back X and S; throws RosterError(kSchemaViolation) with a line number.
Schedule ParseScheduleCsv(std::istream& in, const std::string& source,
                          const PoolInstance& instance);
Schedule LoadScheduleCsv(const std::string& path, const PoolInstance& instance);
void SaveScheduleCsv(const Schedule& schedule, const PoolInstance& instance,
                     const std::string& path);

nlohmann::json ReportToJson(const VerificationReport& report,
                            const PoolInstance& instance);

// A cycle lists its pools' instance files; paths resolve against the
// manifest's directory.
struct CycleManifest {
  std::string cycle;
  std::vector<std::string> pools;
};
CycleManifest LoadManifest(const std::string& path);

std::string ReadFile(const std::string& path);
// Writes to a temporary sibling and renames it over `path`.
void WriteFileAtomic(const std::string& path, const std::string& content);
// Two-space indented JSON with sorted keys and a trailing newline; arrays
// of scalars stay on one line.
std::string DumpJson(const nlohmann::json& doc);

}  // namespace roster

#endif  // ROSTER_IO_H_
