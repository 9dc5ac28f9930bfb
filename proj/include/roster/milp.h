#ifndef ROSTER_MILP_H_
#define ROSTER_MILP_H_

#include <memory>
#include <string>
#include <vector>

namespace roster {

enum class VarType { kBinary, kInteger, kContinuous };
enum class RowSense { kLe, kGe, kEq };
enum class ObjectiveSense { kMinimize, kMaximize };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string tag;  // symbol plus indices, e.g. "X[2,0,17]"
  VarType type = VarType::kBinary;
  double lower = 0.0;
  double upper = 1.0;
};

struct Constraint {
  std::string tag;  // constraint family plus indices
  std::vector<Term> terms;
  RowSense sense = RowSense::kLe;
  double rhs = 0.0;
};

// A mixed-integer linear model in the form handed to a backend.
class MilpModel {
 public:
  int AddVariable(std::string tag, VarType type, double lower, double upper);
  int AddBinary(std::string tag) {
    return AddVariable(std::move(tag), VarType::kBinary, 0.0, 1.0);
  }
  // Throws RosterError(kInternal) on a term naming an unknown variable.
  int AddConstraint(std::string tag, std::vector<Term> terms, RowSense sense,
                    double rhs);
  void SetObjective(ObjectiveSense sense, std::vector<Term> terms);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  ObjectiveSense objective_sense() const { return sense_; }
  const std::vector<Term>& objective() const { return objective_; }

  int CountVariablesWithPrefix(const std::string& prefix) const;
  int CountConstraintsWithPrefix(const std::string& prefix) const;

  // Largest violation of bounds, integrality and rows at `values`.
  double MaxViolation(const std::vector<double>& values) const;
  double ObjectiveValue(const std::vector<double>& values) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  std::vector<Term> objective_;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimedOutNoSolution };

std::string SolveStatusName(SolveStatus status);

struct SolveOptions {
  double time_limit_seconds = 300.0;
  // Optional feasible start; empty when absent.
  std::vector<double> start;
  // Every feasible objective value is an integer, so a gap below one proves
  // optimality.
  bool integral_objective = false;
};

struct SolverResult {
  SolveStatus status = SolveStatus::kTimedOutNoSolution;
  std::vector<double> values;
  double objective = 0.0;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  // Backends report kInfeasible only when the model provably has no
  // solution; a backend failure throws RosterError(kInternal).
  virtual SolverResult Solve(const MilpModel& model,
                             const SolveOptions& options) = 0;
};

std::unique_ptr<SolverBackend> MakeHighsBackend();
// Depth-first search with bound propagation; integer variables only.
// Intended for tiny models in tests.
std::unique_ptr<SolverBackend> MakeEnumerationBackend(long long node_limit = 50'000'000);
// "highs" or "enumerate"; throws RosterError(kInvalidArgument) otherwise.
std::unique_ptr<SolverBackend> MakeBackend(const std::string& name);
// Backend named by ROSTER_SOLVER, defaulting to HiGHS.
std::unique_ptr<SolverBackend> MakeDefaultBackend();

}  // namespace roster

#endif  // ROSTER_MILP_H_
