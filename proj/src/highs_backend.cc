#include <Highs.h>

#include <cmath>

#include "roster/error.h"
#include "roster/milp.h"

namespace roster {
namespace {

class HighsBackend : public SolverBackend {
 public:
  std::string name() const override { return "highs"; }

  SolverResult Solve(const MilpModel& model,
                     const SolveOptions& options) override {
    const auto& vars = model.variables();
    const auto& rows = model.constraints();
    const HighsInt num_col = static_cast<HighsInt>(vars.size());
    const HighsInt num_row = static_cast<HighsInt>(rows.size());

    std::vector<double> cost(num_col, 0.0), col_lo(num_col), col_hi(num_col);
    std::vector<HighsInt> integrality(num_col);
    for (HighsInt v = 0; v < num_col; ++v) {
      col_lo[v] = vars[v].lower;
      col_hi[v] = vars[v].upper;
      integrality[v] = static_cast<HighsInt>(
          vars[v].type == VarType::kContinuous ? HighsVarType::kContinuous
                                               : HighsVarType::kInteger);
    }
    for (const Term& t : model.objective()) cost[t.var] += t.coef;

    std::vector<double> row_lo(num_row), row_hi(num_row);
    std::vector<HighsInt> start, index;
    std::vector<double> value;
    start.reserve(num_row + 1);
    for (HighsInt r = 0; r < num_row; ++r) {
      const Constraint& c = rows[r];
      row_lo[r] = c.sense == RowSense::kLe ? -kHighsInf : c.rhs;
      row_hi[r] = c.sense == RowSense::kGe ? kHighsInf : c.rhs;
      start.push_back(static_cast<HighsInt>(index.size()));
      for (const Term& t : c.terms) {
        index.push_back(t.var);
        value.push_back(t.coef);
      }
    }
    start.push_back(static_cast<HighsInt>(index.size()));

    Highs highs;
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("time_limit", std::max(options.time_limit_seconds, 0.0));
    highs.setOptionValue("mip_rel_gap", 0.0);
    highs.setOptionValue("mip_abs_gap", options.integral_objective ? 0.99 : 1e-6);
    const ObjSense sense = model.objective_sense() == ObjectiveSense::kMaximize
                               ? ObjSense::kMaximize
                               : ObjSense::kMinimize;
    HighsStatus st = highs.passModel(
        num_col, num_row, static_cast<HighsInt>(index.size()),
        static_cast<HighsInt>(MatrixFormat::kRowwise),
        static_cast<HighsInt>(sense), 0.0, cost.data(), col_lo.data(),
        col_hi.data(), row_lo.data(), row_hi.data(), start.data(), index.data(),
        value.data(), integrality.data());
    if (st == HighsStatus::kError) {
      throw RosterError(ErrorCode::kInternal, "highs", "model rejected by HiGHS");
    }
    if (!options.start.empty()) {
      HighsSolution warm;
      warm.col_value = options.start;
      warm.value_valid = true;
      highs.setSolution(warm);
    }
    st = highs.run();
    if (st == HighsStatus::kError) {
      throw RosterError(ErrorCode::kInternal, "highs", "HiGHS run failed");
    }

    SolverResult result;
    const HighsModelStatus ms = highs.getModelStatus();
    const bool has_solution =
        highs.getInfo().primal_solution_status == kSolutionStatusFeasible;
    if (ms == HighsModelStatus::kInfeasible) {
      result.status = SolveStatus::kInfeasible;
      return result;
    }
    if (!has_solution) {
      if (ms == HighsModelStatus::kTimeLimit || ms == HighsModelStatus::kInterrupt ||
          ms == HighsModelStatus::kIterationLimit ||
          ms == HighsModelStatus::kSolutionLimit) {
        result.status = SolveStatus::kTimedOutNoSolution;
        return result;
      }
      throw RosterError(ErrorCode::kInternal, "highs",
                        "HiGHS finished without a solution: " +
                            highs.modelStatusToString(ms));
    }
    result.status = ms == HighsModelStatus::kOptimal ? SolveStatus::kOptimal
                                                     : SolveStatus::kFeasible;
    result.values = highs.getSolution().col_value;
    for (HighsInt v = 0; v < num_col; ++v) {
      if (vars[v].type != VarType::kContinuous) {
        result.values[v] = std::round(result.values[v]);
      }
    }
    result.objective = model.ObjectiveValue(result.values);
    return result;
  }
};

}  // namespace

std::unique_ptr<SolverBackend> MakeHighsBackend() {
  return std::make_unique<HighsBackend>();
}

}  // namespace roster
