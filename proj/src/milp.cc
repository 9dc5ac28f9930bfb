#include "roster/milp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <unordered_map>

#include "roster/error.h"

namespace roster {

int MilpModel::AddVariable(std::string tag, VarType type, double lower,
                           double upper) {
  vars_.push_back({std::move(tag), type, lower, upper});
  return static_cast<int>(vars_.size()) - 1;
}

int MilpModel::AddConstraint(std::string tag, std::vector<Term> terms,
                             RowSense sense, double rhs) {
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(vars_.size())) {
      throw RosterError(ErrorCode::kInternal, tag,
                        "constraint references an unknown variable");
    }
  }
  // Merge repeated variables and drop zero coefficients; both solvers and
  // the propagation in the enumeration backend expect each variable once.
  std::vector<Term> merged;
  std::unordered_map<int, size_t> slot;
  for (const Term& t : terms) {
    auto [it, fresh] = slot.emplace(t.var, merged.size());
    if (fresh) {
      merged.push_back(t);
    } else {
      merged[it->second].coef += t.coef;
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(tag), std::move(merged), sense, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

void MilpModel::SetObjective(ObjectiveSense sense, std::vector<Term> terms) {
  sense_ = sense;
  objective_ = std::move(terms);
}

int MilpModel::CountVariablesWithPrefix(const std::string& prefix) const {
  return static_cast<int>(std::count_if(vars_.begin(), vars_.end(), [&](const Variable& v) {
    return v.tag.compare(0, prefix.size(), prefix) == 0;
  }));
}

int MilpModel::CountConstraintsWithPrefix(const std::string& prefix) const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(), [&](const Constraint& c) {
    return c.tag.compare(0, prefix.size(), prefix) == 0;
  }));
}

double MilpModel::MaxViolation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (size_t v = 0; v < vars_.size(); ++v) {
    const double x = values[v];
    worst = std::max({worst, vars_[v].lower - x, x - vars_[v].upper});
    if (vars_[v].type != VarType::kContinuous) {
      worst = std::max(worst, std::abs(x - std::round(x)));
    }
  }
  for (const Constraint& c : rows_) {
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coef * values[t.var];
    switch (c.sense) {
      case RowSense::kLe: worst = std::max(worst, act - c.rhs); break;
      case RowSense::kGe: worst = std::max(worst, c.rhs - act); break;
      case RowSense::kEq: worst = std::max(worst, std::abs(act - c.rhs)); break;
    }
  }
  return worst;
}

double MilpModel::ObjectiveValue(const std::vector<double>& values) const {
  double z = 0.0;
  for (const Term& t : objective_) z += t.coef * values[t.var];
  return z;
}

std::string SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimedOutNoSolution: return "timed_out_no_solution";
  }
  return "unknown";
}

namespace {

class EnumerationBackend : public SolverBackend {
 public:
  explicit EnumerationBackend(long long node_limit) : node_limit_(node_limit) {}

  std::string name() const override { return "enumerate"; }

  SolverResult Solve(const MilpModel& model,
                     const SolveOptions& options) override {
    for (const Variable& v : model.variables()) {
      if (v.type == VarType::kContinuous) {
        throw RosterError(ErrorCode::kInvalidArgument, v.tag,
                          "enumeration backend supports integer variables only");
      }
    }
    model_ = &model;
    const int nv = static_cast<int>(model.variables().size());
    uses_.assign(nv, {});
    for (size_t r = 0; r < model.constraints().size(); ++r) {
      for (const Term& t : model.constraints()[r].terms) {
        uses_[t.var].push_back(static_cast<int>(r));
      }
    }
    obj_coef_.assign(nv, 0.0);
    const double s = model.objective_sense() == ObjectiveSense::kMaximize ? 1.0 : -1.0;
    for (const Term& t : model.objective()) obj_coef_[t.var] += s * t.coef;

    std::vector<long long> lo(nv), hi(nv);
    for (int v = 0; v < nv; ++v) {
      lo[v] = static_cast<long long>(std::ceil(model.variables()[v].lower - 1e-9));
      hi[v] = static_cast<long long>(std::floor(model.variables()[v].upper + 1e-9));
    }
    best_.clear();
    best_score_ = -std::numeric_limits<double>::infinity();
    nodes_ = 0;
    aborted_ = false;
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(options.time_limit_seconds));
    if (!options.start.empty() && model.MaxViolation(options.start) < 1e-6) {
      best_ = options.start;
      best_score_ = Score(options.start);
    }
    if (Propagate(lo, hi)) Search(lo, hi);

    SolverResult result;
    if (best_.empty()) {
      result.status = aborted_ ? SolveStatus::kTimedOutNoSolution
                               : SolveStatus::kInfeasible;
      return result;
    }
    result.status = aborted_ ? SolveStatus::kFeasible : SolveStatus::kOptimal;
    result.values = best_;
    result.objective = model.ObjectiveValue(best_);
    return result;
  }

 private:
  double Score(const std::vector<double>& x) const {
    double z = 0.0;
    for (size_t v = 0; v < x.size(); ++v) z += obj_coef_[v] * x[v];
    return z;
  }

  // Interval propagation to a fixpoint; false on an empty domain.
  bool Propagate(std::vector<long long>& lo, std::vector<long long>& hi) const {
    const auto& rows = model_->constraints();
    std::deque<int> queue;
    std::vector<char> queued(rows.size(), 1);
    for (size_t r = 0; r < rows.size(); ++r) queue.push_back(static_cast<int>(r));
    while (!queue.empty()) {
      const int r = queue.front();
      queue.pop_front();
      queued[r] = 0;
      const Constraint& c = rows[r];
      double min_act = 0.0, max_act = 0.0;
      for (const Term& t : c.terms) {
        if (t.coef > 0) {
          min_act += t.coef * lo[t.var];
          max_act += t.coef * hi[t.var];
        } else {
          min_act += t.coef * hi[t.var];
          max_act += t.coef * lo[t.var];
        }
      }
      const bool le = c.sense != RowSense::kGe;
      const bool ge = c.sense != RowSense::kLe;
      if ((le && min_act > c.rhs + 1e-9) || (ge && max_act < c.rhs - 1e-9)) {
        return false;
      }
      for (const Term& t : c.terms) {
        long long new_lo = lo[t.var], new_hi = hi[t.var];
        const double own_min = t.coef > 0 ? t.coef * lo[t.var] : t.coef * hi[t.var];
        const double own_max = t.coef > 0 ? t.coef * hi[t.var] : t.coef * lo[t.var];
        if (le) {
          const double slack = c.rhs - (min_act - own_min);
          if (t.coef > 0) {
            new_hi = std::min(new_hi, static_cast<long long>(std::floor(slack / t.coef + 1e-9)));
          } else {
            new_lo = std::max(new_lo, static_cast<long long>(std::ceil(slack / t.coef - 1e-9)));
          }
        }
        if (ge) {
          const double need = c.rhs - (max_act - own_max);
          if (t.coef > 0) {
            new_lo = std::max(new_lo, static_cast<long long>(std::ceil(need / t.coef - 1e-9)));
          } else {
            new_hi = std::min(new_hi, static_cast<long long>(std::floor(need / t.coef + 1e-9)));
          }
        }
        if (new_lo > new_hi) return false;
        if (new_lo != lo[t.var] || new_hi != hi[t.var]) {
          lo[t.var] = new_lo;
          hi[t.var] = new_hi;
          for (int other : uses_[t.var]) {
            if (!queued[other]) {
              queued[other] = 1;
              queue.push_back(other);
            }
          }
        }
      }
    }
    return true;
  }

  void Search(std::vector<long long>& lo, std::vector<long long>& hi) {
    if (aborted_) return;
    if (++nodes_ > node_limit_ ||
        ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)) {
      aborted_ = true;
      return;
    }
    double bound = 0.0;
    int branch = -1;
    for (size_t v = 0; v < lo.size(); ++v) {
      bound += obj_coef_[v] > 0 ? obj_coef_[v] * hi[v] : obj_coef_[v] * lo[v];
      if (branch < 0 && lo[v] != hi[v]) branch = static_cast<int>(v);
    }
    if (!best_.empty() && bound <= best_score_ + 1e-9) return;
    if (branch < 0) {
      std::vector<double> x(lo.begin(), lo.end());
      best_score_ = Score(x);
      best_ = std::move(x);
      return;
    }
    std::vector<long long> values;
    for (long long val = lo[branch]; val <= hi[branch]; ++val) values.push_back(val);
    if (obj_coef_[branch] > 0) std::reverse(values.begin(), values.end());
    for (long long val : values) {
      std::vector<long long> lo2 = lo, hi2 = hi;
      lo2[branch] = hi2[branch] = val;
      if (Propagate(lo2, hi2)) Search(lo2, hi2);
      if (aborted_) return;
    }
  }

  long long node_limit_;
  const MilpModel* model_ = nullptr;
  std::vector<std::vector<int>> uses_;
  std::vector<double> obj_coef_;
  std::vector<double> best_;
  double best_score_ = 0.0;
  long long nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

std::unique_ptr<SolverBackend> MakeEnumerationBackend(long long node_limit) {
  return std::make_unique<EnumerationBackend>(node_limit);
}

std::unique_ptr<SolverBackend> MakeBackend(const std::string& name) {
  if (name == "highs") return MakeHighsBackend();
  if (name == "enumerate") return MakeEnumerationBackend();
  throw RosterError(ErrorCode::kInvalidArgument, "ROSTER_SOLVER",
                    "unknown solver backend '" + name + "'");
}

std::unique_ptr<SolverBackend> MakeDefaultBackend() {
  const char* env = std::getenv("ROSTER_SOLVER");
  return MakeBackend(env != nullptr && *env != '\0' ? env : "highs");
}

}  // namespace roster
