#include "roster/ip_model.h"

#include <cctype>
#include <cmath>
#include <unordered_map>

#include "roster/error.h"

namespace roster {
namespace {

std::string Tag(const char* name, std::initializer_list<int> idx) {
  std::string out(name);
  out += '[';
  bool first = true;
  for (int v : idx) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  out += ']';
  return out;
}

class Builder {
 public:
  Builder(const PoolInstance& inst, ArmstrongMode mode)
      : inst_(inst),
        mode_(mode),
        n_(inst.nurse_count()),
        r_(inst.calendar.blocks()),
        q_(inst.calendar.shifts_per_block()),
        gmax_(inst.max_shifts_per_block) {}

  ScheduleModel Build() {
    out_.x = NurseShiftGrid<int>(n_, r_, q_, -1);
    out_.s = ShiftGrid<int>(r_, q_, -1);
    AddCoreVariables();
    AddGeneralRules();
    if (mode_ == ArmstrongMode::kApproximate) {
      AddApproximateRules();
    } else {
      AddExactRules();
    }
    AddCombinedFlags();
    return std::move(out_);
  }

 private:
  MilpModel& m() { return out_.model; }
  int X(int i, int k, int j) const { return out_.x(i, k, j); }

  void AddCoreVariables() {
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        for (int j = 0; j < q_; ++j) {
          out_.x(i, k, j) = m().AddBinary(Tag("X", {i, k, j}));
        }
      }
    }
    for (int k = 0; k < r_; ++k) {
      for (int j = 0; j < q_; ++j) {
        out_.s(k, j) = m().AddVariable(Tag("S", {k, j}), VarType::kInteger, 0,
                                       inst_.demand(k, j));
      }
    }
    f_avail_ = f_max_ = f_b2b_ = f_week_ = f_dem_ = f_all_ =
        NurseShiftGrid<int>(n_, r_, q_, -1);
    m_.assign(n_, std::vector<int>(r_, -1));
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        m_[i][k] = m().AddBinary(Tag("M", {i, k}));
        for (int j = 0; j < q_; ++j) {
          const double y = inst_.preferences.available(i, k, j) ? 1.0 : 0.0;
          f_avail_(i, k, j) = m().AddVariable(Tag("Favailable", {i, k, j}),
                                              VarType::kBinary, y, y);
          f_max_(i, k, j) = m().AddBinary(Tag("Fmaxout", {i, k, j}));
          f_b2b_(i, k, j) = m().AddBinary(Tag("Fbacktoback", {i, k, j}));
          const bool weekend = inst_.calendar.IsWeekendShift(k, j);
          f_week_(i, k, j) = m().AddVariable(Tag("Fweekend", {i, k, j}),
                                             VarType::kBinary, weekend ? 0 : 1, 1);
          f_dem_(i, k, j) = m().AddBinary(Tag("Fdemand", {i, k, j}));
          f_all_(i, k, j) = m().AddBinary(Tag("F", {i, k, j}));
        }
      }
    }
  }

  // X terms over global positions [from, to] for nurse i; carry-over cells
  // before the horizon are returned as a constant.
  std::vector<Term> Window(int i, int from, int to, double* constant) const {
    std::vector<Term> terms;
    *constant = 0.0;
    for (int p = from; p <= to; ++p) {
      if (p >= r_ * q_) break;
      if (p == -1) *constant += inst_.carry_over[i].last;
      if (p == -2) *constant += inst_.carry_over[i].second_last;
      if (p >= 0) terms.push_back({X(i, p / q_, p % q_), 1.0});
    }
    return terms;
  }

  std::vector<Term> BlockTotal(int i, int k, double coef = 1.0) const {
    std::vector<Term> terms;
    for (int j = 0; j < q_; ++j) terms.push_back({X(i, k, j), coef});
    return terms;
  }

  static std::vector<Term> Join(std::vector<Term> a, std::initializer_list<Term> b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  void AddGeneralRules() {
    for (int k = 0; k < r_; ++k) {
      for (int j = 0; j < q_; ++j) {
        std::vector<Term> terms{{out_.s(k, j), 1.0}};
        for (int i = 0; i < n_; ++i) terms.push_back({X(i, k, j), 1.0});
        m().AddConstraint(Tag("supply", {k, j}), std::move(terms), RowSense::kEq,
                          inst_.demand(k, j));
      }
    }
    const int cap = inst_.max_weekend_shifts;
    for (int i = 0; i < n_; ++i) {
      std::vector<Term> weekend_total;
      for (int k = 0; k < r_; ++k) {
        for (int j = 0; j < q_; ++j) {
          if (inst_.calendar.IsWeekendShift(k, j)) {
            weekend_total.push_back({X(i, k, j), 1.0});
          }
        }
      }
      for (int k = 0; k < r_; ++k) {
        for (int j = 0; j < q_; ++j) {
          const int p = k * q_ + j;
          const double y = inst_.preferences.available(i, k, j) ? 1.0 : 0.0;
          m().AddConstraint(Tag("availability", {i, k, j}), {{X(i, k, j), 1.0}},
                            RowSense::kLe, y);
          double c = 0.0;
          auto back = Window(i, p - 2, p, &c);
          m().AddConstraint(Tag("no_back_to_back", {i, k, j}), back,
                            RowSense::kLe, 1.0 - c);

          const int fm = f_max_(i, k, j);
          m().AddConstraint(Tag("maxout_upper", {i, k, j}),
                            Join(BlockTotal(i, k), {{fm, 1.0}}), RowSense::kLe,
                            gmax_);
          m().AddConstraint(Tag("maxout_lower", {i, k, j}),
                            Join(BlockTotal(i, k), {{fm, double(gmax_)}}),
                            RowSense::kGe, gmax_);

          const int fb = f_b2b_(i, k, j);
          auto around = Window(i, p - 2, p + 2, &c);
          m().AddConstraint(Tag("backtoback_upper", {i, k, j}),
                            Join(around, {{fb, 2.0}}), RowSense::kLe, 2.0 - c);
          m().AddConstraint(Tag("backtoback_lower", {i, k, j}),
                            Join(around, {{fb, 1.0}}), RowSense::kGe, 1.0 - c);

          if (inst_.calendar.IsWeekendShift(k, j)) {
            const int fw = f_week_(i, k, j);
            m().AddConstraint(Tag("weekend_upper", {i, k, j}),
                              Join(weekend_total, {{fw, 1.0}}), RowSense::kLe, cap);
            m().AddConstraint(Tag("weekend_lower", {i, k, j}),
                              Join(weekend_total, {{fw, double(cap)}}),
                              RowSense::kGe, cap);
          }
        }
      }
    }
  }

  void AddCombinedFlags() {
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        std::vector<Term> any{{m_[i][k], 1.0}};
        for (int j = 0; j < q_; ++j) {
          const int f = f_all_(i, k, j);
          std::vector<Term> flags = {{f_avail_(i, k, j), -1.0},
                                     {f_max_(i, k, j), -1.0},
                                     {f_b2b_(i, k, j), -1.0},
                                     {f_week_(i, k, j), -1.0},
                                     {f_dem_(i, k, j), -1.0}};
          m().AddConstraint(Tag("eligible_if_all", {i, k, j}),
                            Join(flags, {{f, 1.0}}), RowSense::kGe, -4.0);
          m().AddConstraint(Tag("eligible_only_if_all", {i, k, j}),
                            Join(flags, {{f, 5.0}}), RowSense::kLe, 0.0);
          m().AddConstraint(Tag("blocked_only_if_none", {i, k, j}),
                            {{f, 1.0}, {m_[i][k], 1.0}}, RowSense::kLe, 1.0);
          any.push_back({f, 1.0});
        }
        m().AddConstraint(Tag("blocked_if_none", {i, k}), std::move(any),
                          RowSense::kGe, 1.0);
      }
    }
  }

  void AddApproximateRules() {
    std::vector<std::vector<int>> sigma(n_, std::vector<int>(r_)),
        theta(n_, std::vector<int>(r_));
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        sigma[i][k] = m().AddBinary(Tag("sigma", {i, k}));
        theta[i][k] = m().AddBinary(Tag("theta", {i, k}));
      }
    }
    for (int k = 0; k < r_; ++k) {
      for (int j = 0; j < q_; ++j) {
        const double d = inst_.demand(k, j);
        for (int i = 0; i < n_; ++i) {
          const int fd = f_dem_(i, k, j);
          if (i == 0) {
            m().AddConstraint(Tag("demand_open_first_upper", {k, j}),
                              {{fd, 1.0}}, RowSense::kLe, d);
            m().AddConstraint(Tag("demand_open_first_lower", {k, j}),
                              {{fd, d}}, RowSense::kGe, d);
            continue;
          }
          std::vector<Term> seniors;
          for (int h = 0; h < i; ++h) seniors.push_back({X(h, k, j), 1.0});
          m().AddConstraint(Tag("demand_open_upper", {i, k, j}),
                            Join(seniors, {{fd, 1.0}}), RowSense::kLe, d);
          m().AddConstraint(Tag("demand_open_lower", {i, k, j}),
                            Join(seniors, {{fd, d}}), RowSense::kGe, d);
        }
      }
    }
    for (int k = 0; k < r_; ++k) {
      for (int i = 0; i < n_; ++i) {
        const double g = inst_.minimums[i][k];
        if (i + 1 < n_) {
          m().AddConstraint(Tag("sigma_order", {i, k}),
                            {{sigma[i][k], 1.0}, {sigma[i + 1][k], -1.0}},
                            RowSense::kGe, 0.0);
        }
        m().AddConstraint(Tag("sigma_needs_minimum_or_block", {i, k}),
                          {{theta[i][k], 1.0}, {m_[i][k], 1.0}, {sigma[i][k], -1.0}},
                          RowSense::kGe, 0.0);
        m().AddConstraint(Tag("theta_needs_minimum", {i, k}),
                          Join(BlockTotal(i, k), {{theta[i][k], -g}}),
                          RowSense::kGe, 0.0);
        m().AddConstraint(Tag("cap_at_minimum", {i, k}),
                          Join(BlockTotal(i, k), {{sigma[i][k], -1.0}}),
                          RowSense::kLe, g - 1.0);
      }
    }
  }

  void AddExactRules() {
    auto grid = [&](const char* name) {
      std::vector<std::vector<int>> v(n_, std::vector<int>(r_));
      for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < r_; ++k) v[i][k] = m().AddBinary(Tag(name, {i, k}));
      }
      return v;
    };
    std::vector<std::vector<int>> delta(n_, std::vector<int>(r_));
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < r_; ++k) {
        const int g = inst_.minimums[i][k];
        delta[i][k] = m().AddVariable(Tag("delta", {i, k}), VarType::kInteger,
                                      -g, gmax_ - g);
      }
    }
    const auto theta = grid("theta");
    const auto pi = grid("pi");
    const auto alpha = grid("alpha");
    auto g_of = [&](int i, int k) { return double(inst_.minimums[i][k]); };
    const double gm = gmax_;

    for (int k = 0; k < r_; ++k) {
      for (int i = 0; i < n_; ++i) {
        const double g = g_of(i, k);
        const int d = delta[i][k], th = theta[i][k], p = pi[i][k];
        m().AddConstraint(Tag("delta_definition", {i, k}),
                          Join(BlockTotal(i, k), {{d, -1.0}}), RowSense::kEq, g);
        m().AddConstraint(Tag("theta_if_met", {i, k}), {{d, 1.0}, {th, -g}},
                          RowSense::kGe, -g);
        // Upper coefficient is one larger than the printed constant so that
        // a nurse may reach the block maximum.
        m().AddConstraint(Tag("theta_only_if_met", {i, k}),
                          {{d, 1.0}, {th, -(gm - g + 1.0)}}, RowSense::kLe, -1.0);
        m().AddConstraint(Tag("alpha_needs_minimum_or_block", {i, k}),
                          {{alpha[i][k], 1.0}, {m_[i][k], -1.0}, {th, -1.0}},
                          RowSense::kLe, 0.0);
        m().AddConstraint(Tag("pi_if_exceeded", {i, k}),
                          {{d, 1.0}, {p, -(g + 1.0)}}, RowSense::kGe, -g);
        m().AddConstraint(Tag("pi_only_if_exceeded", {i, k}),
                          {{d, 1.0}, {p, -(gm - g)}}, RowSense::kLe, 0.0);
        for (int j = 0; j < q_; ++j) {
          const int a = m().AddBinary(Tag("a", {i, k, j}));
          a_[Key(i, k, j)] = a;
          m().AddConstraint(Tag("a_not_exceeded", {i, k, j}), {{a, 1.0}, {p, 1.0}},
                            RowSense::kLe, 1.0);
          m().AddConstraint(Tag("a_assigned", {i, k, j}), {{a, 1.0}, {X(i, k, j), -1.0}},
                            RowSense::kLe, 0.0);
          m().AddConstraint(Tag("a_lower", {i, k, j}),
                            {{a, 1.0}, {X(i, k, j), -1.0}, {p, 1.0}}, RowSense::kGe, 0.0);
        }
      }

      // Pairwise terms; i senior to ip.
      std::vector<std::vector<std::vector<Term>>> minus_terms(
          n_, std::vector<std::vector<Term>>(q_));
      std::vector<std::vector<std::vector<Term>>> plus_terms(
          n_, std::vector<std::vector<Term>>(q_));
      for (int i = 0; i < n_; ++i) {
        for (int ip = i + 1; ip < n_; ++ip) {
          const double gi = g_of(i, k), gj = g_of(ip, k);
          const int di = delta[i][k], dj = delta[ip][k];
          const int thi = theta[i][k], thj = theta[ip][k];
          m().AddConstraint(Tag("juniors_wait_for_senior", {i, ip, k}),
                            {{dj, 1.0}, {alpha[i][k], -gm}}, RowSense::kLe, -gj);
          m().AddConstraint(Tag("seniors_wait_for_junior", {i, ip, k}),
                            {{di, 1.0}, {alpha[ip][k], -(gm - gi)}}, RowSense::kLe, 0.0);
          const int beta = m().AddBinary(Tag("beta", {i, ip, k}));
          const int gamma = m().AddBinary(Tag("gamma", {i, ip, k}));
          m().AddConstraint(Tag("beta_relax", {i, ip, k}),
                            {{beta, 1.0}, {thi, 1.0}, {thj, 1.0}, {m_[i][k], -1.0}},
                            RowSense::kLe, 2.0);
          m().AddConstraint(Tag("gamma_relax", {i, ip, k}),
                            {{gamma, 1.0}, {thi, 1.0}, {thj, 1.0}, {m_[ip][k], -1.0}},
                            RowSense::kLe, 2.0);
          m().AddConstraint(Tag("senior_at_most_one_ahead", {i, ip, k}),
                            {{di, 1.0}, {dj, -1.0}, {gamma, -(gm - gi + gj - 1.0)}},
                            RowSense::kLe, 1.0);
          m().AddConstraint(Tag("senior_not_behind", {i, ip, k}),
                            {{dj, 1.0}, {di, -1.0}, {beta, -(gm - gj + gi)}},
                            RowSense::kLe, 0.0);

          const double cl1 = gm - gi + gj + 1.0, cl2 = gm - gj + gi + 2.0;
          const int l = m().AddBinary(Tag("l", {i, ip, k}));
          m().AddConstraint(Tag("l_upper", {i, ip, k}),
                            {{di, 1.0}, {dj, -1.0}, {l, cl1}}, RowSense::kLe, 1.0 + cl1);
          m().AddConstraint(Tag("l_lower", {i, ip, k}),
                            {{di, 1.0}, {dj, -1.0}, {l, cl2}}, RowSense::kGe, 2.0);
          const double ct1 = gm - gj + gi, ct2 = gm - gi + gj + 1.0;
          const int t = m().AddBinary(Tag("t", {i, ip, k}));
          m().AddConstraint(Tag("t_upper", {i, ip, k}),
                            {{dj, 1.0}, {di, -1.0}, {t, ct1}}, RowSense::kLe, ct1);
          m().AddConstraint(Tag("t_lower", {i, ip, k}),
                            {{dj, 1.0}, {di, -1.0}, {t, ct2}}, RowSense::kGe, 1.0);

          for (int j = 0; j < q_; ++j) {
            const int a = a_[Key(i, k, j)];
            const int b = m().AddBinary(Tag("b", {i, ip, k, j}));
            AddAnd("b", {i, ip, k, j}, b, a, thj, /*negate_second=*/true);
            minus_terms[ip][j].push_back({b, 1.0});

            const int h = m().AddBinary(Tag("h", {i, ip, k, j}));
            AddAnd("h", {i, ip, k, j}, h, l, X(i, k, j), false);
            const int pv = m().AddBinary(Tag("p", {i, ip, k, j}));
            AddAnd("p", {i, ip, k, j}, pv, h, thj, false);
            plus_terms[ip][j].push_back({pv, 1.0});

            const int u = m().AddBinary(Tag("u", {i, ip, k, j}));
            AddAnd("u", {i, ip, k, j}, u, t, X(ip, k, j), false);
            const int v = m().AddBinary(Tag("v", {i, ip, k, j}));
            AddAnd("v", {i, ip, k, j}, v, u, thi, false);
            plus_terms[i][j].push_back({v, 1.0});
          }
        }
      }

      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < q_; ++j) {
          const double d = inst_.demand(k, j);
          const int fm = m().AddBinary(Tag("Fdemand_minus", {i, k, j}));
          const int fp = m().AddBinary(Tag("Fdemand_plus", {i, k, j}));
          m().AddConstraint(Tag("demand_minus_upper", {i, k, j}),
                            Join(minus_terms[i][j], {{fm, 1.0}}), RowSense::kLe, d);
          m().AddConstraint(Tag("demand_minus_lower", {i, k, j}),
                            Join(minus_terms[i][j], {{fm, d}}), RowSense::kGe, d);
          m().AddConstraint(Tag("demand_plus_upper", {i, k, j}),
                            Join(plus_terms[i][j], {{fp, 1.0}}), RowSense::kLe, d);
          m().AddConstraint(Tag("demand_plus_lower", {i, k, j}),
                            Join(plus_terms[i][j], {{fp, d}}), RowSense::kGe, d);
          const int fd = f_dem_(i, k, j), th = theta[i][k];
          m().AddConstraint(Tag("demand_select_minus_upper", {i, k, j}),
                            {{fd, 1.0}, {fm, -1.0}, {th, -1.0}}, RowSense::kLe, 0.0);
          m().AddConstraint(Tag("demand_select_plus_upper", {i, k, j}),
                            {{fd, 1.0}, {fp, -1.0}, {th, 1.0}}, RowSense::kLe, 1.0);
          m().AddConstraint(Tag("demand_select_plus_lower", {i, k, j}),
                            {{fd, 1.0}, {fp, -1.0}, {th, -1.0}}, RowSense::kGe, -1.0);
          m().AddConstraint(Tag("demand_select_minus_lower", {i, k, j}),
                            {{fd, 1.0}, {fm, -1.0}, {th, 1.0}}, RowSense::kGe, 0.0);
        }
      }
    }
  }

  // out = first AND second (or first AND NOT second).
  void AddAnd(const char* name, std::initializer_list<int> idx, int out,
              int first, int second, bool negate_second) {
    std::string base(name);
    const std::string suffix = Tag("", idx);
    if (negate_second) {
      m().AddConstraint(base + "_not_second" + suffix, {{out, 1.0}, {second, 1.0}},
                        RowSense::kLe, 1.0);
      m().AddConstraint(base + "_first" + suffix, {{out, 1.0}, {first, -1.0}},
                        RowSense::kLe, 0.0);
      m().AddConstraint(base + "_lower" + suffix,
                        {{out, 1.0}, {first, -1.0}, {second, 1.0}}, RowSense::kGe, 0.0);
      return;
    }
    m().AddConstraint(base + "_first" + suffix, {{out, 1.0}, {first, -1.0}},
                      RowSense::kLe, 0.0);
    m().AddConstraint(base + "_second" + suffix, {{out, 1.0}, {second, -1.0}},
                      RowSense::kLe, 0.0);
    m().AddConstraint(base + "_lower" + suffix,
                      {{out, 1.0}, {first, -1.0}, {second, -1.0}}, RowSense::kGe, -1.0);
  }

  long long Key(int i, int k, int j) const {
    return (static_cast<long long>(i) * r_ + k) * q_ + j;
  }

  const PoolInstance& inst_;
  ArmstrongMode mode_;
  int n_, r_, q_, gmax_;
  ScheduleModel out_;
  NurseShiftGrid<int> f_avail_, f_max_, f_b2b_, f_week_, f_dem_, f_all_;
  std::vector<std::vector<int>> m_;
  std::unordered_map<long long, int> a_;
};

}  // namespace

std::string_view ArmstrongModeName(ArmstrongMode mode) {
  return mode == ArmstrongMode::kExact ? "exact" : "approx";
}

std::optional<ArmstrongMode> ParseArmstrongMode(std::string_view text) {
  if (text == "approx" || text == "approximate") return ArmstrongMode::kApproximate;
  if (text == "exact") return ArmstrongMode::kExact;
  return std::nullopt;
}

ScheduleModel BuildStage1(const PoolInstance& instance, ArmstrongMode mode) {
  ScheduleModel sm = Builder(instance, mode).Build();
  std::vector<Term> obj;
  for (int v : sm.s.values()) obj.push_back({v, 1.0});
  sm.model.SetObjective(ObjectiveSense::kMinimize, std::move(obj));
  return sm;
}

ScheduleModel BuildStage2(const PoolInstance& instance, int demand_star,
                          ArmstrongMode mode) {
  const int total = instance.TotalDemand();
  if (demand_star < 0 || demand_star > total) {
    throw RosterError(ErrorCode::kInvalidArgument, "demand_star",
                      "satisfiable demand " + std::to_string(demand_star) +
                          " outside 0.." + std::to_string(total));
  }
  ScheduleModel sm = Builder(instance, mode).Build();
  std::vector<Term> unfilled;
  for (int v : sm.s.values()) unfilled.push_back({v, 1.0});
  sm.model.AddConstraint("unfilled_at_most_stage_one", std::move(unfilled),
                         RowSense::kLe, total - demand_star);
  std::vector<Term> obj;
  for (int i = 0; i < instance.nurse_count(); ++i) {
    for (int k = 0; k < instance.calendar.blocks(); ++k) {
      for (int j = 0; j < instance.calendar.shifts_per_block(); ++j) {
        const int score = instance.preferences.score(i, k, j);
        if (score != 0) obj.push_back({sm.x(i, k, j), double(score)});
      }
    }
  }
  sm.model.SetObjective(ObjectiveSense::kMaximize, std::move(obj));
  return sm;
}

Schedule ExtractSchedule(const ScheduleModel& sm,
                         const std::vector<double>& values) {
  NurseShiftGrid<std::uint8_t> x(sm.x.nurses(), sm.x.blocks(),
                                 sm.x.shifts_per_block(), 0);
  ShiftGrid<int> s(sm.s.blocks(), sm.s.shifts_per_block(), 0);
  for (int i = 0; i < sm.x.nurses(); ++i) {
    for (int k = 0; k < sm.x.blocks(); ++k) {
      for (int j = 0; j < sm.x.shifts_per_block(); ++j) {
        x(i, k, j) = values[sm.x(i, k, j)] > 0.5 ? 1 : 0;
      }
    }
  }
  for (int k = 0; k < sm.s.blocks(); ++k) {
    for (int j = 0; j < sm.s.shifts_per_block(); ++j) {
      s(k, j) = static_cast<int>(std::lround(values[sm.s(k, j)]));
    }
  }
  return Schedule::FromParts(std::move(x), std::move(s));
}

}  // namespace roster
