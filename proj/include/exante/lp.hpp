#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "exante/errors.hpp"

namespace exante {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

enum class RowSense { LessEq, Equal, GreaterEq };

struct LpRow {
  std::string name;
  RowSense sense = RowSense::LessEq;
  double rhs = 0.0;
};

struct LpEntry {
  int row;
  double coef;
};

struct LpColumn {
  std::string name;
  double objective = 0.0;
  bool free_var = false;  // default: nonnegative
  std::vector<LpEntry> entries;
};

struct LpConfig {
  double eps_pivot = 1e-10;
  double eps_feas = 1e-9;
  double eps_duality = 1e-7;
  double eps_cs = 1e-6;
  double eps_price = 1e-9;
  double oracle_stop = 1e-8;  // a reduced cost below this is "not violated"
  long long dense_cap = 4000000;
  long long max_pivots = 0;  // 0 = automatic
  // ellipsoid mode
  double radius_log2_cap = 24.0;
  double eps_volume = 1e-9;
  long long max_ellipsoid_steps = 500000;
  long long max_generated_columns = 100000;
};

struct LpSpec {
  bool maximize = true;
  std::vector<LpRow> rows;
  std::vector<LpColumn> cols;

  int add_row(std::string name, RowSense sense, double rhs) {
    rows.push_back({std::move(name), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
  }
  int add_col(LpColumn col) {
    cols.push_back(std::move(col));
    return static_cast<int>(cols.size()) - 1;
  }
};

// Dual sign conventions, for a maximization problem: reported duals y satisfy
// c_j - y.A_j <= tol for every column at optimality, y_r >= 0 on <= rows,
// y_r <= 0 on >= rows, free on = rows, and y.b equals the objective. For a
// minimization the duals are negated accordingly (c_j - y.A_j >= -tol).
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> row_activity;
  long long iterations = 0;  // pivots (explicit) / columns in master (oracle)
  long long oracle_calls = 0;
  long long generated_columns = 0;
  long long warm_columns = 0;
  long long ellipsoid_steps = 0;
  double duality_gap = 0.0;

  double reduced_cost(const LpSpec& spec, const LpColumn& col) const {
    double rc = col.objective;
    for (const LpEntry& e : col.entries) rc -= duals[e.row] * e.coef;
    return rc;
  }
};

namespace simplex_detail {

class Tableau {
 public:
  Tableau(const LpSpec& spec, const LpConfig& cfg) : spec_(spec), cfg_(cfg) {
    m_ = static_cast<int>(spec.rows.size());
    // Structural columns; free variables are split into two nonnegative halves.
    for (int j = 0; j < static_cast<int>(spec.cols.size()); ++j) {
      col_of_struct_.push_back(static_cast<int>(struct_sign_.size()));
      struct_src_.push_back(j);
      struct_sign_.push_back(1.0);
      if (spec.cols[j].free_var) {
        struct_src_.push_back(j);
        struct_sign_.push_back(-1.0);
      }
    }
    n_struct_ = static_cast<int>(struct_src_.size());

    row_sign_.assign(m_, 1.0);
    for (int r = 0; r < m_; ++r) {
      sense_.push_back(spec.rows[r].sense);
      double b = spec.rows[r].rhs;
      if (b < 0) {
        row_sign_[r] = -1.0;
        b = -b;
        if (sense_[r] == RowSense::LessEq)
          sense_[r] = RowSense::GreaterEq;
        else if (sense_[r] == RowSense::GreaterEq)
          sense_[r] = RowSense::LessEq;
      }
      b_.push_back(b);
    }
    slack_col_.assign(m_, -1);
    art_col_.assign(m_, -1);
    unit_col_.assign(m_, -1);
    int extra = 0;
    for (int r = 0; r < m_; ++r) {
      if (sense_[r] == RowSense::LessEq) {
        slack_col_[r] = n_struct_ + extra++;
        unit_col_[r] = slack_col_[r];
      } else if (sense_[r] == RowSense::GreaterEq) {
        slack_col_[r] = n_struct_ + extra++;  // surplus, coefficient -1
      }
    }
    for (int r = 0; r < m_; ++r) {
      if (sense_[r] != RowSense::LessEq) {
        art_col_[r] = n_struct_ + extra++;
        unit_col_[r] = art_col_[r];
      }
    }
    n_ = n_struct_ + extra;

    if (static_cast<long long>(m_ + 1) * (n_ + 1) > cfg.dense_cap)
      throw Error(ErrorCode::DenseCapExceeded,
                  "tableau of " + std::to_string(m_) + "x" + std::to_string(n_) + " exceeds the dense cap");

    t_.assign(m_, std::vector<double>(n_, 0.0));
    for (int s = 0; s < n_struct_; ++s) {
      const LpColumn& col = spec.cols[struct_src_[s]];
      for (const LpEntry& e : col.entries)
        t_[e.row][s] += struct_sign_[s] * row_sign_[e.row] * e.coef;
    }
    for (int r = 0; r < m_; ++r) {
      if (slack_col_[r] >= 0) t_[r][slack_col_[r]] = sense_[r] == RowSense::LessEq ? 1.0 : -1.0;
      if (art_col_[r] >= 0) t_[r][art_col_[r]] = 1.0;
    }
    basis_.assign(m_, -1);
    for (int r = 0; r < m_; ++r)
      basis_[r] = sense_[r] == RowSense::LessEq ? slack_col_[r] : art_col_[r];
    enterable_.assign(n_, true);
  }

  LpStatus run() {
    bool need_phase1 = false;
    for (int r = 0; r < m_; ++r) need_phase1 = need_phase1 || art_col_[r] >= 0;
    max_pivots_ = cfg_.max_pivots > 0 ? cfg_.max_pivots
                                      : 20000 + 100LL * (m_ + 1) * (n_ + 1);
    if (need_phase1) {
      std::vector<double> c1(n_, 0.0);
      for (int r = 0; r < m_; ++r)
        if (art_col_[r] >= 0) c1[art_col_[r]] = -1.0;
      load_objective(c1);
      LpStatus st = iterate();
      if (st != LpStatus::Optimal) return st == LpStatus::Unbounded ? LpStatus::Infeasible : st;
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r)
        if (art_col_[r] >= 0 && basis_[r] == art_col_[r]) infeas += b_[r];
      if (infeas > cfg_.eps_feas * (1.0 + max_abs_rhs())) return LpStatus::Infeasible;
      purge_artificials();
    }
    std::vector<double> c2(n_, 0.0);
    double obj_sign = spec_.maximize ? 1.0 : -1.0;
    for (int s = 0; s < n_struct_; ++s)
      c2[s] = obj_sign * struct_sign_[s] * spec_.cols[struct_src_[s]].objective;
    for (int r = 0; r < m_; ++r)
      if (art_col_[r] >= 0) enterable_[art_col_[r]] = false;
    load_objective(c2);
    return iterate();
  }

  // Extraction ---------------------------------------------------------

  std::vector<double> primal() const {
    std::vector<double> x(spec_.cols.size(), 0.0);
    for (int r = 0; r < m_; ++r) {
      int j = basis_[r];
      if (j < n_struct_) x[struct_src_[j]] += struct_sign_[j] * b_[r];
    }
    return x;
  }

  std::vector<double> duals() const {
    // Each row keeps a unit column (slack or artificial, coefficient +1);
    // its reduced cost is -y_r in normalized coordinates.
    std::vector<double> y(m_, 0.0);
    double obj_sign = spec_.maximize ? 1.0 : -1.0;
    for (int r = 0; r < m_; ++r) {
      double yn = -cbar_[unit_col_[r]];
      y[r] = obj_sign * row_sign_[r] * yn;
    }
    return y;
  }

  long long pivots() const { return pivots_; }

 private:
  double max_abs_rhs() const {
    double v = 0.0;
    for (double b : b_) v = std::max(v, std::abs(b));
    return v;
  }

  void load_objective(const std::vector<double>& c) {
    c_ = c;
    cbar_ = c;
    z_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      double cb = c_[basis_[r]];
      if (cb == 0.0) continue;
      z_ += cb * b_[r];
      for (int j = 0; j < n_; ++j) cbar_[j] -= cb * t_[r][j];
    }
  }

  void pivot(int r, int j) {
    double p = t_[r][j];
    for (int k = 0; k < n_; ++k) t_[r][k] /= p;
    b_[r] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = t_[i][j];
      if (f == 0.0) continue;
      for (int k = 0; k < n_; ++k) t_[i][k] -= f * t_[r][k];
      t_[i][j] = 0.0;  // keep the unit column exact
      b_[i] -= f * b_[r];
      if (b_[i] < 0 && b_[i] > -cfg_.eps_feas) b_[i] = 0.0;
    }
    double f = cbar_[j];
    if (f != 0.0) {
      for (int k = 0; k < n_; ++k) cbar_[k] -= f * t_[r][k];
      cbar_[j] = 0.0;
      z_ += f * b_[r];
    }
    basis_[r] = j;
    ++pivots_;
  }

  // Bland's rule on both the entering and leaving choice; immune to cycling
  // and deterministic given the stable column order.
  LpStatus iterate() {
    while (true) {
      if (pivots_ > max_pivots_) return LpStatus::IterationLimit;
      int enter = -1;
      for (int j = 0; j < n_; ++j)
        if (enterable_[j] && cbar_[j] > cfg_.eps_pivot) {
          enter = j;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        if (t_[r][enter] <= cfg_.eps_pivot) continue;
        double ratio = b_[r] / t_[r][enter];
        if (leave < 0 || ratio < best - 1e-12) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + 1e-12 && basis_[r] < basis_[leave]) {
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  // After phase 1, swap basic artificials for real columns where possible so
  // phase 2 starts from a clean basis; rows that admit no swap are redundant.
  void purge_artificials() {
    std::vector<bool> is_art(n_, false);
    for (int r = 0; r < m_; ++r)
      if (art_col_[r] >= 0) is_art[art_col_[r]] = true;
    for (int r = 0; r < m_; ++r) {
      if (art_col_[r] < 0 || basis_[r] != art_col_[r]) continue;
      for (int j = 0; j < n_; ++j) {
        if (is_art[j]) continue;
        if (std::abs(t_[r][j]) > 1e-7) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  const LpSpec& spec_;
  const LpConfig& cfg_;
  int m_ = 0, n_ = 0, n_struct_ = 0;
  std::vector<int> struct_src_;
  std::vector<double> struct_sign_;
  std::vector<int> col_of_struct_;
  std::vector<RowSense> sense_;
  std::vector<double> row_sign_;
  std::vector<double> b_;
  std::vector<std::vector<double>> t_;
  std::vector<double> c_, cbar_;
  std::vector<int> basis_;
  std::vector<int> slack_col_, art_col_, unit_col_;
  std::vector<bool> enterable_;
  double z_ = 0.0;
  long long pivots_ = 0, max_pivots_ = 0;
};

}  // namespace simplex_detail

inline LpSolution solve_explicit(const LpSpec& spec, const LpConfig& cfg = {}) {
  simplex_detail::Tableau tab(spec, cfg);
  LpSolution sol;
  sol.status = tab.run();
  sol.iterations = tab.pivots();
  if (sol.status != LpStatus::Optimal) return sol;

  sol.primal = tab.primal();
  sol.duals = tab.duals();
  sol.row_activity.assign(spec.rows.size(), 0.0);
  sol.objective = 0.0;
  for (size_t j = 0; j < spec.cols.size(); ++j) {
    if (sol.primal[j] == 0.0) continue;
    sol.objective += spec.cols[j].objective * sol.primal[j];
    for (const LpEntry& e : spec.cols[j].entries) sol.row_activity[e.row] += e.coef * sol.primal[j];
  }
  double dual_obj = 0.0;
  for (size_t r = 0; r < spec.rows.size(); ++r) dual_obj += sol.duals[r] * spec.rows[r].rhs;
  sol.duality_gap = std::abs(sol.objective - dual_obj);
  double scale = 1.0 + std::abs(sol.objective);
  if (sol.duality_gap > cfg.eps_duality * scale)
    throw Error(ErrorCode::NumericalFailure,
                "strong duality violated by " + std::to_string(sol.duality_gap) + " on '" +
                    (spec.rows.empty() ? std::string("lp") : spec.rows[0].name) + "'");
  return sol;
}

}  // namespace exante
