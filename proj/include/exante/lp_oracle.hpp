#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exante/lp.hpp"

namespace exante {

// A column produced by a separation oracle, together with the violation it
// claims at the duals it was asked about. The engine re-prices every returned
// column; a mismatch or a non-positive re-priced violation is an
// OracleInconsistent error.
struct GeneratedColumn {
  std::string id;
  LpColumn column;
  double violation = 0.0;
};

using ColumnOracle = std::function<std::optional<GeneratedColumn>(const std::vector<double>&)>;

enum class SolveMode { CuttingPlane, Ellipsoid };

inline double priced_violation(const LpSpec& spec, const std::vector<double>& duals,
                               const LpColumn& col) {
  double rc = col.objective;
  for (const LpEntry& e : col.entries) rc -= duals[e.row] * e.coef;
  return spec.maximize ? rc : -rc;
}

namespace oracle_detail {

struct OracleStats {
  long long oracle_calls = 0;
  long long generated_columns = 0;
  long long warm_columns = 0;
  long long ellipsoid_steps = 0;
};

inline double spec_magnitude(const LpSpec& spec);

// Restricted-master loop: solve, price, add the returned column, repeat until
// the oracle certifies that no violated column exists at the final duals.
// A restricted master can be infeasible before the right columns arrive, so
// on first infeasibility every row gets a pair of penalty columns priced at
// -M; they leave the basis as real columns come in and must be at zero when
// the loop certifies, otherwise the full problem is infeasible.
inline LpSolution master_loop(LpSpec& master, const ColumnOracle& oracle, const LpConfig& cfg,
                              std::set<std::string>& ids, OracleStats& stats) {
  LpSolution sol;
  bool penalized = false;
  int first_penalty_col = -1;
  auto inject_penalties = [&]() {
    penalized = true;
    first_penalty_col = static_cast<int>(master.cols.size());
    // Big enough to dominate any dual this problem class produces, small
    // enough that tableau noise stays well under the pricing threshold.
    double big = 1e4 * (spec_magnitude(master) + 1.0);
    double sign = master.maximize ? -1.0 : 1.0;
    for (int r = 0; r < static_cast<int>(master.rows.size()); ++r) {
      LpColumn up, down;
      up.name = "penalty.up." + std::to_string(r);
      up.objective = sign * big;
      up.entries = {{r, 1.0}};
      down.name = "penalty.down." + std::to_string(r);
      down.objective = sign * big;
      down.entries = {{r, -1.0}};
      master.cols.push_back(std::move(up));
      master.cols.push_back(std::move(down));
    }
  };
  while (true) {
    sol = solve_explicit(master, cfg);
    if (sol.status == LpStatus::Infeasible && !penalized) {
      inject_penalties();
      continue;
    }
    if (sol.status != LpStatus::Optimal) break;
    if (penalized) {
      // The moment the penalties hit zero they are stripped again, so the
      // big-M values stop polluting the duals used for fine pricing.
      double used = 0.0;
      for (size_t j = first_penalty_col; j < master.cols.size(); ++j)
        if (master.cols[j].name.rfind("penalty.", 0) == 0) used = std::max(used, std::abs(sol.primal[j]));
      if (used <= 1e-9) {
        LpSpec clean = master;
        clean.cols.clear();
        for (const LpColumn& c : master.cols)
          if (c.name.rfind("penalty.", 0) != 0) clean.cols.push_back(c);
        master = std::move(clean);
        penalized = false;
        first_penalty_col = -1;
        continue;
      }
    }
    ++stats.oracle_calls;
    auto gen = oracle(sol.duals);
    if (!gen) {
      if (!penalized) break;
      sol.status = LpStatus::Infeasible;  // no column can displace the penalties
      break;
    }
    double rc = priced_violation(master, sol.duals, gen->column);
    if (std::abs(rc - gen->violation) > cfg.eps_price * (1.0 + std::abs(rc)))
      throw Error(ErrorCode::OracleInconsistent,
                  "oracle reported violation " + std::to_string(gen->violation) +
                      " but the column re-prices to " + std::to_string(rc));
    if (rc <= cfg.oracle_stop)
      throw Error(ErrorCode::OracleInconsistent,
                  "oracle returned column '" + gen->id + "' whose re-priced violation " +
                      std::to_string(rc) + " is not positive");
    if (ids.count(gen->id)) {
      // On a clean master an existing column can never price as violated; on
      // a penalized one a noise-level repeat just means no real column can
      // displace the remaining penalty mass.
      if (!penalized || rc > 1e-3 * (spec_magnitude(master) + 1.0))
        throw Error(ErrorCode::OracleInconsistent,
                    "oracle returned column '" + gen->id + "' twice");
      sol.status = LpStatus::Infeasible;
      break;
    }
    ids.insert(gen->id);
    gen->column.name = gen->id;
    master.add_col(std::move(gen->column));
    ++stats.generated_columns;
    if (stats.generated_columns > cfg.max_generated_columns) {
      sol.status = LpStatus::IterationLimit;
      break;
    }
  }
  sol.oracle_calls = stats.oracle_calls;
  sol.generated_columns = stats.generated_columns;
  sol.warm_columns = stats.warm_columns;
  sol.ellipsoid_steps = stats.ellipsoid_steps;
  sol.iterations = stats.warm_columns + stats.generated_columns;
  return sol;
}

inline double spec_magnitude(const LpSpec& spec) {
  double v = 1.0;
  for (const LpRow& r : spec.rows) v = std::max(v, std::abs(r.rhs));
  for (const LpColumn& c : spec.cols) {
    v = std::max(v, std::abs(c.objective));
    for (const LpEntry& e : c.entries) v = std::max(v, std::abs(e.coef));
  }
  return v;
}

}  // namespace oracle_detail

// Oracle-driven solve. CuttingPlane grows a restricted master until the
// oracle certifies optimality. Ellipsoid runs the central-cut ellipsoid
// method on the dual polytope, using the oracle as the separator, then
// recovers the primal from the generated cuts with solve_explicit and
// finishes with the same certification loop, so both modes end with an
// oracle-certified optimum and must agree.
inline LpSolution solve_with_oracle(const LpSpec& spec, const ColumnOracle& oracle,
                                    SolveMode mode, const LpConfig& cfg = {},
                                    LpSpec* final_master = nullptr) {
  LpSpec master = spec;
  std::set<std::string> ids;
  for (const LpColumn& c : spec.cols) ids.insert(c.name);
  oracle_detail::OracleStats stats;
  stats.warm_columns = static_cast<long long>(spec.cols.size());

  if (mode == SolveMode::CuttingPlane) {
    LpSolution sol = oracle_detail::master_loop(master, oracle, cfg, ids, stats);
    if (final_master) *final_master = std::move(master);
    return sol;
  }

  // --- ellipsoid phase ---
  const int m = static_cast<int>(spec.rows.size());
  // Initial ball radius 2^L; L comes from the magnitude of the input data
  // (stand-in for the bit size of the input rationals), capped.
  double L = std::min(cfg.radius_log2_cap,
                      std::ceil(std::log2(oracle_detail::spec_magnitude(spec) + 2.0)) + 6.0 +
                          std::ceil(std::log2(m + 2.0)));
  const double radius = std::pow(2.0, L);
  const double dual_sign = spec.maximize ? 1.0 : -1.0;  // dual objective is minimized for max

  std::vector<double> z(m, 0.0);
  std::vector<std::vector<double>> E(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) E[i][i] = radius * radius;
  long long budget = std::min<long long>(
      cfg.max_ellipsoid_steps,
      static_cast<long long>(std::ceil(2.0 * (m + 1) * (m + 1) *
                                       std::log(std::max(4.0, 2.0 * radius / cfg.eps_volume)))) +
          16);
  double best = std::numeric_limits<double>::infinity();
  double tol = 1e-7;

  auto dual_bound_cut = [&](int r, std::vector<double>& a) -> bool {
    // sign constraint of row r, oriented for the max-primal convention
    RowSense s = spec.rows[r].sense;
    if (s == RowSense::Equal) return false;
    double yr = dual_sign * z[r];
    if (s == RowSense::LessEq && yr < -tol) {
      a.assign(m, 0.0);
      a[r] = -dual_sign;
      return true;
    }
    if (s == RowSense::GreaterEq && yr > tol) {
      a.assign(m, 0.0);
      a[r] = dual_sign;
      return true;
    }
    return false;
  };

  long long steps = 0;
  for (; steps < budget; ++steps) {
    std::vector<double> a;
    bool cut = false;
    for (int r = 0; r < m && !cut; ++r) cut = dual_bound_cut(r, a);
    if (!cut) {
      // explicit columns: y.A_j >= c_j (max) for nonneg vars, equality for free
      for (const LpColumn& col : master.cols) {
        double rc = priced_violation(master, z, col);
        if (rc > tol || (col.free_var && rc < -tol)) {
          a.assign(m, 0.0);
          double s = rc > 0 ? 1.0 : -1.0;
          for (const LpEntry& e : col.entries) a[e.row] -= s * (spec.maximize ? e.coef : -e.coef);
          cut = true;
          break;
        }
      }
    }
    if (!cut) {
      auto gen = oracle(z);
      if (gen) {
        double rc = priced_violation(master, z, gen->column);
        if (std::abs(rc - gen->violation) > cfg.eps_price * (1.0 + std::abs(rc)))
          throw Error(ErrorCode::OracleInconsistent,
                      "oracle reported violation " + std::to_string(gen->violation) +
                          " but the column re-prices to " + std::to_string(rc));
        if (rc > tol) {
          if (ids.insert(gen->id).second) {
            gen->column.name = gen->id;
            master.add_col(gen->column);
            ++stats.generated_columns;
          }
          a.assign(m, 0.0);
          for (const LpEntry& e : gen->column.entries)
            a[e.row] -= (spec.maximize ? e.coef : -e.coef);
          cut = true;
        }
      }
      ++stats.oracle_calls;
    }
    if (!cut) {
      // dual-feasible point: slide the objective
      double val = 0.0;
      for (int r = 0; r < m; ++r) val += z[r] * spec.rows[r].rhs;
      val *= dual_sign;
      if (val < best) best = val;
      a.assign(m, 0.0);
      for (int r = 0; r < m; ++r) a[r] = dual_sign * spec.rows[r].rhs;
      bool nonzero = false;
      for (double v : a) nonzero = nonzero || v != 0.0;
      if (!nonzero) break;  // zero objective: any feasible dual is optimal
    }

    // central cut update
    std::vector<double> Eg(m, 0.0);
    double gEg = 0.0;
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += E[i][j] * a[j];
      Eg[i] = s;
    }
    for (int i = 0; i < m; ++i) gEg += a[i] * Eg[i];
    if (!(gEg > 1e-300)) break;  // flat ellipsoid, nothing left to cut
    double norm = std::sqrt(gEg);
    if (m == 1) {
      z[0] -= Eg[0] / (2.0 * norm);
      E[0][0] *= 0.25;
      continue;
    }
    double mm = static_cast<double>(m);
    for (int i = 0; i < m; ++i) z[i] -= Eg[i] / ((mm + 1.0) * norm);
    double scale = mm * mm / (mm * mm - 1.0);
    double coef = 2.0 / (mm + 1.0) / gEg;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) E[i][j] = scale * (E[i][j] - coef * Eg[i] * Eg[j]);
  }

  // --- primal recovery from all generated cuts, then certification ---
  stats.ellipsoid_steps = steps;
  LpSolution sol = oracle_detail::master_loop(master, oracle, cfg, ids, stats);
  if (final_master) *final_master = std::move(master);
  return sol;
}

// ---------------------------------------------------------------------------
// Basic-solution extraction: restrict to the optimal face (objective pinned
// to its optimal value), then repeatedly re-optimize a coordinate objective,
// pinning coordinates until the point is a vertex of the original polytope.
// ---------------------------------------------------------------------------

namespace oracle_detail {

inline int matrix_rank(std::vector<std::vector<double>> a, double tol) {
  int rows = static_cast<int>(a.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(a[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    double bestv = tol;
    for (int r = rank; r < rows; ++r)
      if (std::abs(a[r][c]) > bestv) {
        bestv = std::abs(a[r][c]);
        piv = r;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0.0) continue;
      double f = a[r][c] / a[rank][c];
      for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline bool is_basic_solution(const LpSpec& spec, const std::vector<double>& x, double eps) {
  std::vector<int> support;
  for (size_t j = 0; j < x.size(); ++j)
    if (std::abs(x[j]) > eps) support.push_back(static_cast<int>(j));
  if (support.empty()) return true;
  std::vector<double> activity(spec.rows.size(), 0.0);
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    for (const LpEntry& e : spec.cols[j].entries) activity[e.row] += e.coef * x[j];
  }
  std::vector<std::vector<double>> tight;
  for (size_t r = 0; r < spec.rows.size(); ++r) {
    bool t = spec.rows[r].sense == RowSense::Equal ||
             std::abs(activity[r] - spec.rows[r].rhs) <= eps * (1.0 + std::abs(spec.rows[r].rhs));
    if (!t) continue;
    std::vector<double> row(support.size(), 0.0);
    for (size_t k = 0; k < support.size(); ++k)
      for (const LpEntry& e : spec.cols[support[k]].entries)
        if (e.row == static_cast<int>(r)) row[k] += e.coef;
    tight.push_back(std::move(row));
  }
  if (tight.size() < support.size()) return false;
  // transpose so rank is computed over the support coordinates
  std::vector<std::vector<double>> at(support.size(), std::vector<double>(tight.size(), 0.0));
  for (size_t r = 0; r < tight.size(); ++r)
    for (size_t k = 0; k < support.size(); ++k) at[k][r] = tight[r][k];
  return matrix_rank(std::move(at), 1e-8) == static_cast<int>(support.size());
}

}  // namespace oracle_detail

inline LpSolution extract_basic(const LpSpec& spec, const LpSolution& sol, const LpConfig& cfg = {}) {
  if (sol.status != LpStatus::Optimal)
    throw Error(ErrorCode::NumericalFailure, "extract_basic needs an optimal solution");
  double eps_supp = 1e-9;
  if (oracle_detail::is_basic_solution(spec, sol.primal, eps_supp)) return sol;

  std::vector<int> support;
  for (size_t j = 0; j < sol.primal.size(); ++j)
    if (std::abs(sol.primal[j]) > eps_supp) support.push_back(static_cast<int>(j));

  LpSpec face = spec;
  {
    LpRow row;
    row.name = "face.objective";
    row.sense = RowSense::Equal;
    row.rhs = sol.objective;
    int r = static_cast<int>(face.rows.size());
    face.rows.push_back(row);
    for (LpColumn& c : face.cols) {
      if (c.objective != 0.0) c.entries.push_back({r, c.objective});
      c.objective = 0.0;
    }
    face.maximize = true;
  }

  std::vector<double> x = sol.primal;
  for (size_t step = 0; step < support.size(); ++step) {
    int j = support[step];
    for (LpColumn& c : face.cols) c.objective = 0.0;
    face.cols[j].objective = 1.0;
    LpSolution s = solve_explicit(face, cfg);
    if (s.status == LpStatus::Unbounded) {
      // the face is unbounded in +e_j; a coordinate minimum is still a vertex
      face.maximize = false;
      s = solve_explicit(face, cfg);
      face.maximize = true;
    }
    if (s.status != LpStatus::Optimal)
      throw Error(ErrorCode::NumericalFailure, "face re-optimization failed: " +
                                                   std::string(lp_status_name(s.status)));
    x = s.primal;
    if (oracle_detail::is_basic_solution(spec, x, eps_supp)) break;
    // pin this coordinate and move to the next one
    int r = static_cast<int>(face.rows.size());
    face.rows.push_back({"face.e" + std::to_string(j), RowSense::Equal, x[j]});
    face.cols[j].entries.push_back({r, 1.0});
  }

  if (!oracle_detail::is_basic_solution(spec, x, eps_supp))
    throw Error(ErrorCode::NumericalFailure, "failed to reach a basic solution on the optimal face");

  LpSolution out = sol;
  out.primal = x;
  out.objective = 0.0;
  out.row_activity.assign(spec.rows.size(), 0.0);
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    out.objective += spec.cols[j].objective * x[j];
    for (const LpEntry& e : spec.cols[j].entries) out.row_activity[e.row] += e.coef * x[j];
  }
  return out;
}

}  // namespace exante
