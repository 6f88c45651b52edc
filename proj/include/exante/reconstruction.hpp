#pragma once

#include <map>
#include <string>
#include <vector>

#include "exante/lp_oracle.hpp"
#include "exante/sequence.hpp"

namespace exante {

// Sparse distribution over reduced plans.
struct MixedStrategy {
  std::vector<Plan> plans;
  std::vector<double> probs;

  int support_size() const { return static_cast<int>(plans.size()); }
};

template <typename T>
struct PricedPlan {
  Plan plan;
  T value;
};

// Backward-induction minimizer of sum_{q in xi(plan)} alpha(q): at each
// infoset pick the sequence minimizing its own price plus the value of the
// infosets it opens, then assemble the reduced plan top-down. Ties go to the
// lowest sequence index so generated columns are reproducible.
template <typename T>
PricedPlan<T> separation_oracle_A(const SequenceIndex& idx, const std::vector<T>& alpha) {
  if (static_cast<int>(alpha.size()) != idx.num_seqs())
    throw Error(ErrorCode::MalformedTree, "alpha must have one entry per sequence");
  const int n = idx.num_infosets();
  std::vector<T> w(n, T(0));
  std::vector<int> best(n, -1);
  for (int I = n - 1; I >= 0; --I) {  // children carry higher indices than parents
    for (size_t k = 0; k < idx.infoset_seqs[I].size(); ++k) {
      int q = idx.infoset_seqs[I][k];
      T val = alpha[q];
      for (int child : idx.seq_children[q]) val += w[child];
      if (best[I] < 0 || val < w[I]) {
        w[I] = val;
        best[I] = static_cast<int>(k);
      }
    }
  }
  PricedPlan<T> out;
  out.value = alpha[0];
  out.plan.choice.assign(n, -1);
  std::vector<int> frontier = idx.root_infosets();
  for (size_t f = 0; f < frontier.size(); ++f) {
    int I = frontier[f];
    out.plan.choice[I] = best[I];
    int q = idx.infoset_seqs[I][best[I]];
    for (int child : idx.seq_children[q]) frontier.push_back(child);
  }
  for (int I : idx.root_infosets()) out.value += w[I];
  return out;
}

struct ReconstructionResult {
  MixedStrategy mixed;
  std::vector<double> realization;  // the target r*
  LpSolution lp;                    // the basic optimum of the support LP
};

// Small-support mixed strategy realization-equivalent to a behavioral
// strategy: column generation on max 1'x s.t. Mx <= r*, followed by a basic
// solution extraction, followed by a hard residual check of Mx = r*.
inline ReconstructionResult reconstruct_mixed(const SequenceIndex& idx,
                                              const std::vector<std::vector<double>>& pi,
                                              SolveMode mode = SolveMode::CuttingPlane,
                                              const LpConfig& cfg = {}) {
  std::vector<double> target = behavioral_to_realization<double>(idx, pi);

  LpSpec master;
  for (int q = 0; q < idx.num_seqs(); ++q)
    master.add_row(idx.seq_names[q], RowSense::LessEq, target[q]);

  // Column ids encode the plan itself, so the same plan found twice (which
  // the ellipsoid phase can do) maps onto the same column.
  std::map<std::string, Plan> registry;
  auto plan_id = [](const Plan& plan) {
    std::string id = "plan";
    for (int c : plan.choice) id += "." + std::to_string(c);
    return id;
  };
  auto plan_column = [&](const Plan& plan) {
    LpColumn c;
    c.name = plan_id(plan);
    c.objective = 1.0;
    for (int q : xi(idx, plan)) c.entries.push_back({q, 1.0});
    registry.emplace(c.name, plan);
    return c;
  };

  {
    // warm start: the all-first-action reduced plan
    Plan first;
    first.choice.assign(idx.num_infosets(), -1);
    std::vector<int> frontier = idx.root_infosets();
    for (size_t f = 0; f < frontier.size(); ++f) {
      int I = frontier[f];
      first.choice[I] = 0;
      for (int child : idx.seq_children[idx.infoset_seqs[I][0]]) frontier.push_back(child);
    }
    master.add_col(plan_column(first));
  }

  ColumnOracle oracle = [&](const std::vector<double>& duals) -> std::optional<GeneratedColumn> {
    PricedPlan<double> cheapest = separation_oracle_A<double>(idx, duals);
    double violation = 1.0 - cheapest.value;
    if (violation <= cfg.oracle_stop) return std::nullopt;
    LpColumn c = plan_column(cheapest.plan);
    return GeneratedColumn{c.name, std::move(c), violation};
  };

  LpSpec final_master;
  LpSolution sol = solve_with_oracle(master, oracle, mode, cfg, &final_master);
  if (sol.status != LpStatus::Optimal)
    throw Error(ErrorCode::ReconstructionResidual,
                "support LP did not reach an optimum: " + std::string(lp_status_name(sol.status)));
  LpSolution basic = extract_basic(final_master, sol, cfg);

  ReconstructionResult out;
  out.realization = target;
  out.lp = basic;
  std::vector<double> residual(idx.num_seqs(), 0.0);
  for (size_t j = 0; j < final_master.cols.size(); ++j) {
    double x = basic.primal[j];
    if (x <= 1e-11) continue;
    out.mixed.plans.push_back(registry.at(final_master.cols[j].name));
    out.mixed.probs.push_back(x);
    for (const LpEntry& e : final_master.cols[j].entries) residual[e.row] += x;
  }
  for (int q = 0; q < idx.num_seqs(); ++q)
    if (std::abs(residual[q] - target[q]) > 1e-8)
      throw Error(ErrorCode::ReconstructionResidual,
                  "sequence '" + idx.seq_names[q] + "' reproduces " + std::to_string(residual[q]) +
                      " instead of " + std::to_string(target[q]));
  if (out.mixed.support_size() > idx.num_seqs())
    throw Error(ErrorCode::ReconstructionResidual, "support exceeds the sequence count");
  return out;
}

inline ReconstructionResult reconstruct_mixed(const ValidatedGame& g, PlayerId player,
                                              const std::vector<std::vector<double>>& pi,
                                              SolveMode mode = SolveMode::CuttingPlane,
                                              const LpConfig& cfg = {}) {
  SequenceIndex idx = build_sequences(g, player);
  return reconstruct_mixed(idx, pi, mode, cfg);
}

}  // namespace exante
