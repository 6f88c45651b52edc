#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "exante/errors.hpp"
#include "exante/game.hpp"

namespace exante {

inline bool detail_sum_is_one(const Rational& s) { return s == Rational(1); }
inline bool detail_sum_is_one(double s) { return std::abs(s - 1.0) <= 1e-9; }

// Sequence-form view of one player of a validated game. Sequence 0 is the
// empty sequence; the others are created infoset by infoset in depth-first
// order from the root, which fixes a stable column order for the LPs.
struct SequenceIndex {
  PlayerId player = 0;
  std::vector<int> infoset_global;             // local infoset -> game infoset index
  std::vector<int> infoset_parent_seq;         // local infoset -> parent sequence
  std::vector<std::vector<int>> infoset_seqs;  // Q(I), in action order
  std::vector<int> seq_infoset;                // last infoset of a sequence, -1 for the empty one
  std::vector<int> seq_action;                 // action position within that infoset
  std::vector<std::vector<int>> seq_children;  // infosets immediately after a sequence
  std::vector<std::string> seq_names;

  int num_seqs() const { return static_cast<int>(seq_infoset.size()); }
  int num_infosets() const { return static_cast<int>(infoset_global.size()); }
  const std::vector<int>& root_infosets() const { return seq_children[0]; }
};

inline SequenceIndex build_sequences(const ValidatedGame& g, PlayerId player) {
  if (!(player == kNature || g.has_player(player))) {
    bool present = false;
    for (const auto& I : g.infosets) present = present || I.player == player;
    if (!present && player != 2)  // an absent second receiver is a legal degenerate case
      throw Error(ErrorCode::MalformedTree, "unknown player " + std::to_string(player));
  }
  SequenceIndex idx;
  idx.player = player;
  idx.seq_infoset.push_back(-1);
  idx.seq_action.push_back(-1);
  idx.seq_children.emplace_back();
  idx.seq_names.push_back("-");

  std::vector<int> local_of(g.infosets.size(), -1);

  std::function<void(int, int)> walk = [&](int node_idx, int cur_seq) {
    const GameNode& n = g.nodes[node_idx];
    if (n.kind == GameNode::kTerminal) return;
    const InfosetDef& I = g.infosets[n.infoset];
    if (I.player != player) {
      for (int c : n.children) walk(c, cur_seq);
      return;
    }
    int local = local_of[n.infoset];
    if (local < 0) {
      local = idx.num_infosets();
      local_of[n.infoset] = local;
      idx.infoset_global.push_back(n.infoset);
      idx.infoset_parent_seq.push_back(cur_seq);
      idx.seq_children[cur_seq].push_back(local);
      idx.infoset_seqs.emplace_back();
      for (int a : I.actions) {
        int q = idx.num_seqs();
        idx.infoset_seqs[local].push_back(q);
        idx.seq_infoset.push_back(local);
        idx.seq_action.push_back(static_cast<int>(idx.infoset_seqs[local].size()) - 1);
        idx.seq_children.emplace_back();
        std::string prefix = cur_seq == 0 ? "" : idx.seq_names[cur_seq] + ".";
        idx.seq_names.push_back(prefix + g.actions[a].name);
      }
    } else if (idx.infoset_parent_seq[local] != cur_seq) {
      throw Error(ErrorCode::PerfectRecallViolation,
                  "infoset '" + I.name + "' reached under two different own sequences");
    }
    for (size_t k = 0; k < n.children.size(); ++k)
      walk(n.children[k], idx.infoset_seqs[local][k]);
  };
  walk(g.root, 0);
  return idx;
}

// A reduced plan: an action choice exactly at the infosets reachable under
// the plan's own earlier choices, -1 elsewhere.
struct Plan {
  std::vector<int> choice;

  bool operator==(const Plan& o) const { return choice == o.choice; }
  bool operator<(const Plan& o) const { return choice < o.choice; }
};

inline std::string plan_name(const SequenceIndex& idx, const ValidatedGame& g, const Plan& plan) {
  std::string out;
  for (int I = 0; I < idx.num_infosets(); ++I) {
    if (plan.choice[I] < 0) continue;
    const InfosetDef& def = g.infosets[idx.infoset_global[I]];
    if (!out.empty()) out += ";";
    out += def.name + "=" + g.actions[def.actions[plan.choice[I]]].name;
  }
  return out.empty() ? "-" : out;
}

// ξ(σ): the sequences a plan selects with probability one (always includes
// the empty sequence).
inline std::vector<int> xi(const SequenceIndex& idx, const Plan& plan) {
  std::vector<int> out{0};
  for (int I = 0; I < idx.num_infosets(); ++I)
    if (plan.choice[I] >= 0) out.push_back(idx.infoset_seqs[I][plan.choice[I]]);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool plan_is_reduced(const SequenceIndex& idx, const Plan& plan) {
  if (static_cast<int>(plan.choice.size()) != idx.num_infosets()) return false;
  std::vector<bool> reachable(idx.num_infosets(), false);
  std::function<bool(int)> visit = [&](int I) -> bool {
    reachable[I] = true;
    if (plan.choice[I] < 0 || plan.choice[I] >= static_cast<int>(idx.infoset_seqs[I].size())) return false;
    int q = idx.infoset_seqs[I][plan.choice[I]];
    for (int child : idx.seq_children[q])
      if (!visit(child)) return false;
    return true;
  };
  for (int I : idx.root_infosets())
    if (!visit(I)) return false;
  for (int I = 0; I < idx.num_infosets(); ++I)
    if (!reachable[I] && plan.choice[I] >= 0) return false;
  return true;
}

inline BigInt count_plans(const SequenceIndex& idx) {
  std::vector<BigInt> memo(idx.num_infosets(), BigInt(-1));
  std::function<BigInt(int)> cnt = [&](int I) -> BigInt {
    if (memo[I] >= 0) return memo[I];
    BigInt total = 0;
    for (int q : idx.infoset_seqs[I]) {
      BigInt prod = 1;
      for (int child : idx.seq_children[q]) prod *= cnt(child);
      total += prod;
    }
    return memo[I] = total;
  };
  BigInt total = 1;
  for (int I : idx.root_infosets()) total *= cnt(I);
  return total;
}

inline std::vector<Plan> enumerate_plans(const SequenceIndex& idx, long long cap = 1000000) {
  if (count_plans(idx) > cap)
    throw Error(ErrorCode::PlanExplosion,
                "player has more than " + std::to_string(cap) + " reduced plans");

  // Fragments below one infoset, then cartesian products across sibling forests.
  std::function<std::vector<Plan>(const std::vector<int>&)> forest;
  std::function<std::vector<Plan>(int)> tree = [&](int I) {
    std::vector<Plan> out;
    for (size_t a = 0; a < idx.infoset_seqs[I].size(); ++a) {
      int q = idx.infoset_seqs[I][a];
      for (Plan& p : forest(idx.seq_children[q])) {
        p.choice[I] = static_cast<int>(a);
        out.push_back(std::move(p));
      }
    }
    return out;
  };
  forest = [&](const std::vector<int>& roots) {
    std::vector<Plan> acc{Plan{std::vector<int>(idx.num_infosets(), -1)}};
    for (int I : roots) {
      std::vector<Plan> sub = tree(I);
      std::vector<Plan> next;
      next.reserve(acc.size() * sub.size());
      for (const Plan& base : acc)
        for (const Plan& ext : sub) {
          Plan merged = base;
          for (int k = 0; k < idx.num_infosets(); ++k)
            if (ext.choice[k] >= 0) merged.choice[k] = ext.choice[k];
          next.push_back(std::move(merged));
        }
      acc = std::move(next);
    }
    return acc;
  };
  return forest(idx.root_infosets());
}

// Behavioral strategy: one distribution over actions per local infoset.
// Works in double for the solver path and in Rational for exact checks.
template <typename T>
std::vector<T> behavioral_to_realization(const SequenceIndex& idx,
                                         const std::vector<std::vector<T>>& pi) {
  if (static_cast<int>(pi.size()) != idx.num_infosets())
    throw Error(ErrorCode::DistributionSum, "behavioral strategy size mismatch");
  for (int I = 0; I < idx.num_infosets(); ++I) {
    if (pi[I].size() != idx.infoset_seqs[I].size())
      throw Error(ErrorCode::DistributionSum, "behavioral strategy arity mismatch at infoset " + std::to_string(I));
    T sum = T(0);
    bool nonneg = true;
    for (const T& p : pi[I]) {
      sum += p;
      if (p < T(0)) nonneg = false;
    }
    if (!nonneg || !detail_sum_is_one(sum))
      throw Error(ErrorCode::DistributionSum, "behavioral distribution at infoset " + std::to_string(I) +
                                                  " is not a probability distribution");
  }
  std::vector<T> r(idx.num_seqs(), T(0));
  r[0] = T(1);
  for (int I = 0; I < idx.num_infosets(); ++I) {
    const T& base = r[idx.infoset_parent_seq[I]];
    for (size_t a = 0; a < idx.infoset_seqs[I].size(); ++a) r[idx.infoset_seqs[I][a]] = base * pi[I][a];
  }
  return r;
}

}  // namespace exante
