#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "exante/reconstruction.hpp"
#include "exante/sequence.hpp"

namespace exante {

// One terminal of the auxiliary game, keyed by the last sequence each party
// holds when it is reached. Payoffs are constants: the types on the path are
// part of the tree.
struct AuxTerminal {
  int node = -1;
  int q_recv[2] = {0, 0};
  int q_nature = 0;
  double pay_sender = 0.0;
  double pay_recv[2] = {0.0, 0.0};
};

// The auxiliary game: the original receivers' tree with a Nature decision
// node spliced in directly after every typed action, drawing that action's
// type. Receivers keep their information structure; Nature has singleton
// infosets and the marginals as its behavioral strategy.
struct AuxiliaryGame {
  ValidatedGame hat;                       // tree including Nature (player 0) nodes
  int num_receivers = 0;
  SequenceIndex recv[2];                   // receiver 2 degenerates to the empty index
  SequenceIndex nature;
  std::vector<std::vector<double>> nature_pi;
  std::vector<std::vector<Rational>> nature_pi_exact;
  std::vector<int> nature_infoset_action;  // nature local infoset -> original action index
  std::vector<AuxTerminal> terminals;
};

inline AuxiliaryGame build_auxiliary(const ValidatedGame& g) {
  if (g.num_receivers > 2)
    throw Error(ErrorCode::TooManyReceivers, "auxiliary construction needs at most two receivers");

  AuxiliaryGame aux;
  aux.num_receivers = g.num_receivers;
  ValidatedGame& hat = aux.hat;
  hat.num_receivers = g.num_receivers;
  hat.actions = g.actions;  // receiver actions keep their names and annotations
  for (const auto& [name, idx] : g.action_by_name_) hat.action_by_name_[name] = idx;
  hat.infosets = g.infosets;
  for (const auto& [name, idx] : g.infoset_by_name_) hat.infoset_by_name_[name] = idx;

  int nature_counter = 0;
  std::map<int, int> action_of_nature_infoset;  // hat infoset index -> original action
  // returns the index of the copied subtree root inside hat.nodes
  std::function<int(int, std::vector<std::pair<int, int>>&)> copy =
      [&](int node_idx, std::vector<std::pair<int, int>>& resolved_types) -> int {
    const GameNode& n = g.nodes[node_idx];
    if (n.kind == GameNode::kTerminal) {
      GameNode t;
      t.kind = GameNode::kTerminal;
      // the path fixed every on-path type, so the payoff row collapses
      std::vector<int> combo_types;
      for (int a : n.path_typed_actions) {
        int type = -1;
        for (const auto& [act, ty] : resolved_types)
          if (act == a) type = ty;
        if (type < 0) throw Error(ErrorCode::MalformedTree, "unresolved type on a path");
        combo_types.push_back(type);
      }
      int combo = g.payoff_combo(n, combo_types);
      t.pay_sender = {n.pay_sender[combo]};
      for (int r = 0; r < g.num_receivers; ++r) t.pay_receiver.push_back({n.pay_receiver[r][combo]});
      hat.nodes.push_back(std::move(t));
      return static_cast<int>(hat.nodes.size()) - 1;
    }

    GameNode d;
    d.kind = GameNode::kDecision;
    d.infoset = n.infoset;
    const InfosetDef& def = g.infosets[n.infoset];
    for (size_t k = 0; k < n.children.size(); ++k) {
      int action = def.actions[k];
      const ActionDef& act = g.actions[action];
      if (!act.typed()) {
        d.children.push_back(copy(n.children[k], resolved_types));
        continue;
      }
      // singleton Nature infoset drawing this action's type
      std::string iname = "nature." + std::to_string(nature_counter++) + "." + act.name;
      InfosetDef ninf;
      ninf.name = iname;
      ninf.player = kNature;
      GameNode nn;
      nn.kind = GameNode::kDecision;
      for (int t = 0; t < act.num_types(); ++t) {
        std::string aname = iname + "=" + act.type_names[t];
        ActionDef nact;
        nact.name = aname;
        hat.actions.push_back(nact);
        int aidx = static_cast<int>(hat.actions.size()) - 1;
        hat.action_by_name_[aname] = aidx;
        ninf.actions.push_back(aidx);
        resolved_types.push_back({action, t});
        nn.children.push_back(copy(n.children[k], resolved_types));
        resolved_types.pop_back();
      }
      hat.infosets.push_back(std::move(ninf));
      int iidx = static_cast<int>(hat.infosets.size()) - 1;
      hat.infoset_by_name_[iname] = iidx;
      action_of_nature_infoset[iidx] = action;
      nn.infoset = iidx;
      hat.nodes.push_back(std::move(nn));
      d.children.push_back(static_cast<int>(hat.nodes.size()) - 1);
    }
    hat.nodes.push_back(std::move(d));
    return static_cast<int>(hat.nodes.size()) - 1;
  };
  std::vector<std::pair<int, int>> resolved;
  hat.root = copy(g.root, resolved);

  for (int r = 0; r < 2; ++r)
    aux.recv[r] = r < g.num_receivers ? build_sequences(hat, r + 1)
                                      : build_sequences(hat, 2);  // empty index
  aux.nature = build_sequences(hat, kNature);

  aux.nature_pi.resize(aux.nature.num_infosets());
  aux.nature_pi_exact.resize(aux.nature.num_infosets());
  aux.nature_infoset_action.assign(aux.nature.num_infosets(), -1);
  for (int I = 0; I < aux.nature.num_infosets(); ++I) {
    int action = action_of_nature_infoset.at(aux.nature.infoset_global[I]);
    aux.nature_infoset_action[I] = action;
    for (const Rational& p : g.actions[action].type_probs) {
      aux.nature_pi_exact[I].push_back(p);
      aux.nature_pi[I].push_back(p.to_double());
    }
  }

  // terminal registry with last sequences per party
  std::function<void(int, int, int, int)> walk = [&](int node_idx, int q1, int q2, int qn) {
    const GameNode& n = hat.nodes[node_idx];
    if (n.kind == GameNode::kTerminal) {
      AuxTerminal t;
      t.node = node_idx;
      t.q_recv[0] = q1;
      t.q_recv[1] = q2;
      t.q_nature = qn;
      t.pay_sender = n.pay_sender[0];
      t.pay_recv[0] = g.num_receivers >= 1 ? n.pay_receiver[0][0] : 0.0;
      t.pay_recv[1] = g.num_receivers >= 2 ? n.pay_receiver[1][0] : 0.0;
      aux.terminals.push_back(t);
      return;
    }
    const InfosetDef& def = hat.infosets[n.infoset];
    const SequenceIndex& idx = def.player == kNature ? aux.nature : aux.recv[def.player - 1];
    int local = -1;
    for (int I = 0; I < idx.num_infosets(); ++I)
      if (idx.infoset_global[I] == n.infoset) local = I;
    for (size_t k = 0; k < n.children.size(); ++k) {
      int q = idx.infoset_seqs[local][k];
      walk(n.children[k], def.player == 1 ? q : q1, def.player == 2 ? q : q2,
           def.player == kNature ? q : qn);
    }
  };
  walk(hat.root, 0, 0, 0);
  return aux;
}

// ---------------------------------------------------------------------------
// Nature prior
// ---------------------------------------------------------------------------

// Small-support mixed strategy for Nature, realization-equivalent to the
// marginals. The support is the image of the full type profiles under
// "assign the profile's type at every reachable Nature infoset", so the
// masses are plain products of marginals and the distribution never invents
// correlation across parallel branches; that keeps the pinned-marginal
// equilibrium LP equal to the full-prior optimum.
struct NaturePrior {
  std::vector<Plan> support;
  std::vector<double> mu;
  std::vector<Rational> mu_exact;
  std::vector<std::string> names;
  std::vector<std::map<int, int>> assignment;  // original action index -> type index
};

inline NaturePrior nature_prior(const AuxiliaryGame& aux, long long max_states = 65536) {
  NaturePrior prior;
  const SequenceIndex& nat = aux.nature;
  const ValidatedGame& hat = aux.hat;

  Plan plan;
  plan.choice.assign(nat.num_infosets(), -1);
  std::map<int, int> assigned;

  std::function<void(std::set<int>&, Rational)> rec = [&](std::set<int>& frontier, Rational p) {
    if (frontier.empty()) {
      if (static_cast<long long>(prior.support.size()) >= max_states)
        throw Error(ErrorCode::StateExplosion, "nature prior support exceeds the state cap");
      prior.support.push_back(plan);
      prior.mu_exact.push_back(p);
      prior.mu.push_back(p.to_double());
      prior.assignment.push_back(assigned);
      std::string name;
      for (const auto& [action, type] : assigned) {
        if (!name.empty()) name += ",";
        name += hat.actions[action].name + "=" + hat.actions[action].type_names[type];
      }
      prior.names.push_back(name.empty() ? "-" : name);
      return;
    }
    int I = *frontier.begin();
    frontier.erase(frontier.begin());
    int action = aux.nature_infoset_action[I];
    auto descend = [&](int type, Rational factor) {
      plan.choice[I] = type;
      int q = nat.infoset_seqs[I][type];
      std::vector<int> added;
      for (int child : nat.seq_children[q])
        if (frontier.insert(child).second) added.push_back(child);
      rec(frontier, p * factor);
      for (int child : added) frontier.erase(child);
      plan.choice[I] = -1;
    };
    auto it = assigned.find(action);
    if (it != assigned.end()) {
      descend(it->second, Rational(1));
    } else {
      for (int t = 0; t < static_cast<int>(nat.infoset_seqs[I].size()); ++t) {
        assigned[action] = t;
        descend(t, aux.nature_pi_exact[I][t]);
        assigned.erase(action);
      }
    }
    frontier.insert(I);
  };
  std::set<int> frontier(nat.root_infosets().begin(), nat.root_infosets().end());
  rec(frontier, Rational(1));
  return prior;
}

// The unique support element whose per-action assignment the full type
// profile extends; `state` maps original action index -> type index.
inline int prior_index_of_profile(const NaturePrior& prior, const std::map<int, int>& state) {
  for (size_t k = 0; k < prior.support.size(); ++k) {
    bool ok = true;
    for (const auto& [action, type] : prior.assignment[k]) {
      auto it = state.find(action);
      ok = ok && it != state.end() && it->second == type;
    }
    if (ok) return static_cast<int>(k);
  }
  throw Error(ErrorCode::MalformedTree, "type profile matches no prior element");
}

// ---------------------------------------------------------------------------
// Utility tensors: per prior element, the terminals consistent with it,
// keyed by the receivers' last sequences.
// ---------------------------------------------------------------------------

struct TensorEntry {
  int q1 = 0, q2 = 0;
  double u_sender = 0.0;
  double u_recv[2] = {0.0, 0.0};
};

struct UtilityTensors {
  std::vector<std::vector<TensorEntry>> slice;  // per theta
};

inline UtilityTensors utility_tensors(const AuxiliaryGame& aux, const NaturePrior& prior) {
  UtilityTensors tensors;
  tensors.slice.resize(prior.support.size());
  for (size_t k = 0; k < prior.support.size(); ++k) {
    std::vector<char> in_xi(aux.nature.num_seqs(), 0);
    for (int q : xi(aux.nature, prior.support[k])) in_xi[q] = 1;
    for (const AuxTerminal& t : aux.terminals) {
      if (!in_xi[t.q_nature]) continue;
      TensorEntry e;
      e.q1 = t.q_recv[0];
      e.q2 = t.q_recv[1];
      e.u_sender = t.pay_sender;
      e.u_recv[0] = t.pay_recv[0];
      e.u_recv[1] = t.pay_recv[1];
      tensors.slice[k].push_back(e);
    }
  }
  return tensors;
}

// Terminal reached when theta and the receivers' plans are played jointly.
inline const AuxTerminal& reached_terminal(const AuxiliaryGame& aux, const Plan& theta,
                                           const Plan& sigma1, const Plan& sigma2) {
  std::vector<char> xi_n(aux.nature.num_seqs(), 0), xi_1(aux.recv[0].num_seqs(), 0),
      xi_2(aux.recv[1].num_seqs(), 0);
  for (int q : xi(aux.nature, theta)) xi_n[q] = 1;
  for (int q : xi(aux.recv[0], sigma1)) xi_1[q] = 1;
  for (int q : xi(aux.recv[1], sigma2)) xi_2[q] = 1;
  for (const AuxTerminal& t : aux.terminals)
    if (xi_n[t.q_nature] && xi_1[t.q_recv[0]] && xi_2[t.q_recv[1]]) return t;
  throw Error(ErrorCode::InfeasiblePath, "no terminal consistent with the joint plan");
}

}  // namespace exante
