#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "exante/errors.hpp"
#include "exante/rational.hpp"

namespace exante {

using PlayerId = int;
inline constexpr PlayerId kNature = 0;  // only present in the auxiliary game

// ---------------------------------------------------------------------------
// Raw (unvalidated) game, mirroring the file format: a tree of decision and
// terminal nodes, actions optionally typed with a marginal distribution.
// ---------------------------------------------------------------------------

struct RawTerminalRow {
  std::map<std::string, std::string> when;  // typed action name -> type name
  double sender = 0.0;
  std::vector<double> receivers;
};

struct RawAction {
  std::string name;
  // empty = untyped action
  std::vector<std::pair<std::string, Rational>> types;
  int child = -1;  // node index
};

struct RawNode {
  bool terminal = false;
  PlayerId player = 0;
  std::string infoset;
  std::vector<RawAction> actions;       // decision nodes
  std::vector<RawTerminalRow> payoffs;  // terminal nodes
};

struct RawGame {
  std::vector<PlayerId> receivers;  // {1} or {1,2}
  std::vector<RawNode> nodes;
  int root = -1;

  int add_terminal(std::vector<RawTerminalRow> rows) {
    RawNode n;
    n.terminal = true;
    n.payoffs = std::move(rows);
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_decision(PlayerId player, std::string infoset, std::vector<RawAction> actions) {
    RawNode n;
    n.player = player;
    n.infoset = std::move(infoset);
    n.actions = std::move(actions);
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }
};

// Convenience for terminals whose payoff does not depend on any type.
inline RawTerminalRow flat_row(double sender, std::vector<double> receivers) {
  RawTerminalRow r;
  r.sender = sender;
  r.receivers = std::move(receivers);
  return r;
}

// ---------------------------------------------------------------------------
// Validated game
// ---------------------------------------------------------------------------

struct ActionDef {
  std::string name;
  std::vector<std::string> type_names;  // empty = untyped
  std::vector<Rational> type_probs;
  bool typed() const { return !type_names.empty(); }
  int num_types() const { return typed() ? static_cast<int>(type_names.size()) : 1; }
};

struct InfosetDef {
  std::string name;
  PlayerId player = 0;
  std::vector<int> actions;  // indices into ValidatedGame::actions
};

struct GameNode {
  enum Kind { kDecision, kTerminal };
  Kind kind = kTerminal;
  int infoset = -1;             // kDecision
  std::vector<int> children;    // kDecision, aligned with the infoset's actions
  // kTerminal: payoff arrays in mixed-radix order over the types of the typed
  // actions on the root->terminal path (path order, row-major).
  std::vector<int> path_typed_actions;
  std::vector<double> pay_sender;
  std::vector<std::vector<double>> pay_receiver;  // [receiver-1][combo]
};

struct Violation {
  ErrorCode code;
  std::string where;  // node / infoset / action the problem was found at
  std::string message;
};

class ValidatedGame {
 public:
  int num_receivers = 0;  // 1 or 2
  std::vector<ActionDef> actions;
  std::vector<InfosetDef> infosets;
  std::vector<GameNode> nodes;
  int root = -1;

  const GameNode& node(int i) const { return nodes[i]; }
  bool has_player(PlayerId p) const { return p >= 1 && p <= num_receivers; }

  int action_index(const std::string& name) const {
    auto it = action_by_name_.find(name);
    return it == action_by_name_.end() ? -1 : it->second;
  }
  int infoset_index(const std::string& name) const {
    auto it = infoset_by_name_.find(name);
    return it == infoset_by_name_.end() ? -1 : it->second;
  }

  int type_index(int action, const std::string& type_name) const {
    const auto& tn = actions[action].type_names;
    auto it = std::find(tn.begin(), tn.end(), type_name);
    return it == tn.end() ? -1 : static_cast<int>(it - tn.begin());
  }

  // Payoff lookup for a terminal given the realized type (index) of every
  // typed action on its path, in path order.
  int payoff_combo(const GameNode& t, const std::vector<int>& path_types) const {
    int combo = 0;
    for (size_t k = 0; k < t.path_typed_actions.size(); ++k)
      combo = combo * actions[t.path_typed_actions[k]].num_types() + path_types[k];
    return combo;
  }

  std::vector<int> typed_action_list() const {
    std::vector<int> out;
    for (int a = 0; a < static_cast<int>(actions.size()); ++a)
      if (actions[a].typed()) out.push_back(a);
    return out;
  }

  std::map<std::string, int> action_by_name_;
  std::map<std::string, int> infoset_by_name_;
};

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

namespace detail {

struct ValidateCtx {
  const RawGame& raw;
  ValidatedGame out;
  std::vector<Violation>& violations;
  // per infoset: the player's own action history (perfect recall witness)
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> recall;
  std::vector<bool> visited;

  void fail(ErrorCode code, const std::string& where, const std::string& msg) {
    violations.push_back({code, where, msg});
  }

  int intern_action(const RawAction& a, const std::string& where) {
    int idx = out.action_index(a.name);
    if (idx < 0) {
      ActionDef def;
      def.name = a.name;
      Rational sum(0);
      for (const auto& [tname, tprob] : a.types) {
        def.type_names.push_back(tname);
        def.type_probs.push_back(tprob);
        if (tprob.sign() <= 0)
          fail(ErrorCode::ProbabilitySum, where,
               "type '" + tname + "' of action '" + a.name + "' has non-positive probability " + tprob.str());
        sum += tprob;
      }
      if (!a.types.empty() && sum != Rational(1))
        fail(ErrorCode::ProbabilitySum, where,
             "marginal of action '" + a.name + "' sums to " + sum.str() + ", expected 1");
      out.actions.push_back(std::move(def));
      idx = static_cast<int>(out.actions.size()) - 1;
      out.action_by_name_[a.name] = idx;
      return idx;
    }
    // Re-occurrence: the type annotation must match the registered one.
    const ActionDef& def = out.actions[idx];
    bool same = def.type_names.size() == a.types.size();
    for (size_t k = 0; same && k < a.types.size(); ++k)
      same = def.type_names[k] == a.types[k].first && def.type_probs[k] == a.types[k].second;
    if (!same)
      fail(ErrorCode::InfosetMismatch, where,
           "action '" + a.name + "' re-declared with a different type annotation");
    return idx;
  }

  // own_hist: per player, the (infoset, action) pairs already taken on this path.
  void walk(int node_idx, std::map<PlayerId, std::vector<std::pair<std::string, std::string>>>& own_hist,
            std::set<std::string>& typed_on_path, std::vector<int>& path_typed,
            const std::string& path) {
    if (node_idx < 0 || node_idx >= static_cast<int>(raw.nodes.size())) {
      fail(ErrorCode::MalformedTree, path, "child index out of range");
      return;
    }
    if (visited[node_idx]) {
      fail(ErrorCode::MalformedTree, path, "node reached twice; the game must be a tree");
      return;
    }
    visited[node_idx] = true;
    const RawNode& n = raw.nodes[node_idx];

    if (n.terminal) {
      check_terminal(n, path_typed, path);
      return;
    }

    if (std::find(raw.receivers.begin(), raw.receivers.end(), n.player) == raw.receivers.end()) {
      fail(ErrorCode::MalformedTree, path, "decision node names player " + std::to_string(n.player) +
                                               " which is not a declared receiver");
      return;
    }
    if (n.actions.empty()) {
      fail(ErrorCode::MalformedTree, path, "decision node with no actions");
      return;
    }
    {
      std::set<std::string> seen;
      for (const auto& a : n.actions)
        if (!seen.insert(a.name).second)
          fail(ErrorCode::MalformedTree, path, "duplicate action '" + a.name + "' at one node");
    }

    // Infoset bookkeeping: same player, same action list, same recall history.
    int is_idx = out.infoset_index(n.infoset);
    if (is_idx < 0) {
      InfosetDef def;
      def.name = n.infoset;
      def.player = n.player;
      for (const auto& a : n.actions) def.actions.push_back(intern_action(a, path));
      out.infosets.push_back(std::move(def));
      is_idx = static_cast<int>(out.infosets.size()) - 1;
      out.infoset_by_name_[n.infoset] = is_idx;
      recall[n.infoset] = own_hist[n.player];
    } else {
      const InfosetDef& def = out.infosets[is_idx];
      if (def.player != n.player)
        fail(ErrorCode::InfosetMismatch, path,
             "infoset '" + n.infoset + "' used by players " + std::to_string(def.player) + " and " +
                 std::to_string(n.player));
      bool same = def.actions.size() == n.actions.size();
      for (size_t k = 0; same && k < n.actions.size(); ++k)
        same = out.actions[def.actions[k]].name == n.actions[k].name;
      if (!same) {
        fail(ErrorCode::InfosetMismatch, path,
             "infoset '" + n.infoset + "' has differing action lists across nodes");
      } else {
        for (const auto& a : n.actions) intern_action(a, path);
      }
      if (recall[n.infoset] != own_hist[n.player])
        fail(ErrorCode::PerfectRecallViolation, path,
             "infoset '" + n.infoset + "' reached with two different own histories");
    }

    for (const auto& a : n.actions) {
      bool typed = !a.types.empty();
      if (typed && typed_on_path.count(a.name)) {
        fail(ErrorCode::MalformedTree, path,
             "typed action '" + a.name + "' occurs twice on one path; its type would be ambiguous");
        continue;
      }
      own_hist[n.player].push_back({n.infoset, a.name});
      if (typed) {
        typed_on_path.insert(a.name);
        path_typed.push_back(out.action_index(a.name));
      }
      walk(a.child, own_hist, typed_on_path, path_typed, path + "/" + a.name);
      own_hist[n.player].pop_back();
      if (typed) {
        typed_on_path.erase(a.name);
        path_typed.pop_back();
      }
    }
  }

  void check_terminal(const RawNode& n, const std::vector<int>& path_typed, const std::string& path) {
    size_t num_recv = raw.receivers.size();
    long long combos = 1;
    for (int a : path_typed) combos *= out.actions[a].num_types();
    std::vector<bool> covered(combos, false);
    for (const auto& row : n.payoffs) {
      if (row.receivers.size() != num_recv) {
        fail(ErrorCode::MalformedTree, path,
             "payoff row lists " + std::to_string(row.receivers.size()) + " receiver utilities, expected " +
                 std::to_string(num_recv));
        continue;
      }
      std::vector<int> combo_types;
      bool ok = true;
      std::set<std::string> keys;
      for (const auto& [aname, tname] : row.when) keys.insert(aname);
      for (int a : path_typed) {
        const std::string& aname = out.actions[a].name;
        auto it = row.when.find(aname);
        if (it == row.when.end()) {
          fail(ErrorCode::MalformedTree, path, "payoff row misses typed on-path action '" + aname + "'");
          ok = false;
          break;
        }
        keys.erase(aname);
        int t = out.type_index(a, it->second);
        if (t < 0) {
          fail(ErrorCode::MalformedTree, path,
               "payoff row names unknown type '" + it->second + "' for action '" + aname + "'");
          ok = false;
          break;
        }
        combo_types.push_back(t);
      }
      if (!ok) continue;
      if (!keys.empty()) {
        fail(ErrorCode::MalformedTree, path,
             "payoff row keys off-path or untyped action '" + *keys.begin() + "'");
        continue;
      }
      int combo = 0;
      for (size_t k = 0; k < path_typed.size(); ++k)
        combo = combo * out.actions[path_typed[k]].num_types() + combo_types[k];
      if (covered[combo]) {
        fail(ErrorCode::MalformedTree, path, "duplicate payoff row");
        continue;
      }
      covered[combo] = true;
    }
    for (long long c = 0; c < combos; ++c)
      if (!covered[c]) {
        fail(ErrorCode::MalformedTree, path, "payoff table incomplete: missing a type combination");
        break;
      }
  }
};

}  // namespace detail

inline std::vector<Violation> validate_collect(const RawGame& raw, ValidatedGame* result) {
  std::vector<Violation> violations;
  ValidatedGame out;

  if (raw.receivers.size() > 2) {
    violations.push_back({ErrorCode::TooManyReceivers, "receivers",
                          "got " + std::to_string(raw.receivers.size()) +
                              " receivers; only one or two are supported (the problem is NP-hard beyond two)"});
    return violations;
  }
  if (raw.receivers.empty()) {
    violations.push_back({ErrorCode::MalformedTree, "receivers", "no receivers declared"});
    return violations;
  }
  {
    std::vector<PlayerId> want{1};
    if (raw.receivers.size() == 2) want.push_back(2);
    if (raw.receivers != want) {
      violations.push_back({ErrorCode::MalformedTree, "receivers", "receivers must be [1] or [1,2]"});
      return violations;
    }
  }
  if (raw.root < 0 || raw.root >= static_cast<int>(raw.nodes.size())) {
    violations.push_back({ErrorCode::MalformedTree, "root", "missing or out-of-range root node"});
    return violations;
  }

  detail::ValidateCtx ctx{raw, std::move(out), violations, {}, {}};
  ctx.visited.assign(raw.nodes.size(), false);
  std::map<PlayerId, std::vector<std::pair<std::string, std::string>>> own_hist;
  std::set<std::string> typed_on_path;
  std::vector<int> path_typed;
  ctx.walk(raw.root, own_hist, typed_on_path, path_typed, "root");

  if (!violations.empty()) return violations;

  // Second pass: build the validated arena (indices shifted to the validated
  // node order, children aligned with the infoset's action order).
  ValidatedGame& g = ctx.out;
  g.num_receivers = static_cast<int>(raw.receivers.size());
  g.nodes.resize(raw.nodes.size());
  struct Frame {
    int raw_idx;
    std::vector<int> path_typed;
  };
  std::vector<Frame> stack{{raw.root, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const RawNode& rn = raw.nodes[f.raw_idx];
    GameNode& gn = g.nodes[f.raw_idx];
    if (rn.terminal) {
      gn.kind = GameNode::kTerminal;
      gn.path_typed_actions = f.path_typed;
      long long combos = 1;
      for (int a : f.path_typed) combos *= g.actions[a].num_types();
      gn.pay_sender.assign(combos, 0.0);
      gn.pay_receiver.assign(g.num_receivers, std::vector<double>(combos, 0.0));
      for (const auto& row : rn.payoffs) {
        int combo = 0;
        for (size_t k = 0; k < f.path_typed.size(); ++k) {
          int a = f.path_typed[k];
          combo = combo * g.actions[a].num_types() + g.type_index(a, row.when.at(g.actions[a].name));
        }
        gn.pay_sender[combo] = row.sender;
        for (int r = 0; r < g.num_receivers; ++r) gn.pay_receiver[r][combo] = row.receivers[r];
      }
    } else {
      gn.kind = GameNode::kDecision;
      gn.infoset = g.infoset_index(rn.infoset);
      for (const auto& a : rn.actions) {
        gn.children.push_back(a.child);
        Frame child{a.child, f.path_typed};
        if (!a.types.empty()) child.path_typed.push_back(g.action_index(a.name));
        stack.push_back(std::move(child));
      }
    }
  }
  g.root = raw.root;
  if (result) *result = std::move(g);
  return violations;
}

inline ValidatedGame validate(const RawGame& raw) {
  ValidatedGame g;
  auto violations = validate_collect(raw, &g);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    std::string msg = v.message + " (at " + v.where + ")";
    if (violations.size() > 1) msg += " [+" + std::to_string(violations.size() - 1) + " more]";
    throw Error(v.code, msg);
  }
  return g;
}

}  // namespace exante
