#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "exante/game.hpp"
#include "exante/sequence.hpp"

namespace exante::testing {

inline std::string fixture_path(const std::string& name) {
  const char* dir = std::getenv("EXANTE_FIXTURES");
  return std::string(dir ? dir : "fixtures") + "/" + name;
}

// Single receiver, two stacked infosets: I1 with actions a,b and I2 (after a)
// with actions c,d. Sequences come out as {-, a, b, a.c, a.d}.
inline ValidatedGame two_level_tree() {
  RawGame raw;
  raw.receivers = {1};
  int tac = raw.add_terminal({flat_row(0, {0})});
  int tad = raw.add_terminal({flat_row(0, {0})});
  int tb = raw.add_terminal({flat_row(0, {0})});
  int i2 = raw.add_decision(1, "I2", {{"c", {}, tac}, {"d", {}, tad}});
  raw.root = raw.add_decision(1, "I1", {{"a", {}, i2}, {"b", {}, tb}});
  return validate(raw);
}

// Example game used throughout: one receiver choosing In / Out / P, In and P
// typed {E,H} with marginals (0.3, 0.7).
inline RawGame entrant_raw() {
  RawGame raw;
  raw.receivers = {1};
  std::vector<std::pair<std::string, Rational>> eh = {{"E", Rational::parse("3/10")},
                                                      {"H", Rational::parse("7/10")}};
  RawTerminalRow in_e, in_h;
  in_e.when = {{"In", "E"}};
  in_e.sender = -1;
  in_e.receivers = {1};
  in_h.when = {{"In", "H"}};
  in_h.sender = -1;
  in_h.receivers = {-1};
  int t_in = raw.add_terminal({in_e, in_h});
  int t_out = raw.add_terminal({flat_row(1, {0})});
  RawTerminalRow p_e, p_h;
  p_e.when = {{"P", "E"}};
  p_e.sender = 0;
  p_e.receivers = {0.5};
  p_h.when = {{"P", "H"}};
  p_h.sender = 0;
  p_h.receivers = {0};
  int t_p = raw.add_terminal({p_e, p_h});
  raw.root = raw.add_decision(1, "e", {{"In", eh, t_in}, {"Out", {}, t_out}, {"P", eh, t_p}});
  return raw;
}

inline ValidatedGame entrant_game() { return validate(entrant_raw()); }

// ---------------------------------------------------------------------------
// Random-game generator. Infosets are keyed by (player, own history), which
// guarantees perfect recall; nodes of one infoset appear whenever the same
// own history is reached through different opponent branches.
// ---------------------------------------------------------------------------

struct GenOpts {
  int num_receivers = 2;
  int max_depth = 4;
  int min_actions = 2;
  int max_actions = 3;
  int max_typed_actions = 2;
  int payoff_range = 3;
  long long max_plans_per_receiver = 8;
  double terminal_prob = 0.35;
};

namespace gen_detail {

struct InfosetRec {
  std::string name;
  std::vector<RawAction> actions;  // children filled per node
};

struct Gen {
  std::mt19937_64& rng;
  const GenOpts& opts;
  RawGame raw;
  std::map<std::pair<int, std::string>, InfosetRec> registry;
  int typed_budget;
  int infoset_counter = 0;

  int rint(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double runif() { return std::uniform_real_distribution<double>(0, 1)(rng); }

  InfosetRec& infoset_for(int player, const std::string& hist) {
    auto key = std::make_pair(player, hist);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    InfosetRec rec;
    rec.name = "I" + std::to_string(++infoset_counter);
    int n = rint(opts.min_actions, opts.max_actions);
    for (int a = 0; a < n; ++a) {
      RawAction act;
      act.name = rec.name + "_" + std::string(1, static_cast<char>('a' + a));
      if (typed_budget > 0 && runif() < 0.4) {
        --typed_budget;
        int num = rint(1, 7);
        act.types = {{"t0", Rational(num, 8)}, {"t1", Rational(8 - num, 8)}};
      }
      rec.actions.push_back(act);
    }
    return registry.emplace(key, std::move(rec)).first->second;
  }

  int build(int depth, std::map<int, std::string>& hist,
            std::vector<const RawAction*>& typed_path) {
    bool terminal = depth >= opts.max_depth || (depth > 0 && runif() < opts.terminal_prob);
    if (terminal) {
      std::vector<RawTerminalRow> rows;
      long long combos = 1;
      for (auto* a : typed_path) combos *= static_cast<long long>(a->types.size());
      for (long long c = 0; c < combos; ++c) {
        RawTerminalRow row;
        long long rest = c;
        for (auto it = typed_path.rbegin(); it != typed_path.rend(); ++it) {
          long long k = rest % static_cast<long long>((*it)->types.size());
          rest /= static_cast<long long>((*it)->types.size());
          row.when[(*it)->name] = (*it)->types[k].first;
        }
        row.sender = rint(-opts.payoff_range, opts.payoff_range);
        for (int r = 0; r < opts.num_receivers; ++r)
          row.receivers.push_back(rint(-opts.payoff_range, opts.payoff_range));
        rows.push_back(std::move(row));
      }
      return raw.add_terminal(std::move(rows));
    }
    int player = rint(1, opts.num_receivers);
    InfosetRec& rec = infoset_for(player, hist[player]);
    std::vector<RawAction> actions = rec.actions;
    for (RawAction& a : actions) {
      std::string saved = hist[player];
      hist[player] += "/" + a.name;
      if (!a.types.empty()) typed_path.push_back(&rec.actions[&a - actions.data()]);
      a.child = build(depth + 1, hist, typed_path);
      if (!a.types.empty()) typed_path.pop_back();
      hist[player] = saved;
    }
    return raw.add_decision(player, rec.name, std::move(actions));
  }
};

}  // namespace gen_detail

inline ValidatedGame random_game(std::mt19937_64& rng, const GenOpts& opts = {}) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    gen_detail::Gen g{rng, opts, {}, {}, opts.max_typed_actions};
    g.raw.receivers = {1};
    if (opts.num_receivers == 2) g.raw.receivers.push_back(2);
    std::map<int, std::string> hist;
    for (int p = 1; p <= opts.num_receivers; ++p) hist[p] = "";
    std::vector<const RawAction*> typed_path;
    g.raw.root = g.build(0, hist, typed_path);
    ValidatedGame game = validate(g.raw);
    bool ok = true;
    for (int p = 1; p <= opts.num_receivers; ++p) {
      SequenceIndex idx = build_sequences(game, p);
      ok = ok && count_plans(idx) <= opts.max_plans_per_receiver && idx.num_infosets() > 0;
    }
    if (ok) return game;
  }
  throw std::runtime_error("random_game failed to hit the requested size");
}

// Full-support behavioral strategy with probabilities in small exact rationals.
inline std::vector<std::vector<Rational>> random_behavioral(std::mt19937_64& rng,
                                                            const SequenceIndex& idx) {
  std::vector<std::vector<Rational>> pi(idx.num_infosets());
  for (int I = 0; I < idx.num_infosets(); ++I) {
    int n = static_cast<int>(idx.infoset_seqs[I].size());
    std::vector<int> w(n);
    int total = 0;
    for (int& x : w) {
      x = std::uniform_int_distribution<int>(1, 8)(rng);
      total += x;
    }
    for (int x : w) pi[I].push_back(Rational(x, total));
  }
  return pi;
}

inline std::vector<std::vector<double>> to_double(const std::vector<std::vector<Rational>>& pi) {
  std::vector<std::vector<double>> out(pi.size());
  for (size_t i = 0; i < pi.size(); ++i)
    for (const Rational& r : pi[i]) out[i].push_back(r.to_double());
  return out;
}

}  // namespace exante::testing
