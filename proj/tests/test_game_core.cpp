#include <catch2/catch_amalgamated.hpp>

#include "exante/game.hpp"
#include "exante/sequence.hpp"
#include "helpers.hpp"

using namespace exante;
using namespace exante::testing;

TEST_CASE("validate accepts the entrant game") {
  ValidatedGame g = entrant_game();
  CHECK(g.num_receivers == 1);
  CHECK(g.infosets.size() == 1);
  REQUIRE(g.action_index("In") >= 0);
  const ActionDef& in = g.actions[g.action_index("In")];
  REQUIRE(in.typed());
  CHECK(in.type_probs[0] == Rational(3, 10));
  CHECK(in.type_probs[1] == Rational(7, 10));
  CHECK_FALSE(g.actions[g.action_index("Out")].typed());
}

TEST_CASE("validate rejects a marginal that sums to 0.9") {
  RawGame raw = entrant_raw();
  for (auto& n : raw.nodes)
    for (auto& a : n.actions)
      if (a.name == "In") a.types[1].second = Rational(6, 10);
  auto violations = validate_collect(raw, nullptr);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].code == ErrorCode::ProbabilitySum);
  CHECK_THROWS_AS(validate(raw), Error);
}

TEST_CASE("validate rejects three receivers") {
  RawGame raw;
  raw.receivers = {1, 2, 3};
  raw.root = raw.add_terminal({flat_row(0, {0, 0, 0})});
  auto violations = validate_collect(raw, nullptr);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].code == ErrorCode::TooManyReceivers);
}

TEST_CASE("validate rejects perfect-recall violations") {
  // The same infoset is reached both before and after the player's own move.
  RawGame raw;
  raw.receivers = {1};
  int t1 = raw.add_terminal({flat_row(0, {0})});
  int t2 = raw.add_terminal({flat_row(0, {0})});
  int inner = raw.add_decision(1, "I", {{"x", {}, t1}, {"y", {}, t2}});
  int t3 = raw.add_terminal({flat_row(0, {0})});
  raw.root = raw.add_decision(1, "I", {{"x", {}, inner}, {"y", {}, t3}});
  auto violations = validate_collect(raw, nullptr);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].code == ErrorCode::PerfectRecallViolation);
}

TEST_CASE("validate rejects mismatched infoset action lists") {
  RawGame raw;
  raw.receivers = {1, 2};
  int t1 = raw.add_terminal({flat_row(0, {0, 0})});
  int t2 = raw.add_terminal({flat_row(0, {0, 0})});
  int t3 = raw.add_terminal({flat_row(0, {0, 0})});
  int u1 = raw.add_decision(2, "J", {{"u", {}, t1}, {"v", {}, t2}});
  int u2 = raw.add_decision(2, "J", {{"u", {}, t3}});
  raw.root = raw.add_decision(1, "I", {{"l", {}, u1}, {"r", {}, u2}});
  auto violations = validate_collect(raw, nullptr);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].code == ErrorCode::InfosetMismatch);
}

TEST_CASE("validate rejects an incomplete payoff table") {
  RawGame raw = entrant_raw();
  // drop the H row of the In terminal
  for (auto& n : raw.nodes)
    if (n.terminal && n.payoffs.size() == 2 && n.payoffs[0].when.count("In")) n.payoffs.pop_back();
  auto violations = validate_collect(raw, nullptr);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].code == ErrorCode::MalformedTree);
}

TEST_CASE("build_sequences on a single infoset with three actions") {
  ValidatedGame g = entrant_game();
  SequenceIndex idx = build_sequences(g, 1);
  CHECK(idx.num_seqs() == 4);  // empty + one per action
  CHECK(idx.seq_names == std::vector<std::string>{"-", "In", "Out", "P"});
  CHECK(idx.root_infosets() == std::vector<int>{0});
}

TEST_CASE("build_sequences on the two-level tree") {
  ValidatedGame g = two_level_tree();
  SequenceIndex idx = build_sequences(g, 1);
  REQUIRE(idx.num_seqs() == 5);
  CHECK(idx.seq_names == std::vector<std::string>{"-", "a", "b", "a.c", "a.d"});
  // I_down(a) = {I2}
  CHECK(idx.seq_children[1] == std::vector<int>{1});
  CHECK(idx.seq_children[2].empty());
  // Q(I2) = {a.c, a.d}, parent sequence of I2 is a
  CHECK(idx.infoset_seqs[1] == std::vector<int>{3, 4});
  CHECK(idx.infoset_parent_seq[1] == 1);
}

TEST_CASE("enumerate_plans") {
  SECTION("single infoset, three actions") {
    ValidatedGame g = entrant_game();
    SequenceIndex idx = build_sequences(g, 1);
    CHECK(enumerate_plans(idx).size() == 3);
  }
  SECTION("two-level tree has plans a.c, a.d, b") {
    ValidatedGame g = two_level_tree();
    SequenceIndex idx = build_sequences(g, 1);
    auto plans = enumerate_plans(idx);
    REQUIRE(plans.size() == 3);
    CHECK(plans[0].choice == std::vector<int>{0, 0});
    CHECK(plans[1].choice == std::vector<int>{0, 1});
    CHECK(plans[2].choice == std::vector<int>{1, -1});  // b leaves I2 unreachable
    for (const Plan& p : plans) CHECK(plan_is_reduced(idx, p));
  }
  SECTION("player with no infosets has exactly the empty plan") {
    ValidatedGame g = two_level_tree();
    SequenceIndex idx = build_sequences(g, 2);
    auto plans = enumerate_plans(idx);
    REQUIRE(plans.size() == 1);
    CHECK(plans[0].choice.empty());
  }
  SECTION("cap is enforced") {
    ValidatedGame g = two_level_tree();
    SequenceIndex idx = build_sequences(g, 1);
    CHECK_THROWS_AS(enumerate_plans(idx, 2), Error);
  }
}

TEST_CASE("xi") {
  ValidatedGame g = two_level_tree();
  SequenceIndex idx = build_sequences(g, 1);
  auto plans = enumerate_plans(idx);
  CHECK(xi(idx, plans[2]) == std::vector<int>{0, 2});     // {-, b}
  CHECK(xi(idx, plans[0]) == std::vector<int>{0, 1, 3});  // {-, a, a.c}
  Plan empty;
  SequenceIndex none = build_sequences(g, 2);
  empty.choice.clear();
  CHECK(xi(none, empty) == std::vector<int>{0});
}

TEST_CASE("behavioral_to_realization") {
  SECTION("uniform on the two-level tree") {
    ValidatedGame g = two_level_tree();
    SequenceIndex idx = build_sequences(g, 1);
    auto r = behavioral_to_realization<double>(idx, {{0.5, 0.5}, {0.5, 0.5}});
    CHECK(r == std::vector<double>{1.0, 0.5, 0.5, 0.25, 0.25});
  }
  SECTION("deterministic strategy gives the indicator of xi") {
    ValidatedGame g = two_level_tree();
    SequenceIndex idx = build_sequences(g, 1);
    auto r = behavioral_to_realization<double>(idx, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(r == std::vector<double>{1.0, 1.0, 0.0, 0.0, 1.0});
    Plan p{{0, 1}};  // a then d
    auto support = xi(idx, p);
    for (int q = 0; q < idx.num_seqs(); ++q) {
      bool in_support = std::find(support.begin(), support.end(), q) != support.end();
      CHECK(r[q] == (in_support ? 1.0 : 0.0));
    }
  }
  SECTION("one infoset of the entrant game") {
    ValidatedGame g = entrant_game();
    SequenceIndex idx = build_sequences(g, 1);
    auto r = behavioral_to_realization<Rational>(idx, {{Rational(1, 3), Rational(1, 3), Rational(1, 3)}});
    CHECK(r == std::vector<Rational>{Rational(1), Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  }
  SECTION("rejects a non-distribution") {
    ValidatedGame g = entrant_game();
    SequenceIndex idx = build_sequences(g, 1);
    CHECK_THROWS_AS(behavioral_to_realization<double>(idx, {{0.5, 0.2, 0.2}}), Error);
  }
}

namespace {

// Independent flow check used by the property tests below.
template <typename T>
bool is_realization_plan(const SequenceIndex& idx, const std::vector<T>& r, const T& zero_tol) {
  if (!(r[0] >= T(1) - zero_tol && r[0] <= T(1) + zero_tol)) return false;
  for (int q = 0; q < idx.num_seqs(); ++q)
    for (int I : idx.seq_children[q]) {
      T sum = T(0);
      for (int qq : idx.infoset_seqs[I]) sum += r[qq];
      T diff = sum - r[q];
      if (diff < T(0)) diff = T(0) - diff;
      if (diff > zero_tol) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("random-tree properties") {
  std::mt19937_64 rng(20240817);
  for (int round = 0; round < 40; ++round) {
    GenOpts opts;
    opts.num_receivers = 2;
    ValidatedGame g = random_game(rng, opts);
    for (int player = 1; player <= 2; ++player) {
      SequenceIndex idx = build_sequences(g, player);
      auto plans = enumerate_plans(idx);

      // plan count equals the independent product-form count
      CHECK(BigInt(plans.size()) == count_plans(idx));

      // no duplicates, all reduced
      std::set<Plan> unique(plans.begin(), plans.end());
      CHECK(unique.size() == plans.size());
      for (const Plan& p : plans) REQUIRE(plan_is_reduced(idx, p));

      // xi of every plan is a valid 0/1 realization plan (exact arithmetic)
      for (const Plan& p : plans) {
        std::vector<Rational> ind(idx.num_seqs(), Rational(0));
        for (int q : xi(idx, p)) ind[q] = Rational(1);
        CHECK(is_realization_plan<Rational>(idx, ind, Rational(0)));
      }

      // behavioral -> realization satisfies the flow constraints exactly
      auto pi = random_behavioral(rng, idx);
      auto r = behavioral_to_realization<Rational>(idx, pi);
      CHECK(is_realization_plan<Rational>(idx, r, Rational(0)));

      // round trip: deterministic behavioral == indicator of the induced plan
      std::vector<std::vector<Rational>> det(idx.num_infosets());
      Plan induced{std::vector<int>(idx.num_infosets(), -1)};
      for (int I = 0; I < idx.num_infosets(); ++I) {
        int k = std::uniform_int_distribution<int>(0, static_cast<int>(idx.infoset_seqs[I].size()) - 1)(rng);
        det[I].assign(idx.infoset_seqs[I].size(), Rational(0));
        det[I][k] = Rational(1);
        induced.choice[I] = k;
      }
      // reduce: drop choices at unreachable infosets
      std::vector<bool> reach(idx.num_infosets(), false);
      std::function<void(int)> mark = [&](int I) {
        reach[I] = true;
        for (int child : idx.seq_children[idx.infoset_seqs[I][induced.choice[I]]]) mark(child);
      };
      for (int I : idx.root_infosets()) mark(I);
      for (int I = 0; I < idx.num_infosets(); ++I)
        if (!reach[I]) induced.choice[I] = -1;

      auto rdet = behavioral_to_realization<Rational>(idx, det);
      auto support = xi(idx, induced);
      for (int q = 0; q < idx.num_seqs(); ++q) {
        bool in_support = std::find(support.begin(), support.end(), q) != support.end();
        CHECK((rdet[q] == Rational(1)) == in_support);
      }
    }
  }
}
