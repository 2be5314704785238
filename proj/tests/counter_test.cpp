#include <gtest/gtest.h>

#include "ssg/counter.hpp"
#include "ssg/gadgets.hpp"
#include "ssg/game_io.hpp"
#include "ssg/random_game.hpp"
#include "ssg/solver.hpp"
#include "support/oracles.hpp"

using namespace ssg;

namespace {

// One controlled state (index 0) plus the terminal; used to feed sequences
// into the Markov / set based entry points.
MarkovStrategy strategy_from_bits(std::uint32_t bits, std::size_t len) {
  MarkovStrategy sigma(Player::max, len, 2);
  for (std::size_t e = 0; e < len; ++e) sigma.set(len - e, 0, static_cast<int>((bits >> e) & 1));
  return sigma;
}

// Fewest N+p (smallest p on ties) by trying every pair against the definition.
std::pair<std::size_t, std::size_t> brute_min(const std::vector<ActionRow>& rows) {
  std::pair<std::size_t, std::size_t> best{rows.size() + 1, 1};
  for (std::size_t p = 1; p <= std::max<std::size_t>(rows.size(), 1); ++p)
    for (std::size_t n = 0; n + p <= std::max<std::size_t>(rows.size(), 1); ++n) {
      bool ok = true;
      for (std::size_t e = n; e + p < rows.size() && ok; ++e) ok = rows[e] == rows[e + p];
      if (ok && (n + p < best.first + best.second || (n + p == best.first + best.second && p < best.second)))
        best = {n, p};
    }
  return best;
}

// Is there a choice per (residue, state) and arbitrary in-set arcs before N?
bool set_feasible(const ActionSetSequence& seq, std::size_t n, std::size_t p) {
  for (std::size_t s = 0; s < seq.states(); ++s)
    for (std::size_t r = 0; r < p; ++r) {
      ArcMask acc = kBothArcs;
      for (std::size_t e = n + r; e < seq.length(); e += p)
        if (seq.mask(e, s) != 0) acc &= seq.mask(e, s);
      if (acc == 0) return false;
    }
  return true;
}

}  // namespace

TEST(CounterStrategy, RhoTrajectory) {
  CounterStrategy cs(2, 3, 1);
  EXPECT_EQ(memory_trajectory(cs, 8), (std::vector<std::size_t>{0, 1, 2, 3, 4, 2, 3, 4}));
  for (std::size_t e = 0; e < 40; ++e) EXPECT_EQ(memory_trajectory(cs, 40)[e], cs.memory_at(e));
  EXPECT_THROW(CounterStrategy(0, 0, 1), std::invalid_argument);
}

TEST(CounterStrategy, ReusedMemoryRepeats) {
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t p = 1; p < 5; ++p) {
      const auto m = memory_trajectory(CounterStrategy(n, p, 1), 30);
      for (std::size_t i = 0; i < 15; ++i)
        for (std::size_t j = i + 1; j < 15; ++j)
          if (m[i] == m[j]) {
            for (std::size_t c = 0; c < 15; ++c) EXPECT_EQ(m[i + c], m[j + c]);
          }
    }
}

TEST(CounterStrategy, MemoryReport) {
  auto r = memory_report(CounterStrategy(0, 1, 1));
  EXPECT_EQ(r.states, 1u);
  EXPECT_EQ(r.bits, 0u);
  r = memory_report(CounterStrategy(3, 5, 1));
  EXPECT_EQ(r.states, 8u);
  EXPECT_EQ(r.bits, 3u);
  EXPECT_EQ(r.initial, 3u);
  EXPECT_EQ(r.period, 5u);
  EXPECT_EQ(memory_report(CounterStrategy(4, 5, 1)).bits, 4u);
}

TEST(CounterStrategy, Unroll) {
  CounterStrategy cs(0, 1, 2);
  cs.set_action(0, 0, 1);
  for (const auto& row : unroll(cs, 5)) EXPECT_EQ(row[0], 1);
}

TEST(FromMarkov, SimpleSequences) {
  auto cs = from_markov(strategy_from_bits(0, 9), 9);
  EXPECT_EQ(cs.initial(), 0u);
  EXPECT_EQ(cs.period(), 1u);
  cs = from_markov(strategy_from_bits(0b101010101, 9), 9);
  EXPECT_EQ(cs.initial(), 0u);
  EXPECT_EQ(cs.period(), 2u);
}

TEST(FromMarkov, ExhaustiveMinimality) {
  for (std::size_t len = 1; len <= 12; ++len)
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      const auto sigma = strategy_from_bits(bits, len);
      const auto cs = from_markov(sigma, len);
      const auto rows = elapsed_rows(sigma, len);
      const auto [n, p] = brute_min(rows);
      ASSERT_EQ(cs.initial(), n) << len << " " << bits;
      ASSERT_EQ(cs.period(), p) << len << " " << bits;
      ASSERT_EQ(unroll(cs, len)[len - 1][0], rows[len - 1][0]);
      auto un = unroll(cs, len);
      for (std::size_t e = 0; e < len; ++e) ASSERT_EQ(un[e][0], rows[e][0]);
      ASSERT_EQ(un[0][1], -1);
    }
}

TEST(FromMarkov, OptimalStrategyOfM) {
  const Game m = make_M();
  for (std::size_t c = 5; c <= 8; ++c) {
    const auto cs = from_markov(extract_markov(m, c - 1, Player::max), c - 1);
    EXPECT_GE(cs.memory_count(), c - 2) << c;
  }
}

TEST(FromMarkov, ZeroHorizon) {
  const auto cs = from_markov(MarkovStrategy(Player::max, 0, 2), 0);
  EXPECT_EQ(cs.memory_count(), 1u);
}

TEST(LeastInitialPhase, MatchesDefinition) {
  Rng rng(4);
  for (int n = 0; n < 300; ++n) {
    const std::size_t len = 1 + rng() % 14;
    std::vector<ActionRow> rows(len, ActionRow(1));
    for (auto& r : rows) r[0] = static_cast<std::int8_t>(rng() % 2);
    for (std::size_t p = 1; p <= len; ++p) EXPECT_EQ(least_initial_phase(rows, p), oracles::naive_initial_phase(rows, p));
  }
}

TEST(MinimalPeriod, AllTies) {
  ActionSetSequence seq(10, 2);
  for (std::size_t e = 0; e < 10; ++e) seq.set(e, 0, kBothArcs);
  const auto r = minimal_period_of_optimal(seq);
  EXPECT_EQ(r.initial, 0u);
  EXPECT_EQ(r.period, 1u);
}

TEST(MinimalPeriod, BruteForceOnRandomSequences) {
  Rng rng(77);
  for (int n = 0; n < 400; ++n) {
    const std::size_t len = 1 + rng() % 12;
    const std::size_t states = 1 + rng() % 2;
    ActionSetSequence seq(len, states);
    for (std::size_t e = 0; e < len; ++e)
      for (std::size_t s = 0; s < states; ++s) seq.set(e, s, static_cast<ArcMask>(1 + rng() % 3));
    const auto r = minimal_period_of_optimal(seq);
    std::pair<std::size_t, std::size_t> best{len + 1, 1};
    for (std::size_t p = 1; p <= len; ++p)
      for (std::size_t m = 0; m + p <= len; ++m)
        if (set_feasible(seq, m, p) &&
            (m + p < best.first + best.second || (m + p == best.first + best.second && p < best.second)))
          best = {m, p};
    ASSERT_EQ(r.initial, best.first);
    ASSERT_EQ(r.period, best.second);
    for (std::size_t p = 1; p <= len; ++p) EXPECT_TRUE(set_feasible(seq, least_initial_phase(seq, p), p));
    // witness plays an allowed arc everywhere
    const auto un = unroll(r.witness, len);
    for (std::size_t e = 0; e < len; ++e)
      for (std::size_t s = 0; s < states; ++s) ASSERT_TRUE((seq.mask(e, s) >> un[e][s]) & 1);
  }
}

TEST(MinimalPeriod, ParityAndF2) {
  for (auto [k, period] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 6}}) {
    const Game f = make_F(k);
    const std::size_t horizon = 2 * primorial(k) + 10;
    const auto seq = ActionSetSequence::from(optimal_action_sets(f, horizon), f, Player::max);
    const auto r = minimal_period_of_optimal(seq);
    EXPECT_EQ(r.period, period);
    EXPECT_GE(memory_report(r.witness).states, period);
    // the witness is optimal
    EXPECT_EQ(evaluate_counter(f, horizon, r.witness, Player::max).at(horizon, f.start()),
              final_values(f, horizon)[f.start()]);
  }
}

TEST(MinimalPeriod, WitnessIsOptimalOnRandomGames) {
  Rng rng(123);
  for (int n = 0; n < 60; ++n) {
    const Game g = random_game(2 + n % 6, rng, {false});
    const std::size_t horizon = 20;
    const auto r = minimal_period_of_optimal(ActionSetSequence::from(optimal_action_sets(g, horizon), g, Player::max));
    const auto v = evaluate_counter(g, horizon, r.witness, Player::max);
    const auto w = backward_induction(g, horizon);
    for (std::size_t s = 0; s < g.size(); ++s) EXPECT_EQ(v.at(horizon, s), w.at(horizon, s));
  }
}

TEST(CounterJson, RoundTrip) {
  const Game f = make_F(2);
  const auto r = minimal_period_of_optimal(ActionSetSequence::from(optimal_action_sets(f, 22), f, Player::max));
  const auto j = to_json(r.witness, f);
  EXPECT_EQ(j["N"], r.initial);
  EXPECT_EQ(j["p"], r.period);
  EXPECT_EQ(j["actions"].size(), r.witness.memory_count() * 2);
  EXPECT_EQ(counter_from_json(j, f), r.witness);
  auto bad = j;
  bad["actions"][0]["arc"] = 2;
  EXPECT_THROW(counter_from_json(bad, f), std::invalid_argument);
}
