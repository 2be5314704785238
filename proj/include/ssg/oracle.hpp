#pragma once

// Brute-force ground truth. Everything here is exponential on purpose and
// guarded by explicit caps; exceeding a cap throws guard_exceeded.

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ssg/counter.hpp"
#include "ssg/game.hpp"
#include "ssg/numeric.hpp"
#include "ssg/random_game.hpp"
#include "ssg/solver.hpp"

namespace ssg {

/// Time-independent arc per state; -1 at states the player does not own.
using MemorylessStrategy = std::vector<int>;

namespace detail {

/// Solves A x = b over the integers by fraction-free (Bareiss) elimination.
/// A must be nonsingular.
inline std::vector<Rational> bareiss_solve(std::vector<std::vector<BigInt>> a, std::vector<BigInt> b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  BigInt prev_pivot = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) throw std::logic_error("singular reachability system");
      std::swap(a[k], a[r]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev_pivot.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev_pivot = a[k][k];
  }
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc(a[i][n]);
    for (std::size_t j = i + 1; j < n; ++j) acc -= Rational(a[i][j]) * x[j];
    x[i] = acc / Rational(a[i][i]);
    x[i].canonicalize();
  }
  return x;
}

inline MemorylessStrategy combine(const Game& g, const MemorylessStrategy& s1, const MemorylessStrategy& s2) {
  if (s1.size() != g.size() || s2.size() != g.size())
    throw std::invalid_argument("memoryless strategy size mismatch");
  MemorylessStrategy c(g.size(), -1);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!g.is_controlled(s)) continue;
    c[s] = g.is_controlled_by(s, Player::max) ? s1[s] : s2[s];
    if (c[s] != 0 && c[s] != 1)
      throw std::invalid_argument("memoryless strategy missing a choice at '" + g.id(s) + "'");
  }
  return c;
}

}  // namespace detail

/// Probability of eventually reaching the terminal from every state when both
/// players are bound to memoryless strategies.
inline std::vector<Rational> chain_reach(const Game& g, const MemorylessStrategy& sigma1,
                                         const MemorylessStrategy& sigma2) {
  const auto choice = detail::combine(g, sigma1, sigma2);
  const std::size_t n = g.size();
  // (successor, weight) with weights in units of 1/2
  auto succ = [&](std::size_t s) -> std::vector<std::pair<std::size_t, int>> {
    const auto& st = g.state(s);
    if (st.kind == StateKind::terminal) return {};
    if (st.kind == StateKind::coin) return {{st.arcs[0], 1}, {st.arcs[1], 1}};
    return {{st.arcs[static_cast<std::size_t>(choice[s])], 2}};
  };

  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t s = 0; s < n; ++s)
    for (auto [d, w] : succ(s)) pred[d].push_back(s);
  std::vector<bool> reaches(n, false);
  std::queue<std::size_t> q;
  reaches[g.terminal()] = true;
  q.push(g.terminal());
  while (!q.empty()) {
    const auto s = q.front();
    q.pop();
    for (auto p : pred[s])
      if (!reaches[p]) reaches[p] = true, q.push(p);
  }

  std::vector<std::size_t> unknown;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (std::size_t s = 0; s < n; ++s)
    if (reaches[s] && s != g.terminal()) slot[s] = unknown.size(), unknown.push_back(s);

  std::vector<Rational> value(n, Rational(0));
  value[g.terminal()] = 1;
  if (unknown.empty()) return value;

  // 2 x_s - sum 2P(s,s') x_s' = 2P(s, terminal)
  const std::size_t m = unknown.size();
  std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(m, BigInt(0)));
  std::vector<BigInt> b(m, BigInt(0));
  for (std::size_t r = 0; r < m; ++r) {
    const auto s = unknown[r];
    a[r][r] += 2;
    for (auto [d, w] : succ(s)) {
      if (d == g.terminal())
        b[r] += w;
      else if (slot[d] != SIZE_MAX)
        a[r][slot[d]] -= w;
    }
  }
  const auto x = detail::bareiss_solve(std::move(a), std::move(b));
  for (std::size_t r = 0; r < m; ++r) value[unknown[r]] = x[r];
  return value;
}

namespace detail {

/// Calls f(strategy) for every memoryless strategy of `player`.
template <class F>
void for_each_memoryless(const Game& g, Player player, F&& f) {
  const auto owned = g.controlled_states(player);
  const std::uint64_t count = std::uint64_t{1} << owned.size();
  MemorylessStrategy sigma(g.size(), -1);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    for (std::size_t j = 0; j < owned.size(); ++j) sigma[owned[j]] = static_cast<int>((bits >> j) & 1);
    f(sigma);
  }
}

}  // namespace detail

struct InfiniteSolution {
  std::vector<Rational> values;
  MemorylessStrategy sigma1;  // maximin at every state simultaneously
};

/// max over memoryless sigma1 of min over memoryless sigma2 of chain_reach,
/// pointwise, by full enumeration.
inline InfiniteSolution solve_infinite_bruteforce(const Game& g, std::size_t max_controlled = 12) {
  if (g.controlled_states().size() > max_controlled)
    throw guard_exceeded("solve_infinite_bruteforce: " + std::to_string(g.controlled_states().size()) +
                         " controlled states exceed cap " + std::to_string(max_controlled));
  std::vector<std::pair<MemorylessStrategy, std::vector<Rational>>> guaranteed;
  detail::for_each_memoryless(g, Player::max, [&](const MemorylessStrategy& s1) {
    std::optional<std::vector<Rational>> worst;
    detail::for_each_memoryless(g, Player::min, [&](const MemorylessStrategy& s2) {
      auto v = chain_reach(g, s1, s2);
      if (!worst) {
        worst = std::move(v);
        return;
      }
      for (std::size_t s = 0; s < g.size(); ++s)
        if (v[s] < (*worst)[s]) (*worst)[s] = v[s];
    });
    guaranteed.emplace_back(s1, std::move(*worst));
  });

  InfiniteSolution out{guaranteed.front().second, guaranteed.front().first};
  for (const auto& [s1, v] : guaranteed)
    for (std::size_t s = 0; s < g.size(); ++s)
      if (v[s] > out.values[s]) out.values[s] = v[s];
  for (const auto& [s1, v] : guaranteed)
    if (v == out.values) {
      out.sigma1 = s1;
      return out;
    }
  throw std::logic_error("no memoryless strategy is optimal at every state");
}

struct CounterSearchResult {
  std::optional<std::size_t> memory;  // nullopt: exceeds max_memory
  std::optional<CounterStrategy> witness;
  Dyadic optimum;    // val(G^T) at the start state
  Dyadic achieved;   // value of the witness, when found
  std::uint64_t explored = 0;
};

/// Fewest memories N + p of any Max counter strategy whose guaranteed value
/// at the start is within eps of optimal. Only the action bits of memories the
/// counter actually visits within the horizon are enumerated.
inline CounterSearchResult best_counter_memory_bruteforce(const Game& g, std::size_t horizon, const Dyadic& eps,
                                                          std::size_t max_memory,
                                                          std::uint64_t max_candidates = std::uint64_t{1} << 24) {
  CounterSearchResult out;
  out.optimum = final_values(g, horizon)[g.start()];
  const Dyadic target = out.optimum - eps;
  const auto owned = g.controlled_states(Player::max);
  for (std::size_t mem = 1; mem <= max_memory; ++mem) {
    for (std::size_t period = 1; period <= mem; ++period) {
      CounterStrategy cs(mem - period, period, g.size());
      std::vector<std::size_t> visited;
      std::vector<bool> seen(mem, false);
      for (std::size_t e = 0; e < horizon; ++e)
        if (const auto m = cs.memory_at(e); !seen[m]) seen[m] = true, visited.push_back(m);
      const std::size_t bits = visited.size() * owned.size();
      if (bits >= 63 || out.explored + (std::uint64_t{1} << bits) > max_candidates)
        throw guard_exceeded("counter enumeration exceeds " + std::to_string(max_candidates) + " candidates");
      for (std::size_t m = 0; m < mem; ++m)
        for (auto s : owned) cs.set_action(m, s, 0);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        ++out.explored;
        for (std::size_t j = 0; j < bits; ++j)
          cs.set_action(visited[j / owned.size()], owned[j % owned.size()], static_cast<int>((mask >> j) & 1));
        auto v = evaluate_counter(g, horizon, cs, Player::max).at(horizon, g.start());
        if (v >= target) {
          out.memory = mem;
          out.achieved = std::move(v);
          out.witness = cs;
          return out;
        }
      }
    }
  }
  return out;
}

struct SimulationResult {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  double frequency() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
};

/// Plays `trials` independent games of at most `horizon` moves. Strategies are
/// Markov (remaining-time indexed); either may be null when its player owns no state.
inline SimulationResult mc_simulate(const Game& g, std::size_t horizon, const MarkovStrategy* sigma1,
                                    const MarkovStrategy* sigma2, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("mc_simulate needs trials >= 1");
  Rng rng(seed);
  SimulationResult out{trials, 0, seed};
  for (std::uint64_t n = 0; n < trials; ++n) {
    std::size_t s = g.start();
    for (std::size_t t = horizon; t > 0 && s != g.terminal(); --t) {
      const auto& st = g.state(s);
      int arc;
      if (st.kind == StateKind::coin) {
        arc = static_cast<int>(rng() >> 63);
      } else {
        const MarkovStrategy* sigma = st.kind == StateKind::max ? sigma1 : sigma2;
        if (!sigma) throw std::invalid_argument("no strategy for the player owning '" + st.id + "'");
        arc = sigma->at(t, s);
        detail::require_fixed_entry(g, t, s, arc);
      }
      s = st.arcs[static_cast<std::size_t>(arc)];
    }
    if (s == g.terminal()) ++out.hits;
  }
  return out;
}

}  // namespace ssg
