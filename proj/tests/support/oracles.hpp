#pragma once

// Independent reference computations for tests. Nothing here calls the
// solver: probabilities are integer numerators over 2^t and strategies are
// enumerated outright.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/numeric.hpp"

namespace oracles {

using ssg::Game;
using ssg::Player;
using ssg::StateKind;

/// Arc choice per (remaining t, state), row t-1; -1 where nobody chooses.
struct Choices {
  std::size_t states;
  std::vector<std::int8_t> arcs;
  Choices(std::size_t horizon, std::size_t n) : states(n), arcs(horizon * n, 0) {}
  std::int8_t& at(std::size_t t, std::size_t s) { return arcs[(t - 1) * states + s]; }
  std::int8_t at(std::size_t t, std::size_t s) const { return arcs[(t - 1) * states + s]; }
};

/// Numerators over 2^t of the reach probability from every state, for t = horizon.
inline std::vector<std::uint64_t> chain_numerators(const Game& g, std::size_t horizon, const Choices& c) {
  if (horizon > 62) throw std::invalid_argument("horizon too long for 64-bit numerators");
  std::vector<std::uint64_t> prev(g.size(), 0), next(g.size(), 0);
  prev[g.terminal()] = 1;
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t s = 0; s < g.size(); ++s) {
      const auto& st = g.state(s);
      if (st.kind == StateKind::terminal)
        next[s] = std::uint64_t{1} << t;
      else if (st.kind == StateKind::coin)
        next[s] = prev[st.arcs[0]] + prev[st.arcs[1]];
      else
        next[s] = 2 * prev[st.arcs[static_cast<std::size_t>(c.at(t, s))]];
    }
    std::swap(prev, next);
  }
  return prev;
}

/// (t, s) cells of `player` that some play from the start can reach.
inline std::vector<std::pair<std::size_t, std::size_t>> reachable_cells(const Game& g, std::size_t horizon,
                                                                         Player player) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  std::set<std::size_t> frontier{g.start()};
  for (std::size_t t = horizon; t >= 1; --t) {
    std::set<std::size_t> nxt;
    for (auto s : frontier) {
      if (g.is_controlled_by(s, player)) cells.emplace_back(t, s);
      if (s == g.terminal()) continue;
      nxt.insert(g.state(s).arcs[0]);
      nxt.insert(g.state(s).arcs[1]);
    }
    frontier = std::move(nxt);
  }
  return cells;
}

inline std::size_t markov_bits(const Game& g, std::size_t horizon) {
  return reachable_cells(g, horizon, Player::max).size() + reachable_cells(g, horizon, Player::min).size();
}

/// max over Max Markov strategies of min over Min Markov strategies of the
/// start value, by full enumeration; returned as a numerator over 2^horizon.
inline std::uint64_t maxmin_markov(const Game& g, std::size_t horizon, std::size_t max_bits = 22) {
  const auto c1 = reachable_cells(g, horizon, Player::max);
  const auto c2 = reachable_cells(g, horizon, Player::min);
  if (c1.size() + c2.size() > max_bits) throw std::invalid_argument("too many strategy bits");
  Choices ch(horizon, g.size());
  std::uint64_t best = 0;
  for (std::uint64_t m1 = 0; m1 < (std::uint64_t{1} << c1.size()); ++m1) {
    for (std::size_t j = 0; j < c1.size(); ++j) ch.at(c1[j].first, c1[j].second) = (m1 >> j) & 1;
    std::uint64_t worst = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t m2 = 0; m2 < (std::uint64_t{1} << c2.size()); ++m2) {
      for (std::size_t j = 0; j < c2.size(); ++j) ch.at(c2[j].first, c2[j].second) = (m2 >> j) & 1;
      worst = std::min(worst, chain_numerators(g, horizon, ch)[g.start()]);
    }
    best = std::max(best, worst);
  }
  return best;
}

/// Opponent's best reply to fixed choices of `player`, by enumeration.
inline std::uint64_t best_reply(const Game& g, std::size_t horizon, Player player, Choices fixed,
                                std::size_t max_bits = 22) {
  const Player opp = ssg::opponent(player);
  const auto cells = reachable_cells(g, horizon, opp);
  if (cells.size() > max_bits) throw std::invalid_argument("too many strategy bits");
  std::uint64_t out = player == Player::max ? std::numeric_limits<std::uint64_t>::max() : 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << cells.size()); ++m) {
    for (std::size_t j = 0; j < cells.size(); ++j) fixed.at(cells[j].first, cells[j].second) = (m >> j) & 1;
    const auto v = chain_numerators(g, horizon, fixed)[g.start()];
    out = player == Player::max ? std::min(out, v) : std::max(out, v);
  }
  return out;
}

inline ssg::Dyadic over_pow2(std::uint64_t num, std::size_t e) {
  return ssg::Dyadic(ssg::BigInt(static_cast<unsigned long>(num)), e);
}

/// Least N for period p by the definition: rows[e] == rows[e+p] for all e >= N.
template <class Row>
std::size_t naive_initial_phase(const std::vector<Row>& rows, std::size_t p) {
  for (std::size_t n = 0;; ++n) {
    bool ok = true;
    for (std::size_t e = n; e + p < rows.size() && ok; ++e) ok = rows[e] == rows[e + p];
    if (ok) return n;
  }
}

}  // namespace oracles
