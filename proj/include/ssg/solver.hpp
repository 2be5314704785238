#pragma once

// Exact backward induction for finite-horizon games.
//
// Horizon convention: v[t][s] is the optimal probability of reaching the
// terminal from s using at most t arc traversals. Tables are indexed by the
// number of REMAINING moves; v[0] is 1 at the terminal and 0 elsewhere.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/numeric.hpp"

namespace ssg {

/// An explicit enumeration or product-size cap was hit.
class guard_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValueTable {
 public:
  ValueTable(std::size_t horizon, std::size_t states)
      : horizon_(horizon), states_(states), cells_((horizon + 1) * states) {}

  std::size_t horizon() const { return horizon_; }
  std::size_t states() const { return states_; }

  const Dyadic& at(std::size_t t, std::size_t s) const { return cells_[t * states_ + s]; }
  Dyadic& at(std::size_t t, std::size_t s) { return cells_[t * states_ + s]; }
  std::span<const Dyadic> row(std::size_t t) const { return {cells_.data() + t * states_, states_}; }
  std::span<Dyadic> row(std::size_t t) { return {cells_.data() + t * states_, states_}; }

 private:
  std::size_t horizon_;
  std::size_t states_;
  std::vector<Dyadic> cells_;
};

/// Bit 0: arc 0 is optimal, bit 1: arc 1 is optimal. Zero at states nobody controls.
using ArcMask = std::uint8_t;
inline constexpr ArcMask kArc0 = 1;
inline constexpr ArcMask kArc1 = 2;
inline constexpr ArcMask kBothArcs = 3;

/// Value-optimal arcs at every remaining time 1..T and every Max/Min state.
class OptimalActionSets {
 public:
  OptimalActionSets(std::size_t horizon, std::size_t states)
      : horizon_(horizon), states_(states), masks_(horizon * states, 0) {}

  std::size_t horizon() const { return horizon_; }
  std::size_t states() const { return states_; }
  ArcMask mask(std::size_t t, std::size_t s) const { return masks_[(t - 1) * states_ + s]; }
  void set(std::size_t t, std::size_t s, ArcMask m) { masks_[(t - 1) * states_ + s] = m; }
  bool contains(std::size_t t, std::size_t s, int arc) const { return (mask(t, s) >> arc) & 1; }

 private:
  std::size_t horizon_;
  std::size_t states_;
  std::vector<ArcMask> masks_;  // row t-1
};

/// One arc per (remaining time, state) for the states of one player.
class MarkovStrategy {
 public:
  MarkovStrategy(Player player, std::size_t horizon, std::size_t states)
      : player_(player), horizon_(horizon), states_(states), choices_(horizon * states, -1) {}

  Player player() const { return player_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t states() const { return states_; }
  /// -1 when no choice is recorded.
  int at(std::size_t t, std::size_t s) const { return choices_[(t - 1) * states_ + s]; }
  void set(std::size_t t, std::size_t s, int arc) { choices_[(t - 1) * states_ + s] = static_cast<std::int8_t>(arc); }

  friend bool operator==(const MarkovStrategy&, const MarkovStrategy&) = default;

 private:
  Player player_;
  std::size_t horizon_;
  std::size_t states_;
  std::vector<std::int8_t> choices_;
};

enum class Tiebreak { lowest_arc, highest_arc };

namespace detail {

inline void require_fixed_entry(const Game& g, std::size_t t, std::size_t s, int arc) {
  if (arc != 0 && arc != 1)
    throw std::invalid_argument("missing strategy entry at remaining t=" + std::to_string(t) +
                                " state '" + g.id(s) + "'");
}

/// One Bellman step from `prev` (remaining t-1) into `next` (remaining t).
/// `fixed(t, s)` returns the arc forced at s, or -1 to let the owner optimize.
/// When `masks` is non-null the optimal-arc mask of each optimized state is stored.
template <class Fixed>
void bellman_step(const Game& g, std::span<const Dyadic> prev, std::span<Dyadic> next, std::size_t t,
                  Fixed&& fixed, ArcMask* masks) {
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto& st = g.state(s);
    switch (st.kind) {
      case StateKind::terminal:
        next[s] = Dyadic::one();
        break;
      case StateKind::coin:
        next[s] = dy_avg(prev[st.arcs[0]], prev[st.arcs[1]]);
        break;
      case StateKind::max:
      case StateKind::min: {
        if (const int arc = fixed(t, s); arc >= 0) {
          next[s] = prev[st.arcs[static_cast<std::size_t>(arc)]];
          break;
        }
        const Dyadic& a = prev[st.arcs[0]];
        const Dyadic& b = prev[st.arcs[1]];
        const auto c = a <=> b;
        const bool maximize = st.kind == StateKind::max;
        ArcMask m;
        if (c == 0)
          m = kBothArcs;
        else
          m = ((c > 0) == maximize) ? kArc0 : kArc1;
        next[s] = (m & kArc0) ? a : b;
        if (masks) masks[s] = m;
        break;
      }
    }
  }
}

inline std::vector<Dyadic> initial_row(const Game& g) {
  std::vector<Dyadic> row(g.size());
  row[g.terminal()] = Dyadic::one();
  return row;
}

template <class Fixed>
ValueTable full_sweep(const Game& g, std::size_t horizon, Fixed&& fixed) {
  ValueTable table(horizon, g.size());
  table.at(0, g.terminal()) = Dyadic::one();
  for (std::size_t t = 1; t <= horizon; ++t)
    bellman_step(g, table.row(t - 1), table.row(t), t, fixed, nullptr);
  return table;
}

/// Keeps two rows only; returns the row at remaining = horizon.
template <class Fixed>
std::vector<Dyadic> streaming_sweep(const Game& g, std::size_t horizon, Fixed&& fixed,
                                    OptimalActionSets* sets = nullptr) {
  std::vector<Dyadic> prev = initial_row(g);
  std::vector<Dyadic> next(g.size());
  std::vector<ArcMask> masks(g.size(), 0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    bellman_step(g, prev, next, t, fixed, sets ? masks.data() : nullptr);
    if (sets)
      for (std::size_t s = 0; s < g.size(); ++s)
        if (g.is_controlled(s)) sets->set(t, s, masks[s]);
    std::swap(prev, next);
  }
  return prev;
}

inline constexpr auto no_fixed = [](std::size_t, std::size_t) { return -1; };

inline auto fixed_by(const Game& g, const MarkovStrategy& sigma, std::size_t horizon) {
  if (sigma.horizon() < horizon || sigma.states() != g.size())
    throw std::invalid_argument("strategy does not cover the horizon");
  return [&g, &sigma](std::size_t t, std::size_t s) {
    if (!g.is_controlled_by(s, sigma.player())) return -1;
    const int arc = sigma.at(t, s);
    require_fixed_entry(g, t, s, arc);
    return arc;
  };
}

}  // namespace detail

inline ValueTable backward_induction(const Game& g, std::size_t horizon) {
  return detail::full_sweep(g, horizon, detail::no_fixed);
}

/// Values at remaining = horizon only, using two rows of storage.
inline std::vector<Dyadic> final_values(const Game& g, std::size_t horizon) {
  return detail::streaming_sweep(g, horizon, detail::no_fixed);
}

inline OptimalActionSets optimal_action_sets(const Game& g, std::size_t horizon) {
  OptimalActionSets sets(horizon, g.size());
  detail::streaming_sweep(g, horizon, detail::no_fixed, &sets);
  return sets;
}

inline MarkovStrategy extract_markov(const OptimalActionSets& sets, const Game& g, Player player,
                                     Tiebreak tiebreak = Tiebreak::lowest_arc) {
  MarkovStrategy sigma(player, sets.horizon(), g.size());
  for (std::size_t t = 1; t <= sets.horizon(); ++t)
    for (std::size_t s : g.controlled_states(player)) {
      const ArcMask m = sets.mask(t, s);
      int arc = (m == kBothArcs) ? (tiebreak == Tiebreak::lowest_arc ? 0 : 1) : (m == kArc0 ? 0 : 1);
      sigma.set(t, s, arc);
    }
  return sigma;
}

inline MarkovStrategy extract_markov(const Game& g, std::size_t horizon, Player player,
                                     Tiebreak tiebreak = Tiebreak::lowest_arc) {
  return extract_markov(optimal_action_sets(g, horizon), g, player, tiebreak);
}

/// Values when `sigma`'s owner is bound to it and the opponent best-responds.
inline ValueTable evaluate_fixed(const Game& g, std::size_t horizon, const MarkovStrategy& sigma) {
  return detail::full_sweep(g, horizon, detail::fixed_by(g, sigma, horizon));
}

/// Both players bound: plain Markov-chain evaluation.
inline ValueTable evaluate_pair(const Game& g, std::size_t horizon, const MarkovStrategy& sigma1,
                                const MarkovStrategy& sigma2) {
  auto f1 = detail::fixed_by(g, sigma1, horizon);
  auto f2 = detail::fixed_by(g, sigma2, horizon);
  return detail::full_sweep(g, horizon, [&](std::size_t t, std::size_t s) {
    const int a = f1(t, s);
    return a >= 0 ? a : f2(t, s);
  });
}

/// A time-independent choice per state (-1 at states the player does not own),
/// played for `horizon` moves against a best-responding opponent. Streaming.
inline std::vector<Dyadic> evaluate_memoryless_final(const Game& g, std::size_t horizon, Player player,
                                                     const std::vector<int>& choices) {
  if (choices.size() != g.size()) throw std::invalid_argument("memoryless strategy size mismatch");
  return detail::streaming_sweep(g, horizon, [&](std::size_t t, std::size_t s) {
    if (!g.is_controlled_by(s, player)) return -1;
    detail::require_fixed_entry(g, t, s, choices[s]);
    return choices[s];
  });
}

/// CSV: one row per t, one column per state id, cells "m/2^e".
inline std::string to_csv(const Game& g, const ValueTable& table) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out = "t";
  for (std::size_t s = 0; s < g.size(); ++s) out += "," + quote(g.id(s));
  out += "\n";
  for (std::size_t t = 0; t <= table.horizon(); ++t) {
    out += std::to_string(t);
    for (std::size_t s = 0; s < g.size(); ++s) out += "," + table.at(t, s).to_string();
    out += "\n";
  }
  return out;
}

}  // namespace ssg
