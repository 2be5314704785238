#pragma once

// Counter-based strategies.
//
// Memory advances on every pebble move regardless of the state observed, so
// the memory trajectory from memory 0 is rho-shaped: N memories used once,
// then p memories repeated forever (0, 1, ..., N+p-1, N, N+1, ...). All
// sequences here are indexed by ELAPSED moves; solver tables are indexed by
// REMAINING moves and are reversed on entry (elapsed e <-> remaining T - e).

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssg/game.hpp"
#include "ssg/solver.hpp"

namespace ssg {

class CounterStrategy {
 public:
  CounterStrategy(std::size_t initial, std::size_t period, std::size_t states)
      : initial_(initial), period_(period), states_(states), actions_((initial + period) * states, -1) {
    if (period == 0) throw std::invalid_argument("counter strategy period must be >= 1");
  }

  std::size_t initial() const { return initial_; }
  std::size_t period() const { return period_; }
  std::size_t memory_count() const { return initial_ + period_; }
  std::size_t states() const { return states_; }

  /// The update function; it never looks at the game state.
  std::size_t next_memory(std::size_t m) const { return m + 1 < memory_count() ? m + 1 : initial_; }

  std::size_t memory_at(std::size_t elapsed) const {
    return elapsed < initial_ ? elapsed : initial_ + (elapsed - initial_) % period_;
  }

  /// -1 when the strategy does not act at s.
  int action(std::size_t memory, std::size_t s) const { return actions_[memory * states_ + s]; }
  void set_action(std::size_t memory, std::size_t s, int arc) {
    actions_[memory * states_ + s] = static_cast<std::int8_t>(arc);
  }

  friend bool operator==(const CounterStrategy&, const CounterStrategy&) = default;

 private:
  std::size_t initial_;
  std::size_t period_;
  std::size_t states_;
  std::vector<std::int8_t> actions_;
};

struct MemoryReport {
  std::size_t states;
  std::size_t bits;
  std::size_t initial;
  std::size_t period;
};

inline std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

inline MemoryReport memory_report(const CounterStrategy& cs) {
  return {cs.memory_count(), ceil_log2(cs.memory_count()), cs.initial(), cs.period()};
}

inline std::vector<std::size_t> memory_trajectory(const CounterStrategy& cs, std::size_t t_max) {
  std::vector<std::size_t> out;
  out.reserve(t_max);
  std::size_t m = 0;
  for (std::size_t e = 0; e < t_max; ++e, m = cs.next_memory(m)) out.push_back(m);
  return out;
}

using ActionRow = std::vector<std::int8_t>;

/// Per-state actions at elapsed steps 0..t_max-1.
inline std::vector<ActionRow> unroll(const CounterStrategy& cs, std::size_t t_max) {
  std::vector<ActionRow> rows;
  rows.reserve(t_max);
  for (std::size_t m : memory_trajectory(cs, t_max)) {
    ActionRow row(cs.states());
    for (std::size_t s = 0; s < cs.states(); ++s) row[s] = static_cast<std::int8_t>(cs.action(m, s));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Elapsed-indexed view of a Markov strategy over its first `horizon` moves.
inline std::vector<ActionRow> elapsed_rows(const MarkovStrategy& sigma, std::size_t horizon) {
  std::vector<ActionRow> rows(horizon, ActionRow(sigma.states()));
  for (std::size_t e = 0; e < horizon; ++e)
    for (std::size_t s = 0; s < sigma.states(); ++s)
      rows[e][s] = static_cast<std::int8_t>(sigma.at(horizon - e, s));
  return rows;
}

/// Least N such that rows[e] == rows[e + p] for all N <= e < size - p.
inline std::size_t least_initial_phase(const std::vector<ActionRow>& rows, std::size_t p) {
  for (std::size_t e = rows.size(); e-- > 0;)
    if (e + p < rows.size() && rows[e] != rows[e + p]) return e + 1;
  return 0;
}

/// Counter strategy with the fewest memories (N + p, then smallest p) whose
/// unrolled actions equal `sigma` over elapsed steps 0..horizon-1.
inline CounterStrategy from_markov(const MarkovStrategy& sigma, std::size_t horizon) {
  const auto rows = elapsed_rows(sigma, horizon);
  std::size_t best_n = 0, best_p = 1;
  if (horizon > 0) {
    best_n = least_initial_phase(rows, 1);
    for (std::size_t p = 2; p <= horizon && p < best_n + best_p; ++p) {
      const std::size_t n = least_initial_phase(rows, p);
      if (n + p < best_n + best_p) best_n = n, best_p = p;
    }
  }
  CounterStrategy cs(best_n, best_p, sigma.states());
  for (std::size_t m = 0; m < cs.memory_count(); ++m) {
    // first elapsed step that uses memory m, if any
    std::optional<std::size_t> e;
    if (m < horizon) e = m;
    for (std::size_t s = 0; s < sigma.states(); ++s) {
      if (horizon == 0) continue;
      const int ref = rows[0][s];
      if (ref < 0) continue;
      cs.set_action(m, s, e ? rows[*e][s] : 0);
    }
  }
  return cs;
}

/// Elapsed-indexed optimal arc sets; mask 0 marks states left out of the analysis.
class ActionSetSequence {
 public:
  ActionSetSequence(std::size_t length, std::size_t states)
      : length_(length), states_(states), masks_(length * states, 0) {}

  /// `player` restricts to one player's states; nullopt keeps every controlled state.
  static ActionSetSequence from(const OptimalActionSets& sets, const Game& g,
                                std::optional<Player> player = std::nullopt) {
    ActionSetSequence seq(sets.horizon(), g.size());
    for (std::size_t e = 0; e < sets.horizon(); ++e)
      for (std::size_t s = 0; s < g.size(); ++s) {
        const bool keep = player ? g.is_controlled_by(s, *player) : g.is_controlled(s);
        if (keep) seq.set(e, s, sets.mask(sets.horizon() - e, s));
      }
    return seq;
  }

  std::size_t length() const { return length_; }
  std::size_t states() const { return states_; }
  ArcMask mask(std::size_t e, std::size_t s) const { return masks_[e * states_ + s]; }
  void set(std::size_t e, std::size_t s, ArcMask m) { masks_[e * states_ + s] = m; }

 private:
  std::size_t length_;
  std::size_t states_;
  std::vector<ArcMask> masks_;
};

/// Least N such that, for every state and residue class mod p, the sets at
/// elapsed steps e >= N in that class share an arc.
inline std::size_t least_initial_phase(const ActionSetSequence& seq, std::size_t p) {
  std::vector<ArcMask> acc(p * seq.states(), kBothArcs);
  for (std::size_t e = seq.length(); e-- > 0;) {
    ArcMask* row = acc.data() + (e % p) * seq.states();
    for (std::size_t s = 0; s < seq.states(); ++s) {
      const ArcMask m = seq.mask(e, s);
      if (m == 0) continue;
      row[s] &= m;
      if (row[s] == 0) return e + 1;
    }
  }
  return 0;
}

struct PeriodResult {
  std::size_t initial;
  std::size_t period;
  CounterStrategy witness;
};

inline int lowest_arc(ArcMask m) { return (m & kArc0) ? 0 : 1; }

/// Counter strategy with the fewest memories (N + p, smallest p on ties) that
/// plays an optimal arc at every elapsed step; every strategy it admits is
/// consistent with the arc sets.
inline PeriodResult minimal_period_of_optimal(const ActionSetSequence& seq) {
  const std::size_t len = seq.length();
  std::size_t best_n = 0, best_p = 1;
  if (len > 0) {
    best_n = least_initial_phase(seq, 1);
    for (std::size_t p = 2; p <= len && p < best_n + best_p; ++p) {
      const std::size_t n = least_initial_phase(seq, p);
      if (n + p < best_n + best_p) best_n = n, best_p = p;
    }
  }
  CounterStrategy cs(best_n, best_p, seq.states());
  for (std::size_t s = 0; s < seq.states(); ++s) {
    if (len == 0 || seq.mask(0, s) == 0) continue;
    for (std::size_t m = 0; m < best_n; ++m) cs.set_action(m, s, lowest_arc(seq.mask(m, s)));
    for (std::size_t r = 0; r < best_p; ++r) {
      ArcMask acc = kBothArcs;
      for (std::size_t e = best_n + r; e < len; e += best_p) acc &= seq.mask(e, s);
      cs.set_action(best_n + r, s, lowest_arc(acc));
    }
  }
  return {best_n, best_p, std::move(cs)};
}

/// Value table when `player` follows `cs` and the opponent best-responds.
/// The product (memory x state) is explored along the one memory the counter
/// holds at each elapsed step.
inline ValueTable evaluate_counter(const Game& g, std::size_t horizon, const CounterStrategy& cs, Player player,
                                   std::size_t product_cap = std::size_t{1} << 24) {
  if (cs.states() != g.size()) throw std::invalid_argument("counter strategy size mismatch");
  if (cs.memory_count() * g.size() > product_cap)
    throw guard_exceeded("memory x state product " + std::to_string(cs.memory_count() * g.size()) +
                         " exceeds cap " + std::to_string(product_cap));
  return detail::full_sweep(g, horizon, [&](std::size_t t, std::size_t s) {
    if (!g.is_controlled_by(s, player)) return -1;
    const int arc = cs.action(cs.memory_at(horizon - t), s);
    detail::require_fixed_entry(g, t, s, arc);
    return arc;
  });
}

inline nlohmann::ordered_json to_json(const CounterStrategy& cs, const Game& g) {
  nlohmann::ordered_json j;
  j["N"] = cs.initial();
  j["p"] = cs.period();
  j["actions"] = nlohmann::ordered_json::array();
  for (std::size_t m = 0; m < cs.memory_count(); ++m)
    for (std::size_t s = 0; s < cs.states(); ++s)
      if (const int a = cs.action(m, s); a >= 0)
        j["actions"].push_back({{"memory", m}, {"state", g.id(s)}, {"arc", a}});
  return j;
}

inline CounterStrategy counter_from_json(const nlohmann::ordered_json& j, const Game& g) {
  CounterStrategy cs(j.at("N").get<std::size_t>(), j.at("p").get<std::size_t>(), g.size());
  for (const auto& a : j.at("actions")) {
    const auto m = a.at("memory").get<std::size_t>();
    const int arc = a.at("arc").get<int>();
    if (m >= cs.memory_count() || (arc != 0 && arc != 1))
      throw std::invalid_argument("counter strategy action out of range");
    cs.set_action(m, g.index_of(a.at("state").get<std::string>()), arc);
  }
  return cs;
}

}  // namespace ssg
