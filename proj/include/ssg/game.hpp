#pragma once

// Arena data model: Max, Min and Coin states with exactly two ordered arcs
// each, one absorbing terminal state, and a designated start state.

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ssg {

enum class StateKind { max, min, coin, terminal };

enum class Player { max = 1, min = 2 };

inline const char* to_string(StateKind k) {
  switch (k) {
    case StateKind::max: return "max";
    case StateKind::min: return "min";
    case StateKind::coin: return "coin";
    case StateKind::terminal: return "terminal";
  }
  return "?";
}

inline StateKind parse_state_kind(std::string_view s) {
  if (s == "max") return StateKind::max;
  if (s == "min") return StateKind::min;
  if (s == "coin") return StateKind::coin;
  if (s == "terminal") return StateKind::terminal;
  throw std::invalid_argument("unknown state kind '" + std::string(s) + "'");
}

inline StateKind kind_of(Player p) { return p == Player::max ? StateKind::max : StateKind::min; }
inline Player opponent(Player p) { return p == Player::max ? Player::min : Player::max; }

/// Unchecked, name-based description of an arena, as it appears in a file.
struct StateDecl {
  std::string id;
  StateKind kind = StateKind::coin;
  std::vector<std::string> arcs;

  friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct GameDescription {
  std::string start;
  std::vector<StateDecl> states;

  friend bool operator==(const GameDescription&, const GameDescription&) = default;
};

struct Violation {
  std::string state;  // empty for game-level problems
  std::string reason;  // arc-count, dangling-destination, ...
  std::string detail;

  std::string to_string() const {
    return reason + (state.empty() ? "" : " at '" + state + "'") +
           (detail.empty() ? "" : ": " + detail);
  }
};

inline std::vector<Violation> validate(const GameDescription& desc) {
  std::vector<Violation> out;
  std::unordered_set<std::string> ids;
  std::size_t terminals = 0;
  for (const auto& s : desc.states) {
    if (s.id.empty()) out.push_back({s.id, "empty-id", ""});
    if (!ids.insert(s.id).second) out.push_back({s.id, "duplicate-id", ""});
    if (s.kind == StateKind::terminal) {
      ++terminals;
      if (!s.arcs.empty())
        out.push_back({s.id, "terminal-arcs", "terminal state must have no arcs"});
    } else if (s.arcs.size() != 2) {
      out.push_back({s.id, "arc-count",
                     "expected 2 arcs, found " + std::to_string(s.arcs.size())});
    }
  }
  for (const auto& s : desc.states)
    for (const auto& a : s.arcs)
      if (!ids.contains(a)) out.push_back({s.id, "dangling-destination", "unknown id '" + a + "'"});
  if (terminals != 1)
    out.push_back({"", "terminal-count",
                   "expected exactly one terminal, found " + std::to_string(terminals)});
  if (!ids.contains(desc.start))
    out.push_back({"", "dangling-start", "unknown start '" + desc.start + "'"});
  return out;
}

class invalid_game : public std::invalid_argument {
 public:
  explicit invalid_game(std::vector<Violation> v)
      : std::invalid_argument(summarize(v)), violations_(std::move(v)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& v) {
    std::string s = "invalid game:";
    for (const auto& x : v) s += " [" + x.to_string() + "]";
    return s;
  }
  std::vector<Violation> violations_;
};

/// A validated arena with index-based arcs. Immutable once built.
class Game {
 public:
  struct State {
    std::string id;
    StateKind kind;
    std::array<std::size_t, 2> arcs;  // unused for the terminal
  };

  explicit Game(const GameDescription& desc) {
    if (auto v = validate(desc); !v.empty()) throw invalid_game(std::move(v));
    states_.reserve(desc.states.size());
    for (std::size_t i = 0; i < desc.states.size(); ++i) index_.emplace(desc.states[i].id, i);
    for (const auto& s : desc.states) {
      State st{s.id, s.kind, {0, 0}};
      if (s.kind != StateKind::terminal)
        st.arcs = {index_.at(s.arcs[0]), index_.at(s.arcs[1])};
      else
        terminal_ = states_.size();
      states_.push_back(std::move(st));
    }
    start_ = index_.at(desc.start);
  }

  std::size_t size() const { return states_.size(); }
  std::size_t non_terminal_count() const { return states_.size() - 1; }
  const State& state(std::size_t s) const { return states_[s]; }
  const std::vector<State>& states() const { return states_; }
  std::size_t start() const { return start_; }
  std::size_t terminal() const { return terminal_; }
  StateKind kind(std::size_t s) const { return states_[s].kind; }
  std::size_t dest(std::size_t s, int arc) const { return states_[s].arcs[static_cast<std::size_t>(arc)]; }
  const std::string& id(std::size_t s) const { return states_[s].id; }

  bool contains(std::string_view id) const { return index_.contains(std::string(id)); }
  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw std::out_of_range("no state '" + std::string(id) + "'");
    return it->second;
  }

  bool is_controlled(std::size_t s) const {
    return states_[s].kind == StateKind::max || states_[s].kind == StateKind::min;
  }
  bool is_controlled_by(std::size_t s, Player p) const { return states_[s].kind == kind_of(p); }

  std::vector<std::size_t> controlled_states(Player p) const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < size(); ++s)
      if (is_controlled_by(s, p)) out.push_back(s);
    return out;
  }
  std::vector<std::size_t> controlled_states() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < size(); ++s)
      if (is_controlled(s)) out.push_back(s);
    return out;
  }

  /// Same arena with a different start state.
  Game with_start(std::string_view id) const {
    auto d = describe();
    d.start = std::string(id);
    return Game(d);
  }

  GameDescription describe() const {
    GameDescription d;
    d.start = states_[start_].id;
    for (const auto& s : states_) {
      StateDecl decl{s.id, s.kind, {}};
      if (s.kind != StateKind::terminal) decl.arcs = {states_[s.arcs[0]].id, states_[s.arcs[1]].id};
      d.states.push_back(std::move(decl));
    }
    return d;
  }

  friend bool operator==(const Game& a, const Game& b) { return a.describe() == b.describe(); }

 private:
  std::vector<State> states_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t start_ = 0;
  std::size_t terminal_ = 0;
};

inline std::vector<Violation> validate(const Game& g) { return validate(g.describe()); }

inline bool is_mdp(const Game& g) {
  for (const auto& s : g.states())
    if (s.kind == StateKind::min) return false;
  return true;
}

}  // namespace ssg
