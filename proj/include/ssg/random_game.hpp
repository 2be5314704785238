#pragma once

#include <random>
#include <string>

#include "ssg/game.hpp"

namespace ssg {

/// Engine used by every seeded routine; reports record kRngName.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

struct RandomGameOptions {
  bool allow_min = true;  // false generates MDPs
};

/// `n` states in total, one of them the terminal "bot"; the others are
/// "s0".."s{n-2}" with uniformly drawn kinds and arc targets. n >= 2.
inline Game random_game(std::size_t n, Rng& rng, RandomGameOptions opt = {}) {
  if (n < 2) throw std::invalid_argument("random_game needs n >= 2");
  std::uniform_int_distribution<std::size_t> target(0, n - 1);
  std::uniform_int_distribution<int> kind(0, opt.allow_min ? 2 : 1);
  auto name = [n](std::size_t i) { return i + 1 == n ? std::string("bot") : "s" + std::to_string(i); };
  GameDescription d;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int k = kind(rng);
    StateDecl s{name(i), k == 0 ? StateKind::coin : k == 1 ? StateKind::max : StateKind::min, {}};
    s.arcs = {name(target(rng)), name(target(rng))};
    d.states.push_back(std::move(s));
  }
  d.states.push_back({"bot", StateKind::terminal, {}});
  d.start = name(std::uniform_int_distribution<std::size_t>(0, n - 2)(rng));
  return Game(d);
}

}  // namespace ssg
