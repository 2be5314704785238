#pragma once

// Generators for the four gadget families and prime utilities.
//
// Naming: the terminal is "bot", the absorbing trap is "top", a starred state
// j* is "js". Copies inside F_k carry an "@c" suffix (copy c = 1..k) and the
// max state of copy c is "m_c".

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/numeric.hpp"

namespace ssg {

inline constexpr const char* kTerminalId = "bot";

namespace detail {

inline StateDecl coin(std::string id, std::string a, std::string b) {
  return {std::move(id), StateKind::coin, {std::move(a), std::move(b)}};
}
inline StateDecl max_state(std::string id, std::string a, std::string b) {
  return {std::move(id), StateKind::max, {std::move(a), std::move(b)}};
}
inline StateDecl terminal() { return {kTerminalId, StateKind::terminal, {}}; }

/// G_p states with every non-terminal id suffixed; 0* is the terminal.
inline std::vector<StateDecl> g_states(std::size_t p, const std::string& suffix, const std::string& max_id) {
  auto star = [&](std::size_t j) { return j == 0 ? std::string(kTerminalId) : std::to_string(j) + "s" + suffix; };
  auto plain = [&](std::size_t j) { return std::to_string(j) + suffix; };
  std::vector<StateDecl> out;
  out.push_back(max_state(max_id, plain(1), plain(2)));
  for (std::size_t j = 1; j <= p; ++j)
    out.push_back(j == 1 ? coin(plain(1), kTerminalId, plain(p)) : coin(plain(j), star(j - 1), plain(j - 1)));
  for (std::size_t j = 1; j < p; ++j) out.push_back(coin(star(j), star(j - 1), star(j - 1)));
  return out;
}

}  // namespace detail

/// Lower bound gadget for log log(1/eps): x chooses between a two-step
/// deterministic path to the terminal and a fair gamble at h.
inline Game make_M() {
  using namespace detail;
  GameDescription d;
  d.start = "start";
  d.states = {
      coin("start", "start", "x"),
      max_state("x", "2", "h"),
      coin("2", "1", "1"),
      coin("1", kTerminalId, kTerminalId),
      coin("h", "top", kTerminalId),
      coin("top", "top", "top"),
      terminal(),
  };
  return Game(d);
}

/// H(i): a reset chain i*..1* feeding x, and a reset chain i..1 feeding the
/// terminal. Starts at i*.
inline Game make_H(std::size_t i) {
  using namespace detail;
  if (i < 1) throw std::invalid_argument("H(i) needs i >= 1");
  const std::string top_chain = std::to_string(i);
  const std::string top_star = std::to_string(i) + "s";
  GameDescription d;
  d.start = top_star;
  d.states.push_back(coin("top", "top", "top"));
  d.states.push_back(coin("h", "top", kTerminalId));
  d.states.push_back(max_state("x", top_chain, "h"));
  for (std::size_t j = 1; j <= i; ++j)
    d.states.push_back(j == 1 ? coin("1", kTerminalId, top_chain)
                              : coin(std::to_string(j), top_chain, std::to_string(j - 1)));
  for (std::size_t j = 1; j <= i; ++j)
    d.states.push_back(j == 1 ? coin("1s", top_star, "x")
                              : coin(std::to_string(j) + "s", top_star, std::to_string(j - 1) + "s"));
  d.states.push_back(terminal());
  return Game(d);
}

/// G_p: 2p - 1 coin states plus a max state choosing between states 1 and 2.
inline Game make_G(std::size_t p) {
  if (p < 2) throw std::invalid_argument("G_p needs p >= 2");
  GameDescription d;
  d.start = "max";
  d.states = detail::g_states(p, "", "max");
  d.states.push_back(detail::terminal());
  return Game(d);
}

/// First k primes by trial division against the primes found so far.
inline std::vector<std::size_t> primes(std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t n = 2; out.size() < k; ++n) {
    bool prime = true;
    for (std::size_t q : out) {
      if (q * q > n) break;
      if (n % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

inline std::uint64_t primorial(std::size_t k) {
  std::uint64_t prod = 1;
  for (std::size_t q : primes(k)) prod *= q;
  return prod;
}

inline std::string f_copy_id(std::size_t copy, const std::string& local) {
  return local + "@" + std::to_string(copy);
}
inline std::string f_max_id(std::size_t copy) { return "m_" + std::to_string(copy); }

/// F_k: disjoint copies of G_{p_1}..G_{p_k} sharing one terminal; starts at m_1.
inline Game make_F(std::size_t k) {
  if (k < 1) throw std::invalid_argument("F_k needs k >= 1");
  GameDescription d;
  d.start = f_max_id(1);
  const auto ps = primes(k);
  for (std::size_t c = 1; c <= k; ++c) {
    auto copy = detail::g_states(ps[c - 1], "@" + std::to_string(c), f_max_id(c));
    d.states.insert(d.states.end(), copy.begin(), copy.end());
  }
  d.states.push_back(detail::terminal());
  return Game(d);
}

enum class GadgetFamily { M, H, G, F };

struct GadgetSpec {
  GadgetFamily family;
  std::size_t parameter = 0;  // unused for M
};

inline GadgetFamily parse_gadget_family(std::string_view s) {
  if (s == "M") return GadgetFamily::M;
  if (s == "H") return GadgetFamily::H;
  if (s == "G") return GadgetFamily::G;
  if (s == "F") return GadgetFamily::F;
  throw std::invalid_argument("unknown gadget family '" + std::string(s) + "'");
}

inline Game make_gadget(const GadgetSpec& spec) {
  switch (spec.family) {
    case GadgetFamily::M: return make_M();
    case GadgetFamily::H: return make_H(spec.parameter);
    case GadgetFamily::G: return make_G(spec.parameter);
    case GadgetFamily::F: return make_F(spec.parameter);
  }
  throw std::invalid_argument("unknown gadget family");
}

/// Same arena with `target_id` as the terminal; the old terminal becomes an
/// absorbing trap. Used to measure hitting probabilities of interior states.
inline Game with_target(const Game& g, std::string_view target_id) {
  auto d = g.describe();
  const std::string old = g.id(g.terminal());
  for (auto& s : d.states) {
    if (s.id == target_id) {
      s.kind = StateKind::terminal;
      s.arcs.clear();
    } else if (s.id == old) {
      s.kind = StateKind::coin;
      s.arcs = {old, old};
    }
  }
  return Game(d);
}

/// f_i(t): largest t' <= t with t' = i (mod p), or 0.
inline std::uint64_t gp_exponent(std::uint64_t i, std::uint64_t t, std::uint64_t p) {
  const std::uint64_t r = i % p;
  if (t < r || (r == 0 && t < p)) return 0;
  return t - (t + p - r) % p;
}

/// The state at which H(i) is analysed is i* with 2k + 1 moves remaining.
inline std::uint64_t analysis_horizon_H(unsigned i) { return 2 * k_threshold(i) + 1; }

}  // namespace ssg
