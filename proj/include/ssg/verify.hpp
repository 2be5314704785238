#pragma once

// Report-producing checks of the inequalities, values and memory/period
// claims that the gadget constructions rely on, at desk scale.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssg/counter.hpp"
#include "ssg/gadgets.hpp"
#include "ssg/game.hpp"
#include "ssg/game_io.hpp"
#include "ssg/numeric.hpp"
#include "ssg/oracle.hpp"
#include "ssg/random_game.hpp"
#include "ssg/solver.hpp"

namespace ssg {

using Json = nlohmann::ordered_json;

/// informational: the parameters are outside the range the claim covers, so a
/// failure there is recorded but does not count against the run.
enum class Verdict { pass, fail, inconclusive, informational };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::informational: return "informational";
  }
  return "?";
}

struct CheckReport {
  std::string name;
  Json parameters = Json::object();
  Verdict verdict = Verdict::pass;
  Json evidence = Json::object();
  double runtime_seconds = 0;

  bool ok() const { return verdict == Verdict::pass || verdict == Verdict::informational; }

  /// Runtime is left out unless asked for, so that reports are reproducible byte for byte.
  Json to_json(bool with_runtime = false) const {
    Json j;
    j["check"] = name;
    j["parameters"] = parameters;
    j["verdict"] = to_string(verdict);
    j["evidence"] = evidence;
    if (with_runtime) j["runtime_seconds"] = runtime_seconds;
    return j;
  }
};

/// fail > inconclusive > pass
inline Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) { return v == Verdict::fail ? 2 : v == Verdict::inconclusive ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

inline Verdict from_certainty(Certainty c) {
  return c == Certainty::proven ? Verdict::pass : c == Certainty::refuted ? Verdict::fail : Verdict::inconclusive;
}

namespace detail {

template <class Body>
CheckReport timed(std::string name, Json parameters, Body&& body) {
  CheckReport r;
  r.name = std::move(name);
  r.parameters = std::move(parameters);
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void mark_regime(CheckReport& r, bool in_regime) {
  r.evidence["in_regime"] = in_regime;
  if (!in_regime && r.verdict != Verdict::pass) r.verdict = Verdict::informational;
}

inline BigInt floor_mul(const Rational& d, std::uint64_t k) {
  BigInt num = d.get_num() * BigInt(static_cast<unsigned long>(k));
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), d.get_den().get_mpz_t());
  return q;
}

inline BigInt ceil_mul(const Rational& d, std::uint64_t k) {
  BigInt num = d.get_num() * BigInt(static_cast<unsigned long>(k));
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), d.get_den().get_mpz_t());
  return q;
}

inline Json enclosure_json(const IntervalEnclosure& e) {
  return {{"lower", to_string(e.lower)}, {"upper", to_string(e.upper)}};
}

inline Json rational_list(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fibonacci and tail-probability inequalities

/// F_b <= 2 F_{b-1} for 3 <= b <= a_max and F_a <= (2 - 2^{-i-1}) F_{a-1} for
/// i+3 <= a <= a_max, by integer cross-multiplication.
inline CheckReport check_fai(unsigned i, std::uint64_t a_max) {
  return detail::timed("fai", {{"i", i}, {"amax", a_max}}, [&](CheckReport& r) {
    FibTable f(i);
    BigInt num = 1, den = 1;
    num <<= (i + 2);
    num -= 1;  // 2^{i+2} - 1
    den <<= (i + 1);
    std::uint64_t doubling = 0, ratio = 0;
    Json first = nullptr;
    for (std::uint64_t a = 3; a <= a_max; ++a) {
      const auto c = static_cast<long>(a);
      ++doubling;
      if (f.at(c) > 2 * f.at(c - 1) && first.is_null())
        first = {{"inequality", "doubling"}, {"a", a}};
      if (a >= i + 3) {
        ++ratio;
        if (f.at(c) * den > num * f.at(c - 1) && first.is_null()) first = {{"inequality", "ratio"}, {"a", a}};
      }
    }
    r.evidence["doubling_checked"] = doubling;
    r.evidence["ratio_checked"] = ratio;
    r.evidence["first_violation"] = first;
    r.verdict = first.is_null() ? Verdict::pass : Verdict::fail;
  });
}

/// k_threshold(i) >= 2^{i-2} + i for 1 <= i <= i_max.
inline CheckReport check_kexp(unsigned i_max, unsigned i_min = 1) {
  return detail::timed("kexp", {{"imin", i_min}, {"imax", i_max}}, [&](CheckReport& r) {
    r.evidence["instances"] = Json::array();
    for (unsigned i = std::max(1u, i_min); i <= i_max; ++i) {
      const std::uint64_t k = k_threshold(i);
      // 2^{i-2} + i, a half-integer when i = 1
      const Rational bound = (i >= 2 ? Rational(BigInt(1) << (i - 2)) : Rational(1, 2)) + Rational(i);
      const bool holds = Rational(BigInt(static_cast<unsigned long>(k))) >= bound;
      r.evidence["instances"].push_back({{"i", i}, {"k", k}, {"bound", to_string(bound)}, {"holds", holds}});
      if (!holds) r.verdict = Verdict::fail;
    }
  });
}

/// e^{-1/8} >= (1 - 2^{-i-2})^k >= 1/4 and e^{-1/8} >= (1 - 2^{-i-2})^{k-i} >= 1/2.
inline CheckReport check_k_sandwich(unsigned i, const Rational& width = Rational(1, 1000000)) {
  return detail::timed("k_sandwich", {{"i", i}, {"width", to_string(width)}}, [&](CheckReport& r) {
    const std::uint64_t k = k_threshold(i);
    const Dyadic base = Dyadic::one_minus_pow2_neg(i + 2);
    const auto e = exp_enclosure(Rational(-1, 8), width);
    r.evidence["k"] = k;
    r.evidence["base"] = base.to_string();
    r.evidence["exp_minus_1_8"] = detail::enclosure_json(e);
    r.evidence["bounds"] = Json::array();
    auto side = [&](std::uint64_t power, const Rational& floor_value) {
      const Dyadic v = pow(base, power);
      const Rational q = v.to_rational();
      const Verdict lower = q >= floor_value ? Verdict::pass : Verdict::fail;
      const Certainty up = certify_le(q, e);
      r.evidence["bounds"].push_back({{"power", power},
                                      {"approx", v.to_decimal(12)},
                                      {"lower_bound", to_string(floor_value)},
                                      {"lower", to_string(lower)},
                                      {"upper", to_string(up)}});
      r.verdict = worst(r.verdict, worst(lower, from_certainty(up)));
    };
    side(k, Rational(1, 4));
    side(k >= i ? k - i : 0, Rational(1, 2));
    detail::mark_regime(r, i >= 12);
  });
}

/// p^{2t-2i} <= 2 p^t for i <= t <= t_max.
inline CheckReport check_half_t(unsigned i, std::uint64_t t_max) {
  return detail::timed("half_t", {{"i", i}, {"tmax", t_max}}, [&](CheckReport& r) {
    TailProbabilities tp(i);
    std::uint64_t checked = 0;
    Json first = nullptr;
    for (std::uint64_t t = i; t <= t_max; ++t) {
      ++checked;
      const Dyadic lhs = tp.p(2 * t - 2 * i);
      const Dyadic rhs = tp.p(t) * Dyadic(2);
      if (lhs > rhs && first.is_null()) first = {{"t", t}, {"lhs", lhs.to_string()}, {"rhs", rhs.to_string()}};
    }
    r.evidence["checked"] = checked;
    r.evidence["first_violation"] = first;
    r.verdict = first.is_null() ? Verdict::pass : Verdict::fail;
  });
}

/// p^{floor(dk)} <= 1 - e^{(1-d)/8} / 2 for each d.
inline CheckReport check_pdk(unsigned i, const std::vector<Rational>& ds,
                             const Rational& width = Rational(1, 1000000)) {
  return detail::timed("pdk", {{"i", i}, {"d", detail::rational_list(ds)}, {"width", to_string(width)}},
                       [&](CheckReport& r) {
    const std::uint64_t k = k_threshold(i);
    TailProbabilities tp(i);
    r.evidence["k"] = k;
    r.evidence["instances"] = Json::array();
    bool in_regime = i >= 12;
    for (const auto& d : ds) {
      in_regime = in_regime && d > Rational(1, 10) && d < 1;
      const BigInt idx = detail::floor_mul(d, k);
      const Dyadic p = tp.p(idx.get_ui());
      const auto bound = exp_enclosure((1 - d) / 8, width).affine(Rational(-1, 2), 1);
      const Certainty c = certify_le(p.to_rational(), bound);
      r.evidence["instances"].push_back({{"d", to_string(d)},
                                         {"t", idx.get_ui()},
                                         {"p_approx", p.to_decimal(12)},
                                         {"bound", detail::enclosure_json(bound)},
                                         {"result", to_string(c)}});
      r.verdict = worst(r.verdict, from_certainty(c));
    }
    detail::mark_regime(r, in_regime);
  });
}

/// p^{ceil((1+d)k)} >= 1 - e^{-d/8} / 2 for each d.
inline CheckReport check_gtk(unsigned i, const std::vector<Rational>& ds,
                             const Rational& width = Rational(1, 1000000)) {
  return detail::timed("gtk", {{"i", i}, {"d", detail::rational_list(ds)}, {"width", to_string(width)}},
                       [&](CheckReport& r) {
    const std::uint64_t k = k_threshold(i);
    TailProbabilities tp(i);
    r.evidence["k"] = k;
    r.evidence["instances"] = Json::array();
    bool in_regime = i >= 12;
    for (const auto& d : ds) {
      in_regime = in_regime && d > 0;
      const BigInt idx = detail::ceil_mul(1 + d, k);
      const Dyadic p = tp.p(idx.get_ui());
      const auto bound = exp_enclosure(-d / 8, width).affine(Rational(-1, 2), 1);
      const Certainty c = certify_ge(p.to_rational(), bound);
      r.evidence["instances"].push_back({{"d", to_string(d)},
                                         {"t", idx.get_ui()},
                                         {"p_approx", p.to_decimal(12)},
                                         {"bound", detail::enclosure_json(bound)},
                                         {"result", to_string(c)}});
      r.verdict = worst(r.verdict, from_certainty(c));
    }
    detail::mark_regime(r, in_regime);
  });
}

// ---------------------------------------------------------------------------
// Gadget values, periods and memory

/// Every state of G_p against its closed form, for t = 0..t_max.
inline CheckReport check_gp_values(std::size_t p, std::size_t t_max) {
  return detail::timed("gp_values", {{"p", p}, {"tmax", t_max}}, [&](CheckReport& r) {
    const Game g = make_G(p);
    const ValueTable v = backward_induction(g, t_max);
    std::uint64_t checked = 0;
    Json first = nullptr;
    auto expect = [&](std::size_t t, const std::string& id, const Dyadic& want) {
      ++checked;
      const Dyadic& got = v.at(t, g.index_of(id));
      if (got != want && first.is_null())
        first = {{"t", t}, {"state", id}, {"expected", want.to_string()}, {"actual", got.to_string()}};
    };
    for (std::size_t t = 0; t <= t_max; ++t) {
      for (std::size_t j = 1; j <= p; ++j)
        expect(t, std::to_string(j), Dyadic::one_minus_pow2_neg(gp_exponent(j, t, p)));
      for (std::size_t j = 1; j < p; ++j) expect(t, std::to_string(j) + "s", Dyadic(t >= j ? 1 : 0));
    }
    r.evidence["checked"] = checked;
    if (t_max >= 1) r.evidence["state_1_at_t1"] = v.at(1, g.index_of("1")).to_string();
    r.evidence["first_mismatch"] = first;
    r.verdict = first.is_null() ? Verdict::pass : Verdict::fail;
  });
}

/// Minimal period of the optimal arc sets of F_k at T = 2P + 10, where P is
/// the k-th primorial, together with the state count and the per-copy
/// pattern: at m_c with r moves left the only optimal arc goes to copy state 1
/// iff r = 2 (mod p_c), for every r >= 2.
inline CheckReport check_fk_period(std::size_t k, std::uint64_t cell_cap = std::uint64_t{1} << 22) {
  return detail::timed("fk_period", {{"k", k}}, [&](CheckReport& r) {
    const Game g = make_F(k);
    const auto ps = primes(k);
    const std::uint64_t big_p = primorial(k);
    const std::size_t horizon = static_cast<std::size_t>(2 * big_p + 10);
    if (static_cast<std::uint64_t>(horizon) * g.size() > cell_cap)
      throw guard_exceeded("F_k horizon x states exceeds cap " + std::to_string(cell_cap));
    std::size_t expected_states = 0;
    for (auto q : ps) expected_states += 2 * q;

    const auto sets = optimal_action_sets(g, horizon);
    const auto seq = ActionSetSequence::from(sets, g, Player::max);
    const auto res = minimal_period_of_optimal(seq);

    // smallest N' + p' over p' < P
    std::optional<std::pair<std::size_t, std::size_t>> best_smaller;
    for (std::size_t q = 1; q < big_p && q <= horizon; ++q) {
      const std::size_t n = least_initial_phase(seq, q);
      if (!best_smaller || n + q < best_smaller->first + best_smaller->second) best_smaller = {{n, q}};
    }
    const bool smaller_infeasible = !best_smaller || best_smaller->first + best_smaller->second > res.initial + res.period;

    std::uint64_t pattern_checked = 0;
    Json pattern_first = nullptr;
    for (std::size_t c = 1; c <= k; ++c) {
      const std::size_t m = g.index_of(f_max_id(c));
      for (std::size_t rem = 2; rem <= horizon; ++rem) {
        ++pattern_checked;
        const ArcMask want = (rem % ps[c - 1] == 2 % ps[c - 1]) ? kArc0 : kArc1;
        if (sets.mask(rem, m) != want && pattern_first.is_null())
          pattern_first = {{"state", f_max_id(c)}, {"remaining", rem}, {"mask", sets.mask(rem, m)}};
      }
    }

    r.evidence["primes"] = ps;
    r.evidence["horizon"] = horizon;
    r.evidence["expected_period"] = big_p;
    r.evidence["N"] = res.initial;
    r.evidence["period"] = res.period;
    r.evidence["non_terminal_states"] = g.non_terminal_count();
    r.evidence["expected_states"] = expected_states;
    r.evidence["best_smaller_period"] =
        best_smaller ? Json{{"N", best_smaller->first}, {"p", best_smaller->second}} : Json(nullptr);
    r.evidence["smaller_periods_infeasible"] = smaller_infeasible;
    r.evidence["pattern_checked"] = pattern_checked;
    r.evidence["pattern_first_violation"] = pattern_first;
    r.evidence["witness"] = to_json(res.witness, g);
    const bool ok = res.period == big_p && g.non_terminal_count() == expected_states && smaller_infeasible &&
                    pattern_first.is_null();
    r.verdict = ok ? Verdict::pass : Verdict::fail;
  });
}

/// Fewest counter memories that get within 2^-c of val(M^{c-1}), against the
/// claimed lower bound c - 2.
inline CheckReport check_M_memory(std::size_t c, std::uint64_t max_candidates = std::uint64_t{1} << 24) {
  return detail::timed("M_memory", {{"c", c}}, [&](CheckReport& r) {
    if (c < 2 || c > 8) throw std::invalid_argument("check_M_memory needs 2 <= c <= 8");
    const Game g = make_M();
    const std::size_t horizon = c - 1;
    const auto res = best_counter_memory_bruteforce(g, horizon, Dyadic::pow2_neg(c), c, max_candidates);
    r.evidence["horizon"] = horizon;
    r.evidence["epsilon"] = Dyadic::pow2_neg(c).to_string();
    r.evidence["optimum"] = res.optimum.to_string();
    r.evidence["bound"] = c - 2;
    r.evidence["explored"] = res.explored;
    if (res.memory) {
      r.evidence["minimum_memory"] = *res.memory;
      r.evidence["achieved"] = res.achieved.to_string();
      r.evidence["witness"] = to_json(*res.witness, g);
    } else {
      r.evidence["minimum_memory"] = "exceeds " + std::to_string(c);
    }
    r.verdict = (!res.memory || *res.memory >= c - 2) ? Verdict::pass : Verdict::fail;
    detail::mark_regime(r, c >= 5);
  });
}

/// The infinite-horizon optimal memoryless Max strategy, played for
/// T = 2 j 2^n moves (n non-terminal states), loses at most 2^-j against the
/// finite-horizon value, for j = 1..j_max.
inline CheckReport check_upper_bound(const Game& g, unsigned j_max, const std::string& label = "",
                                     std::uint64_t horizon_cap = std::uint64_t{1} << 20) {
  Json params = {{"game", label}, {"jmax", j_max}};
  return detail::timed("upper_bound", std::move(params), [&](CheckReport& r) {
    const auto inf = solve_infinite_bruteforce(g);
    const std::size_t n = g.non_terminal_count();
    if (n >= 40) throw guard_exceeded("2^n horizon overflows");
    Json sigma = Json::object();
    for (auto s : g.controlled_states(Player::max)) sigma[g.id(s)] = inf.sigma1[s];
    Json values = Json::object();
    for (std::size_t s = 0; s < g.size(); ++s) values[g.id(s)] = to_string(inf.values[s]);
    r.evidence["n"] = n;
    r.evidence["infinite_values"] = values;
    r.evidence["sigma1"] = sigma;
    r.evidence["instances"] = Json::array();
    for (unsigned j = 1; j <= j_max; ++j) {
      const std::uint64_t horizon = 2ull * j << n;
      if (horizon > horizon_cap) throw guard_exceeded("horizon " + std::to_string(horizon) + " exceeds cap");
      const Dyadic opt = final_values(g, horizon)[g.start()];
      const Dyadic got = evaluate_memoryless_final(g, horizon, Player::max, inf.sigma1)[g.start()];
      const Dyadic gap = opt - got;
      const bool holds = gap <= Dyadic::pow2_neg(j);
      r.evidence["instances"].push_back({{"j", j},
                                         {"T", horizon},
                                         {"optimal_approx", opt.to_decimal(12)},
                                         {"memoryless_approx", got.to_decimal(12)},
                                         {"gap_zero", gap.is_zero()},
                                         {"holds", holds}});
      if (!holds) r.verdict = Verdict::fail;
    }
  });
}

// ---------------------------------------------------------------------------
// Period scan over random games

struct ScanOptions {
  std::size_t n = 3;  // states per game, terminal included
  std::size_t samples = 100;
  std::size_t horizon = 64;
  std::uint64_t seed = 1;
  bool allow_min = true;
  std::vector<Game> extra;  // scanned after the random samples
};

/// Largest, over both players, of the period in the fewest-memory counter
/// strategy consistent with the optimal arc sets.
inline std::size_t optimal_period(const Game& g, std::size_t horizon) {
  const auto sets = optimal_action_sets(g, horizon);
  std::size_t p = 1;
  for (Player pl : {Player::max, Player::min})
    if (!g.controlled_states(pl).empty())
      p = std::max(p, minimal_period_of_optimal(ActionSetSequence::from(sets, g, pl)).period);
  return p;
}

/// Flags games whose period exceeds 2^(state count) at T and again, with the
/// same period, at 2T; flagged games are attached in file format.
inline CheckReport conjecture_scan(const ScanOptions& opt) {
  Json params = {{"n", opt.n},           {"samples", opt.samples}, {"T", opt.horizon},
                 {"seed", opt.seed},     {"rng", kRngName},        {"allow_min", opt.allow_min},
                 {"extra", opt.extra.size()}};
  return detail::timed("conjecture_scan", std::move(params), [&](CheckReport& r) {
    Rng rng(opt.seed);
    std::map<std::size_t, std::uint64_t> histogram;
    std::size_t max_period = 0;
    std::uint64_t candidates = 0;
    Json flagged = Json::array();
    Json extra = Json::array();
    auto scan_one = [&](const Game& g, std::optional<std::size_t> sample) {
      const std::size_t bound_exp = g.size();
      const std::size_t p = optimal_period(g, opt.horizon);
      ++histogram[p];
      max_period = std::max(max_period, p);
      const bool over = bound_exp < 63 && p > (std::size_t{1} << bound_exp);
      if (!sample) extra.push_back({{"states", g.size()}, {"period", p}});
      if (!over) return;
      ++candidates;
      const std::size_t p2 = optimal_period(g, 2 * opt.horizon);
      if (p2 == p)
        flagged.push_back({{"sample", sample ? Json(*sample) : Json(nullptr)},
                           {"period", p},
                           {"period_at_2T", p2},
                           {"game", to_json(g.describe())}});
    };
    for (std::size_t s = 0; s < opt.samples; ++s) scan_one(random_game(opt.n, rng, {opt.allow_min}), s);
    for (const auto& g : opt.extra) scan_one(g, std::nullopt);
    Json hist = Json::array();
    for (auto [p, count] : histogram) hist.push_back({{"period", p}, {"count", count}});
    r.evidence["max_period"] = max_period;
    r.evidence["bound"] = opt.n < 63 ? Json(std::uint64_t{1} << opt.n) : Json(nullptr);
    r.evidence["histogram"] = hist;
    r.evidence["candidates"] = candidates;
    r.evidence["flagged"] = flagged;
    r.evidence["extra"] = extra;
    r.verdict = flagged.empty() ? Verdict::pass : Verdict::informational;
  });
}

}  // namespace ssg
