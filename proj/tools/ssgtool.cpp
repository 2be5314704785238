// ssgtool: command-line front end.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or input error,
// 3 an enumeration or size guard was exceeded.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssg/ssg.hpp"

namespace {

using namespace ssg;

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kGuard = 3 };

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json = false;
  std::optional<unsigned> decimal;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_flag("--json", c.json, "Machine-readable output");
  cmd->add_option("--decimal", c.decimal, "Also print values rounded to this many digits (approximate)")
      ->check(CLI::Range(0u, 200u));
}

Json header(const std::string& command, Json parameters) {
  Json j;
  j["schema"] = "ssgtool." + command + "/1";
  j["version"] = kVersion;
  j["parameters"] = std::move(parameters);
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw usage_error("cannot write '" + path + "'");
}

Game load_game_file(const std::string& path) { return load_game(read_file(path)); }

Player parse_player(int p) { return p == 2 ? Player::min : Player::max; }

Tiebreak parse_tiebreak(const std::string& s) { return s == "hi" ? Tiebreak::highest_arc : Tiebreak::lowest_arc; }

std::string show(const Dyadic& d, const Common& c) {
  return c.decimal ? d.to_string() + "  ~" + d.to_decimal(*c.decimal) : d.to_string();
}

void add_approx(Json& j, const Game& g, const std::vector<Dyadic>& values, const Common& c) {
  if (!c.decimal) return;
  Json approx = Json::object();
  for (std::size_t s = 0; s < g.size(); ++s) approx[g.id(s)] = values[s].to_decimal(*c.decimal);
  j["approx"] = {{"digits", *c.decimal}, {"note", "rounded for display; exact values are authoritative"},
                 {"values", approx}};
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string game;
  std::size_t horizon = 0;
  bool csv = false;
  Common common;
};

int run_solve(const SolveArgs& a) {
  const Game g = load_game_file(a.game);
  if (a.csv) {
    std::cout << to_csv(g, backward_induction(g, a.horizon));
    return kOk;
  }
  const auto values = final_values(g, a.horizon);
  if (a.common.json) {
    Json j = header("solve", {{"game", a.game}, {"T", a.horizon}});
    j["start"] = g.id(g.start());
    j["start_value"] = values[g.start()].to_string();
    Json v = Json::object();
    for (std::size_t s = 0; s < g.size(); ++s) v[g.id(s)] = values[s].to_string();
    j["values"] = v;
    add_approx(j, g, values, a.common);
    emit(j);
    return kOk;
  }
  std::cout << "T " << a.horizon << ", start " << g.id(g.start()) << "\n";
  for (std::size_t s = 0; s < g.size(); ++s) std::cout << g.id(s) << " " << show(values[s], a.common) << "\n";
  return kOk;
}

struct StrategyArgs {
  std::string game;
  std::size_t horizon = 0;
  int player = 1;
  std::string tiebreak = "lo";
  Common common;
};

int run_strategy(const StrategyArgs& a) {
  const Game g = load_game_file(a.game);
  const Player pl = parse_player(a.player);
  const auto sigma = extract_markov(g, a.horizon, pl, parse_tiebreak(a.tiebreak));
  const auto owned = g.controlled_states(pl);
  if (a.common.json) {
    Json j = header("strategy", {{"game", a.game}, {"T", a.horizon}, {"player", a.player}, {"tiebreak", a.tiebreak}});
    Json rows = Json::array();
    for (std::size_t t = a.horizon; t >= 1; --t) {
      Json arcs = Json::object();
      for (auto s : owned) arcs[g.id(s)] = sigma.at(t, s);
      rows.push_back({{"remaining", t}, {"arcs", arcs}});
    }
    j["choices"] = rows;
    emit(j);
    return kOk;
  }
  std::cout << "remaining state arc destination\n";
  for (std::size_t t = a.horizon; t >= 1; --t)
    for (auto s : owned) {
      const int arc = sigma.at(t, s);
      std::cout << t << " " << g.id(s) << " " << arc << " " << g.id(g.dest(s, arc)) << "\n";
    }
  return kOk;
}

struct MinimizeArgs {
  std::string game;
  std::size_t horizon = 0;
  int player = 1;
  std::string tiebreak = "lo";
  bool sets = false;
  Common common;
};

int run_minimize(const MinimizeArgs& a) {
  const Game g = load_game_file(a.game);
  const Player pl = parse_player(a.player);
  std::optional<CounterStrategy> cs;
  if (a.sets)
    cs = minimal_period_of_optimal(ActionSetSequence::from(optimal_action_sets(g, a.horizon), g, pl)).witness;
  else
    cs = from_markov(extract_markov(g, a.horizon, pl, parse_tiebreak(a.tiebreak)), a.horizon);
  const auto rep = memory_report(*cs);
  if (a.common.json) {
    Json params = {{"game", a.game}, {"T", a.horizon}, {"player", a.player}, {"sets", a.sets}};
    if (!a.sets) params["tiebreak"] = a.tiebreak;
    Json j = header("minimize", std::move(params));
    j["N"] = rep.initial;
    j["p"] = rep.period;
    j["states"] = rep.states;
    j["bits"] = rep.bits;
    j["counter"] = to_json(*cs, g);
    emit(j);
    return kOk;
  }
  std::cout << "N=" << rep.initial << " p=" << rep.period << " states=" << rep.states << " bits=" << rep.bits
            << "\n";
  return kOk;
}

struct GadgetArgs {
  std::string family;
  std::size_t param = 0;
  std::string out;
};

int run_gadget(const GadgetArgs& a) {
  const GadgetSpec spec{parse_gadget_family(a.family), a.param};
  if (spec.family != GadgetFamily::M && a.param == 0) throw usage_error("--param is required for " + a.family);
  const std::string text = store_game(make_gadget(spec));
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  return kOk;
}

struct VerifyArgs {
  std::string name;
  unsigned i = 12;
  std::uint64_t amax = 4096;
  unsigned imin = 1;
  unsigned imax = 14;
  std::optional<std::uint64_t> tmax;
  std::size_t p = 5;
  std::size_t k = 2;
  std::size_t c = 6;
  std::vector<std::string> d;
  std::string width = "1/1000000";
  unsigned jmax = 6;
  std::string game;
  std::string family;
  std::size_t param = 0;
  bool runtime = false;
  Common common;
};

std::vector<Rational> parse_ds(const std::vector<std::string>& in, std::vector<Rational> fallback) {
  if (in.empty()) return fallback;
  std::vector<Rational> out;
  for (const auto& s : in) out.push_back(parse_rational(s));
  return out;
}

CheckReport dispatch_verify(const VerifyArgs& a) {
  const Rational width = parse_rational(a.width);
  const std::string& n = a.name;
  if (n == "fai") return check_fai(a.i, a.amax);
  if (n == "kexp") return check_kexp(a.imax, a.imin);
  if (n == "k_sandwich") return check_k_sandwich(a.i, width);
  if (n == "half_t") return check_half_t(a.i, a.tmax.value_or(256));
  if (n == "pdk") return check_pdk(a.i, parse_ds(a.d, {Rational(1, 5), Rational(2, 5), Rational(4, 5)}), width);
  if (n == "gtk") return check_gtk(a.i, parse_ds(a.d, {Rational(1, 5)}), width);
  if (n == "gp_values") return check_gp_values(a.p, a.tmax.value_or(200));
  if (n == "fk_period") return check_fk_period(a.k);
  if (n == "M_memory") return check_M_memory(a.c);
  if (n == "upper_bound") {
    if (!a.game.empty()) return check_upper_bound(load_game_file(a.game), a.jmax, a.game);
    if (a.family.empty()) throw usage_error("upper_bound needs -g FILE or --family");
    const GadgetSpec spec{parse_gadget_family(a.family), a.param};
    const std::string label = a.family + (spec.family == GadgetFamily::M ? "" : "(" + std::to_string(a.param) + ")");
    return check_upper_bound(make_gadget(spec), a.jmax, label);
  }
  throw usage_error("unknown check '" + n + "'");
}

int run_verify(const VerifyArgs& a) {
  const CheckReport r = dispatch_verify(a);
  if (a.common.json) {
    Json j = header("verify", {{"check", a.name}});
    j["report"] = r.to_json(a.runtime);
    emit(j);
  } else {
    std::cout << r.name << ": " << to_string(r.verdict) << "\n";
    std::cout << "parameters " << r.parameters.dump() << "\n";
    std::cout << "evidence " << r.evidence.dump(2) << "\n";
    if (a.runtime) std::cout << "runtime " << r.runtime_seconds << " s\n";
  }
  return r.ok() ? kOk : kCheckFailed;
}

struct OracleArgs {
  std::string game;
  std::size_t max_controlled = 12;
  std::optional<std::size_t> horizon;
  std::size_t maxmem = 6;
  std::string eps = "0";
  std::uint64_t max_candidates = std::uint64_t{1} << 24;
  Common common;
};

int run_oracle(const OracleArgs& a) {
  const Game g = load_game_file(a.game);
  const auto inf = solve_infinite_bruteforce(g, a.max_controlled);
  Json params = {{"game", a.game}, {"maxcontrolled", a.max_controlled}};
  std::optional<CounterSearchResult> search;
  if (a.horizon) {
    params["T"] = *a.horizon;
    params["maxmem"] = a.maxmem;
    params["eps"] = a.eps;
    search = best_counter_memory_bruteforce(g, *a.horizon, Dyadic::parse(a.eps), a.maxmem, a.max_candidates);
  }
  if (a.common.json) {
    Json j = header("oracle", std::move(params));
    Json v = Json::object();
    for (std::size_t s = 0; s < g.size(); ++s) v[g.id(s)] = to_string(inf.values[s]);
    Json sigma = Json::object();
    for (auto s : g.controlled_states(Player::max)) sigma[g.id(s)] = inf.sigma1[s];
    j["infinite_values"] = v;
    j["sigma1"] = sigma;
    if (search) {
      Json c;
      c["optimum"] = search->optimum.to_string();
      c["memory"] = search->memory ? Json(*search->memory) : Json(nullptr);
      c["achieved"] = search->memory ? Json(search->achieved.to_string()) : Json(nullptr);
      c["witness"] = search->witness ? to_json(*search->witness, g) : Json(nullptr);
      c["explored"] = search->explored;
      j["counter_search"] = c;
    }
    emit(j);
    return kOk;
  }
  std::cout << "infinite-horizon values\n";
  for (std::size_t s = 0; s < g.size(); ++s) std::cout << g.id(s) << " " << to_string(inf.values[s]) << "\n";
  std::cout << "optimal memoryless Max strategy\n";
  for (auto s : g.controlled_states(Player::max))
    std::cout << g.id(s) << " " << inf.sigma1[s] << " " << g.id(g.dest(s, inf.sigma1[s])) << "\n";
  if (search) {
    std::cout << "val(T=" << *a.horizon << ") " << show(search->optimum, a.common) << "\n";
    if (search->memory)
      std::cout << "fewest counter memories within eps: " << *search->memory << " (value "
                << show(search->achieved, a.common) << ")\n";
    else
      std::cout << "fewest counter memories within eps: more than " << a.maxmem << "\n";
  }
  return kOk;
}

struct SimulateArgs {
  std::string game;
  std::size_t horizon = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string tiebreak = "lo";
  Common common;
};

int run_simulate(const SimulateArgs& a) {
  const Game g = load_game_file(a.game);
  const auto sets = optimal_action_sets(g, a.horizon);
  const auto tb = parse_tiebreak(a.tiebreak);
  const auto s1 = extract_markov(sets, g, Player::max, tb);
  const auto s2 = extract_markov(sets, g, Player::min, tb);
  const auto res = mc_simulate(g, a.horizon, &s1, &s2, a.trials, a.seed);
  const Dyadic exact = evaluate_pair(g, a.horizon, s1, s2).at(a.horizon, g.start());
  const double pv = std::ldexp(exact.mantissa().get_d(), -static_cast<int>(exact.exponent()));
  const double se = std::sqrt(pv * (1 - pv) / static_cast<double>(res.trials));
  char buf[64];
  auto fixed = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return std::string(buf);
  };
  if (a.common.json) {
    Json j = header("simulate", {{"game", a.game},
                                 {"T", a.horizon},
                                 {"trials", a.trials},
                                 {"seed", a.seed},
                                 {"rng", kRngName},
                                 {"tiebreak", a.tiebreak}});
    j["hits"] = res.hits;
    j["frequency"] = to_string(Rational(BigInt(static_cast<unsigned long>(res.hits)),
                                        BigInt(static_cast<unsigned long>(res.trials))));
    j["frequency_approx"] = fixed(res.frequency());
    j["exact_value"] = exact.to_string();
    j["standard_error_approx"] = fixed(se);
    emit(j);
    return kOk;
  }
  std::cout << "trials " << res.trials << " hits " << res.hits << " frequency " << fixed(res.frequency()) << "\n";
  std::cout << "exact " << show(exact, a.common) << " standard error " << fixed(se) << "\n";
  return kOk;
}

struct ScanArgs {
  std::size_t n = 3;
  std::size_t samples = 100;
  std::size_t horizon = 64;
  std::uint64_t seed = 1;
  bool mdp = false;
  std::vector<std::size_t> with_f;
  std::string out_dir;
  bool runtime = false;
  Common common;
};

int run_scan(const ScanArgs& a) {
  ScanOptions opt;
  opt.n = a.n;
  opt.samples = a.samples;
  opt.horizon = a.horizon;
  opt.seed = a.seed;
  opt.allow_min = !a.mdp;
  for (auto k : a.with_f) opt.extra.push_back(make_F(k));
  const CheckReport r = conjecture_scan(opt);
  std::vector<std::string> files;
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    std::size_t idx = 0;
    for (const auto& f : r.evidence["flagged"]) {
      const std::string path = (std::filesystem::path(a.out_dir) / ("counterexample_" + std::to_string(idx++) + ".json")).string();
      write_file(path, f["game"].dump(2) + "\n");
      files.push_back(path);
    }
  }
  if (a.common.json) {
    Json j = header("scan", {{"n", a.n}, {"samples", a.samples}, {"T", a.horizon}, {"seed", a.seed}, {"mdp", a.mdp}});
    j["report"] = r.to_json(a.runtime);
    j["files"] = files;
    emit(j);
  } else {
    std::cout << "scanned " << a.samples + opt.extra.size() << " games, max period "
              << r.evidence["max_period"].get<std::size_t>() << ", flagged " << r.evidence["flagged"].size() << "\n";
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
  }
  return r.ok() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-horizon solver for simple stochastic games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  const auto tiebreak_check = CLI::IsMember({"lo", "hi"});
  const auto player_check = CLI::IsMember({1, 2});

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Exact values by backward induction");
  c_solve->add_option("-g,--game", solve.game, "Game file")->required();
  c_solve->add_option("-T,--horizon", solve.horizon, "Horizon (arc traversals)")->required();
  c_solve->add_flag("--csv", solve.csv, "Full value table as CSV");
  add_common(c_solve, solve.common);

  StrategyArgs strategy;
  auto* c_strategy = app.add_subcommand("strategy", "An optimal Markov strategy");
  c_strategy->add_option("-g,--game", strategy.game, "Game file")->required();
  c_strategy->add_option("-T,--horizon", strategy.horizon, "Horizon")->required();
  c_strategy->add_option("--player", strategy.player, "1 (Max) or 2 (Min)")->check(player_check);
  c_strategy->add_option("--tiebreak", strategy.tiebreak, "lo or hi")->check(tiebreak_check);
  add_common(c_strategy, strategy.common);

  MinimizeArgs minimize;
  auto* c_min = app.add_subcommand("minimize", "Fewest-memory counter strategy");
  c_min->add_option("-g,--game", minimize.game, "Game file")->required();
  c_min->add_option("-T,--horizon", minimize.horizon, "Horizon")->required();
  c_min->add_option("--player", minimize.player, "1 (Max) or 2 (Min)")->check(player_check);
  c_min->add_option("--tiebreak", minimize.tiebreak, "lo or hi")->check(tiebreak_check);
  c_min->add_flag("--sets", minimize.sets, "Minimize over all optimal strategies instead of one");
  add_common(c_min, minimize.common);

  GadgetArgs gadget;
  auto* c_gadget = app.add_subcommand("gadget", "Write a gadget game file");
  c_gadget->add_option("--family", gadget.family, "M, H, G or F")->required()->check(CLI::IsMember({"M", "H", "G", "F"}));
  c_gadget->add_option("--param", gadget.param, "Family parameter");
  c_gadget->add_option("-o,--output", gadget.out, "Output file (default stdout)");

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "Run one check and report");
  c_verify->add_option("name", verify.name, "fai, kexp, k_sandwich, half_t, pdk, gtk, gp_values, fk_period, M_memory, upper_bound")
      ->required();
  c_verify->add_option("--i", verify.i, "Run length i");
  c_verify->add_option("--amax", verify.amax, "Largest Fibonacci index");
  c_verify->add_option("--imin", verify.imin, "Smallest i");
  c_verify->add_option("--imax", verify.imax, "Largest i");
  c_verify->add_option("--tmax", verify.tmax, "Largest t");
  c_verify->add_option("--p", verify.p, "G_p parameter");
  c_verify->add_option("--k", verify.k, "F_k parameter");
  c_verify->add_option("--c", verify.c, "epsilon = 2^-c");
  c_verify->add_option("--d", verify.d, "Rational d values");
  c_verify->add_option("--width", verify.width, "Enclosure width for e-powers");
  c_verify->add_option("--jmax", verify.jmax, "epsilon = 2^-1 .. 2^-jmax");
  c_verify->add_option("-g,--game", verify.game, "Game file");
  c_verify->add_option("--family", verify.family, "Gadget family instead of a file");
  c_verify->add_option("--param", verify.param, "Gadget parameter");
  c_verify->add_flag("--runtime", verify.runtime, "Include wall-clock runtime");
  add_common(c_verify, verify.common);

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "Brute-force infinite-horizon values and counter search");
  c_oracle->add_option("-g,--game", oracle.game, "Game file")->required();
  c_oracle->add_option("--maxcontrolled", oracle.max_controlled, "Cap on controlled states");
  c_oracle->add_option("-T,--horizon", oracle.horizon, "Also search counter strategies at this horizon");
  c_oracle->add_option("--maxmem", oracle.maxmem, "Largest N+p searched");
  c_oracle->add_option("--eps", oracle.eps, "Allowed loss, m/2^e");
  c_oracle->add_option("--maxcandidates", oracle.max_candidates, "Cap on enumerated action maps");
  add_common(c_oracle, oracle.common);

  SimulateArgs simulate;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo under optimal Markov strategies");
  c_sim->add_option("-g,--game", simulate.game, "Game file")->required();
  c_sim->add_option("-T,--horizon", simulate.horizon, "Horizon")->required();
  c_sim->add_option("--trials", simulate.trials, "Number of plays")->required()->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", simulate.seed, "Seed")->required();
  c_sim->add_option("--tiebreak", simulate.tiebreak, "lo or hi")->check(tiebreak_check);
  add_common(c_sim, simulate.common);

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Period scan over random games");
  c_scan->add_option("-n,--states", scan.n, "States per game, terminal included")->check(CLI::Range(2, 20));
  c_scan->add_option("--samples", scan.samples, "Number of random games");
  c_scan->add_option("-T,--horizon", scan.horizon, "Horizon");
  c_scan->add_option("--seed", scan.seed, "Seed")->required();
  c_scan->add_flag("--mdp", scan.mdp, "No Min states");
  c_scan->add_option("--with-F", scan.with_f, "Also scan F_k for these k");
  c_scan->add_option("-o,--out-dir", scan.out_dir, "Directory for flagged game files");
  c_scan->add_flag("--runtime", scan.runtime, "Include wall-clock runtime");
  add_common(c_scan, scan.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_solve->parsed()) return run_solve(solve);
    if (c_strategy->parsed()) return run_strategy(strategy);
    if (c_min->parsed()) return run_minimize(minimize);
    if (c_gadget->parsed()) return run_gadget(gadget);
    if (c_verify->parsed()) return run_verify(verify);
    if (c_oracle->parsed()) return run_oracle(oracle);
    if (c_sim->parsed()) return run_simulate(simulate);
    if (c_scan->parsed()) return run_scan(scan);
  } catch (const guard_exceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kGuard;
  } catch (const parse_error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const invalid_game& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
