#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pltl/solve.hpp"

namespace pltl::cli {

// Exit codes: 0 computed / positive answer, 1 usage or input error,
// 2 negative answer (false / none).
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_negative = 2;

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Valuation parse_bindings(const std::string& text) {
  Valuation v;
  if (text.empty()) return v;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("bad valuation binding '" + item + "' (want var=nat)");
    std::string var = item.substr(0, eq), num = item.substr(eq + 1);
    std::size_t used = 0;
    int n = std::stoi(num, &used);
    if (used != num.size() || n < 0)
      throw std::runtime_error("bad valuation binding '" + item + "' (want var=nat)");
    v[var] = static_cast<unsigned>(n);
  }
  return v;
}

inline std::string format_valuation(const Valuation& v) {
  std::string out;
  for (const auto& [var, n] : v) {
    if (!out.empty()) out += ',';
    out += var + "=" + std::to_string(n);
  }
  return out;
}

struct CommandConfig {
  std::string arena_path, formula_text, formula_path;
  int player = 0;
  std::string bindings;
  std::string objective;
  std::string strategy_path;
  std::string emit_dir;
  std::string format = "text";
  std::optional<unsigned> max_bound;
  unsigned seed = 0;

  Formula formula() const {
    std::string text = formula_path.empty() ? formula_text : read_file(formula_path);
    if (text.empty()) throw std::runtime_error("missing --formula / --formula-file");
    return parse_formula(text);
  }
  Arena arena() const {
    if (arena_path.empty()) throw std::runtime_error("missing --arena");
    return parse_arena(read_file(arena_path));
  }
  PltlGame game() const { return {arena(), formula()}; }
  Valuation valuation() const { return parse_bindings(bindings); }
};

inline void emit_bool(std::ostream& out, bool value) {
  out << "result = " << (value ? "true" : "false") << "\n";
}

inline void emit_optimization(std::ostream& out, const OptimizationResult& r) {
  switch (r.status) {
    case OptStatus::Value:
      out << "status = value\n";
      out << "value = " << r.value << "\n";
      if (!r.variable.empty()) out << "variable = " << r.variable << "\n";
      out << "witness = " << format_valuation(r.witness) << "\n";
      break;
    case OptStatus::None:
      out << "status = none\n";
      if (r.capped) out << "capped = " << r.cap << "\n";
      break;
    case OptStatus::Unbounded:
      out << "status = unbounded\n";
      break;
  }
  out << "queries = " << r.diag.membership_queries << "\n";
}

inline void maybe_emit_automata(const CommandConfig& cfg, const Formula& f, const Valuation& alpha) {
  if (cfg.emit_dir.empty()) return;
  std::filesystem::create_directories(cfg.emit_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(std::filesystem::path(cfg.emit_dir) / name) << text;
  };
  Formula base = f;
  FormulaClass cls = classify(f);
  if (cls == FormulaClass::PltlG)
    base = negate_nnf(f);
  else if (cls == FormulaClass::Pltl)
    base = expand_valuation(f, alpha);
  GNBA g = build_gnba(base);
  write("gnba.aut", dump_gnba(g));
  NBA raw = degeneralize(g);
  write("nba.aut", dump_nba(raw));
  NBA trimmed = remove_unproductive(raw);
  write("nba-trim.aut", dump_nba(trimmed));
  ConstraintSet o = cls == FormulaClass::Pltl ? ConstraintSet{} : constraints_for(trimmed, alpha);
  write("constraints.txt", dump_constraints(o));
  write("dpa.aut", dump_dpa(determinize_with_counters(trimmed, o)));
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::CommandConfig cfg;
  std::string parity_path;
  int max_bound_flag = -1;

  CLI::App app{"parametric LTL games over finite arenas"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_arena) {
    if (needs_arena) sub->add_option("--arena", cfg.arena_path, "arena file");
    sub->add_option("--formula", cfg.formula_text, "formula text");
    sub->add_option("--formula-file", cfg.formula_path, "formula file");
    sub->add_option("--player", cfg.player, "player (0 or 1)")->check(CLI::Range(0, 1));
    sub->add_option("--val", cfg.bindings, "valuation, e.g. x=2,y=0");
    sub->add_option("--max-bound", max_bound_flag, "cap the optimum search");
    sub->add_option("--emit-automata", cfg.emit_dir, "dump pipeline automata into a directory");
    sub->add_option("--format", cfg.format, "text|record")
        ->check(CLI::IsMember({"text", "record"}));
    sub->add_option("--seed", cfg.seed, "seed for sampled diagnostics");
  };

  auto* c_member = app.add_subcommand("member", "does the player win with the given valuation");
  auto* c_empty = app.add_subcommand("empty", "is the winning-valuation set empty");
  auto* c_universal = app.add_subcommand("universal", "is the winning-valuation set universal");
  auto* c_finite = app.add_subcommand("finite", "is the winning-valuation set finite");
  auto* c_optimize = app.add_subcommand("optimize", "optimal parameter value for Player 0");
  auto* c_synth = app.add_subcommand("synthesize", "emit a winning finite-state strategy");
  auto* c_verify = app.add_subcommand("verify", "check a strategy dump against the game");
  auto* c_parity = app.add_subcommand("solve-parity", "solve a parity game file");
  auto* c_translate = app.add_subcommand("translate", "dump the automata pipeline of a formula");
  for (auto* sub : {c_member, c_empty, c_universal, c_finite, c_optimize, c_synth, c_verify})
    add_common(sub, true);
  add_common(c_translate, false);
  c_optimize
      ->add_option("--objective", cfg.objective, "min-min|min-max|max-max|max-min")
      ->required()
      ->check(CLI::IsMember({"min-min", "min-max", "max-max", "max-min"}));
  c_verify->add_option("--strategy", cfg.strategy_path, "strategy dump file")->required();
  c_parity->add_option("file", parity_path, "parity game file")->required();
  c_parity->add_option("--format", cfg.format, "text|record");

  std::vector<char*> argv;
  std::string prog = "pltl-arena";
  argv.push_back(prog.data());
  std::vector<std::string> copy(args);
  for (auto& a : copy) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_usage;
  }

  if (max_bound_flag >= 0)
    cfg.max_bound = static_cast<unsigned>(max_bound_flag);
  else if (const char* env = std::getenv("PLTL_ARENA_MAX_BOUND"))
    cfg.max_bound = static_cast<unsigned>(std::strtoul(env, nullptr, 10));

  try {
    if (*c_member) {
      PltlGame g = cfg.game();
      Valuation alpha = cfg.valuation();
      MembershipResult r = membership(g, cfg.player, alpha);
      detail::emit_bool(out, r.wins);
      if (r.diag.used_expand_fallback) err << "note: mixed-polarity fallback pipeline used\n";
      detail::maybe_emit_automata(cfg, g.formula, alpha);
      return r.wins ? exit_ok : exit_negative;
    }
    if (*c_empty) {
      bool v = emptiness(cfg.game(), cfg.player);
      detail::emit_bool(out, v);
      return v ? exit_ok : exit_negative;
    }
    if (*c_universal) {
      bool v = universality(cfg.game(), cfg.player);
      detail::emit_bool(out, v);
      return v ? exit_ok : exit_negative;
    }
    if (*c_finite) {
      bool v = finiteness(cfg.game(), cfg.player);
      detail::emit_bool(out, v);
      return v ? exit_ok : exit_negative;
    }
    if (*c_optimize) {
      Objective obj = cfg.objective == "min-min"   ? Objective::MinMin
                      : cfg.objective == "min-max" ? Objective::MinMax
                      : cfg.objective == "max-max" ? Objective::MaxMax
                                                   : Objective::MaxMin;
      OptimizationResult r = optimize_unipolar(cfg.game(), obj, cfg.max_bound);
      detail::emit_optimization(out, r);
      return r.status == OptStatus::None ? exit_negative : exit_ok;
    }
    if (*c_synth) {
      PltlGame g = cfg.game();
      MembershipResult r = membership(g, cfg.player, cfg.valuation());
      if (!r.wins) {
        err << "player " << cfg.player << " does not win with this valuation\n";
        return exit_negative;
      }
      out << dump_strategy(r.strategy);
      return exit_ok;
    }
    if (*c_verify) {
      PltlGame g = cfg.game();
      MealyStrategy s = parse_strategy(detail::read_file(cfg.strategy_path), g.arena, cfg.player);
      bool ok = verify_strategy(g, cfg.player, cfg.valuation(), s);
      detail::emit_bool(out, ok);
      return ok ? exit_ok : exit_negative;
    }
    if (*c_parity) {
      ParityGame g = parse_parity_game(detail::read_file(parity_path));
      ParitySolution sol = solve_parity(g);
      for (std::size_t v = 0; v < g.size(); ++v)
        out << "winner " << g.arena.vertices[v].name << " = " << sol.winner[v] << "\n";
      for (std::size_t v = 0; v < g.size(); ++v) {
        const auto& strat = sol.winner[v] == 0 ? sol.strat0 : sol.strat1;
        if (g.arena.vertices[v].owner == sol.winner[v] && strat[v] >= 0)
          out << "move " << g.arena.vertices[v].name << " -> " << g.arena.vertices[strat[v]].name
              << "\n";
      }
      return exit_ok;
    }
    if (*c_translate) {
      Formula f = cfg.formula();
      Valuation alpha = cfg.valuation();
      FormulaClass cls = classify(f);
      Formula base = f;
      if (cls == FormulaClass::PltlG)
        base = negate_nnf(f);
      else if (cls == FormulaClass::Pltl)
        base = expand_valuation(f, alpha);
      GNBA g = build_gnba(base);
      NBA raw = degeneralize(g);
      NBA trimmed = remove_unproductive(raw);
      out << "== gnba ==\n" << dump_gnba(g);
      out << "== nba ==\n" << dump_nba(raw);
      out << "== nba-trim ==\n" << dump_nba(trimmed);
      bool have_all_bounds = true;
      for (const auto& w : trimmed.windows)
        if (!alpha.count(w.var)) have_all_bounds = false;
      if (have_all_bounds) {
        ConstraintSet o = constraints_for(trimmed, alpha);
        out << "== constraints ==\n" << dump_constraints(o);
        out << "== dpa ==\n" << dump_dpa(determinize_with_counters(trimmed, o));
      }
      detail::maybe_emit_automata(cfg, f, alpha);
      return exit_ok;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  err << "no subcommand\n";
  return exit_usage;
}

}  // namespace pltl::cli
