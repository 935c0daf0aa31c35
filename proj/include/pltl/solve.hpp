#pragma once

#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "pltl/parity.hpp"

namespace pltl {

struct Diagnostics {
  bool used_expand_fallback = false;
  bool used_counter_certificate = false;
  std::size_t nba_states = 0;
  std::size_t dpa_states = 0;
  std::size_t parity_vertices = 0;
  std::size_t membership_queries = 0;

  void absorb(const Diagnostics& o) {
    used_expand_fallback |= o.used_expand_fallback;
    used_counter_certificate |= o.used_counter_certificate;
    nba_states = std::max(nba_states, o.nba_states);
    dpa_states = std::max(dpa_states, o.dpa_states);
    parity_vertices = std::max(parity_vertices, o.parity_vertices);
    membership_queries += o.membership_queries;
  }
};

// Valuation-independent pipeline prefix, reused across repeated membership
// queries on the same formula (e.g. during binary search).
struct SolveCache {
  std::map<std::string, NBA> nba;
};

namespace detail {

inline const NBA& trimmed_nba_for(const Formula& f, SolveCache& cache) {
  std::string k = key(f);
  auto it = cache.nba.find(k);
  if (it != cache.nba.end()) return it->second;
  NBA nba = remove_unproductive(degeneralize(build_gnba(f)));
  return cache.nba.emplace(std::move(k), std::move(nba)).first->second;
}

// DPA for {w | (w,0,alpha) |= f}: the valuation is expanded away and the
// plain pipeline determinized with no window constraints.  Exact for every
// formula class, but the tableau grows with the expanded formula.
inline DPA build_dpa(const Formula& f, const Valuation& alpha, SolveCache& cache,
                     Diagnostics& diag) {
  if (classify(f) == FormulaClass::Pltl) diag.used_expand_fallback = true;
  const NBA& nba = trimmed_nba_for(expand_valuation(f, alpha), cache);
  diag.nba_states = std::max(diag.nba_states, nba.num_states);
  DPA d = determinize_with_counters(nba, {});
  diag.dpa_states = std::max(diag.dpa_states, d.num_states());
  return d;
}

// Window-constrained pipeline on the unexpanded formula.  The counters demand
// that every pending eventuality is discharged within its window at every
// position, which recognizes a subset of the exact language on the F side
// (a superset after complementation on the G side).  Game answers derived
// from it are therefore one-sided certificates, not decisions.
inline DPA windowed_dpa(const Formula& f, const Valuation& alpha, SolveCache& cache,
                        Diagnostics& diag) {
  FormulaClass cls = classify(f);
  if (cls == FormulaClass::Ltl || cls == FormulaClass::Prompt || cls == FormulaClass::PltlF) {
    const NBA& nba = trimmed_nba_for(f, cache);
    diag.nba_states = std::max(diag.nba_states, nba.num_states);
    DPA d = determinize_with_counters(nba, constraints_for(nba, alpha));
    diag.dpa_states = std::max(diag.dpa_states, d.num_states());
    return d;
  }
  if (cls == FormulaClass::PltlG) {
    const NBA& nba = trimmed_nba_for(negate_nnf(f), cache);
    diag.nba_states = std::max(diag.nba_states, nba.num_states);
    DPA d = complement_dpa(determinize_with_counters(nba, constraints_for(nba, alpha)));
    diag.dpa_states = std::max(diag.dpa_states, d.num_states());
    return d;
  }
  throw std::invalid_argument("windowed_dpa: mixed formulas have no window pipeline");
}

// Upper bound on the free decisions the tableau walk can branch on; the
// number of consistent sets is at most 2^bits.
inline std::size_t tableau_choice_bits(const Formula& f) {
  std::size_t bits = atoms(f).size();
  for (const Formula& s : subformulae(f))
    switch (s->kind) {
      case Kind::Next:
      case Kind::Until:
      case Kind::Release:
      case Kind::BoundedF:
        ++bits;
        break;
      default:
        break;
    }
  return bits;
}

constexpr std::size_t kExactChoiceLimit = 22;

inline bool exact_route_feasible(const Formula& expanded) {
  return tableau_choice_bits(expanded) <= kExactChoiceLimit &&
         subformulae(expanded).size() + 2 * atoms(expanded).size() <= 62;
}

}  // namespace detail

struct MembershipResult {
  bool wins = false;  // for the queried player
  int winner = 0;
  MealyStrategy strategy;  // for the winner, over the game arena
  std::size_t product_size = 0;
  Diagnostics diag;
};

namespace detail {

inline void solve_with_memory(const Arena& arena, const DPA& d, bool blinking, int player,
                              MembershipResult& r) {
  DpaMemory dm = dpa_to_memory(d, arena, blinking);
  ProductArena prod = product_with_memory(arena, dm.memory);

  ParityGame pg;
  pg.arena = prod.arena;
  pg.priority.resize(prod.arena.size());
  for (std::size_t i = 0; i < prod.arena.size(); ++i)
    pg.priority[i] = dm.state_priority[prod.origin_memory[i]];
  r.product_size = prod.arena.size();
  r.diag.parity_vertices = std::max(r.diag.parity_vertices, r.product_size);

  ParitySolution sol = solve_parity(pg);
  r.winner = sol.winner[pg.arena.init];
  r.wins = r.winner == player;

  MealyStrategy s;
  s.player = r.winner;
  for (const auto& v : arena.vertices) s.vertex_names.push_back(v.name);
  s.memory = dm.memory;
  s.nxt.assign(arena.size(), std::vector<int>(dm.memory.size, -1));
  const auto& strat = r.winner == 0 ? sol.strat0 : sol.strat1;
  for (std::size_t i = 0; i < prod.arena.size(); ++i) {
    if (strat[i] < 0) continue;
    int v = prod.origin_vertex[i], m = prod.origin_memory[i];
    if (s.nxt[v][m] < 0) s.nxt[v][m] = prod.origin_vertex[strat[i]];
  }
  r.strategy = std::move(s);
}

}  // namespace detail

// Solves the game on the window-constrained pipeline.  On the F side a
// Player 0 win certifies a win in the exact game; on the G side a Player 1
// win does.  The other outcomes bound the exact answer without deciding it.
inline MembershipResult membership_windowed(const PltlGame& g, int player, const Valuation& alpha,
                                            bool blinking = false, SolveCache* cache = nullptr) {
  SolveCache local;
  SolveCache& c = cache ? *cache : local;
  MembershipResult r;
  r.diag.membership_queries = 1;
  r.diag.used_counter_certificate = true;
  DPA d = detail::windowed_dpa(g.formula, alpha, c, r.diag);
  detail::solve_with_memory(g.arena, d, blinking, player, r);
  return r;
}

inline MembershipResult membership(const PltlGame& g, int player, const Valuation& alpha,
                                   bool blinking = false, SolveCache* cache = nullptr) {
  SolveCache local;
  SolveCache& c = cache ? *cache : local;
  Formula expanded = expand_valuation(g.formula, alpha);
  if (detail::exact_route_feasible(expanded)) {
    MembershipResult r;
    r.diag.membership_queries = 1;
    DPA d = detail::build_dpa(g.formula, alpha, c, r.diag);
    detail::solve_with_memory(g.arena, d, blinking, player, r);
    return r;
  }
  // Valuation too large to expand: fall back to the window certificate and
  // accept only the conclusive direction.
  MembershipResult r = membership_windowed(g, player, alpha, blinking, &c);
  bool conclusive =
      classify(g.formula) == FormulaClass::PltlG ? r.winner == 1 : r.winner == 0;
  if (!conclusive)
    throw std::runtime_error(
        "membership: valuation too large for the exact pipeline and the window "
        "certificate is inconclusive");
  return r;
}

namespace detail {

inline std::string fresh_color(const PltlGame& g) {
  std::set<std::string> used = atoms(g.formula);
  for (const auto& v : g.arena.vertices) used.insert(v.label.begin(), v.label.end());
  std::string c = "c";
  while (used.count(c)) c += "_";
  return c;
}

}  // namespace detail

struct EmptinessOutcome {
  bool empty = false;
  std::size_t product_size = 0;  // parity product solved for the answer
  Diagnostics diag;
};

// W^player = emptyset?  Player 0's winning-valuation set is empty iff Player 0
// loses the alternating-color LTL game derived from strip_always(phi).
inline EmptinessOutcome emptiness_info(const PltlGame& g, int player) {
  if (player == 1) return emptiness_info(dual_game(g), 0);
  Formula phi_f = strip_always(g.formula);
  EmptinessOutcome out;
  if (variables(phi_f).empty()) {
    MembershipResult r = membership({g.arena, phi_f}, 0, {});
    out.empty = !r.wins;
    out.product_size = r.product_size;
    out.diag = r.diag;
    return out;
  }
  std::string color = detail::fresh_color(g);
  Formula unified = unify_variables(phi_f, "x");
  Formula psi = alternating_color_rewrite(unified, {}, color);
  Arena expanded = expand_alternating_color(g.arena, color);
  MembershipResult r = membership({expanded, psi}, 0, {}, /*blinking=*/true);
  out.empty = !r.wins;
  out.product_size = r.product_size;
  out.diag = r.diag;
  return out;
}

inline bool emptiness(const PltlGame& g, int player) { return emptiness_info(g, player).empty; }

inline bool universality(const PltlGame& g, int player) { return emptiness(g, 1 - player); }

// Is W^player finite?  With a parameterized eventuality, non-empty implies
// infinite (upward closure); a pure PLTL_G set is infinite iff it is
// universal in some single projected variable; without parameters the set is
// trivially finite.
inline bool finiteness(const PltlGame& g, int player) {
  if (player == 1) return finiteness(dual_game(g), 0);
  if (variables(g.formula).empty()) return true;
  if (!eventuality_vars(g.formula).empty()) return emptiness(g, 0);
  for (const auto& y : always_vars(g.formula))
    if (universality({g.arena, project_variable(g.formula, y)}, 0)) return false;
  return true;
}

struct SearchBound {
  unsigned bound = 0;
  std::size_t product_size = 0;  // provenance
};

// Instance-derived bound on the minimal winning PROMPT value: twice the
// (successor of the) emptiness-check product size; a finite-state winning
// strategy cannot be forced through longer monochromatic phases.
inline SearchBound compute_search_bound(const PltlGame& g) {
  EmptinessOutcome e = emptiness_info(g, 0);
  if (e.empty) throw std::logic_error("compute_search_bound: winning-valuation set is empty");
  return {static_cast<unsigned>(2 * (e.product_size + 1)), e.product_size};
}

enum class OptStatus { Value, None, Unbounded };

struct OptimizationResult {
  OptStatus status = OptStatus::None;
  unsigned value = 0;
  Valuation witness;
  MealyStrategy strategy;
  std::string variable;  // achieving variable for per-variable objectives
  bool capped = false;   // none-because-max-bound, not a true none
  unsigned cap = 0;
  Diagnostics diag;
};

// Minimal n with alpha_n in W^0 by binary search (upward closure).  Blinking
// callers must supply the search bound of the underlying game, since the
// arena is already color-expanded.
inline OptimizationResult prompt_optimum(const PltlGame& g, bool blinking = false,
                                         std::optional<unsigned> known_bound = {},
                                         std::optional<unsigned> max_bound = {}) {
  auto vars = variables(g.formula);
  if (vars.size() != 1 || eventuality_vars(g.formula).size() != 1)
    throw std::invalid_argument("prompt_optimum: needs exactly one eventuality variable");
  const std::string x = *vars.begin();

  OptimizationResult out;
  unsigned bound;
  if (known_bound) {
    bound = *known_bound;
  } else {
    if (blinking)
      throw std::invalid_argument("prompt_optimum: blinking search needs an explicit bound");
    EmptinessOutcome e = emptiness_info(g, 0);
    out.diag.absorb(e.diag);
    if (e.empty) return out;  // status None
    bound = static_cast<unsigned>(2 * (e.product_size + 1));
  }
  if (max_bound && *max_bound < bound) {
    out.capped = true;
    out.cap = *max_bound;
    bound = *max_bound;
  }

  SolveCache cache;
  auto member = [&](unsigned n) {
    MembershipResult r = membership(g, 0, {{x, n}}, blinking, &cache);
    out.diag.absorb(r.diag);
    return r;
  };

  // Doubling then bisection: every probe stays within twice the optimum, so
  // the expanded pipeline stays small whenever the optimum is.  Only a
  // fruitless search ever probes the full bound.
  unsigned opt;
  if (member(0).wins) {
    opt = 0;
  } else {
    unsigned lo = 0;  // known losing
    std::optional<unsigned> hi;
    for (unsigned step = 1; !hi; step *= 2) {
      unsigned cand = std::min(bound, step);
      if (member(cand).wins) {
        hi = cand;
      } else {
        lo = cand;
        if (cand == bound) break;
      }
    }
    if (!hi) {
      out.status = OptStatus::None;  // capped: no winning valuation <= cap
      return out;
    }
    while (lo + 1 < *hi) {
      unsigned mid = lo + (*hi - lo) / 2;
      if (member(mid).wins)
        hi = mid;
      else
        lo = mid;
    }
    opt = *hi;
  }
  MembershipResult best = member(opt);
  out.status = OptStatus::Value;
  out.value = opt;
  out.witness = {{x, opt}};
  out.variable = x;
  out.strategy = best.strategy;
  out.capped = false;
  return out;
}

enum class Objective { MinMin, MinMax, MaxMax, MaxMin };

namespace detail {

// Re-derive a witness valuation + strategy on the original game; pads the
// non-achieving variables, starting small (small valuations keep the exact
// pipeline cheap) and doubling when the pad was too tight.
inline bool witness_on_original(const PltlGame& g, Valuation w, unsigned pad_start,
                                const std::set<std::string>& padded, OptimizationResult& out) {
  unsigned pad = pad_start;
  for (int attempt = 0; attempt < 10; ++attempt) {
    for (const auto& z : padded) w[z] = pad;
    try {
      MembershipResult r = membership(g, 0, w);
      out.diag.absorb(r.diag);
      if (r.wins) {
        out.witness = w;
        out.strategy = r.strategy;
        return true;
      }
    } catch (const std::runtime_error&) {
      // pad too large for a conclusive answer; a different pad may still work
    }
    if (padded.empty()) return false;
    pad = pad == 0 ? 1 : pad * 2;
  }
  return false;
}

}  // namespace detail

inline OptimizationResult optimize_unipolar(const PltlGame& g, Objective obj,
                                            std::optional<unsigned> max_bound = {}) {
  FormulaClass cls = classify(g.formula);
  auto vars = variables(g.formula);
  if (vars.empty()) throw std::invalid_argument("optimize_unipolar: formula has no parameters");
  bool f_side = obj == Objective::MinMin || obj == Objective::MinMax;
  if (f_side && cls != FormulaClass::PltlF && cls != FormulaClass::Prompt)
    throw std::invalid_argument("optimize_unipolar: objective needs a PLTL_F formula");
  if (!f_side && cls != FormulaClass::PltlG)
    throw std::invalid_argument("optimize_unipolar: objective needs a PLTL_G formula");

  const std::string target = *vars.begin();

  if (obj == Objective::MinMax) {
    PltlGame unified{g.arena, unify_variables(g.formula, target)};
    OptimizationResult r = prompt_optimum(unified, false, {}, max_bound);
    if (r.status != OptStatus::Value) return r;
    OptimizationResult out = r;
    out.variable.clear();
    Valuation w;
    for (const auto& z : vars) w[z] = r.value;
    if (!detail::witness_on_original(g, w, r.value, {}, out))
      throw std::logic_error("optimize_unipolar: min_max witness rejected");
    return out;
  }

  if (obj == Objective::MinMin) {
    EmptinessOutcome e = emptiness_info(g, 0);
    OptimizationResult out;
    out.diag.absorb(e.diag);
    if (e.empty) return out;  // None
    unsigned bound = static_cast<unsigned>(2 * (e.product_size + 1));
    std::string color = detail::fresh_color(g);
    Arena expanded = expand_alternating_color(g.arena, color);
    std::optional<OptimizationResult> best;
    for (const auto& x : vars) {
      Formula psi = alternating_color_rewrite(g.formula, {x}, color);
      OptimizationResult r = prompt_optimum({expanded, psi}, true, bound, max_bound);
      out.diag.absorb(r.diag);
      if (r.status != OptStatus::Value) {
        if (r.capped) out.capped = true, out.cap = r.cap;
        continue;
      }
      if (!best || r.value < best->value) {
        best = r;
        best->variable = x;
      }
    }
    if (!best) return out;  // None (possibly capped)
    out.status = OptStatus::Value;
    out.value = best->value;
    out.variable = best->variable;
    out.capped = false;
    std::set<std::string> others = vars;
    others.erase(best->variable);
    Valuation w{{best->variable, best->value}};
    if (!detail::witness_on_original(g, w, 0, others, out))
      throw std::logic_error("optimize_unipolar: min_min witness rejected");
    return out;
  }

  if (obj == Objective::MaxMin) {
    PltlGame unified{g.arena, unify_variables(g.formula, target)};
    OptimizationResult r = prompt_optimum(dual_game(unified), false, {}, max_bound);
    OptimizationResult out;
    out.diag.absorb(r.diag);
    if (r.status == OptStatus::None) {
      if (r.capped) {
        out.capped = true;
        out.cap = r.cap;
        return out;  // cannot distinguish unbounded under a cap
      }
      out.status = OptStatus::Unbounded;  // dual never wins: all values work
      return out;
    }
    if (r.value == 0) return out;  // None: no winning valuation at all
    out.status = OptStatus::Value;
    out.value = r.value - 1;
    Valuation w;
    for (const auto& z : vars) w[z] = out.value;
    if (!detail::witness_on_original(g, w, out.value, {}, out))
      throw std::logic_error("optimize_unipolar: max_min witness rejected");
    return out;
  }

  // MaxMax
  OptimizationResult out;
  std::optional<unsigned> best_value;
  std::string best_var;
  for (const auto& y : vars) {
    PltlGame projected{g.arena, project_variable(g.formula, y)};
    OptimizationResult r = prompt_optimum(dual_game(projected), false, {}, max_bound);
    out.diag.absorb(r.diag);
    if (r.status == OptStatus::None) {
      if (r.capped) {
        out.capped = true;
        out.cap = r.cap;
        continue;
      }
      out.status = OptStatus::Unbounded;  // some projection is universal
      out.variable = y;
      return out;
    }
    if (r.value == 0) continue;  // projection admits no winning valuation
    unsigned v = r.value - 1;
    if (!best_value || v > *best_value) {
      best_value = v;
      best_var = y;
    }
  }
  if (!best_value) return out;  // None (possibly capped)
  out.status = OptStatus::Value;
  out.value = *best_value;
  out.variable = best_var;
  out.capped = false;
  std::set<std::string> others = vars;
  others.erase(best_var);
  Valuation w{{best_var, *best_value}};
  if (!detail::witness_on_original(g, w, 0, others, out))
    throw std::logic_error("optimize_unipolar: max_max witness rejected");
  return out;
}

inline MealyStrategy synthesize_strategy(const PltlGame& g, int player, const Valuation& alpha) {
  MembershipResult r = membership(g, player, alpha);
  if (!r.wins)
    throw std::invalid_argument("synthesize_strategy: player " + std::to_string(player) +
                                " does not win with this valuation");
  return r.strategy;
}

// Independent checker: restrict the arena x memory product to the strategy's
// moves, then test the restricted graph against the Buchi automaton of the
// losing condition (valuation expanded away, no counters).
inline bool verify_strategy(const PltlGame& g, int player, const Valuation& alpha,
                            const MealyStrategy& s) {
  const Arena& a = g.arena;
  if (s.vertex_names.size() != a.size())
    throw std::invalid_argument("verify_strategy: strategy built for a different arena");
  for (std::size_t v = 0; v < a.size(); ++v)
    for (std::size_t m = 0; m < s.memory.size; ++m)
      if (s.nxt[v][m] >= 0 && !a.has_edge(static_cast<int>(v), s.nxt[v][m]))
        throw std::invalid_argument("verify_strategy: illegal move from " + a.vertices[v].name);

  // strategy-restricted reachable product (vertex, memory)
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> nodes;
  std::vector<std::vector<int>> gsucc;
  auto intern = [&](int v, int m) {
    auto it = ids.find({v, m});
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    ids.emplace(std::make_pair(v, m), id);
    nodes.emplace_back(v, m);
    gsucc.emplace_back();
    return id;
  };
  std::queue<int> work;
  work.push(intern(a.init, s.memory.initial));
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    auto [v, m] = nodes[id];
    std::vector<int> moves;
    if (a.vertices[v].owner == player) {
      int w = s.nxt[v][m];
      if (w < 0) return false;  // strategy undefined on a reachable state
      moves.push_back(w);
    } else {
      moves = a.succ[v];
    }
    for (int w : moves) {
      std::size_t before = nodes.size();
      int wid = intern(w, s.memory.update(m, w));
      if (nodes.size() > before) work.push(wid);
      gsucc[id].push_back(wid);
    }
  }

  Formula expanded = expand_valuation(g.formula, alpha);
  Formula bad = player == 0 ? negate_nnf(expanded) : expanded;
  NBA nba = remove_unproductive(degeneralize(build_gnba(bad)));
  if (nba.num_states == 0) return true;

  std::vector<LetterIndex> vletter(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) {
    Letter proj;
    for (const auto& p : nba.ap)
      if (a.vertices[v].label.count(p)) proj.insert(p);
    vletter[v] = letter_index(nba.ap, proj);
  }

  // Buchi product: (graph node, automaton state before reading its label)
  const std::size_t qn = nba.num_states;
  auto pid = [&](int node, int q) { return static_cast<std::size_t>(node) * qn + q; };
  std::vector<char> seen(nodes.size() * qn, 0);
  std::vector<std::vector<int>> psucc(nodes.size() * qn);
  std::queue<std::size_t> bfs;
  for (int q0 : nba.initial) {
    std::size_t v = pid(0, q0);  // node 0 is the initial product node
    if (!seen[v]) {
      seen[v] = 1;
      bfs.push(v);
    }
  }
  while (!bfs.empty()) {
    std::size_t v = bfs.front();
    bfs.pop();
    int q = static_cast<int>(v % qn);
    int node = static_cast<int>(v / qn);
    for (int q2 : nba.trans[q][vletter[nodes[node].first]])
      for (int node2 : gsucc[node]) {
        std::size_t w = pid(node2, q2);
        psucc[v].push_back(static_cast<int>(w));
        if (!seen[w]) {
          seen[w] = 1;
          bfs.push(w);
        }
      }
  }
  auto scc = detail::scc_decompose(psucc.size(), psucc);
  for (std::size_t v = 0; v < psucc.size(); ++v)
    if (seen[v] && nba.accepting[v % qn] && scc.nontrivial[scc.comp[v]]) return false;
  return true;
}

}  // namespace pltl
