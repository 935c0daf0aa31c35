#pragma once

// Shared generators and independent oracles for the test suite.

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pltl/solve.hpp"

namespace testutil {

using namespace pltl;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Arena fixture_arena(const std::string& name) {
  return parse_arena(read_file(std::string(FIXTURE_DIR) + "/" + name + ".gm"));
}

// --- random PLTL_F formulas -------------------------------------------------

struct FormulaGen {
  std::mt19937 rng;
  std::vector<std::string> atoms{"p", "q"};
  std::vector<std::string> xvars{"x", "x2"};

  explicit FormulaGen(unsigned seed) : rng(seed) {}

  Formula leaf() {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<std::size_t> ai(0, atoms.size() - 1);
    switch (pick(rng)) {
      case 0: return f_true();
      case 1: return f_false();
      case 2: return f_atom(atoms[ai(rng)]);
      default: return f_neg_atom(atoms[ai(rng)]);
    }
  }

  // formula with at most `budget` nodes
  Formula gen(int budget) {
    if (budget <= 1) return leaf();
    std::uniform_int_distribution<int> pick(0, 6);
    std::uniform_int_distribution<std::size_t> xi(0, xvars.size() - 1);
    int split = std::uniform_int_distribution<int>(1, budget - 2 > 0 ? budget - 2 : 1)(rng);
    switch (pick(rng)) {
      case 0: return f_and(gen(split), gen(budget - 1 - split));
      case 1: return f_or(gen(split), gen(budget - 1 - split));
      case 2: return f_next(gen(budget - 1));
      case 3: return f_until(gen(split), gen(budget - 1 - split));
      case 4: return f_release(gen(split), gen(budget - 1 - split));
      case 5: return f_bounded_f(xvars[xi(rng)], gen(budget - 1));
      default: return leaf();
    }
  }

  Valuation valuation(const Formula& f, unsigned max_value) {
    Valuation v;
    std::uniform_int_distribution<unsigned> val(0, max_value);
    for (const auto& z : variables(f)) v[z] = val(rng);
    return v;
  }

  Letter letter() {
    Letter l;
    for (const auto& a : atoms)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) l.insert(a);
    return l;
  }

  LassoWord lasso(std::size_t max_prefix, std::size_t max_cycle) {
    LassoWord w;
    std::size_t pl = std::uniform_int_distribution<std::size_t>(0, max_prefix)(rng);
    std::size_t cl = std::uniform_int_distribution<std::size_t>(1, max_cycle)(rng);
    for (std::size_t i = 0; i < pl; ++i) w.prefix.push_back(letter());
    for (std::size_t i = 0; i < cl; ++i) w.cycle.push_back(letter());
    return w;
  }
};

// --- window-pipeline language characterization ------------------------------

// The window-constrained pipeline recognizes the uniform-discharge closure of a
// PLTL_F formula: the bound-relaxed formula holds, and at *every* position a
// pending (relaxed) eventuality is discharged within its window.  This is
// strictly stronger than plain satisfaction.
inline Formula uniform_closure(const Formula& f) {
  Formula out = relax_bounds(f);
  for (const Formula& s : subformulae(f))
    if (s->kind == Kind::BoundedF) {
      Formula body = relax_bounds(s->lhs);
      Formula pending = f_until(f_true(), body);
      Formula guard = f_or(negate_nnf(pending), f_bounded_f(s->name, body));
      out = f_and(out, f_release(f_false(), guard));
    }
  return out;
}

// --- random arenas and parity games ----------------------------------------

inline Arena random_arena(std::mt19937& rng, std::size_t n, const std::vector<std::string>& atoms) {
  Arena a;
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex v;
    v.name = "v" + std::to_string(i);
    v.owner = coin(rng);
    for (const auto& p : atoms)
      if (coin(rng)) v.label.insert(p);
    a.vertices.push_back(std::move(v));
  }
  a.succ.assign(n, {});
  std::uniform_int_distribution<std::size_t> vi(0, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t deg = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    std::set<std::size_t> targets;
    while (targets.size() < deg) targets.insert(vi(rng));
    for (std::size_t t : targets) a.succ[i].push_back(static_cast<int>(t));
  }
  a.init = 0;
  return a;
}

inline ParityGame random_parity_game(std::mt19937& rng, std::size_t n, int max_priority) {
  ParityGame g;
  g.arena = random_arena(rng, n, {});
  std::uniform_int_distribution<int> pr(0, max_priority);
  for (std::size_t i = 0; i < n; ++i) g.priority.push_back(pr(rng));
  return g;
}

// --- brute-force optimization oracle ---------------------------------------

// all valuations over `vars` with entries in [0, bound]
inline std::vector<Valuation> valuation_grid(const std::set<std::string>& vars, unsigned bound) {
  std::vector<Valuation> grid{{}};
  for (const auto& z : vars) {
    std::vector<Valuation> next;
    for (const auto& v : grid)
      for (unsigned n = 0; n <= bound; ++n) {
        Valuation w = v;
        w[z] = n;
        next.push_back(std::move(w));
      }
    grid = std::move(next);
  }
  return grid;
}

struct ScanResult {
  bool any = false;
  unsigned best = 0;
};

// brute-force objective over the membership predicate on a grid
template <typename Agg>
inline ScanResult scan_optimum(const PltlGame& g, unsigned bound, Agg aggregate_valuation,
                               bool maximize) {
  ScanResult r;
  for (const auto& alpha : valuation_grid(variables(g.formula), bound)) {
    if (!membership(g, 0, alpha).wins) continue;
    unsigned v = aggregate_valuation(alpha);
    if (!r.any || (maximize ? v > r.best : v < r.best)) r.best = v;
    r.any = true;
  }
  return r;
}

inline unsigned val_max(const Valuation& v) {
  unsigned m = 0;
  for (const auto& [_, n] : v) m = std::max(m, n);
  return m;
}

inline unsigned val_min(const Valuation& v) {
  unsigned m = ~0u;
  for (const auto& [_, n] : v) m = std::min(m, n);
  return m;
}

}  // namespace testutil
