#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pltl/formula.hpp"

namespace pltl {

// Letters are indexed subsets of the automaton's proposition list: bit i of a
// letter index corresponds to ap[i].
using LetterIndex = unsigned;

inline LetterIndex letter_index(const std::vector<std::string>& ap, const Letter& l) {
  LetterIndex idx = 0;
  for (std::size_t i = 0; i < ap.size(); ++i)
    if (l.count(ap[i])) idx |= 1u << i;
  return idx;
}

inline Letter letter_set(const std::vector<std::string>& ap, LetterIndex idx) {
  Letter l;
  for (std::size_t i = 0; i < ap.size(); ++i)
    if ((idx >> i) & 1u) l.insert(ap[i]);
  return l;
}

// Acceptance-set flavors of the tableau automaton, tagged with their source.
enum class AccKind { Until, Release, BoundedF };

struct AccSet {
  AccKind kind;
  std::string tag;  // canonical key of the source subformula
  std::string var;  // parameter variable for BoundedF sets
  std::vector<int> states;
};

struct GNBA {
  std::vector<std::string> ap;
  ClosureInfo cl;
  std::vector<std::uint64_t> state_sets;  // consistent set per state id
  std::vector<int> initial;
  std::vector<std::vector<std::vector<int>>> trans;  // [state][letter] -> successors
  std::vector<AccSet> acc;

  std::size_t num_states() const { return state_sets.size(); }
  std::size_t num_letters() const { return std::size_t{1} << ap.size(); }
};

// Eventuality constraint carried through degeneralization: the run must visit
// `states` in every infix of length alpha(var)+1.
struct WindowFamily {
  std::string var;
  std::string tag;
  std::vector<int> states;
};

struct NBA {
  std::vector<std::string> ap;
  std::size_t num_states = 0;
  std::vector<int> initial;
  std::vector<char> accepting;
  std::vector<std::vector<std::vector<int>>> trans;  // [state][letter] -> successors
  std::vector<WindowFamily> windows;
  std::vector<int> gnba_state;  // projection to the source tableau state, or -1

  std::size_t num_letters() const { return std::size_t{1} << ap.size(); }
};

// A concrete window constraint (F_j, b_j): every infix of length b_j of a run
// must contain a state from F_j.
struct Constraint {
  std::vector<int> states;
  unsigned bound;  // >= 1
};

using ConstraintSet = std::vector<Constraint>;

inline ConstraintSet constraints_for(const NBA& a, const Valuation& alpha) {
  ConstraintSet out;
  for (const auto& w : a.windows) out.push_back({w.states, valuation_at(alpha, w.var) + 1});
  return out;
}

// ---------------------------------------------------------------------------
// Tableau construction: PLTL_F formula -> unambiguous generalized Buchi
// automaton.  Parameters are ignored in the transition relation; the bounds
// live in the window constraints.
// ---------------------------------------------------------------------------

inline GNBA build_gnba(const Formula& phi) {
  FormulaClass c = classify(phi);
  if (c == FormulaClass::PltlG || c == FormulaClass::Pltl)
    throw std::invalid_argument("build_gnba: formula contains G<= (strip or negate first)");

  GNBA a;
  a.cl = closure_and_consistent_sets(phi);
  for (const auto& p : atoms(phi)) a.ap.push_back(p);
  if (a.ap.size() > 16) throw std::invalid_argument("build_gnba: too many atomic propositions");
  a.state_sets = a.cl.consistent;

  const std::size_t n = a.state_sets.size();
  const std::size_t cl_n = a.cl.closure.size();

  int phi_idx = a.cl.index_of(phi);
  for (std::size_t s = 0; s < n; ++s)
    if (a.cl.contains(a.state_sets[s], phi_idx)) a.initial.push_back(static_cast<int>(s));

  // Letter of a state is its atom content; the local expansion rules for
  // X/U/R/F<= fix which closure bits the successor must and must not carry.
  std::vector<LetterIndex> state_letter(n, 0);
  std::vector<std::uint64_t> req(n, 0), forb(n, 0);
  auto in = [&](std::uint64_t mask, int i) { return i >= 0 && ((mask >> i) & 1u); };
  for (std::size_t s = 0; s < n; ++s) {
    std::uint64_t B = a.state_sets[s];
    Letter l;
    bool dead = false;
    for (std::size_t i = 0; i < cl_n; ++i) {
      const Formula& g = a.cl.closure[i];
      bool has = (B >> i) & 1u;
      int li = g->lhs ? a.cl.index.at(key(g->lhs)) : -1;
      int ri = g->rhs ? a.cl.index.at(key(g->rhs)) : -1;
      switch (g->kind) {
        case Kind::Atom:
          if (has) l.insert(g->name);
          break;
        case Kind::Next:
          (has ? req[s] : forb[s]) |= 1ull << li;
          break;
        case Kind::Until:
          if (has && !in(B, ri)) {
            if (!in(B, li)) dead = true;
            else req[s] |= 1ull << i;
          } else if (!has && in(B, li) && !in(B, ri)) {
            forb[s] |= 1ull << i;
          }
          break;
        case Kind::Release:
          if (has) {
            if (!in(B, ri)) dead = true;
            else if (!in(B, li)) req[s] |= 1ull << i;
          } else if (in(B, ri) && !in(B, li)) {
            forb[s] |= 1ull << i;
          }
          break;
        case Kind::BoundedF:
          if (has && !in(B, li)) req[s] |= 1ull << i;
          else if (!has) forb[s] |= 1ull << i;
          break;
        default:
          break;
      }
    }
    if (dead) {  // no successor can discharge the obligations
      req[s] = ~0ull;
      forb[s] = ~0ull;
    }
    state_letter[s] = letter_index(a.ap, l);
  }

  a.trans.assign(n, std::vector<std::vector<int>>(a.num_letters()));
  for (std::size_t s = 0; s < n; ++s) {
    if (req[s] == ~0ull && forb[s] == ~0ull) continue;
    auto& succ = a.trans[s][state_letter[s]];
    for (std::size_t t = 0; t < n; ++t) {
      std::uint64_t B2 = a.state_sets[t];
      if ((B2 & req[s]) == req[s] && (B2 & forb[s]) == 0) succ.push_back(static_cast<int>(t));
    }
  }

  for (std::size_t i = 0; i < cl_n; ++i) {
    const Formula& g = a.cl.closure[i];
    if (g->kind != Kind::Until && g->kind != Kind::Release && g->kind != Kind::BoundedF) continue;
    AccSet f;
    f.tag = key(g);
    int li = a.cl.index.at(key(g->lhs));
    int ri = g->rhs ? a.cl.index.at(key(g->rhs)) : -1;
    for (std::size_t s = 0; s < n; ++s) {
      std::uint64_t B = a.state_sets[s];
      bool member = false;
      switch (g->kind) {
        case Kind::Until: member = !in(B, static_cast<int>(i)) || in(B, ri); break;
        case Kind::Release: member = in(B, static_cast<int>(i)) || !in(B, ri); break;
        case Kind::BoundedF: member = !in(B, static_cast<int>(i)) || in(B, li); break;
        default: break;
      }
      if (member) f.states.push_back(static_cast<int>(s));
    }
    f.kind = g->kind == Kind::Until ? AccKind::Until
             : g->kind == Kind::Release ? AccKind::Release
                                        : AccKind::BoundedF;
    if (g->kind == Kind::BoundedF) f.var = g->name;
    a.acc.push_back(std::move(f));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Degeneralization: round-robin counter over the acceptance family.  Index i
// means F_1..F_i have been seen this round; a state with index k completes
// the round and is accepting, after which the index resets.
// ---------------------------------------------------------------------------

inline NBA degeneralize(const GNBA& a) {
  const std::size_t k = a.acc.size();
  const std::size_t n = a.num_states();

  std::vector<std::vector<char>> in_acc(k, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < k; ++j)
    for (int s : a.acc[j].states) in_acc[j][s] = 1;

  NBA b;
  b.ap = a.ap;
  b.num_states = n * (k + 1);
  b.accepting.assign(b.num_states, 0);
  b.gnba_state.assign(b.num_states, -1);
  b.trans.assign(b.num_states, std::vector<std::vector<int>>(a.num_letters()));

  auto id = [&](std::size_t q, std::size_t i) { return static_cast<int>(q * (k + 1) + i); };
  auto advance = [&](std::size_t i, std::size_t q2) {
    if (i == k) i = 0;  // reset after a completed round
    if (i < k && in_acc[i][q2]) ++i;
    return i;
  };

  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t i = 0; i <= k; ++i) {
      b.gnba_state[id(q, i)] = static_cast<int>(q);
      b.accepting[id(q, i)] = (i == k || k == 0) ? 1 : 0;
      for (std::size_t l = 0; l < a.num_letters(); ++l)
        for (int q2 : a.trans[q][l])
          b.trans[id(q, i)][l].push_back(id(q2, advance(i, q2)));
    }

  for (int q0 : a.initial) b.initial.push_back(id(q0, 0));

  // Window constraints are on first components: lift each F<= set to all
  // round-robin copies.
  for (const auto& f : a.acc) {
    if (f.kind != AccKind::BoundedF) continue;
    WindowFamily w;
    w.var = f.var;
    w.tag = f.tag;
    for (int q : f.states)
      for (std::size_t i = 0; i <= k; ++i) w.states.push_back(id(q, i));
    std::sort(w.states.begin(), w.states.end());
    b.windows.push_back(std::move(w));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Unproductive-state removal and the structural checks of the pipeline.
// ---------------------------------------------------------------------------

namespace detail {

// Tarjan SCC over an explicit successor list.
struct SccResult {
  std::vector<int> comp;        // vertex -> component id
  std::vector<char> nontrivial; // component has an internal edge
};

inline SccResult scc_decompose(std::size_t n, const std::vector<std::vector<int>>& succ) {
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<int> low(n, 0), num(n, -1), stk;
  std::vector<char> on(n, 0);
  int counter = 0, comps = 0;
  // iterative Tarjan
  struct Frame { int v; std::size_t ei; };
  for (std::size_t root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> frames{{static_cast<int>(root), 0}};
    num[root] = low[root] = counter++;
    stk.push_back(static_cast<int>(root));
    on[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.ei < succ[f.v].size()) {
        int w = succ[f.v][f.ei++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stk.push_back(w);
          on[w] = 1;
          frames.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == num[v]) {
          int cid = comps++;
          int w;
          do {
            w = stk.back();
            stk.pop_back();
            on[w] = 0;
            r.comp[w] = cid;
          } while (w != v);
        }
      }
    }
  }
  r.nontrivial.assign(comps, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (int w : succ[v])
      if (r.comp[v] == r.comp[w]) r.nontrivial[r.comp[v]] = 1;
  return r;
}

inline std::vector<std::vector<int>> flat_succ(const NBA& a) {
  std::vector<std::vector<int>> succ(a.num_states);
  for (std::size_t s = 0; s < a.num_states; ++s)
    for (const auto& per_letter : a.trans[s])
      for (int t : per_letter) succ[s].push_back(t);
  return succ;
}

}  // namespace detail

// A state is productive iff it is reachable from an initial state and some
// accepting run starts in it (it reaches a cycle through an accepting state).
inline NBA remove_unproductive(const NBA& a) {
  const std::size_t n = a.num_states;
  auto succ = detail::flat_succ(a);

  std::vector<char> reach(n, 0);
  std::queue<int> bfs;
  for (int s : a.initial)
    if (!reach[s]) { reach[s] = 1; bfs.push(s); }
  while (!bfs.empty()) {
    int s = bfs.front();
    bfs.pop();
    for (int t : succ[s])
      if (!reach[t]) { reach[t] = 1; bfs.push(t); }
  }

  auto scc = detail::scc_decompose(n, succ);
  std::vector<char> good_comp(scc.nontrivial.size(), 0);
  for (std::size_t s = 0; s < n; ++s)
    if (a.accepting[s] && scc.nontrivial[scc.comp[s]]) good_comp[scc.comp[s]] = 1;

  // backward closure of good components over the successor relation
  std::vector<char> live(n, 0);
  bool changed = true;
  for (std::size_t s = 0; s < n; ++s) live[s] = good_comp[scc.comp[s]];
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (live[s]) continue;
      for (int t : succ[s])
        if (live[t]) { live[s] = 1; changed = true; break; }
    }
  }

  std::vector<int> remap(n, -1);
  NBA b;
  b.ap = a.ap;
  for (std::size_t s = 0; s < n; ++s)
    if (reach[s] && live[s]) remap[s] = static_cast<int>(b.num_states++);
  b.accepting.assign(b.num_states, 0);
  b.gnba_state.assign(b.num_states, -1);
  b.trans.assign(b.num_states, std::vector<std::vector<int>>(a.num_letters()));
  for (std::size_t s = 0; s < n; ++s) {
    if (remap[s] < 0) continue;
    b.accepting[remap[s]] = a.accepting[s];
    b.gnba_state[remap[s]] = a.gnba_state[s];
    for (std::size_t l = 0; l < a.num_letters(); ++l)
      for (int t : a.trans[s][l])
        if (remap[t] >= 0) b.trans[remap[s]][l].push_back(remap[t]);
  }
  for (int s : a.initial)
    if (remap[s] >= 0) b.initial.push_back(remap[s]);
  for (const auto& w : a.windows) {
    WindowFamily w2;
    w2.var = w.var;
    w2.tag = w.tag;
    for (int s : w.states)
      if (remap[s] >= 0) w2.states.push_back(remap[s]);
    b.windows.push_back(std::move(w2));
  }
  return b;
}

// Exact unambiguity check: the self-product with a divergence flag has a pair
// of jointly accepting runs iff some word carries two distinct accepting runs.
inline bool check_unambiguous(const NBA& a) {
  const std::size_t n = a.num_states;
  if (n == 0) return true;
  auto id = [&](int q1, int q2, int flag) {
    return (static_cast<std::size_t>(q1) * n + q2) * 2 + flag;
  };
  std::vector<char> seen(n * n * 2, 0);
  std::vector<std::size_t> order;
  std::queue<std::size_t> bfs;
  for (int q1 : a.initial)
    for (int q2 : a.initial) {
      std::size_t v = id(q1, q2, q1 != q2);
      if (!seen[v]) { seen[v] = 1; bfs.push(v); }
    }
  std::vector<std::vector<int>> succ(n * n * 2);
  while (!bfs.empty()) {
    std::size_t v = bfs.front();
    bfs.pop();
    order.push_back(v);
    int flag = static_cast<int>(v % 2);
    int q2 = static_cast<int>((v / 2) % n);
    int q1 = static_cast<int>(v / 2 / n);
    for (std::size_t l = 0; l < a.num_letters(); ++l)
      for (int t1 : a.trans[q1][l])
        for (int t2 : a.trans[q2][l]) {
          std::size_t w = id(t1, t2, flag || t1 != t2);
          succ[v].push_back(static_cast<int>(w));
          if (!seen[w]) { seen[w] = 1; bfs.push(w); }
        }
  }
  // restrict SCC analysis to reached product vertices
  auto scc = detail::scc_decompose(n * n * 2, succ);
  std::vector<char> has1(scc.nontrivial.size(), 0), has2(scc.nontrivial.size(), 0);
  for (std::size_t v : order) {
    if (v % 2 == 0) continue;  // runs never diverged
    int q2 = static_cast<int>((v / 2) % n);
    int q1 = static_cast<int>(v / 2 / n);
    int c = scc.comp[v];
    if (!scc.nontrivial[c]) continue;
    if (a.accepting[q1]) has1[c] = 1;
    if (a.accepting[q2]) has2[c] = 1;
    if (has1[c] && has2[c]) return false;
  }
  return true;
}

// Exact non-confluence check via pair reachability: confluent iff two distinct
// simultaneously reachable states share a successor on some letter.
inline bool check_nonconfluent(const NBA& a) {
  const std::size_t n = a.num_states;
  if (n == 0) return true;
  auto id = [&](int q1, int q2) { return static_cast<std::size_t>(q1) * n + q2; };
  std::vector<char> seen(n * n, 0);
  std::queue<std::size_t> bfs;
  for (int q1 : a.initial)
    for (int q2 : a.initial)
      if (!seen[id(q1, q2)]) { seen[id(q1, q2)] = 1; bfs.push(id(q1, q2)); }
  while (!bfs.empty()) {
    std::size_t v = bfs.front();
    bfs.pop();
    int q2 = static_cast<int>(v % n);
    int q1 = static_cast<int>(v / n);
    if (q1 != q2) {
      for (std::size_t l = 0; l < a.num_letters(); ++l) {
        std::vector<char> succ1(n, 0);
        for (int t : a.trans[q1][l]) succ1[t] = 1;
        for (int t : a.trans[q2][l])
          if (succ1[t]) return false;
      }
    }
    for (std::size_t l = 0; l < a.num_letters(); ++l)
      for (int t1 : a.trans[q1][l])
        for (int t2 : a.trans[q2][l])
          if (!seen[id(t1, t2)]) { seen[id(t1, t2)] = 1; bfs.push(id(t1, t2)); }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Constrained lasso acceptance: an exact oracle searching for an accepting
// run that satisfies all window constraints, via Buchi emptiness on the
// product of the automaton, the counter vectors, and the word positions.
// ---------------------------------------------------------------------------

inline bool nba_lasso_accepts(const NBA& a, const ConstraintSet& o, const LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("nba_lasso_accepts: empty cycle");
  for (const auto& c : o)
    if (c.bound == 0) throw std::invalid_argument("nba_lasso_accepts: zero window bound");
  const std::size_t k = o.size();
  const std::size_t len = w.prefix.size() + w.cycle.size();

  std::vector<std::vector<char>> in_f(k, std::vector<char>(a.num_states, 0));
  for (std::size_t j = 0; j < k; ++j)
    for (int s : o[j].states) in_f[j][s] = 1;

  std::vector<LetterIndex> letters(len);
  for (std::size_t i = 0; i < len; ++i) {
    Letter proj;
    const Letter& full = i < w.prefix.size() ? w.prefix[i] : w.cycle[i - w.prefix.size()];
    for (const auto& p : a.ap)
      if (full.count(p)) proj.insert(p);
    letters[i] = letter_index(a.ap, proj);
  }

  struct Node {
    int q;
    std::size_t pos;
    std::vector<unsigned> d;
    bool operator<(const Node& o2) const { return std::tie(q, pos, d) < std::tie(o2.q, o2.pos, o2.d); }
  };
  auto counters_for = [&](int q, const std::vector<unsigned>* prev) {
    std::vector<unsigned> d(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (in_f[j][q]) d[j] = 0;
      else d[j] = prev ? (*prev)[j] + 1 : 1;
      if (d[j] >= o[j].bound) return std::vector<unsigned>{};  // window violated
    }
    return d;
  };
  auto ok = [&](const std::vector<unsigned>& d) { return k == 0 || !d.empty(); };

  std::map<Node, int> ids;
  std::vector<Node> nodes;
  std::vector<std::vector<int>> succ;
  std::queue<int> bfs;
  auto intern = [&](Node nd) {
    auto it = ids.find(nd);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    ids.emplace(nd, id);
    nodes.push_back(std::move(nd));
    succ.emplace_back();
    bfs.push(id);
    return id;
  };
  for (int q : a.initial) {
    auto d = counters_for(q, nullptr);
    if (ok(d)) intern({q, 0, std::move(d)});
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    Node nd = nodes[v];
    std::size_t npos = nd.pos + 1 < len ? nd.pos + 1 : w.prefix.size();
    for (int q2 : a.trans[nd.q][letters[nd.pos]]) {
      auto d = counters_for(q2, &nd.d);
      if (!ok(d)) continue;
      int w2 = intern({q2, npos, std::move(d)});
      succ[v].push_back(w2);
    }
  }

  auto scc = detail::scc_decompose(nodes.size(), succ);
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (a.accepting[nodes[v].q] && scc.nontrivial[scc.comp[v]]) return true;
  return false;
}

// Plain Buchi acceptance of a lasso word.
inline bool nba_accepts(const NBA& a, const LassoWord& w) { return nba_lasso_accepts(a, {}, w); }

// ---------------------------------------------------------------------------
// Text dumps (HOA-inspired; bit-exact for golden tests).
// ---------------------------------------------------------------------------

namespace detail {

inline std::string letter_text(const std::vector<std::string>& ap, LetterIndex idx) {
  std::string out;
  for (std::size_t i = 0; i < ap.size(); ++i)
    if ((idx >> i) & 1u) {
      if (!out.empty()) out += ',';
      out += ap[i];
    }
  return out.empty() ? "-" : out;
}

inline void dump_header(std::ostream& os, std::size_t n, const std::vector<int>& initial,
                        const std::string& acc, const std::vector<std::string>& ap) {
  os << "States: " << n << "\n";
  os << "Start:";
  for (int s : initial) os << ' ' << s;
  os << "\n";
  os << "Acceptance: " << acc << "\n";
  os << "AP:";
  for (const auto& p : ap) os << ' ' << p;
  os << "\n";
}

}  // namespace detail

inline std::string dump_nba(const NBA& a) {
  std::ostringstream os;
  detail::dump_header(os, a.num_states, a.initial, "buchi", a.ap);
  for (std::size_t s = 0; s < a.num_states; ++s) {
    os << "State: " << s;
    if (a.accepting[s]) os << " {0}";
    os << "\n";
    for (std::size_t l = 0; l < a.num_letters(); ++l)
      for (int t : a.trans[s][l])
        os << "  " << detail::letter_text(a.ap, static_cast<LetterIndex>(l)) << " -> " << t << "\n";
  }
  return os.str();
}

inline std::string dump_gnba(const GNBA& a) {
  std::ostringstream os;
  detail::dump_header(os, a.num_states(), a.initial, "gen-buchi " + std::to_string(a.acc.size()), a.ap);
  std::vector<std::vector<int>> marks(a.num_states());
  for (std::size_t j = 0; j < a.acc.size(); ++j)
    for (int s : a.acc[j].states) marks[s].push_back(static_cast<int>(j));
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    os << "State: " << s;
    if (!marks[s].empty()) {
      os << " {";
      for (std::size_t i = 0; i < marks[s].size(); ++i) os << (i ? "," : "") << marks[s][i];
      os << "}";
    }
    os << "\n";
    for (std::size_t l = 0; l < a.num_letters(); ++l)
      for (int t : a.trans[s][l])
        os << "  " << detail::letter_text(a.ap, static_cast<LetterIndex>(l)) << " -> " << t << "\n";
  }
  return os.str();
}

namespace detail {

struct DumpHeader {
  std::size_t states = 0;
  std::vector<int> initial;
  std::string acc_kind;
  int acc_arg = 0;
  std::vector<std::string> ap;
};

inline DumpHeader parse_dump_header(std::istream& in) {
  DumpHeader h;
  std::string line;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("automaton dump: truncated header");
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "States:") {
      ls >> h.states;
    } else if (kw == "Start:") {
      int s;
      while (ls >> s) h.initial.push_back(s);
    } else if (kw == "Acceptance:") {
      ls >> h.acc_kind;
      ls >> h.acc_arg;
    } else if (kw == "AP:") {
      std::string p;
      while (ls >> p) h.ap.push_back(p);
    } else {
      throw std::runtime_error("automaton dump: unexpected header line: " + line);
    }
  }
  return h;
}

inline LetterIndex parse_letter(const std::vector<std::string>& ap, const std::string& text) {
  if (text == "-") return 0;
  LetterIndex idx = 0;
  std::istringstream ps(text);
  std::string p;
  while (std::getline(ps, p, ',')) {
    auto it = std::find(ap.begin(), ap.end(), p);
    if (it == ap.end()) throw std::runtime_error("automaton dump: unknown proposition " + p);
    idx |= 1u << (it - ap.begin());
  }
  return idx;
}

}  // namespace detail

inline NBA parse_nba(const std::string& text) {
  std::istringstream in(text);
  auto h = detail::parse_dump_header(in);
  if (h.acc_kind != "buchi") throw std::runtime_error("parse_nba: not a Buchi dump");
  NBA a;
  a.ap = h.ap;
  a.num_states = h.states;
  a.initial = h.initial;
  a.accepting.assign(h.states, 0);
  a.gnba_state.assign(h.states, -1);
  a.trans.assign(h.states, std::vector<std::vector<int>>(a.num_letters()));
  std::string line;
  int cur = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "State:") {
      if (!(ls >> cur) || cur < 0 || cur >= static_cast<int>(h.states))
        throw std::runtime_error("parse_nba: bad state id");
      std::string marks;
      if (ls >> marks) a.accepting[cur] = 1;
    } else {
      std::string arrow;
      int dst;
      if (!(ls >> arrow >> dst) || arrow != "->" || cur < 0)
        throw std::runtime_error("parse_nba: bad transition line: " + line);
      a.trans[cur][detail::parse_letter(a.ap, tok)].push_back(dst);
    }
  }
  return a;
}

inline std::string dump_constraints(const ConstraintSet& o) {
  std::ostringstream os;
  for (std::size_t j = 0; j < o.size(); ++j) {
    os << "Constraint: " << j << " b=" << o[j].bound << " F={";
    for (std::size_t i = 0; i < o[j].states.size(); ++i) os << (i ? "," : "") << o[j].states[i];
    os << "}\n";
  }
  return os.str();
}

}  // namespace pltl
