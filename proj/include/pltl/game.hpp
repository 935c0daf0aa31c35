#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pltl/dpa.hpp"
#include "pltl/formula.hpp"

namespace pltl {

// Finite labeled game graph.  Every vertex has at least one outgoing edge;
// plays are infinite paths from `init`.  `choice` marks the edge-component
// vertices of an alternating-color expansion (ignored under normal play).
struct Vertex {
  std::string name;
  int owner = 0;  // 0 or 1
  Letter label;
  bool choice = false;
};

struct Arena {
  std::vector<Vertex> vertices;
  std::vector<std::vector<int>> succ;
  int init = 0;

  std::size_t size() const { return vertices.size(); }
  std::size_t num_edges() const {
    std::size_t e = 0;
    for (const auto& s : succ) e += s.size();
    return e;
  }
  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].name == name) return static_cast<int>(i);
    return -1;
  }
  bool has_edge(int u, int v) const {
    return std::find(succ[u].begin(), succ[u].end(), v) != succ[u].end();
  }
};

struct ArenaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate_arena(const Arena& a) {
  if (a.vertices.empty()) throw ArenaError("arena has no vertices");
  if (a.init < 0 || a.init >= static_cast<int>(a.size())) throw ArenaError("missing init vertex");
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a.vertices[v].owner != 0 && a.vertices[v].owner != 1)
      throw ArenaError("vertex " + a.vertices[v].name + " has invalid owner");
    if (a.succ[v].empty())
      throw ArenaError("vertex " + a.vertices[v].name + " has no outgoing edge");
  }
}

// Line-based format: `init <id>`, `vertex <id> <owner> [label p,q,...]`,
// `edge <src> <dst>`; `#` starts a comment.
inline Arena parse_arena(const std::string& text) {
  Arena a;
  std::map<std::string, int> idx;
  std::string init_name;
  std::vector<std::pair<std::string, std::string>> edges;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto fail = [&](const std::string& msg) -> ArenaError {
      return ArenaError("line " + std::to_string(lineno) + ": " + msg);
    };
    if (kw == "init") {
      if (!(ls >> init_name)) throw fail("init needs a vertex id");
    } else if (kw == "vertex") {
      Vertex v;
      if (!(ls >> v.name >> v.owner)) throw fail("vertex needs id and owner");
      if (v.owner != 0 && v.owner != 1) throw fail("owner must be 0 or 1");
      if (idx.count(v.name)) throw fail("duplicate vertex " + v.name);
      std::string tail;
      if (ls >> tail) {
        if (tail != "label") throw fail("expected 'label'");
        std::string props;
        if (ls >> props) {
          std::istringstream ps(props);
          std::string p;
          while (std::getline(ps, p, ','))
            if (!p.empty()) v.label.insert(p);
        }
      }
      idx[v.name] = static_cast<int>(a.vertices.size());
      a.vertices.push_back(std::move(v));
    } else if (kw == "edge") {
      std::string s, d;
      if (!(ls >> s >> d)) throw fail("edge needs src and dst");
      edges.emplace_back(s, d);
    } else {
      throw fail("unknown directive '" + kw + "'");
    }
  }

  a.succ.assign(a.vertices.size(), {});
  for (const auto& [s, d] : edges) {
    auto si = idx.find(s), di = idx.find(d);
    if (si == idx.end()) throw ArenaError("edge references unknown vertex " + s);
    if (di == idx.end()) throw ArenaError("edge references unknown vertex " + d);
    a.succ[si->second].push_back(di->second);
  }
  if (init_name.empty()) throw ArenaError("missing init vertex");
  auto ii = idx.find(init_name);
  if (ii == idx.end()) throw ArenaError("init references unknown vertex " + init_name);
  a.init = ii->second;
  validate_arena(a);
  return a;
}

inline std::string dump_arena(const Arena& a) {
  std::ostringstream os;
  os << "init " << a.vertices[a.init].name << "\n";
  for (const auto& v : a.vertices) {
    os << "vertex " << v.name << ' ' << v.owner;
    if (!v.label.empty()) {
      os << " label ";
      bool first = true;
      for (const auto& p : v.label) {
        if (!first) os << ',';
        os << p;
        first = false;
      }
    }
    os << "\n";
  }
  for (std::size_t u = 0; u < a.size(); ++u)
    for (int w : a.succ[u]) os << "edge " << a.vertices[u].name << ' ' << a.vertices[w].name << "\n";
  return os.str();
}

inline Arena dual_arena(const Arena& a) {
  Arena d = a;
  for (auto& v : d.vertices) v.owner = 1 - v.owner;
  return d;
}

struct PltlGame {
  Arena arena;
  Formula formula;
};

// The two players swap positions and the winning condition is negated.
inline PltlGame dual_game(const PltlGame& g) { return {dual_arena(g.arena), negate_nnf(g.formula)}; }

// Alternating-color expansion: two copies of the arena (color on / color
// off) plus a choice vertex per edge where Player 0 picks the next copy.
inline Arena expand_alternating_color(const Arena& a, const std::string& color) {
  for (const auto& v : a.vertices)
    if (v.label.count(color))
      throw ArenaError("color proposition '" + color + "' already used in arena labels");

  Arena x;
  // (v,b) at index 2v+b, edge vertices after
  for (const auto& v : a.vertices)
    for (int b = 0; b < 2; ++b) {
      Vertex nv;
      nv.name = v.name + "@" + std::to_string(b);
      nv.owner = v.owner;
      nv.label = v.label;
      if (b == 0) nv.label.insert(color);
      x.vertices.push_back(std::move(nv));
    }
  std::vector<std::pair<int, int>> edge_list;
  for (std::size_t u = 0; u < a.size(); ++u)
    for (int w : a.succ[u]) {
      Vertex ev;
      ev.name = a.vertices[u].name + "->" + a.vertices[w].name;
      ev.owner = 0;
      ev.choice = true;
      x.vertices.push_back(std::move(ev));
      edge_list.emplace_back(static_cast<int>(u), w);
    }
  x.succ.assign(x.vertices.size(), {});
  for (std::size_t e = 0; e < edge_list.size(); ++e) {
    int ev = static_cast<int>(2 * a.size() + e);
    auto [u, w] = edge_list[e];
    x.succ[2 * u].push_back(ev);
    x.succ[2 * u + 1].push_back(ev);
    x.succ[ev].push_back(2 * w);
    x.succ[ev].push_back(2 * w + 1);
  }
  x.init = 2 * a.init;
  validate_arena(x);
  return x;
}

// Table-based finite memory: states 0..size-1, update on the visited vertex.
struct MemoryStructure {
  std::size_t size = 1;
  int initial = 0;
  std::vector<std::vector<int>> upd;  // [m][vertex] -> m'

  int update(int m, int v) const { return upd[m][v]; }
};

struct MealyStrategy {
  int player = 0;
  std::vector<std::string> vertex_names;  // of the base arena
  MemoryStructure memory;
  std::vector<std::vector<int>> nxt;  // [vertex][m] -> vertex, -1 off-domain
};

// Reachable part of the product arena; origin maps back to the base arena.
struct ProductArena {
  Arena arena;
  std::vector<int> origin_vertex;
  std::vector<int> origin_memory;
};

inline ProductArena product_with_memory(const Arena& a, const MemoryStructure& m) {
  ProductArena p;
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> nodes;
  auto intern = [&](int v, int mm) {
    auto it = ids.find({v, mm});
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    ids.emplace(std::make_pair(v, mm), id);
    nodes.emplace_back(v, mm);
    return id;
  };
  std::queue<int> work;
  p.arena.init = intern(a.init, m.initial);
  work.push(p.arena.init);
  std::vector<std::vector<int>> succ;
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    auto [v, mm] = nodes[id];
    for (int w : a.succ[v]) {
      std::size_t before = nodes.size();
      int wid = intern(w, m.update(mm, w));
      if (nodes.size() > before) work.push(wid);
      succ.resize(nodes.size());
      succ[id].push_back(wid);
    }
  }
  succ.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [v, mm] = nodes[i];
    Vertex nv;
    nv.name = a.vertices[v].name + "#" + std::to_string(mm);
    nv.owner = a.vertices[v].owner;
    nv.label = a.vertices[v].label;
    nv.choice = a.vertices[v].choice;
    p.arena.vertices.push_back(std::move(nv));
    p.origin_vertex.push_back(v);
    p.origin_memory.push_back(mm);
  }
  p.arena.succ = std::move(succ);
  return p;
}

// Memory structure induced by a deterministic parity automaton: memory is the
// automaton state, updated by the label of the visited vertex.  The initial
// memory has already consumed the initial vertex's label, so the memory at
// play position t is the state after reading the first t+1 labels.  Under
// blinking, choice vertices leave the memory unchanged.
struct DpaMemory {
  MemoryStructure memory;
  std::vector<int> state_priority;  // priority of each memory state
};

inline DpaMemory dpa_to_memory(const DPA& d, const Arena& a, bool blinking) {
  if (blinking)
    for (std::size_t v = 0; v < a.size(); ++v)
      for (int w : a.succ[v])
        if (a.vertices[v].choice == a.vertices[w].choice)
          throw ArenaError("blinking requires an alternating vertex/choice arena");

  std::vector<LetterIndex> vletter(a.size());
  for (std::size_t v = 0; v < a.size(); ++v) {
    Letter proj;
    for (const auto& p : d.ap)
      if (a.vertices[v].label.count(p)) proj.insert(p);
    vletter[v] = letter_index(d.ap, proj);
  }
  DpaMemory out;
  out.memory.size = d.num_states();
  out.memory.initial = d.trans[d.initial][vletter[a.init]];
  out.memory.upd.assign(d.num_states(), std::vector<int>(a.size()));
  for (std::size_t m = 0; m < d.num_states(); ++m)
    for (std::size_t v = 0; v < a.size(); ++v)
      out.memory.upd[m][v] = (blinking && a.vertices[v].choice)
                                 ? static_cast<int>(m)
                                 : d.trans[m][vletter[v]];
  out.state_priority = d.priority;
  return out;
}

// Finitely represented play with derived trace.
struct PlayLasso {
  std::vector<int> prefix, cycle;  // vertex indices
};

inline LassoWord play_trace(const Arena& a, const PlayLasso& rho, bool blinking) {
  if (rho.cycle.empty()) throw std::invalid_argument("play_trace: empty cycle");
  if (blinking && rho.cycle.size() % 2 != 0)
    throw std::invalid_argument("play_trace: blinking needs an even cycle");
  LassoWord w;
  std::size_t step = blinking ? 2 : 1;
  for (std::size_t i = 0; i < rho.prefix.size(); i += step)
    w.prefix.push_back(a.vertices[rho.prefix[i]].label);
  // with an odd prefix the sampled positions enter the cycle at offset 1
  std::size_t start = blinking ? rho.prefix.size() % 2 : 0;
  for (std::size_t i = start; i < rho.cycle.size(); i += step)
    w.cycle.push_back(a.vertices[rho.cycle[i]].label);
  return w;
}

inline std::string dump_strategy(const MealyStrategy& s) {
  std::ostringstream os;
  os << "memory " << s.memory.size << "\n";
  os << "initial " << s.memory.initial << "\n";
  for (std::size_t m = 0; m < s.memory.size; ++m)
    for (std::size_t v = 0; v < s.vertex_names.size(); ++v)
      os << "upd " << m << ' ' << s.vertex_names[v] << " -> " << s.memory.upd[m][v] << "\n";
  for (std::size_t v = 0; v < s.nxt.size(); ++v)
    for (std::size_t m = 0; m < s.memory.size; ++m)
      if (s.nxt[v][m] >= 0)
        os << "move " << s.vertex_names[v] << ' ' << m << " -> "
           << s.vertex_names[s.nxt[v][m]] << "\n";
  return os.str();
}

inline MealyStrategy parse_strategy(const std::string& text, const Arena& a, int player) {
  MealyStrategy s;
  s.player = player;
  for (const auto& v : a.vertices) s.vertex_names.push_back(v.name);
  std::istringstream in(text);
  std::string line;
  bool have_size = false;
  std::vector<std::tuple<int, int, int>> upds;   // m, v, m'
  std::vector<std::tuple<int, int, int>> moves;  // v, m, v'
  auto vid = [&](const std::string& n) {
    int i = a.index_of(n);
    if (i < 0) throw ArenaError("strategy references unknown vertex " + n);
    return i;
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "memory") {
      ls >> s.memory.size;
      have_size = true;
    } else if (kw == "initial") {
      ls >> s.memory.initial;
    } else if (kw == "upd") {
      int m, m2;
      std::string v, arrow;
      if (!(ls >> m >> v >> arrow >> m2) || arrow != "->")
        throw ArenaError("malformed upd line: " + line);
      upds.emplace_back(m, vid(v), m2);
    } else if (kw == "move") {
      int m;
      std::string v, arrow, v2;
      if (!(ls >> v >> m >> arrow >> v2) || arrow != "->")
        throw ArenaError("malformed move line: " + line);
      moves.emplace_back(vid(v), m, vid(v2));
    } else {
      throw ArenaError("unknown strategy directive '" + kw + "'");
    }
  }
  if (!have_size || s.memory.size == 0) throw ArenaError("strategy missing memory count");
  s.memory.upd.assign(s.memory.size, std::vector<int>(a.size(), 0));
  s.nxt.assign(a.size(), std::vector<int>(s.memory.size, -1));
  for (auto [m, v, m2] : upds) {
    if (m < 0 || m >= static_cast<int>(s.memory.size) || m2 < 0 ||
        m2 >= static_cast<int>(s.memory.size))
      throw ArenaError("upd references unknown memory state");
    s.memory.upd[m][v] = m2;
  }
  for (auto [v, m, v2] : moves) {
    if (m < 0 || m >= static_cast<int>(s.memory.size))
      throw ArenaError("move references unknown memory state");
    if (!a.has_edge(v, v2))
      throw ArenaError("move uses a non-edge " + a.vertices[v].name + " -> " + a.vertices[v2].name);
    s.nxt[v][m] = v2;
  }
  return s;
}

}  // namespace pltl
