#pragma once

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pltl/game.hpp"

namespace pltl {

// Parity game: arena plus vertex priorities.  Player 0 wins a play iff the
// minimal priority occurring infinitely often is even.
struct ParityGame {
  Arena arena;
  std::vector<int> priority;

  std::size_t size() const { return arena.size(); }
};

inline ParityGame parse_parity_game(const std::string& text) {
  std::istringstream in(text);
  std::string line, arena_text;
  std::vector<std::pair<std::string, int>> prios;
  while (std::getline(in, line)) {
    std::string stripped = line;
    auto hash = stripped.find('#');
    if (hash != std::string::npos) stripped.erase(hash);
    std::istringstream ls(stripped);
    std::string kw;
    if (ls >> kw && kw == "prio") {
      std::string v;
      int p;
      if (!(ls >> v >> p) || p < 0) throw ArenaError("malformed prio line: " + line);
      prios.emplace_back(v, p);
    } else {
      arena_text += line;
      arena_text += '\n';
    }
  }
  ParityGame g;
  g.arena = parse_arena(arena_text);
  g.priority.assign(g.arena.size(), -1);
  for (const auto& [v, p] : prios) {
    int i = g.arena.index_of(v);
    if (i < 0) throw ArenaError("prio references unknown vertex " + v);
    g.priority[i] = p;
  }
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.priority[v] < 0)
      throw ArenaError("vertex " + g.arena.vertices[v].name + " has no priority");
  return g;
}

inline std::string dump_parity_game(const ParityGame& g) {
  std::string out = dump_arena(g.arena);
  for (std::size_t v = 0; v < g.size(); ++v)
    out += "prio " + g.arena.vertices[v].name + " " + std::to_string(g.priority[v]) + "\n";
  return out;
}

// winner[v] in {0,1}; strat0/strat1 give the positional move for the
// respective winner's vertices inside their own region (-1 elsewhere).
struct ParitySolution {
  std::vector<int> winner;
  std::vector<int> strat0, strat1;
};

namespace detail {

// Attractor of `targets` for player i within `in_game`; records a move for
// i's newly attracted vertices (lowest-id successor one layer closer).
inline std::vector<char> attractor(const ParityGame& g, int player,
                                   const std::vector<char>& in_game,
                                   const std::vector<char>& targets, std::vector<int>& strat) {
  const std::size_t n = g.size();
  std::vector<std::vector<int>> pred(n);
  std::vector<int> out_deg(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!in_game[v]) continue;
    for (int w : g.arena.succ[v])
      if (in_game[w]) {
        pred[w].push_back(static_cast<int>(v));
        ++out_deg[v];
      }
  }
  std::vector<char> attr(n, 0);
  std::queue<int> work;
  for (std::size_t v = 0; v < n; ++v)
    if (in_game[v] && targets[v]) {
      attr[v] = 1;
      work.push(static_cast<int>(v));
    }
  while (!work.empty()) {
    int w = work.front();
    work.pop();
    for (int v : pred[w]) {
      if (attr[v]) continue;
      if (g.arena.vertices[v].owner == player) {
        if (strat[v] < 0) {
          // deterministic: lowest-id successor already in the attractor;
          // chosen before attr[v] is set so a self-loop cannot be picked
          for (int u : g.arena.succ[v])
            if (in_game[u] && attr[u] && (strat[v] < 0 || u < strat[v])) strat[v] = u;
        }
        attr[v] = 1;
        work.push(v);
      } else {
        if (--out_deg[v] == 0) {
          attr[v] = 1;
          work.push(v);
        }
      }
    }
  }
  return attr;
}

inline void zielonka(const ParityGame& g, std::vector<char> in_game, ParitySolution& sol) {
  const std::size_t n = g.size();
  int p = -1;
  for (std::size_t v = 0; v < n; ++v)
    if (in_game[v] && (p < 0 || g.priority[v] < p)) p = g.priority[v];
  if (p < 0) return;  // empty subgame
  int i = p % 2;
  auto& strat_i = i == 0 ? sol.strat0 : sol.strat1;
  auto& strat_o = i == 0 ? sol.strat1 : sol.strat0;

  std::vector<char> targets(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (in_game[v] && g.priority[v] == p) targets[v] = 1;

  std::vector<int> astrat(n, -1);
  auto attr = attractor(g, i, in_game, targets, astrat);

  std::vector<char> rest = in_game;
  for (std::size_t v = 0; v < n; ++v)
    if (attr[v]) rest[v] = 0;
  ParitySolution sub{std::vector<int>(n, -1), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  zielonka(g, rest, sub);

  bool opponent_empty = true;
  for (std::size_t v = 0; v < n; ++v)
    if (rest[v] && sub.winner[v] == 1 - i) opponent_empty = false;

  if (opponent_empty) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_game[v]) continue;
      sol.winner[v] = i;
      if (g.arena.vertices[v].owner != i) continue;
      if (rest[v]) {
        strat_i[v] = (i == 0 ? sub.strat0 : sub.strat1)[v];
      } else if (targets[v]) {
        // any move staying in the subgame keeps the minimal priority p
        for (int u : g.arena.succ[v])
          if (in_game[u]) {
            strat_i[v] = u;
            break;
          }
      } else {
        strat_i[v] = astrat[v];
      }
    }
    return;
  }

  std::vector<char> opp_win(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (rest[v] && sub.winner[v] == 1 - i) opp_win[v] = 1;
  std::vector<int> bstrat(n, -1);
  auto battr = attractor(g, 1 - i, in_game, opp_win, bstrat);

  std::vector<char> rest2 = in_game;
  for (std::size_t v = 0; v < n; ++v)
    if (battr[v]) rest2[v] = 0;
  ParitySolution sub2{std::vector<int>(n, -1), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  zielonka(g, rest2, sub2);

  for (std::size_t v = 0; v < n; ++v) {
    if (!in_game[v]) continue;
    if (battr[v]) {
      sol.winner[v] = 1 - i;
      if (g.arena.vertices[v].owner == 1 - i) {
        if (opp_win[v])
          strat_o[v] = (i == 0 ? sub.strat1 : sub.strat0)[v];
        else
          strat_o[v] = bstrat[v];
      }
    } else {
      sol.winner[v] = sub2.winner[v];
      sol.strat0[v] = sub2.strat0[v];
      sol.strat1[v] = sub2.strat1[v];
    }
  }
}

}  // namespace detail

inline ParitySolution solve_parity(const ParityGame& g) {
  const std::size_t n = g.size();
  ParitySolution sol{std::vector<int>(n, -1), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  detail::zielonka(g, std::vector<char>(n, 1), sol);
  return sol;
}

namespace detail {

// Does the edge-restricted subgraph admit a cycle, reachable from `from`,
// whose minimal priority has parity `bad`?  succ must already reflect any
// strategy restriction.
inline bool has_bad_cycle(const ParityGame& g, const std::vector<std::vector<int>>& succ, int from,
                          int bad) {
  const std::size_t n = g.size();
  std::vector<char> reach(n, 0);
  std::queue<int> bfs;
  reach[from] = 1;
  bfs.push(from);
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : succ[v])
      if (!reach[w]) {
        reach[w] = 1;
        bfs.push(w);
      }
  }
  int maxp = 0;
  for (std::size_t v = 0; v < n; ++v) maxp = std::max(maxp, g.priority[v]);
  for (int p = bad; p <= maxp; p += 2) {
    // cycles within the priority>=p subgraph through a p-vertex have minimum
    // exactly p
    std::vector<std::vector<int>> sub(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!reach[v] || g.priority[v] < p) continue;
      for (int w : succ[v])
        if (reach[w] && g.priority[w] >= p) sub[v].push_back(w);
    }
    auto scc = scc_decompose(n, sub);
    for (std::size_t v = 0; v < n; ++v)
      if (reach[v] && g.priority[v] == p && scc.nontrivial[scc.comp[v]]) return true;
  }
  return false;
}

}  // namespace detail

// Exhaustive oracle: enumerate the positional strategies of each player and
// check the cycles of the restricted graph.  Guarded to small games.
inline std::vector<int> brute_force_parity(const ParityGame& g, std::size_t max_combos = 1u << 16) {
  const std::size_t n = g.size();
  std::vector<int> winner(n, -1);
  for (int player = 0; player < 2; ++player) {
    std::vector<int> owned;
    for (std::size_t v = 0; v < n; ++v)
      if (g.arena.vertices[v].owner == player) owned.push_back(static_cast<int>(v));
    std::size_t combos = 1;
    for (int v : owned) {
      combos *= g.arena.succ[v].size();
      if (combos > max_combos)
        throw std::invalid_argument("brute_force_parity: too many strategies");
    }
    std::vector<char> won(n, 0);
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rem = c;
      std::vector<std::vector<int>> succ(n);
      for (std::size_t v = 0; v < n; ++v) succ[v] = g.arena.succ[v];
      for (std::size_t oi = 0; oi < owned.size(); ++oi) {
        std::size_t deg = g.arena.succ[owned[oi]].size();
        succ[owned[oi]] = {g.arena.succ[owned[oi]][rem % deg]};
        rem /= deg;
      }
      for (std::size_t v = 0; v < n; ++v)
        if (!won[v] && !detail::has_bad_cycle(g, succ, static_cast<int>(v), 1 - player)) won[v] = 1;
    }
    for (std::size_t v = 0; v < n; ++v)
      if (won[v]) {
        if (winner[v] != -1 && winner[v] != player)
          throw std::logic_error("brute_force_parity: both players win a vertex");
        winner[v] = player;
      }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (winner[v] < 0) throw std::logic_error("brute_force_parity: undetermined vertex");
  return winner;
}

// Independent check of a claimed region + positional strategy for `player`:
// the strategy must stay in the region, the opponent must be trapped, and no
// reachable cycle of the restricted graph may favor the opponent.
inline bool verify_parity_strategy(const ParityGame& g, int player, const std::vector<int>& winner,
                                   const std::vector<int>& strat) {
  const std::size_t n = g.size();
  std::vector<std::vector<int>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (winner[v] != player) continue;
    if (g.arena.vertices[v].owner == player) {
      int mv = strat[v];
      if (mv < 0 || !g.arena.has_edge(static_cast<int>(v), mv)) return false;
      if (winner[mv] != player) return false;
      succ[v] = {mv};
    } else {
      for (int w : g.arena.succ[v]) {
        if (winner[w] != player) return false;  // opponent escapes the region
        succ[v].push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (winner[v] == player &&
        detail::has_bad_cycle(g, succ, static_cast<int>(v), 1 - player))
      return false;
  return true;
}

}  // namespace pltl
