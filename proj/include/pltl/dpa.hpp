#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pltl/automata.hpp"

namespace pltl {

// Deterministic parity automaton produced by counter-augmented
// determinization of a non-confluent Buchi automaton.  Acceptance: the
// minimal priority seen infinitely often is even.
struct DPAState {
  // n+1 entries of (sorted state set, mark)
  std::vector<std::pair<std::vector<int>, int>> list;
  // d[q][j], -1 encodes "dead" (the simulated run violated window j)
  std::vector<std::vector<int>> d;
};

struct DPA {
  std::vector<std::string> ap;
  int initial = 0;
  std::vector<DPAState> states;
  std::vector<int> priority;
  std::vector<std::vector<int>> trans;  // [state][letter] -> state

  std::size_t num_states() const { return states.size(); }
  std::size_t num_letters() const { return std::size_t{1} << ap.size(); }
  int max_priority() const {
    int m = 0;
    for (int p : priority) m = std::max(m, p);
    return m;
  }
};

// Priority of a state list: e = first empty slot, m = first marked slot.
inline int compute_priority(const std::vector<std::pair<std::vector<int>, int>>& list) {
  int e = -1, m = -1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (e < 0 && list[i].first.empty()) e = static_cast<int>(i);
    if (m < 0 && list[i].second) m = static_cast<int>(i);
  }
  assert(e >= 0);
  assert(e != m);
  if (e == 0) return 1;
  if (m >= 0 && m < e) return 2 * m;
  return 2 * e - 1;
}

namespace detail {

inline std::vector<int> dpa_key(const DPAState& s) {
  std::vector<int> key;
  for (const auto& [set, mark] : s.list) {
    key.push_back(-2 - mark);
    key.insert(key.end(), set.begin(), set.end());
  }
  key.push_back(-10);
  for (const auto& row : s.d) {
    key.insert(key.end(), row.begin(), row.end());
    key.push_back(-11);
  }
  return key;
}

inline void check_state_invariants(const DPAState& s, const std::vector<char>& /*acc*/) {
  if (s.list.empty() || s.list[0].first.empty()) return;  // dead sink
  const auto& s0 = s.list[0].first;
  bool some_empty = false;
  for (std::size_t i = 0; i < s.list.size(); ++i) {
    const auto& si = s.list[i].first;
    some_empty |= si.empty();
    // every tracked set is a subset of the full run set
    assert(std::includes(s0.begin(), s0.end(), si.begin(), si.end()));
    if (!si.empty()) {
      // some state of S_i is absent from all later sets
      bool found = false;
      for (int q : si) {
        bool later = false;
        for (std::size_t i2 = i + 1; i2 < s.list.size() && !later; ++i2)
          later = std::binary_search(s.list[i2].first.begin(), s.list[i2].first.end(), q);
        if (!later) { found = true; break; }
      }
      assert(found);
      (void)found;
    }
  }
  assert(some_empty);
  (void)some_empty;
  // S_0 is exactly the set of live counter rows
  std::vector<int> live;
  for (std::size_t q = 0; q < s.d.size(); ++q) {
    bool alive = true;
    for (int v : s.d[q]) alive &= v >= 0;
    if (alive && !s.d[q].empty()) live.push_back(static_cast<int>(q));
  }
  if (!s.d.empty() && !s.d[0].empty()) {
    assert(live == s0);
  }
  (void)live;
}

}  // namespace detail

inline DPA determinize_with_counters(const NBA& a, const ConstraintSet& o,
                                     std::size_t max_states = 4'000'000) {
  for (const auto& c : o)
    if (c.bound == 0) throw std::invalid_argument("determinize_with_counters: zero bound");
  const std::size_t n = a.num_states;
  const std::size_t k = o.size();

  std::vector<std::vector<char>> in_f(k, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < k; ++j)
    for (int s : o[j].states) in_f[j][s] = 1;
  std::vector<char> acc(a.accepting.begin(), a.accepting.end());

  DPA p;
  p.ap = a.ap;

  DPAState init;
  init.d.assign(n, std::vector<int>(k, -1));
  std::vector<char> in_q0(n, 0);
  for (int q : a.initial) in_q0[q] = 1;
  std::vector<int> s0;
  for (std::size_t q = 0; q < n; ++q) {
    if (!in_q0[q]) continue;
    bool alive = true;
    for (std::size_t j = 0; j < k; ++j) {
      if (in_f[j][q]) init.d[q][j] = 0;
      else if (o[j].bound > 1) init.d[q][j] = 1;
      else { init.d[q][j] = -1; alive = false; }
    }
    if (alive) s0.push_back(static_cast<int>(q));
  }
  init.list.assign(n + 1, {std::vector<int>{}, 0});
  init.list[0].first = s0;
  for (std::size_t q = 0; q < n; ++q)
    if (!std::binary_search(s0.begin(), s0.end(), static_cast<int>(q)))
      init.d[q].assign(k, -1);

  std::map<std::vector<int>, int> ids;
  std::queue<int> work;
  auto intern = [&](DPAState st) {
    auto key = detail::dpa_key(st);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (p.states.size() >= max_states)
      throw std::runtime_error("determinize_with_counters: state cap exceeded");
    int id = static_cast<int>(p.states.size());
    ids.emplace(std::move(key), id);
    detail::check_state_invariants(st, acc);
    p.priority.push_back(compute_priority(st.list));
    p.states.push_back(std::move(st));
    p.trans.emplace_back(a.num_letters(), -1);
    work.push(id);
    return id;
  };
  p.initial = intern(std::move(init));

  while (!work.empty()) {
    int id = work.front();
    work.pop();
    for (std::size_t l = 0; l < a.num_letters(); ++l) {
      const DPAState cur = p.states[id];  // copy: intern may reallocate
      DPAState nxt;
      const auto& cur_s0 = cur.list[0].first;
      if (cur_s0.empty()) {  // dead sink loops on itself
        p.trans[id][l] = id;
        continue;
      }

      // counter update along the unique simulated runs
      nxt.d.assign(n, std::vector<int>(k, -1));
      std::vector<int> pred(n, -1);
      for (int q : cur_s0)
        for (int q2 : a.trans[q][l]) {
          if (pred[q2] != -1)
            throw std::runtime_error("determinize_with_counters: automaton is confluent");
          pred[q2] = q;
        }
      std::vector<char> in_t(n, 0);
      for (std::size_t q2 = 0; q2 < n; ++q2) {
        if (pred[q2] < 0) continue;
        bool alive = true;
        for (std::size_t j = 0; j < k; ++j) {
          if (in_f[j][q2]) nxt.d[q2][j] = 0;
          else if (cur.d[pred[q2]][j] + 1 < static_cast<int>(o[j].bound))
            nxt.d[q2][j] = cur.d[pred[q2]][j] + 1;
          else { nxt.d[q2][j] = -1; alive = false; }
        }
        in_t[q2] = alive;
        if (!alive) nxt.d[q2].assign(k, -1);
      }

      // list update: drop empties, advance each set, append new accepting seeds
      std::vector<std::pair<std::vector<int>, int>> list;
      for (const auto& entry : cur.list)
        if (!entry.first.empty()) list.push_back(entry);
      for (auto& [set, mark] : list) {
        std::vector<int> nset;
        std::vector<char> seen(n, 0);
        for (int q : set)
          for (int q2 : a.trans[q][l])
            if (in_t[q2] && !seen[q2]) { seen[q2] = 1; nset.push_back(q2); }
        std::sort(nset.begin(), nset.end());
        set = std::move(nset);
        mark = 0;
      }
      {
        std::vector<int> seeds;
        if (!list.empty())
          for (int q : list[0].first)
            if (acc[q]) seeds.push_back(q);
        list.push_back({std::move(seeds), 0});
      }
      // marks: S_i is marked when its non-accepting part is covered by later
      // sets; marked sets claim their states exclusively
      for (std::size_t i = 0; i < list.size(); ++i) {
        auto& [set, mark] = list[i];
        if (set.empty()) continue;
        bool covered = true;
        for (int q : set) {
          if (acc[q]) continue;
          bool later = false;
          for (std::size_t i2 = i + 1; i2 < list.size() && !later; ++i2)
            later = std::binary_search(list[i2].first.begin(), list[i2].first.end(), q);
          if (!later) { covered = false; break; }
        }
        if (!covered) continue;
        mark = 1;
        for (std::size_t i2 = i + 1; i2 < list.size(); ++i2) {
          std::vector<int> kept;
          for (int q : list[i2].first)
            if (!std::binary_search(set.begin(), set.end(), q)) kept.push_back(q);
          list[i2].first = std::move(kept);
        }
      }
      if (list.size() > n + 1)
        throw std::runtime_error("determinize_with_counters: list overflow");
      list.resize(n + 1, {std::vector<int>{}, 0});
      nxt.list = std::move(list);

      p.trans[id][l] = intern(std::move(nxt));
    }
  }
  return p;
}

// Deterministic run on the lasso, loop detected on (state, cycle position).
inline bool dpa_accepts_lasso(const DPA& p, const LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("dpa_accepts_lasso: empty cycle");
  const std::size_t len = w.prefix.size() + w.cycle.size();
  std::vector<LetterIndex> letters(len);
  for (std::size_t i = 0; i < len; ++i) {
    const Letter& full = i < w.prefix.size() ? w.prefix[i] : w.cycle[i - w.prefix.size()];
    Letter proj;
    for (const auto& ap : p.ap)
      if (full.count(ap)) proj.insert(ap);
    letters[i] = letter_index(p.ap, proj);
  }
  // first visit time of each (state, position) configuration
  std::vector<std::vector<int>> seen(p.num_states(), std::vector<int>(len, -1));
  std::vector<int> trace_state;
  int q = p.initial;
  std::size_t pos = 0;
  int step = 0;
  while (seen[q][pos] < 0) {
    seen[q][pos] = step++;
    trace_state.push_back(q);
    q = p.trans[q][letters[pos]];
    pos = pos + 1 < len ? pos + 1 : w.prefix.size();
  }
  int best = p.priority[q];
  for (std::size_t t = seen[q][pos]; t < trace_state.size(); ++t)
    best = std::min(best, p.priority[trace_state[t]]);
  return best % 2 == 0;
}

inline DPA complement_dpa(const DPA& p) {
  DPA c = p;
  for (int& pr : c.priority) ++pr;
  return c;
}

inline std::string dump_dpa(const DPA& p) {
  std::ostringstream os;
  detail::dump_header(os, p.num_states(), {p.initial},
                      "parity " + std::to_string(p.max_priority()), p.ap);
  for (std::size_t s = 0; s < p.num_states(); ++s) {
    os << "State: " << s << " [" << p.priority[s] << "]\n";
    for (std::size_t l = 0; l < p.num_letters(); ++l)
      os << "  " << detail::letter_text(p.ap, static_cast<LetterIndex>(l)) << " -> "
         << p.trans[s][l] << "\n";
  }
  return os.str();
}

// Rebuilds the graph/priority part only; internal determinization data is
// not serialized.
inline DPA parse_dpa(const std::string& text) {
  std::istringstream in(text);
  auto h = detail::parse_dump_header(in);
  if (h.acc_kind != "parity") throw std::runtime_error("parse_dpa: not a parity dump");
  if (h.initial.size() != 1) throw std::runtime_error("parse_dpa: need exactly one start state");
  DPA p;
  p.ap = h.ap;
  p.initial = h.initial[0];
  p.states.resize(h.states);
  p.priority.assign(h.states, 0);
  p.trans.assign(h.states, std::vector<int>(p.num_letters(), -1));
  std::string line;
  int cur = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "State:") {
      std::string prio;
      if (!(ls >> cur >> prio) || cur < 0 || cur >= static_cast<int>(h.states) ||
          prio.size() < 3 || prio.front() != '[' || prio.back() != ']')
        throw std::runtime_error("parse_dpa: bad state line: " + line);
      p.priority[cur] = std::stoi(prio.substr(1, prio.size() - 2));
    } else {
      std::string arrow;
      int dst;
      if (!(ls >> arrow >> dst) || arrow != "->" || cur < 0)
        throw std::runtime_error("parse_dpa: bad transition line: " + line);
      p.trans[cur][detail::parse_letter(p.ap, tok)] = dst;
    }
  }
  for (const auto& row : p.trans)
    for (int t : row)
      if (t < 0) throw std::runtime_error("parse_dpa: missing transition");
  return p;
}

}  // namespace pltl
