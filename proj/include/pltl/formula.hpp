#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pltl {

// PLTL in negation normal form. Negation exists only on atoms; tt/ff are
// dedicated leaves so that no arbitrary atom is pulled into closures.
enum class Kind {
  True,
  False,
  Atom,
  NegAtom,
  And,
  Or,
  Next,
  Until,
  Release,
  BoundedF,  // F<=x phi, x ranges over the eventuality sort
  BoundedG,  // G<=y phi, y ranges over the always sort
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Kind kind;
  std::string name;  // atom name, or parameter variable for bounded operators
  Formula lhs, rhs;  // unary operators use lhs only
};

inline Formula mk(Kind k, std::string name, Formula l, Formula r) {
  return std::make_shared<FormulaNode>(FormulaNode{k, std::move(name), std::move(l), std::move(r)});
}
inline Formula f_true() { return mk(Kind::True, "", nullptr, nullptr); }
inline Formula f_false() { return mk(Kind::False, "", nullptr, nullptr); }
inline Formula f_atom(std::string p) { return mk(Kind::Atom, std::move(p), nullptr, nullptr); }
inline Formula f_neg_atom(std::string p) { return mk(Kind::NegAtom, std::move(p), nullptr, nullptr); }
inline Formula f_and(Formula a, Formula b) { return mk(Kind::And, "", std::move(a), std::move(b)); }
inline Formula f_or(Formula a, Formula b) { return mk(Kind::Or, "", std::move(a), std::move(b)); }
inline Formula f_next(Formula a) { return mk(Kind::Next, "", std::move(a), nullptr); }
inline Formula f_until(Formula a, Formula b) { return mk(Kind::Until, "", std::move(a), std::move(b)); }
inline Formula f_release(Formula a, Formula b) { return mk(Kind::Release, "", std::move(a), std::move(b)); }
inline Formula f_bounded_f(std::string x, Formula a) { return mk(Kind::BoundedF, std::move(x), std::move(a), nullptr); }
inline Formula f_bounded_g(std::string y, Formula a) { return mk(Kind::BoundedG, std::move(y), std::move(a), nullptr); }
inline Formula f_eventually(Formula a) { return f_until(f_true(), std::move(a)); }
inline Formula f_always(Formula a) { return f_release(f_false(), std::move(a)); }

// Canonical prefix key; used for structural equality and subformula dedup.
inline void key_rec(const Formula& f, std::string& out) {
  switch (f->kind) {
    case Kind::True: out += "tt"; return;
    case Kind::False: out += "ff"; return;
    case Kind::Atom: out += "a:" + f->name; return;
    case Kind::NegAtom: out += "n:" + f->name; return;
    case Kind::And: out += "(& "; break;
    case Kind::Or: out += "(| "; break;
    case Kind::Next: out += "(X "; break;
    case Kind::Until: out += "(U "; break;
    case Kind::Release: out += "(R "; break;
    case Kind::BoundedF: out += "(F" + f->name + " "; break;
    case Kind::BoundedG: out += "(G" + f->name + " "; break;
  }
  key_rec(f->lhs, out);
  if (f->rhs) {
    out += ' ';
    key_rec(f->rhs, out);
  }
  out += ')';
}

inline std::string key(const Formula& f) {
  std::string s;
  key_rec(f, s);
  return s;
}

inline bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (!!a->lhs != !!b->lhs || !!a->rhs != !!b->rhs) return false;
  if (a->lhs && !equal(a->lhs, b->lhs)) return false;
  if (a->rhs && !equal(a->rhs, b->rhs)) return false;
  return true;
}

inline bool is_binary(const Formula& f) {
  switch (f->kind) {
    case Kind::And:
    case Kind::Or:
    case Kind::Until:
    case Kind::Release:
      return true;
    default:
      return false;
  }
}

inline std::string to_string(const Formula& f) {
  auto paren = [](const Formula& g) {
    std::string s = to_string(g);
    return is_binary(g) ? "(" + s + ")" : s;
  };
  switch (f->kind) {
    case Kind::True: return "tt";
    case Kind::False: return "ff";
    case Kind::Atom: return f->name;
    case Kind::NegAtom: return "!" + f->name;
    case Kind::And: return paren(f->lhs) + " & " + paren(f->rhs);
    case Kind::Or: return paren(f->lhs) + " | " + paren(f->rhs);
    case Kind::Next: return "X " + paren(f->lhs);
    case Kind::Until: return paren(f->lhs) + " U " + paren(f->rhs);
    case Kind::Release: return paren(f->lhs) + " R " + paren(f->rhs);
    case Kind::BoundedF: return "F<=" + f->name + " " + paren(f->lhs);
    case Kind::BoundedG: return "G<=" + f->name + " " + paren(f->lhs);
  }
  return "";
}

// Distinct subformulae, children before parents.
inline void subformulae_rec(const Formula& f, std::set<std::string>& seen, std::vector<Formula>& out) {
  if (f->lhs) subformulae_rec(f->lhs, seen, out);
  if (f->rhs) subformulae_rec(f->rhs, seen, out);
  std::string k = key(f);
  if (seen.insert(std::move(k)).second) out.push_back(f);
}

inline std::vector<Formula> subformulae(const Formula& f) {
  std::set<std::string> seen;
  std::vector<Formula> out;
  subformulae_rec(f, seen, out);
  return out;
}

// |phi| = number of distinct subformulae.
inline std::size_t formula_size(const Formula& f) { return subformulae(f).size(); }

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f->kind == Kind::Atom || f->kind == Kind::NegAtom) out.insert(f->name);
  if (f->lhs) collect_atoms(f->lhs, out);
  if (f->rhs) collect_atoms(f->rhs, out);
}

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

inline void collect_vars(const Formula& f, std::set<std::string>& xs, std::set<std::string>& ys) {
  if (f->kind == Kind::BoundedF) xs.insert(f->name);
  if (f->kind == Kind::BoundedG) ys.insert(f->name);
  if (f->lhs) collect_vars(f->lhs, xs, ys);
  if (f->rhs) collect_vars(f->rhs, xs, ys);
}

inline std::set<std::string> eventuality_vars(const Formula& f) {
  std::set<std::string> xs, ys;
  collect_vars(f, xs, ys);
  return xs;
}

inline std::set<std::string> always_vars(const Formula& f) {
  std::set<std::string> xs, ys;
  collect_vars(f, xs, ys);
  return ys;
}

inline std::set<std::string> variables(const Formula& f) {
  std::set<std::string> xs, ys;
  collect_vars(f, xs, ys);
  xs.insert(ys.begin(), ys.end());
  return xs;
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The two variable sorts must be disjoint.
inline void validate_sorts(const Formula& f) {
  std::set<std::string> xs, ys;
  collect_vars(f, xs, ys);
  for (const auto& x : xs)
    if (ys.count(x))
      throw ParseError("variable-sort clash: '" + x + "' occurs under both F<= and G<=");
}

enum class FormulaClass { Ltl, Prompt, PltlF, PltlG, Pltl };

inline FormulaClass classify(const Formula& f) {
  std::set<std::string> xs, ys;
  collect_vars(f, xs, ys);
  if (xs.empty() && ys.empty()) return FormulaClass::Ltl;
  if (ys.empty()) return xs.size() <= 1 ? FormulaClass::Prompt : FormulaClass::PltlF;
  if (xs.empty()) return FormulaClass::PltlG;
  return FormulaClass::Pltl;
}

inline bool is_unipolar(const Formula& f) {
  FormulaClass c = classify(f);
  return c != FormulaClass::Pltl;
}

inline Formula negate_nnf(const Formula& f) {
  switch (f->kind) {
    case Kind::True: return f_false();
    case Kind::False: return f_true();
    case Kind::Atom: return f_neg_atom(f->name);
    case Kind::NegAtom: return f_atom(f->name);
    case Kind::And: return f_or(negate_nnf(f->lhs), negate_nnf(f->rhs));
    case Kind::Or: return f_and(negate_nnf(f->lhs), negate_nnf(f->rhs));
    case Kind::Next: return f_next(negate_nnf(f->lhs));
    case Kind::Until: return f_release(negate_nnf(f->lhs), negate_nnf(f->rhs));
    case Kind::Release: return f_until(negate_nnf(f->lhs), negate_nnf(f->rhs));
    case Kind::BoundedF: return f_bounded_g(f->name, negate_nnf(f->lhs));
    case Kind::BoundedG: return f_bounded_f(f->name, negate_nnf(f->lhs));
  }
  throw std::logic_error("negate_nnf: bad kind");
}

// ---------------------------------------------------------------------------
// Parsing.
//
// formula := binary; precedence ! > X,F,G,F<=,G<= > U,R > & > | > ->
// with right-associative U/R/->.  `!` is accepted anywhere and eliminated
// immediately; the stored tree is always NNF.
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  enum T { Ident, TT, FF, X, F, G, U, R, Not, AndT, OrT, Arrow, Leq, LPar, RPar, End } t;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::T t, std::string text, std::size_t pos) { out.push_back({t, std::move(text), pos}); };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
    if (c == '(') { push(Token::LPar, "(", i); ++i; continue; }
    if (c == ')') { push(Token::RPar, ")", i); ++i; continue; }
    if (c == '!') { push(Token::Not, "!", i); ++i; continue; }
    if (c == '&') { push(Token::AndT, "&", i); ++i; continue; }
    if (c == '|') { push(Token::OrT, "|", i); ++i; continue; }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') { push(Token::Arrow, "->", i); i += 2; continue; }
    if (c == '<' && i + 1 < s.size() && s[i + 1] == '=') { push(Token::Leq, "<=", i); i += 2; continue; }
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string w = s.substr(i, j - i);
      Token::T t = Token::Ident;
      if (w == "tt") t = Token::TT;
      else if (w == "ff") t = Token::FF;
      else if (w == "X") t = Token::X;
      else if (w == "F") t = Token::F;
      else if (w == "G") t = Token::G;
      else if (w == "U") t = Token::U;
      else if (w == "R") t = Token::R;
      push(t, std::move(w), i);
      i = j;
      continue;
    }
    throw ParseError("syntax error at position " + std::to_string(i) + ": unexpected character '" + std::string(1, c) + "'");
  }
  push(Token::End, "", s.size());
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t at = 0;

  const Token& peek() const { return toks[at]; }
  Token take() { return toks[at++]; }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("syntax error at position " + std::to_string(peek().pos) + ": " + what);
  }

  Formula parse_impl() {
    Formula a = parse_or();
    if (peek().t == Token::Arrow) {
      take();
      Formula b = parse_impl();
      return f_or(negate_nnf(a), b);
    }
    return a;
  }

  Formula parse_or() {
    Formula a = parse_and();
    while (peek().t == Token::OrT) {
      take();
      a = f_or(a, parse_and());
    }
    return a;
  }

  Formula parse_and() {
    Formula a = parse_ur();
    while (peek().t == Token::AndT) {
      take();
      a = f_and(a, parse_ur());
    }
    return a;
  }

  Formula parse_ur() {
    Formula a = parse_unary();
    if (peek().t == Token::U) {
      take();
      return f_until(a, parse_ur());
    }
    if (peek().t == Token::R) {
      take();
      return f_release(a, parse_ur());
    }
    return a;
  }

  std::string parse_var() {
    if (peek().t != Token::Ident) fail("expected a parameter variable after '<='");
    return take().text;
  }

  Formula parse_unary() {
    switch (peek().t) {
      case Token::Not: take(); return negate_nnf(parse_unary());
      case Token::X: take(); return f_next(parse_unary());
      case Token::F:
        take();
        if (peek().t == Token::Leq) { take(); std::string v = parse_var(); return f_bounded_f(v, parse_unary()); }
        return f_eventually(parse_unary());
      case Token::G:
        take();
        if (peek().t == Token::Leq) { take(); std::string v = parse_var(); return f_bounded_g(v, parse_unary()); }
        return f_always(parse_unary());
      case Token::TT: take(); return f_true();
      case Token::FF: take(); return f_false();
      case Token::Ident: return f_atom(take().text);
      case Token::LPar: {
        take();
        Formula a = parse_impl();
        if (peek().t != Token::RPar) fail("expected ')'");
        take();
        return a;
      }
      default:
        fail("expected a formula");
    }
  }
};

}  // namespace detail

inline Formula parse_formula(const std::string& text) {
  detail::Parser p{detail::tokenize(text)};
  Formula f = p.parse_impl();
  if (p.peek().t != detail::Token::End) p.fail("trailing input");
  validate_sorts(f);
  return f;
}

// ---------------------------------------------------------------------------
// Valuations and rewrites.
// ---------------------------------------------------------------------------

using Valuation = std::map<std::string, unsigned>;

inline unsigned valuation_at(const Valuation& a, const std::string& var) {
  auto it = a.find(var);
  if (it == a.end()) throw std::invalid_argument("missing variable binding for '" + var + "'");
  return it->second;
}

// F<=x psi with alpha(x)=n becomes psi | X psi | ... | X^n psi; dually for G<=.
inline Formula expand_valuation(const Formula& f, const Valuation& alpha) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
    case Kind::NegAtom:
      return f;
    case Kind::And: return f_and(expand_valuation(f->lhs, alpha), expand_valuation(f->rhs, alpha));
    case Kind::Or: return f_or(expand_valuation(f->lhs, alpha), expand_valuation(f->rhs, alpha));
    case Kind::Next: return f_next(expand_valuation(f->lhs, alpha));
    case Kind::Until: return f_until(expand_valuation(f->lhs, alpha), expand_valuation(f->rhs, alpha));
    case Kind::Release: return f_release(expand_valuation(f->lhs, alpha), expand_valuation(f->rhs, alpha));
    case Kind::BoundedF:
    case Kind::BoundedG: {
      unsigned n = valuation_at(alpha, f->name);
      Formula sub = expand_valuation(f->lhs, alpha);
      Formula acc = sub;
      Formula stepped = sub;
      for (unsigned i = 1; i <= n; ++i) {
        stepped = f_next(stepped);
        acc = f->kind == Kind::BoundedF ? f_or(acc, stepped) : f_and(acc, stepped);
      }
      return acc;
    }
  }
  throw std::logic_error("expand_valuation: bad kind");
}

// Replace every G<=y psi by psi; the result only mentions eventuality variables.
inline Formula strip_always(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
    case Kind::NegAtom:
      return f;
    case Kind::And: return f_and(strip_always(f->lhs), strip_always(f->rhs));
    case Kind::Or: return f_or(strip_always(f->lhs), strip_always(f->rhs));
    case Kind::Next: return f_next(strip_always(f->lhs));
    case Kind::Until: return f_until(strip_always(f->lhs), strip_always(f->rhs));
    case Kind::Release: return f_release(strip_always(f->lhs), strip_always(f->rhs));
    case Kind::BoundedF: return f_bounded_f(f->name, strip_always(f->lhs));
    case Kind::BoundedG: return strip_always(f->lhs);
  }
  throw std::logic_error("strip_always: bad kind");
}

// Drop every bound: F<=x psi becomes tt U psi, G<=y psi becomes ff R psi.
inline Formula relax_bounds(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
    case Kind::NegAtom:
      return f;
    case Kind::And: return f_and(relax_bounds(f->lhs), relax_bounds(f->rhs));
    case Kind::Or: return f_or(relax_bounds(f->lhs), relax_bounds(f->rhs));
    case Kind::Next: return f_next(relax_bounds(f->lhs));
    case Kind::Until: return f_until(relax_bounds(f->lhs), relax_bounds(f->rhs));
    case Kind::Release: return f_release(relax_bounds(f->lhs), relax_bounds(f->rhs));
    case Kind::BoundedF: return f_until(f_true(), relax_bounds(f->lhs));
    case Kind::BoundedG: return f_release(f_false(), relax_bounds(f->lhs));
  }
  throw std::logic_error("relax_bounds: bad kind");
}

// Replace every G<=z psi with z != y by psi.
inline Formula project_variable(const Formula& f, const std::string& y) {
  if (classify(f) != FormulaClass::PltlG) throw std::invalid_argument("project_variable: formula is not PLTL_G");
  if (!always_vars(f).count(y)) throw std::invalid_argument("project_variable: '" + y + "' does not occur in formula");
  struct Rec {
    const std::string& y;
    Formula operator()(const Formula& g) const {
      switch (g->kind) {
        case Kind::True:
        case Kind::False:
        case Kind::Atom:
        case Kind::NegAtom:
          return g;
        case Kind::And: return f_and((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Or: return f_or((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Next: return f_next((*this)(g->lhs));
        case Kind::Until: return f_until((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Release: return f_release((*this)(g->lhs), (*this)(g->rhs));
        case Kind::BoundedF: return f_bounded_f(g->name, (*this)(g->lhs));
        case Kind::BoundedG:
          return g->name == y ? f_bounded_g(g->name, (*this)(g->lhs)) : (*this)(g->lhs);
      }
      throw std::logic_error("project_variable: bad kind");
    }
  };
  return Rec{y}(f);
}

// Rename every parameter variable of a unipolar formula to `target`.
inline Formula unify_variables(const Formula& f, const std::string& target) {
  if (!is_unipolar(f)) throw std::invalid_argument("unify_variables: mixed-sort formula");
  struct Rec {
    const std::string& t;
    Formula operator()(const Formula& g) const {
      switch (g->kind) {
        case Kind::True:
        case Kind::False:
        case Kind::Atom:
        case Kind::NegAtom:
          return g;
        case Kind::And: return f_and((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Or: return f_or((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Next: return f_next((*this)(g->lhs));
        case Kind::Until: return f_until((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Release: return f_release((*this)(g->lhs), (*this)(g->rhs));
        case Kind::BoundedF: return f_bounded_f(t, (*this)(g->lhs));
        case Kind::BoundedG: return f_bounded_g(t, (*this)(g->lhs));
      }
      throw std::logic_error("unify_variables: bad kind");
    }
  };
  return Rec{target}(f);
}

// Replace each F<=z psi with z not in `keep` by the one-color-change formula
// and conjoin alt_color = GF color & GF !color.
inline Formula alternating_color_rewrite(const Formula& f, const std::set<std::string>& keep,
                                         const std::string& color) {
  FormulaClass c = classify(f);
  if (c == FormulaClass::PltlG || c == FormulaClass::Pltl)
    throw std::invalid_argument("alternating_color_rewrite: formula is not PLTL_F");
  if (atoms(f).count(color))
    throw std::invalid_argument("alternating_color_rewrite: color proposition '" + color + "' already used");
  struct Rec {
    const std::set<std::string>& keep;
    const std::string& color;
    Formula operator()(const Formula& g) const {
      switch (g->kind) {
        case Kind::True:
        case Kind::False:
        case Kind::Atom:
        case Kind::NegAtom:
          return g;
        case Kind::And: return f_and((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Or: return f_or((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Next: return f_next((*this)(g->lhs));
        case Kind::Until: return f_until((*this)(g->lhs), (*this)(g->rhs));
        case Kind::Release: return f_release((*this)(g->lhs), (*this)(g->rhs));
        case Kind::BoundedF: {
          Formula sub = (*this)(g->lhs);
          if (keep.count(g->name)) return f_bounded_f(g->name, sub);
          Formula pos = f_or(f_neg_atom(color), f_until(f_atom(color), f_until(f_neg_atom(color), sub)));
          Formula neg = f_or(f_atom(color), f_until(f_neg_atom(color), f_until(f_atom(color), sub)));
          return f_and(pos, neg);
        }
        case Kind::BoundedG:
          throw std::logic_error("alternating_color_rewrite: G<= in PLTL_F formula");
      }
      throw std::logic_error("alternating_color_rewrite: bad kind");
    }
  };
  Formula body = Rec{keep, color}(f);
  Formula alt = f_and(f_always(f_eventually(f_atom(color))), f_always(f_eventually(f_neg_atom(color))));
  return f_and(body, alt);
}

// ---------------------------------------------------------------------------
// Ultimately periodic words and the semantic evaluator.
// ---------------------------------------------------------------------------

using Letter = std::set<std::string>;

// u . v^omega; the cycle is non-empty.
struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> cycle;
};

inline std::size_t lasso_wrap(const LassoWord& w, std::size_t i) {
  std::size_t u = w.prefix.size(), v = w.cycle.size();
  return i < u ? i : u + (i - u) % v;
}

inline const Letter& lasso_letter(const LassoWord& w, std::size_t i) {
  std::size_t j = lasso_wrap(w, i);
  return j < w.prefix.size() ? w.prefix[j] : w.cycle[j - w.prefix.size()];
}

namespace detail {

// Exact evaluation on the wrapped position graph: the suffix words at i and
// i+|v| coincide for i >= |u|, so truth values are functions of the wrapped
// position.  U is a least fixpoint (revisit without witness -> false), R a
// greatest one (revisit without refutation -> true).
struct LassoEvaluator {
  const LassoWord& w;
  const Valuation& alpha;
  std::map<std::pair<const FormulaNode*, std::size_t>, bool> memo;

  std::size_t step(std::size_t i) const { return lasso_wrap(w, i + 1); }

  bool at(const Formula& f, std::size_t i) {
    i = lasso_wrap(w, i);
    auto k = std::make_pair(f.get(), i);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    bool r = compute(f, i);
    memo[k] = r;
    return r;
  }

  bool compute(const Formula& f, std::size_t i) {
    switch (f->kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Atom: return lasso_letter(w, i).count(f->name) > 0;
      case Kind::NegAtom: return lasso_letter(w, i).count(f->name) == 0;
      case Kind::And: return at(f->lhs, i) && at(f->rhs, i);
      case Kind::Or: return at(f->lhs, i) || at(f->rhs, i);
      case Kind::Next: return at(f->lhs, step(i));
      case Kind::Until: {
        std::set<std::size_t> seen;
        for (std::size_t cur = i; seen.insert(cur).second; cur = step(cur)) {
          if (at(f->rhs, cur)) return true;
          if (!at(f->lhs, cur)) return false;
        }
        return false;
      }
      case Kind::Release: {
        std::set<std::size_t> seen;
        for (std::size_t cur = i; seen.insert(cur).second; cur = step(cur)) {
          if (!at(f->rhs, cur)) return false;
          if (at(f->lhs, cur)) return true;
        }
        return true;
      }
      case Kind::BoundedF: {
        unsigned n = valuation_at(alpha, f->name);
        std::size_t cur = i;
        for (unsigned j = 0; j <= n; ++j, cur = step(cur))
          if (at(f->lhs, cur)) return true;
        return false;
      }
      case Kind::BoundedG: {
        unsigned n = valuation_at(alpha, f->name);
        std::size_t cur = i;
        for (unsigned j = 0; j <= n; ++j, cur = step(cur))
          if (!at(f->lhs, cur)) return false;
        return true;
      }
    }
    throw std::logic_error("eval_lasso: bad kind");
  }
};

}  // namespace detail

inline bool eval_lasso(const Formula& f, const Valuation& alpha, const LassoWord& w, std::size_t pos = 0) {
  if (w.cycle.empty()) throw std::invalid_argument("eval_lasso: empty cycle");
  detail::LassoEvaluator ev{w, alpha, {}};
  return ev.at(f, pos);
}

// ---------------------------------------------------------------------------
// Closure and consistent sets (states of the eventuality-relaxed tableau).
// ---------------------------------------------------------------------------

struct ClosureInfo {
  std::vector<Formula> closure;                // children before parents
  std::unordered_map<std::string, int> index;  // canonical key -> closure position
  std::vector<std::uint64_t> consistent;       // bit masks over `closure`, ascending

  int index_of(const Formula& f) const {
    auto it = index.find(key(f));
    return it == index.end() ? -1 : it->second;
  }
  bool contains(std::uint64_t mask, int idx) const { return idx >= 0 && ((mask >> idx) & 1u); }
};

inline ClosureInfo closure_and_consistent_sets(const Formula& phi) {
  FormulaClass c = classify(phi);
  if (c == FormulaClass::PltlG || c == FormulaClass::Pltl)
    throw std::invalid_argument("closure_and_consistent_sets: formula is not PLTL_F");

  ClosureInfo info;
  info.closure = subformulae(phi);
  // Atom-negation completion: both literals of every atom are available, so
  // the atom exclusivity rule is meaningful.
  for (const auto& p : atoms(phi)) {
    Formula pos = f_atom(p), neg = f_neg_atom(p);
    std::set<std::string> have;
    for (const auto& g : info.closure) have.insert(key(g));
    if (!have.count(key(pos))) info.closure.push_back(pos);
    if (!have.count(key(neg))) info.closure.push_back(neg);
  }
  if (info.closure.size() > 62)
    throw std::invalid_argument("formula too large: closure exceeds 62 elements");
  for (std::size_t i = 0; i < info.closure.size(); ++i) info.index[key(info.closure[i])] = static_cast<int>(i);

  const std::size_t n = info.closure.size();
  struct Elem {
    Kind kind;
    int l = -1, r = -1;  // child indices
    int twin = -1;       // opposite literal, for atoms
  };
  std::vector<Elem> elems(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Formula& g = info.closure[i];
    Elem e;
    e.kind = g->kind;
    if (g->lhs) e.l = info.index.at(key(g->lhs));
    if (g->rhs) e.r = info.index.at(key(g->rhs));
    if (g->kind == Kind::Atom) e.twin = info.index_of(f_neg_atom(g->name));
    if (g->kind == Kind::NegAtom) e.twin = info.index_of(f_atom(g->name));
    elems[i] = e;
  }

  // Membership of and/or nodes is forced by the children; literals come in
  // exclusive pairs; U/R/F<= are forced only in the implication direction,
  // otherwise free; X is unconstrained by consistency.
  std::vector<std::uint64_t> result;
  struct Walk {
    const std::vector<Elem>& elems;
    std::vector<std::uint64_t>& result;
    void go(std::size_t idx, std::uint64_t mask) {
      if (idx == elems.size()) {
        result.push_back(mask);
        return;
      }
      const Elem& e = elems[idx];
      auto with = [&](bool in) { go(idx + 1, in ? (mask | (1ull << idx)) : mask); };
      auto branch = [&] { with(false); with(true); };
      auto b = [&](int i) { return i >= 0 && ((mask >> i) & 1u); };
      switch (e.kind) {
        case Kind::True: with(true); return;
        case Kind::False: with(false); return;
        case Kind::Atom:
        case Kind::NegAtom:
          if (e.twin >= 0 && e.twin < static_cast<int>(idx)) with(!b(e.twin));
          else branch();
          return;
        case Kind::And: with(b(e.l) && b(e.r)); return;
        case Kind::Or: with(b(e.l) || b(e.r)); return;
        case Kind::Next: branch(); return;
        case Kind::Until:
          if (b(e.r)) with(true); else branch();
          return;
        case Kind::Release:
          if (b(e.l) && b(e.r)) with(true); else branch();
          return;
        case Kind::BoundedF:
          if (b(e.l)) with(true); else branch();
          return;
        case Kind::BoundedG:
          throw std::logic_error("closure: G<= element");
      }
    }
  };
  Walk walk{elems, result};
  walk.go(0, 0);
  std::sort(result.begin(), result.end());
  info.consistent = std::move(result);
  return info;
}

}  // namespace pltl
