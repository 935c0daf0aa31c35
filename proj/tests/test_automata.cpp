#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "pltl/automata.hpp"

using namespace pltl;
using testutil::FormulaGen;

namespace {

NBA pipeline_nba(const Formula& f) { return remove_unproductive(degeneralize(build_gnba(f))); }

}  // namespace

TEST_CASE("tableau automaton of a parameterized eventuality") {
  Formula f = parse_formula("F<=x p");
  GNBA a = build_gnba(f);
  REQUIRE(a.num_states() == 3);
  CHECK(a.initial.size() == 2);  // the two sets containing the eventuality
  REQUIRE(a.acc.size() == 1);
  CHECK(a.acc[0].kind == AccKind::BoundedF);
  CHECK(a.acc[0].var == "x");
  CHECK(a.acc[0].states.size() == 2);  // eventuality absent, or discharged by p

  // identify states by their consistent sets
  ClosureInfo& cl = a.cl;
  int fi = cl.index_of(f), pi = cl.index_of(f_atom("p"));
  int s_pf = -1, s_nf = -1, s_n = -1;
  for (std::size_t s = 0; s < 3; ++s) {
    bool has_f = cl.contains(a.state_sets[s], fi), has_p = cl.contains(a.state_sets[s], pi);
    if (has_p && has_f) s_pf = static_cast<int>(s);
    if (!has_p && has_f) s_nf = static_cast<int>(s);
    if (!has_p && !has_f) s_n = static_cast<int>(s);
  }
  REQUIRE((s_pf >= 0 && s_nf >= 0 && s_n >= 0));

  LetterIndex lp = letter_index(a.ap, {"p"}), le = letter_index(a.ap, {});
  // {p, F<=x p} reads p and releases all obligations
  CHECK(a.trans[s_pf][lp].size() == 3);
  CHECK(a.trans[s_pf][le].empty());
  // {!p, F<=x p} reads {} and must keep the obligation alive
  CHECK(a.trans[s_nf][le] == std::vector<int>{std::min(s_pf, s_nf), std::max(s_pf, s_nf)});
  // {!p} reads {} and must never see the eventuality again
  CHECK(a.trans[s_n][le] == std::vector<int>{s_n});
}

TEST_CASE("degeneralization multiplies states by the family size plus one") {
  for (const char* text : {"F<=x p", "G(q -> F<=x p)", "p U q", "(p U q) & (q U p)"}) {
    GNBA g = build_gnba(parse_formula(text));
    NBA b = degeneralize(g);
    CHECK(b.num_states == g.num_states() * (g.acc.size() + 1));
  }
}

TEST_CASE("structural bounds of the tableau pipeline") {
  FormulaGen gen(101);
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.gen(6);
    GNBA g = build_gnba(f);
    std::size_t n = formula_size(f) + atoms(f).size();
    if (n < 62) CHECK(g.num_states() <= (std::size_t{1} << n));
    CHECK(g.acc.size() < formula_size(f) + 1);
    NBA b = degeneralize(g);
    CHECK(b.num_states == g.num_states() * (g.acc.size() + 1));
  }
}

TEST_CASE("constrained acceptance equals the uniform-discharge evaluation") {
  FormulaGen gen(103);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.gen(6);
    Valuation a = gen.valuation(f, 3);
    LassoWord w = gen.lasso(4, 4);
    NBA nba = pipeline_nba(f);
    bool got = nba_lasso_accepts(nba, constraints_for(nba, a), w);
    CHECK(got == eval_lasso(testutil::uniform_closure(f), a, w));
    // acceptance is a sound certificate for plain satisfaction
    if (got) CHECK(eval_lasso(f, a, w));
  }
}

TEST_CASE("window constraints demand discharge at every position") {
  // (w,0,x=1) |= F<=x p holds via position 0, but the unique tableau run keeps
  // the eventuality pending across the later p-gaps of length 3, so the
  // windowed language only opens up at x=2.
  Formula f = parse_formula("F<=x p");
  NBA nba = pipeline_nba(f);
  LassoWord w{{}, {{"p"}, {}, {}}};
  CHECK(eval_lasso(f, {{"x", 1}}, w));
  CHECK_FALSE(eval_lasso(testutil::uniform_closure(f), {{"x", 1}}, w));
  CHECK_FALSE(nba_lasso_accepts(nba, constraints_for(nba, {{"x", 1}}), w));
  CHECK(eval_lasso(testutil::uniform_closure(f), {{"x", 2}}, w));
  CHECK(nba_lasso_accepts(nba, constraints_for(nba, {{"x", 2}}), w));
}

TEST_CASE("trimming preserves the constrained language") {
  FormulaGen gen(107);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.gen(5);
    Valuation a = gen.valuation(f, 2);
    NBA raw = degeneralize(build_gnba(f));
    NBA trimmed = remove_unproductive(raw);
    CHECK(trimmed.num_states <= raw.num_states);
    for (int j = 0; j < 5; ++j) {
      LassoWord w = gen.lasso(3, 3);
      CHECK(nba_lasso_accepts(raw, constraints_for(raw, a), w) ==
            nba_lasso_accepts(trimmed, constraints_for(trimmed, a), w));
    }
  }
}

TEST_CASE("trimmed pipeline automata are unambiguous and non-confluent") {
  FormulaGen gen(109);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.gen(5);
    NBA nba = pipeline_nba(f);
    CHECK(check_unambiguous(nba));
    CHECK(check_nonconfluent(nba));
  }
}

TEST_CASE("ambiguity and confluence checkers reject counterexamples") {
  // two accepting states looping on the same letter from a shared initial
  NBA amb;
  amb.ap = {"p"};
  amb.num_states = 3;
  amb.initial = {0};
  amb.accepting = {0, 1, 1};
  amb.gnba_state = {-1, -1, -1};
  amb.trans.assign(3, std::vector<std::vector<int>>(2));
  amb.trans[0][0] = {1, 2};
  amb.trans[1][0] = {1};
  amb.trans[2][0] = {2};
  CHECK_FALSE(check_unambiguous(amb));
  CHECK(check_nonconfluent(amb));

  // two runs that merge again: confluent but unambiguous
  NBA con;
  con.ap = {"p"};
  con.num_states = 4;
  con.initial = {0, 1};
  con.accepting = {0, 0, 1, 1};
  con.gnba_state = {-1, -1, -1, -1};
  con.trans.assign(4, std::vector<std::vector<int>>(2));
  con.trans[0][0] = {2};
  con.trans[1][0] = {2};
  con.trans[2][1] = {3};
  con.trans[3][1] = {3};
  CHECK_FALSE(check_nonconfluent(con));

  NBA fine;
  fine.ap = {};
  fine.num_states = 1;
  fine.initial = {0};
  fine.accepting = {1};
  fine.gnba_state = {-1};
  fine.trans.assign(1, std::vector<std::vector<int>>(1));
  fine.trans[0][0] = {0};
  CHECK(check_unambiguous(fine));
  CHECK(check_nonconfluent(fine));
}

TEST_CASE("window constraints tighten the language monotonically") {
  Formula f = parse_formula("F<=x p");
  NBA nba = pipeline_nba(f);
  LassoWord w{{{}, {}}, {{"p"}}};  // p first holds at position 2
  CHECK_FALSE(nba_lasso_accepts(nba, constraints_for(nba, {{"x", 1}}), w));
  CHECK(nba_lasso_accepts(nba, constraints_for(nba, {{"x", 2}}), w));
  CHECK(nba_lasso_accepts(nba, constraints_for(nba, {{"x", 3}}), w));
  CHECK(nba_accepts(nba, w));  // unconstrained Buchi language
}

TEST_CASE("buchi dump round-trips through the parser") {
  FormulaGen gen(113);
  for (int i = 0; i < 30; ++i) {
    NBA nba = pipeline_nba(gen.gen(5));
    std::string d = dump_nba(nba);
    NBA back = parse_nba(d);
    CHECK(dump_nba(back) == d);
    for (int j = 0; j < 3; ++j) {
      LassoWord w = gen.lasso(2, 3);
      CHECK(nba_accepts(back, w) == nba_accepts(nba, w));
    }
  }
}

TEST_CASE("generalized dump has one acceptance mark block per set") {
  GNBA g = build_gnba(parse_formula("G(q -> F<=x p)"));
  std::string d = dump_gnba(g);
  CHECK(d.find("Acceptance: gen-buchi " + std::to_string(g.acc.size())) != std::string::npos);
  CHECK(d.find("States: " + std::to_string(g.num_states())) != std::string::npos);
}
