#include <doctest.h>

#include "hqsynth/automata.hpp"
#include "hqsynth/boolify.hpp"
#include "hqsynth/formula.hpp"
#include "oracles.hpp"

using namespace hqs;

namespace {

const std::vector<std::string> kPQ = {"p", "q"};

LassoWord lasso(std::vector<Letter> u, std::vector<Letter> v) { return {std::move(u), std::move(v)}; }

}  // namespace

TEST_CASE("parse: factor and the message-cycle formula") {
  auto f = parse("factor{3/4} encode", {}, {"encode"});
  CHECK(f->op == Op::Factor);
  CHECK(f->lambda == Rational(3, 4));
  CHECK(f->kids[0]->op == Op::Atom);

  auto g = parse("(!noise & !encode) | factor{3/4} encode", {"noise"}, {"encode"});
  REQUIRE(g->op == Op::Max);
  CHECK(g->kids[0]->op == Op::Min);
  CHECK(g->kids[1]->op == Op::Factor);
  CHECK(to_string(g) == "((!noise & !encode) | factor{3/4} encode)");
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("wavg{1/2}(p, q", kPQ), ParseError);
  CHECK_THROWS_AS(parse("p & r", kPQ), ParseError);
  CHECK_THROWS_AS(parse("factor{3/2} p", kPQ), ParseError);
  CHECK_THROWS_AS(parse("p U", kPQ), ParseError);
  try {
    parse("p & (q", kPQ);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.position == 6);
  }
}

TEST_CASE("parse: precedence") {
  // unary > U > & > | > ->
  auto f = parse("p | q & p U q -> X p", kPQ);
  REQUIRE(f->op == Op::Max);  // implication desugars to max(!a, b)
  CHECK(f->kids[0]->op == Op::Not);
  auto lhs = f->kids[0]->kids[0];
  REQUIRE(lhs->op == Op::Max);
  CHECK(lhs->kids[1]->op == Op::Min);
  CHECK(lhs->kids[1]->kids[1]->op == Op::Until);
  auto g = parse("min(p, q, true)", kPQ);
  CHECK(g->kids.size() == 3);
  CHECK(parse("G p", kPQ)->op == Op::Not);
  CHECK(parse("F p", kPQ)->op == Op::Until);
}

TEST_CASE("parse: printing round-trips") {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    auto f = oracle::random_formula(rng, 1 + i % 9, kPQ);
    auto g = parse(to_string(f), kPQ);
    CHECK(to_string(g) == to_string(f));
  }
}

TEST_CASE("eval_lasso: worked values") {
  std::vector<std::string> ap = {"g"};
  auto f = parse("wavg{2/3}(g, X g)", ap);
  CHECK(eval_lasso(f, lasso({1, 1}, {0}), ap) == 1);
  CHECK(eval_lasso(f, lasso({1}, {0}), ap) == Rational(2, 3));
  CHECK(eval_lasso(f_true(), lasso({}, {0}), ap) == 1);
  CHECK(eval_lasso(parse("factor{3/4} g", ap), lasso({}, {1}), ap) == Rational(3, 4));
}

TEST_CASE("eval_lasso: until on the loop") {
  std::vector<std::string> ap = {"p", "q"};
  // p holds until q, which appears only inside the period
  auto f = parse("p U q", ap);
  CHECK(eval_lasso(f, lasso({1, 1}, {1, 2}), ap) == 1);
  CHECK(eval_lasso(f, lasso({1, 0}, {2}), ap) == 0);
  CHECK(eval_lasso(parse("G F q", ap), lasso({0}, {0, 2}), ap) == 1);
  CHECK(eval_lasso(parse("F G q", ap), lasso({0}, {0, 2}), ap) == 0);
  CHECK(eval_lasso(parse("F factor{1/2} q", ap), lasso({0}, {0, 2}), ap) == Rational(1, 2));
}

TEST_CASE("eval_lasso agrees with the explicit-scan evaluator") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto f = oracle::random_formula(rng, 1 + i % 10, kPQ);
    auto w = oracle::random_lasso(rng, 2);
    CHECK(eval_lasso(f, w, kPQ) == oracle::reference_eval(f, w, kPQ));
  }
}

TEST_CASE("eval_lasso: rotating the period") {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto f = oracle::random_formula(rng, 1 + i % 8, kPQ);
    auto w = oracle::random_lasso(rng, 2, 0, 4);
    auto pos = eval_positions(f, w, kPQ);
    for (size_t r = 0; r < w.period.size(); ++r) {
      LassoWord rot;
      for (size_t j = 0; j < w.period.size(); ++j) rot.period.push_back(w.period[(r + j) % w.period.size()]);
      CHECK(eval_lasso(f, rot, kPQ) == pos[r]);
    }
  }
}

TEST_CASE("eval_lasso: sugar agrees with min/max definitions") {
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto a = oracle::random_formula(rng, 3, kPQ);
    auto b = oracle::random_formula(rng, 3, kPQ);
    auto w = oracle::random_lasso(rng, 2);
    Rational x = eval_lasso(a, w, kPQ), y = eval_lasso(b, w, kPQ);
    CHECK(eval_lasso(f_and(a, b), w, kPQ) == std::min(x, y));
    CHECK(eval_lasso(f_or(a, b), w, kPQ) == std::max(x, y));
    CHECK(eval_lasso(f_implies(a, b), w, kPQ) == std::max(Rational(1 - x), y));
    CHECK(eval_lasso(f_not(a), w, kPQ) == 1 - x);
    auto pos = eval_positions(a, w, kPQ);
    Rational ev = 0, gl = 1;
    for (size_t k = 0; k < pos.size(); ++k) {
      ev = std::max(ev, pos[k]);
      gl = std::min(gl, pos[k]);
    }
    CHECK(eval_lasso(f_eventually(a), w, kPQ) == ev);
    CHECK(eval_lasso(f_globally(a), w, kPQ) == gl);
  }
}

TEST_CASE("values: small cases") {
  CHECK(values(parse("p", kPQ)) == std::vector<Rational>{0, 1});
  auto v = values(parse("wavg{1/2}(p, q)", kPQ));
  CHECK(v == std::vector<Rational>{0, Rational(1, 2), 1});
  // brute force over all one-letter lassos
  std::vector<Rational> seen;
  for (Letter a = 0; a < 4; ++a) seen.push_back(eval_lasso(parse("wavg{1/2}(p, q)", kPQ), lasso({}, {a}), kPQ));
  normalize_set(seen);
  CHECK(seen == v);
  // p & !p can only be 0
  CHECK(values(parse("p & !p", kPQ)) == std::vector<Rational>{0});
  CHECK(values(parse("wavg{1/2}(p, !p)", kPQ)) == std::vector<Rational>{Rational(1, 2)});
}

TEST_CASE("booleanize: examples") {
  auto f = booleanize(parse("p & q", kPQ), ValuePredicate::at_least(1));
  CHECK(is_boolean(f));
  CHECK(to_string(f) == "(p & q)");
  CHECK(booleanize(parse("factor{1/2} p", kPQ), ValuePredicate::at_least(Rational(3, 4)))->op == Op::False);
  auto g = booleanize(parse("wavg{1/2}(p, q)", kPQ), ValuePredicate::at_least(Rational(1, 2)));
  auto ref = parse("p | q", kPQ);
  for (Letter a = 0; a < 4; ++a)
    CHECK(eval_lasso(g, lasso({}, {a}), kPQ) == eval_lasso(ref, lasso({}, {a}), kPQ));
}

TEST_CASE("booleanize: equivalence, extremes and monotonicity") {
  std::mt19937 rng(17);
  for (int i = 0; i < 120; ++i) {
    auto f = oracle::random_formula(rng, 1 + i % 8, kPQ);
    CHECK(booleanize(f, ValuePredicate::at_least(0))->op == Op::True);
    CHECK(booleanize(f, ValuePredicate::greater_than(1))->op == Op::False);
    auto vs = candidate_values(f);
    for (int j = 0; j < 10; ++j) {
      auto w = oracle::random_lasso(rng, 2);
      Rational x = eval_lasso(f, w, kPQ);
      bool prev = true;
      for (const auto& v : vs) {
        auto eq = booleanize(f, ValuePredicate::equal_to(v));
        CHECK((oracle::reference_eval(eq, w, kPQ) == 1) == (x == v));
        bool ge = oracle::reference_eval(booleanize(f, ValuePredicate::at_least(v)), w, kPQ) == 1;
        CHECK((ge && !prev) == false);
        prev = ge;
      }
    }
  }
}

TEST_CASE("nbw: basic languages") {
  std::vector<std::string> ap = {"p"};
  auto t = ltl_to_nbw(f_true(), ap);
  CHECK(t.size() == 1);
  CHECK(nbw_accepts(t, lasso({}, {0})));
  auto gp = ltl_to_nbw(parse("G p", ap), ap);
  CHECK(nbw_accepts(gp, lasso({}, {1})));
  CHECK_FALSE(nbw_accepts(gp, lasso({1}, {1, 0})));
  std::vector<std::string> req = {"req"};
  auto fg = parse("F G !req", req);
  auto n = ltl_to_nbw(fg, req);
  std::mt19937 rng(1);
  for (int i = 0; i < 50; ++i) {
    auto w = oracle::random_lasso(rng, 1);
    CHECK(nbw_accepts(n, w) == (oracle::reference_eval(fg, w, req) == 1));
  }
}

TEST_CASE("determinize: basic languages") {
  std::vector<std::string> ap = {"p"};
  auto t = determinize(ltl_to_nbw(f_true(), ap));
  CHECK(t.size() == 1);
  CHECK(t.rank[0] % 2 == 0);
  auto gp_nbw = ltl_to_nbw(parse("G p", ap), ap);
  auto gp = determinize(gp_nbw);
  for (const auto& w : oracle::all_lassos(1, 3, 3)) CHECK(run_lasso(gp, w) == nbw_accepts(gp_nbw, w));
  std::vector<std::string> req = {"req"};
  auto fg = determinize(ltl_to_nbw(parse("F G !req", req), req));
  CHECK(run_lasso(fg, lasso({}, {0})));
  CHECK_FALSE(run_lasso(fg, lasso({}, {1})));
  CHECK_FALSE(run_lasso(fg, lasso({0}, {0, 1})));
}

TEST_CASE("determinize: random Boolean formulas agree with the evaluator") {
  std::mt19937 rng(23);
  for (int i = 0; i < 150; ++i) {
    auto f = oracle::random_formula(rng, 1 + i % 9, kPQ, true);
    auto d = determinize(ltl_to_nbw(f, kPQ));
    d.validate();
    for (int j = 0; j < 20; ++j) {
      auto w = oracle::random_lasso(rng, 2);
      CHECK(run_lasso(d, w) == (oracle::reference_eval(f, w, kPQ) == 1));
    }
  }
}

TEST_CASE("dpw_for: examples") {
  std::vector<std::string> ap = {"p"};
  auto a = dpw_for(parse("p", ap), ValuePredicate::equal_to(1), ap);
  CHECK(run_lasso(a, lasso({}, {1})));
  CHECK_FALSE(run_lasso(a, lasso({}, {0})));
  auto g = dpw_for(parse("G p", ap), ValuePredicate::equal_to(1), ap);
  CHECK_FALSE(run_lasso(g, lasso({1}, {1, 0})));

  std::vector<std::string> hd = {"data", "close"};
  auto phi = parse("((X data) -> !close) & (((!X data) -> close) | factor{1/2} X close)", hd);
  auto one = dpw_for(phi, ValuePredicate::equal_to(1), hd);
  // close in the first cycle, no data in the second
  LassoWord w = lasso({2, 0}, {0});
  CHECK(eval_lasso(phi, w, hd) == 1);
  CHECK(run_lasso(one, w));
}

TEST_CASE("dpw: nonemptiness with witness") {
  std::vector<std::string> ap = {"p"};
  auto a = dpw_for(parse("p & X G !p", ap), ValuePredicate::equal_to(1), ap);
  auto w = nonempty_witness(a, a.initial);
  REQUIRE(w.has_value());
  CHECK(run_lasso(a, *w));
  auto never = dpw_for(parse("p & !p", ap), ValuePredicate::equal_to(1), ap);
  CHECK_FALSE(dpw_nonempty_from(never, never.initial));
  DPW even{1, 0, {{0, 0}}, {2}};
  CHECK(dpw_nonempty_from(even, 0));
  DPW odd{1, 0, {{0, 0}}, {1}};
  CHECK_FALSE(dpw_nonempty_from(odd, 0));
  CHECK(run_lasso(even, lasso({1}, {0})));
  CHECK_FALSE(run_lasso(odd, lasso({1}, {0})));
}

TEST_CASE("product: projections commute") {
  auto a = dpw_for(parse("p", kPQ), ValuePredicate::equal_to(1), kPQ);
  auto b = dpw_for(parse("q", kPQ), ValuePredicate::equal_to(1), kPQ);
  auto p = product({&a, &b});
  CHECK(p.size() <= a.size() * b.size());
  for (int s = 0; s < p.size(); ++s)
    for (Letter l = 0; l < 4; ++l) {
      CHECK(p.state[p.delta[s][l]][0] == a.step(p.state[s][0], l));
      CHECK(p.state[p.delta[s][l]][1] == b.step(p.state[s][1], l));
    }
  auto single = product({&a});
  CHECK(single.size() == a.size());
}

TEST_CASE("dpw_for: value-indexed automata partition the words") {
  std::mt19937 rng(29);
  for (int i = 0; i < 40; ++i) {
    auto f = oracle::random_formula(rng, 1 + i % 8, kPQ);
    auto vs = values(f);
    CHECK(vs.size() <= (size_t(1) << size(f)));
    std::vector<DPW> as;
    for (const auto& v : vs) as.push_back(dpw_for(f, ValuePredicate::equal_to(v), kPQ));
    for (int j = 0; j < 20; ++j) {
      auto w = oracle::random_lasso(rng, 2);
      Rational x = eval_lasso(f, w, kPQ);
      int accepted = 0;
      for (size_t k = 0; k < vs.size(); ++k) {
        bool acc = run_lasso(as[k], w);
        CHECK(acc == (x == vs[k]));
        accepted += acc;
      }
      CHECK(accepted == 1);
    }
  }
}
