#include "doctest.h"
#include "case_studies.hpp"
#include "oracles.hpp"
#include "transducers.hpp"

#include "hqsynth/transducer.hpp"

#include <cmath>

using namespace hqs;

namespace {

using cases::hard_drive;
using cases::message;
using cases::persistence;

Transducer close_at(int cycle) {
  return fixture::from_history({"data"}, {"close"}, 3,
                               [=](const std::vector<Letter>& h) { return Letter(h.size() == size_t(cycle) + 1); });
}

}  // namespace

TEST_CASE("exec ignores the initial label") {
  Transducer t;
  t.inputs = {};
  t.outputs = {"g"};
  t.label = {0, 1};
  t.delta = {{1}, {0}};
  CHECK(exec(t, {0, 0, 0}) == std::vector<Letter>{1, 0, 1});

  Transducer c;
  c.outputs = {"g"};
  c.label = {1};
  c.delta = {{0}};
  CHECK(exec(c, {0, 0}) == std::vector<Letter>{1, 1});
}

TEST_CASE("hard drive transducers") {
  auto phi = hard_drive();
  auto u = InputModel::uniform(1);
  auto t1 = close_at(0), t2 = close_at(1);
  CHECK(expected_value(t1, phi, u) == Rational(1, 2));
  CHECK(expected_value(t2, phi, u) == Rational(3, 4));
  CHECK(almost_sure_value(t1, phi, u) == 0);
  CHECK(almost_sure_value(t2, phi, u) == Rational(1, 2));
  CHECK(worst_case_value(t1, phi) == 0);
  CHECK(worst_case_value(t2, phi) == Rational(1, 2));
  auto wc = worst_case(t2, phi);
  CHECK(eval_lasso(phi, wc.computation, t2.alphabet()) == wc.value);
}

TEST_CASE("message sending transducers") {
  auto phi = message();
  auto u = InputModel::uniform(1);
  auto always = fixture::from_history({"noise"}, {"encode"}, 4, [](const auto&) { return Letter(1); }, 1);
  CHECK(expected_value(always, phi, u) == Rational(3, 4));
  CHECK(almost_sure_value(always, phi, u) == Rational(3, 4));
  CHECK(worst_case_value(always, phi) == Rational(3, 4));
  auto two = fixture::from_history({"noise"}, {"encode"}, 4, [](const auto& h) { return Letter(h.size() <= 2); });
  CHECK(expected_value(two, phi, u) == Rational(5, 8));
  CHECK(worst_case_value(two, phi) == Rational(3, 8));
}

TEST_CASE("persistence assumption transducers") {
  auto phi = message();
  auto psi = persistence();
  auto u = InputModel::uniform(1);
  // Encode on the second cycle of a block iff the first cycle was noisy.
  auto t4 = fixture::from_history({"noise"}, {"encode"}, 4, [](const std::vector<Letter>& h) {
    return h.size() % 2 == 0 ? h[h.size() - 2] : Letter(0);
  });
  auto t5 = fixture::from_history({"noise"}, {"encode"}, 4, [](const std::vector<Letter>& h) {
    return h.size() % 2 == 0 ? h[h.size() - 2] : Letter(1);
  });
  CHECK(conditional_expected_value(t4, phi, psi, u) == Rational(11, 16));
  CHECK(conditional_expected_value(t5, phi, psi, u) == Rational(13, 16));
  CHECK(conditional_almost_sure_value(t5, phi, psi, u) == Rational(3, 4));
  CHECK(assumption_probability(t5, psi, u) == Rational(1, 4));
  CHECK(conditional_expected_value(t5, phi, f_true(), u) == expected_value(t5, phi, u));
  auto never = fixture::from_history({"noise"}, {"encode"}, 1, [](const auto&) { return Letter(0); });
  CHECK_THROWS_AS(conditional_expected_value(never, phi, parse("G F noise & F G !noise", {"noise"}), u),
                  AssumptionHasZeroProbability);
}

TEST_CASE("battery transducer matches the closed form") {
  const int k = 4, start = 2;
  const Rational p(1, 2);
  auto phi = cases::battery(k);
  auto t = fixture::from_history({"station"}, {"replace"}, k + 1, [&](const std::vector<Letter>& h) {
    int pos = static_cast<int>(h.size()) - 1;
    if (pos < start || !h.back()) return Letter(0);
    for (int j = start; j < pos; ++j)
      if (h[j]) return Letter(0);
    return Letter(1);
  });
  Rational closed = 1;
  for (int j = 0; j < k; ++j) closed *= 1 - p;
  Rational geo = 1;
  for (int i = 0; i <= k - start; ++i) {
    closed += geo * p * Rational(start + i, k);
    geo *= 1 - p;
  }
  CHECK(closed == Rational(5, 8));
  CHECK(expected_value(t, phi, InputModel::uniform(1)) == closed);
}

TEST_CASE("evaluation with an input distribution") {
  // data holds with probability 1/4 at every step.
  DistributionMDP d;
  d.num_inputs = 1;
  d.num_outputs = 1;
  d.label = {1, 0};
  Distribution row = {{0, Rational(1, 4)}, {1, Rational(3, 4)}};
  d.trans = {{row, row}, {row, row}};
  auto model = InputModel::from(d);
  // The delayed form of "close at cycle 1": outputs are fixed one step ahead.
  Transducer t2;
  t2.inputs = {"data"};
  t2.outputs = {"close"};
  t2.label = {0, 0, 1, 0};
  t2.delta = {{1, 1}, {2, 2}, {3, 3}, {3, 3}};
  CHECK(expected_value(t2, hard_drive(), model) == Rational(1, 2) * (1 + Rational(1, 4)));
  auto echo = fixture::from_history({"data"}, {"close"}, 1, [](const auto& h) { return h.back(); });
  CHECK_THROWS_AS(expected_value(echo, hard_drive(), model), std::invalid_argument);
}

TEST_CASE("value ordering and partition on random transducers") {
  std::mt19937 rng(29);
  std::vector<std::string> ap = {"i0", "o0"};
  auto u = InputModel::uniform(1);
  for (int round = 0; round < 60; ++round) {
    auto t = fixture::random_transducer(rng, 1 + rng() % 4, 1, 1);
    auto phi = oracle::random_formula(rng, 1 + rng() % 6, ap);
    auto a = analyze(t, phi, nullptr, u);
    Rational total = 0;
    for (const auto& r : a.ergodic.rho) total += r;
    CHECK(total == 1);
    auto w = worst_case(t, phi);
    CHECK(eval_lasso(phi, w.computation, ap) == w.value);
    Rational as = almost_sure_value(t, phi, u), ex = expected_value(t, phi, u);
    CHECK(w.value <= as);
    CHECK(as <= ex);
    // Lasso consistency against the direct evaluator.
    for (int j = 0; j < 5; ++j) {
      auto in = oracle::random_lasso(rng, 1);
      auto comp = exec_lasso(t, in);
      for (size_t n = 0; n < 12; ++n) CHECK(comp.at(n) == exec(t, [&] {
                                              std::vector<Letter> v;
                                              for (size_t m = 0; m <= n; ++m) v.push_back(in.at(m));
                                              return v;
                                            }())[n]);
      CHECK(eval_lasso(phi, comp, ap) >= w.value);
    }
  }
}

TEST_CASE("simulation") {
  auto phi = hard_drive();
  auto u = InputModel::uniform(1);
  auto t1 = close_at(0);
  auto s = simulate(t1, phi, 100000, 42, u);
  CHECK(std::abs(s.estimate.get_d() - 0.5) <= 3 * std::sqrt(0.25 / 100000));
  CHECK(simulate(t1, phi, 1000, 7, u).samples == simulate(t1, phi, 1000, 7, u).samples);
  auto always = fixture::from_history({"data"}, {"close"}, 1, [](const auto&) { return Letter(1); }, 1);
  auto one = simulate(always, parse("G close", {"data", "close"}), 1, 3, u);
  CHECK(one.estimate == 1);
}
