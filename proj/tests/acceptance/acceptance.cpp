// One PASS/FAIL line per acceptance criterion.
// Usage: acceptance <hqsynth binary> <regression dir> <scratch dir>

#include "../unit/mdp_oracles.hpp"
#include "../unit/oracles.hpp"
#include "../unit/transducers.hpp"

#include "hqsynth/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <sys/wait.h>

using namespace hqs;

namespace {

std::string g_cli, g_corpus, g_work;

struct Run {
  int status = -1;
  std::string out;
  std::map<std::string, std::string> report;
};

Run cli(const std::string& args) {
  Run r;
  std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) r.report[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return r;
}

std::string corpus(const std::string& name) { return g_corpus + "/" + name; }
std::string work(const std::string& name) { return g_work + "/" + name; }

Rational reported(const Run& r, const std::string& key) {
  auto it = r.report.find(key);
  if (r.status != 0 || it == r.report.end()) return Rational(-1);
  return parse_rational(it->second);
}

Rational eval(const std::string& spec, const std::string& t, const std::string& mode) {
  return reported(cli("eval " + corpus(spec) + " " + t + " --mode " + mode), "value");
}

// Failed checks are listed after the verdict.
struct Criterion {
  std::vector<std::string> failures;
  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int g_failed = 0;

void report(int n, const std::string& title, const Criterion& c, const std::string& detail = "") {
  bool ok = c.failures.empty();
  if (!ok) ++g_failed;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  for (const auto& f : c.failures) std::cout << "    failed: " << f << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

void hard_drive_eval() {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  const std::string t1 = corpus("hard_drive_T1.json"), t2 = corpus("hard_drive_T2.json");
  c.check(eval("hard_drive.json", t1, "expected") == Rational(1, 2), "T1 expected = 1/2");
  c.check(eval("hard_drive.json", t2, "expected") == Rational(3, 4), "T2 expected = 3/4");
  c.check(eval("hard_drive.json", t1, "worst-case") == 0, "T1 worst case = 0");
  c.check(eval("hard_drive.json", t1, "almost-sure") == 0, "T1 almost-sure = 0");
  c.check(eval("hard_drive.json", t2, "worst-case") == Rational(1, 2), "T2 worst case = 1/2");
  c.check(eval("hard_drive.json", t2, "almost-sure") == Rational(1, 2), "T2 almost-sure = 1/2");
  double s = seconds_since(t0);
  c.check(s < 5, "under 5 s");
  report(1, "hard drive evaluation", c, secs(s));
}

void hard_drive_synth() {
  Criterion c;
  auto r = cli("synth " + corpus("hard_drive.json") + " --out " + work("hd_synth.json"));
  c.check(reported(r, "expected") == Rational(3, 4), "synth expected = 3/4");
  c.check(eval("hard_drive.json", work("hd_synth.json"), "expected") == Rational(3, 4),
          "written transducer re-evaluates to 3/4");
  AchievabilityMdp ach(io::load_spec(corpus("hard_drive.json")));
  const auto& m = ach.mdp();
  const auto phi = io::load_spec(corpus("hard_drive.json")).formula;
  Rational best_mdp = -1, best_t = -1;
  size_t count = 0;
  oracle::for_each_strategy(m.mdp, [&](const std::vector<int>& f) {
    ++count;
    best_mdp = std::max(best_mdp, oracle::strategy_value(m.mdp, f, m.reward));
    best_t = std::max(best_t, expected_value(ach.transducer(Strategy{f}), phi, InputModel::uniform(1)));
  });
  c.check(best_mdp == Rational(3, 4), "best memoryless strategy on the MDP = 3/4");
  c.check(best_t <= Rational(3, 4), "no memoryless strategy's transducer exceeds 3/4");
  report(2, "hard drive synthesis", c,
         std::to_string(count) + " strategies, best " + to_string(best_mdp) + " / " + to_string(best_t));
}

void message() {
  Criterion c;
  const Rational p(1, 2);
  const std::string t3 = corpus("message_T3.json"), t2 = corpus("message_T2.json");
  for (const char* mode : {"worst-case", "almost-sure", "expected"})
    c.check(eval("message.json", t3, mode) == Rational(3, 4), std::string("T3 ") + mode + " = 3/4");
  c.check(eval("message.json", t2, "expected") == Rational(7, 8) - p / 2, "T2 expected = 7/8 - p/2");
  auto s = cli("synth " + corpus("message.json"));
  c.check(reported(s, "expected") == Rational(3, 4), "synth = 3/4");
  auto t = cli("synth " + corpus("message.json") + " --threshold 3/8");
  c.check(reported(t, "expected") >= Rational(5, 8), "threshold 3/8 value >= 5/8");
  c.check(reported(t, "almost_sure_floor") >= Rational(3, 8), "certified floor >= 3/8");
  report(3, "message sending", c);
}

void persistence() {
  Criterion c;
  const Rational p(1, 2);
  const auto spec = io::load_spec(corpus("persistence.json"));
  c.check(prob_of_assumption(*spec.assumption, spec.inputs) == Rational(1, 4), "Pr(persistence) = 1/4");
  c.check(eval("persistence.json", corpus("persistence_T4.json"), "conditional") == 1 - 5 * p / 8,
          "T4 conditional = 1 - 5p/8");
  c.check(eval("persistence.json", corpus("persistence_T5.json"), "conditional") == Rational(7, 8) - p / 8,
          "T5 conditional = 7/8 - p/8");
  auto r = cli("synth " + corpus("message.json") + " --assume \"" + to_string(*spec.assumption) + "\"");
  c.check(reported(r, "expected") == Rational(13, 16), "synth --assume = 13/16");
  report(4, "persistence assumption", c);
}

void null_assumption() {
  Criterion c;
  c.check(prob_of_assumption(parse("F G !req", {"req"}), {"req"}) == 0, "Pr(F G !req) = 0");
  report(5, "probability of F G !req", c);
}

void battery() {
  Criterion c;
  const int k = 4, t = 2;
  const Rational p(1, 2);
  auto pw = [](Rational b, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  const Rational q = 1 - p;
  const Rational closed = pw(q, k) + Rational(t, k) * (1 - pw(q, k - t + 1)) +
                          (p - 1) / (k * p) * ((k - t + 1) * pw(q, k - t) * p - 1 + pw(q, k - t + 1));
  Rational got = eval("battery.json", corpus("battery_T.json"), "expected");
  c.check(got == closed, "battery transducer = closed form");
  report(6, "battery closed form", c, "closed form " + to_string(closed) + ", evaluated " + to_string(got));
}

void automata_property() {
  Criterion c;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  const std::vector<std::string> ap = {"p", "q"};
  int formulas = 0, lassos = 0;
  while (formulas < 200) {
    auto f = oracle::random_formula(rng, 1 + rng() % 8, ap);
    if (size(f) > 8) continue;
    ++formulas;
    auto vs = values(f);
    if (vs.size() > (size_t(1) << size(f))) c.check(false, "|values| bound for " + to_string(f));
    std::vector<DPW> as;
    for (const auto& v : vs) as.push_back(dpw_for(f, ValuePredicate::equal_to(v), ap));
    for (int j = 0; j < 20; ++j, ++lassos) {
      auto w = oracle::random_lasso(rng, 2);
      Rational x = eval_lasso(f, w, ap);
      for (size_t k = 0; k < vs.size(); ++k)
        if (run_lasso(as[k], w) != (x == vs[k])) c.check(false, "membership for " + to_string(f));
    }
  }
  double s = seconds_since(t0);
  c.check(s <= 300, "under 5 min");
  report(7, "value automata agree with the evaluator", c,
         std::to_string(formulas) + " formulas, " + std::to_string(lassos) + " lassos, " + secs(s));
}

void mdp_property() {
  Criterion c;
  std::mt19937 rng(4242);
  static const Rational rewards[] = {0, Rational(1, 4), Rational(1, 2), Rational(3, 4), 1};
  int instances = 0;
  for (; instances < 120; ++instances) {
    int n = 1 + rng() % 8;
    MDP m = oracle::random_mdp(rng, n, 2);
    std::vector<int> rank(n);
    for (auto& r : rank) r = 1 + rng() % 4;
    std::vector<unsigned> got;
    for (const auto& ec : max_end_components(m)) {
      unsigned b = 0;
      for (int s : ec.states) b |= 1u << s;
      got.push_back(b);
    }
    auto want = oracle::maximal_end_components(m);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    c.check(got == want, "MECs on instance " + std::to_string(instances));
    c.check(cwr_states({m, rank}).cwr == oracle::cwr(m, rank), "c.w.r. on instance " + std::to_string(instances));
    c.check(almost_sure_parity({m, rank}).winning == oracle::parity_winning(m, rank),
            "almost-sure parity on instance " + std::to_string(instances));
    std::vector<Rational> reward(n);
    for (auto& r : reward) r = rewards[rng() % 5];
    for (const auto& ec : max_end_components(m))
      for (int s : ec.states) reward[s] = reward[ec.states[0]];
    c.check(solve_mean_payoff({m, reward}).value == oracle::best_mean_payoff(m, reward),
            "mean payoff on instance " + std::to_string(instances));
  }
  report(8, "MDP algorithms agree with enumeration", c, std::to_string(instances) + " MDPs");
}

void implication_property() {
  Criterion c;
  std::mt19937 rng(555);
  const std::vector<std::string> ap = {"i0", "o0"};
  auto u = InputModel::uniform(1);
  int instances = 0, holds = 0;
  while (instances < 60) {
    auto t = fixture::random_transducer(rng, 1 + rng() % 3, 1, 1);
    auto phi = oracle::random_formula(rng, 1 + rng() % 5, ap);
    auto psi = oracle::random_formula(rng, 1 + rng() % 3, {"i0"}, true);
    if (assumption_probability(t, psi, u) == 0) continue;
    auto vs = values(phi);
    Rational th = vs[rng() % vs.size()];
    ++instances;
    bool cond = conditional_almost_sure_value(t, phi, psi, u) >= th;
    bool impl = almost_sure_value(t, f_implies(psi, phi), u) >= th;
    holds += cond;
    c.check(cond == impl, "instance " + std::to_string(instances));
  }
  report(9, "conditional thresholds equal thresholds on the implication", c,
         std::to_string(instances) + " instances, " + std::to_string(holds) + " satisfied");
}

void determinism() {
  Criterion c;
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"synth " + corpus("hard_drive.json") + " --out %OUT --dot %DOT", {"%OUT", "%DOT"}},
      {"synth " + corpus("message.json") + " --threshold 3/8 --json --out %OUT", {"%OUT"}},
      {"synth " + corpus("persistence.json") + " --out %OUT --dump-mdp %DOT", {"%OUT", "%DOT"}},
      {"synth " + corpus("hard_drive_t35.json"), {}},
      {"synth " + corpus("hard_drive_biased.json") + " --out %OUT", {"%OUT"}},
      {"eval " + corpus("hard_drive.json") + " " + corpus("hard_drive_T2.json") + " --mode worst-case", {}},
      {"eval " + corpus("persistence.json") + " " + corpus("persistence_T5.json") + " --mode conditional", {}},
      {"eval " + corpus("battery.json") + " " + corpus("battery_T.json") + " --mode almost-sure", {}},
      {"simulate " + corpus("hard_drive.json") + " " + corpus("hard_drive_T1.json") + " --samples 20000 --seed 9",
       {}},
      {"simulate " + corpus("message.json") + " " + corpus("message_T2.json") + " --samples 5000 --seed 4 --json",
       {}},
  };
  int n = 0;
  for (const auto& [pattern, files] : commands) {
    std::vector<std::string> outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::string cmd = pattern;
      std::vector<std::string> paths;
      for (const auto& f : files) {
        std::string path = work("det_" + std::to_string(n) + "_" + std::to_string(rep) + f.substr(1));
        cmd.replace(cmd.find(f), f.size(), path);
        paths.push_back(path);
      }
      Run r = cli(cmd);
      outputs[rep].push_back(std::to_string(r.status) + "\n" + r.out);
      for (const auto& p : paths) outputs[rep].push_back(io::read_file(p));
    }
    c.check(outputs[0] == outputs[1], pattern);
    ++n;
  }
  report(10, "repeated runs are byte-identical", c, std::to_string(n) + " commands");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <hqsynth binary> <regression dir> <scratch dir>\n";
    return 1;
  }
  g_cli = argv[1];
  g_corpus = argv[2];
  g_work = argv[3];
  std::filesystem::create_directories(g_work);
  const std::vector<void (*)()> criteria = {hard_drive_eval, hard_drive_synth, message,          persistence,
                                            null_assumption, battery,          automata_property, mdp_property,
                                            implication_property, determinism};
  for (auto run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      ++g_failed;
      std::cout << "FAIL criterion (exception): " << e.what() << "\n";
    }
  }
  std::cout << (g_failed ? "FAILED " + std::to_string(g_failed) : std::string("ALL PASSED")) << "\n";
  return g_failed ? 1 : 0;
}
