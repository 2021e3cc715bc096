#include "hqsynth/transducer.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace hqs {

std::vector<std::string> Transducer::alphabet() const {
  std::vector<std::string> ap = inputs;
  ap.insert(ap.end(), outputs.begin(), outputs.end());
  return ap;
}

void Transducer::validate() const {
  const size_t letters = size_t(1) << inputs.size();
  if (size() == 0) throw std::invalid_argument("transducer has no states");
  if (initial < 0 || initial >= size()) throw std::invalid_argument("transducer initial state out of range");
  if (delta.size() != label.size()) throw std::invalid_argument("transducer transition table size mismatch");
  for (int q = 0; q < size(); ++q) {
    if (label[q] >> outputs.size()) throw std::invalid_argument("transducer label outside the outputs");
    if (delta[q].size() != letters)
      throw std::invalid_argument("transducer state " + std::to_string(q) + " is not total over the inputs");
    for (int t : delta[q])
      if (t < 0 || t >= size()) throw std::invalid_argument("transducer transition target out of range");
  }
}

std::optional<Letter> Transducer::committed_output(int q) const {
  Letter o = label[delta[q][0]];
  for (int t : delta[q])
    if (label[t] != o) return std::nullopt;
  return o;
}

std::vector<Letter> exec(const Transducer& t, const std::vector<Letter>& inputs) {
  std::vector<Letter> out;
  int q = t.initial;
  for (Letter i : inputs) {
    q = t.delta[q][i];
    out.push_back(join(i, t.label[q], t.num_inputs()));
  }
  return out;
}

LassoWord exec_lasso(const Transducer& t, const LassoWord& w) {
  std::vector<Letter> letters;
  int q = t.initial;
  auto feed = [&](Letter i) {
    q = t.delta[q][i];
    letters.push_back(join(i, t.label[q], t.num_inputs()));
  };
  for (Letter i : w.prefix) feed(i);
  // The state at the start of each period repeats within |Q| rounds.
  std::map<int, size_t> start;
  while (true) {
    auto [it, inserted] = start.emplace(q, letters.size());
    if (!inserted) {
      LassoWord out;
      out.prefix.assign(letters.begin(), letters.begin() + it->second);
      out.period.assign(letters.begin() + it->second, letters.end());
      return out;
    }
    for (Letter i : w.period) feed(i);
  }
}

namespace {

void check_atoms(const Formula& f, const std::vector<std::string>& allowed, const char* what) {
  for (const auto& a : atoms(f))
    if (std::find(allowed.begin(), allowed.end(), a) == allowed.end())
      throw std::invalid_argument(std::string(what) + " mentions atom '" + a + "' outside the alphabet");
}

}  // namespace

ChainAnalysis analyze(const Transducer& t, const Formula& phi, const Formula* psi, const InputModel& model) {
  t.validate();
  const auto ap = t.alphabet();
  const int ni = t.num_inputs();
  check_atoms(phi, ap, "formula");
  if (psi) check_atoms(*psi, t.inputs, "assumption");
  if (model.num_inputs() != ni) throw std::invalid_argument("input model does not match the transducer inputs");

  ChainAnalysis res;
  res.values = values(phi);
  std::vector<DPW> automata;
  for (const auto& v : res.values) automata.push_back(dpw_for(phi, ValuePredicate::equal_to(v), ap));
  if (psi) automata.push_back(dpw_for(*psi, ValuePredicate::at_least(1), ap));
  for (const auto& a : automata) res.automata_states += a.size();
  const size_t k = automata.size();

  // Product state: transducer, input process, then one state per automaton.
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> states;
  auto id_of = [&](std::vector<int> key) {
    auto [it, inserted] = ids.emplace(key, static_cast<int>(states.size()));
    if (inserted) {
      check_ceiling(states.size() + 1, "evaluation chain");
      states.push_back(std::move(key));
    }
    return it->second;
  };
  std::vector<int> init{t.initial, model.initial()};
  for (const auto& a : automata) init.push_back(a.initial);
  res.chain.initial = id_of(init);
  for (size_t s = 0; s < states.size(); ++s) {
    const std::vector<int> cur = states[s];
    Letter o = 0;
    if (!model.is_uniform()) {
      auto c = t.committed_output(cur[0]);
      if (!c)
        throw std::invalid_argument("transducer state " + std::to_string(cur[0]) +
                                    " picks its output after reading the input; "
                                    "a distribution needs outputs fixed one step ahead");
      o = *c;
    }
    Distribution row;
    for (const auto& st : model.step(cur[1], o)) {
      std::vector<int> next(cur.size());
      next[0] = t.delta[cur[0]][st.input];
      next[1] = st.next;
      Letter letter = join(st.input, t.label[next[0]], ni);
      for (size_t j = 0; j < k; ++j) next[2 + j] = automata[j].step(cur[2 + j], letter);
      row.emplace_back(id_of(std::move(next)), st.prob);
    }
    normalize(row);
    res.chain.rows.push_back(std::move(row));
  }

  res.ergodic = mc_ergodic_analysis(res.chain);
  const size_t nv = res.values.size();
  for (const auto& comp : res.ergodic.components) {
    std::vector<int> top(k, 0);
    for (int s : comp)
      for (size_t j = 0; j < k; ++j) top[j] = std::max(top[j], automata[j].rank[states[s][2 + j]]);
    int value = -1;
    for (size_t j = 0; j < nv; ++j)
      if (top[j] % 2 == 0) {
        if (value >= 0) throw std::logic_error("ergodic component accepted by two value automata");
        value = static_cast<int>(j);
      }
    if (value < 0) throw std::logic_error("ergodic component accepted by no value automaton");
    res.value_of.push_back(value);
    res.assumption.push_back(!psi || top[nv] % 2 == 0);
  }
  return res;
}

Rational expected_value(const Transducer& t, const Formula& phi, const InputModel& model) {
  auto a = analyze(t, phi, nullptr, model);
  Rational sum = 0;
  for (size_t c = 0; c < a.value_of.size(); ++c) sum += a.ergodic.rho[c] * a.values[a.value_of[c]];
  return sum;
}

Rational conditional_expected_value(const Transducer& t, const Formula& phi, const Formula& psi,
                                    const InputModel& model) {
  auto a = analyze(t, phi, &psi, model);
  Rational mass = 0, sum = 0;
  for (size_t c = 0; c < a.value_of.size(); ++c)
    if (a.assumption[c]) {
      mass += a.ergodic.rho[c];
      sum += a.ergodic.rho[c] * a.values[a.value_of[c]];
    }
  if (mass == 0) throw AssumptionHasZeroProbability();
  return sum / mass;
}

Rational almost_sure_value(const Transducer& t, const Formula& phi, const InputModel& model) {
  auto a = analyze(t, phi, nullptr, model);
  Rational best = 1;
  for (int v : a.value_of) best = std::min(best, a.values[v]);
  return best;
}

Rational conditional_almost_sure_value(const Transducer& t, const Formula& phi, const Formula& psi,
                                       const InputModel& model) {
  auto a = analyze(t, phi, &psi, model);
  Rational best = 1;
  bool any = false;
  for (size_t c = 0; c < a.value_of.size(); ++c)
    if (a.assumption[c]) {
      any = true;
      best = std::min(best, a.values[a.value_of[c]]);
    }
  if (!any) throw AssumptionHasZeroProbability();
  return best;
}

Rational assumption_probability(const Transducer& t, const Formula& psi, const InputModel& model) {
  auto a = analyze(t, f_true(), &psi, model);
  Rational mass = 0;
  for (size_t c = 0; c < a.assumption.size(); ++c)
    if (a.assumption[c]) mass += a.ergodic.rho[c];
  return mass;
}

WorstCase worst_case(const Transducer& t, const Formula& phi) {
  t.validate();
  const auto ap = t.alphabet();
  check_atoms(phi, ap, "formula");
  const int ni = t.num_inputs();
  for (const auto& v : values(phi)) {
    DPW a = dpw_for(phi, ValuePredicate::equal_to(v), ap);
    // T x A as an automaton over input letters.
    DPW joint;
    joint.num_ap = ni;
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    auto id_of = [&](int q, int p) {
      auto [it, inserted] = ids.emplace(std::make_pair(q, p), static_cast<int>(states.size()));
      if (inserted) {
        check_ceiling(states.size() + 1, "worst-case product");
        states.emplace_back(q, p);
      }
      return it->second;
    };
    joint.initial = id_of(t.initial, a.initial);
    for (size_t s = 0; s < states.size(); ++s) {
      auto [q, p] = states[s];
      std::vector<int> row;
      for (Letter i = 0; i < (Letter(1) << ni); ++i) {
        int q2 = t.delta[q][i];
        row.push_back(id_of(q2, a.step(p, join(i, t.label[q2], ni))));
      }
      joint.delta.push_back(std::move(row));
      joint.rank.push_back(a.rank[p]);
    }
    if (auto w = nonempty_witness(joint, joint.initial)) return {v, *w, exec_lasso(t, *w)};
  }
  throw std::logic_error("no value automaton accepts any computation");
}

Simulation simulate(const Transducer& t, const Formula& phi, size_t samples, uint64_t seed,
                    const InputModel& model) {
  if (samples == 0) throw std::invalid_argument("samples must be positive");
  auto a = analyze(t, phi, nullptr, model);
  std::vector<std::vector<double>> cumulative(a.chain.size());
  for (int s = 0; s < a.chain.size(); ++s) {
    double acc = 0;
    for (const auto& [u, p] : a.chain.rows[s]) cumulative[s].push_back(acc += p.get_d());
  }
  std::mt19937_64 rng(seed);
  Simulation out;
  Rational sum = 0;
  for (size_t n = 0; n < samples; ++n) {
    int s = a.chain.initial;
    while (a.ergodic.component_of[s] < 0) {
      double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const auto& cum = cumulative[s];
      size_t j = std::upper_bound(cum.begin(), cum.end(), x) - cum.begin();
      s = a.chain.rows[s][std::min(j, cum.size() - 1)].first;
    }
    const Rational& v = a.values[a.value_of[a.ergodic.component_of[s]]];
    out.samples.push_back(v);
    sum += v;
  }
  out.estimate = sum / static_cast<unsigned long>(samples);
  return out;
}

std::string to_dot(const Transducer& t) {
  std::ostringstream os;
  os << "digraph transducer {\n  rankdir=LR;\n  init [shape=point];\n";
  os << "  init -> q" << t.initial << ";\n";
  for (int q = 0; q < t.size(); ++q)
    os << "  q" << q << " [label=\"" << q << "\\n" << letter_to_string(t.label[q], t.outputs) << "\"];\n";
  for (int q = 0; q < t.size(); ++q) {
    // One edge per target, listing the input letters that lead there.
    std::map<int, std::vector<std::string>> by_target;
    for (Letter i = 0; i < t.delta[q].size(); ++i)
      by_target[t.delta[q][i]].push_back(letter_to_string(i, t.inputs));
    for (const auto& [dst, letters] : by_target) {
      std::string text;
      for (const auto& l : letters) text += (text.empty() ? "" : " ") + l;
      os << "  q" << q << " -> q" << dst << " [label=\"" << text << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace hqs
