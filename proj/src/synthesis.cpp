#include "hqsynth/synthesis.hpp"
#include "hqsynth/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace hqs {

std::vector<std::string> SynthesisSpec::alphabet() const {
  std::vector<std::string> ap = inputs;
  ap.insert(ap.end(), outputs.begin(), outputs.end());
  return ap;
}

InputModel SynthesisSpec::input_model() const {
  return distribution ? InputModel::from(*distribution) : InputModel::uniform(static_cast<int>(inputs.size()));
}

void SynthesisSpec::validate() const {
  auto ap = alphabet();
  std::set<std::string> seen;
  for (const auto& a : ap)
    if (!seen.insert(a).second) throw std::invalid_argument("atom '" + a + "' declared twice");
  if (ap.size() > 16) throw std::invalid_argument("too many atoms");
  if (!formula) throw std::invalid_argument("missing formula");
  auto within = [](const Formula& f, const std::vector<std::string>& allowed, const char* what) {
    for (const auto& a : atoms(f))
      if (std::find(allowed.begin(), allowed.end(), a) == allowed.end())
        throw std::invalid_argument(std::string(what) + " uses atom '" + a + "' outside its alphabet");
  };
  within(formula, ap, "formula");
  if (assumption) {
    within(*assumption, inputs, "assumption");
    if (!is_boolean(*assumption)) throw std::invalid_argument("assumption must be a Boolean formula");
  }
  if (hard_constraint) {
    within(*hard_constraint, ap, "hard constraint");
    if (!is_boolean(*hard_constraint)) throw std::invalid_argument("hard constraint must be a Boolean formula");
    if (assumption) throw std::invalid_argument("hard constraints cannot be combined with an assumption");
  }
  if (threshold && !in_unit_interval(*threshold)) throw std::invalid_argument("threshold outside [0,1]");
  if (distribution) {
    const auto& d = *distribution;
    if (d.num_inputs != static_cast<int>(inputs.size()) || d.num_outputs != static_cast<int>(outputs.size()))
      throw std::invalid_argument("distribution does not match the declared atoms");
    d.validate();
    if (!d.observable())
      throw std::invalid_argument("distribution states must be recoverable from the inputs they emit");
    if (assumption && !d.output_independent())
      throw std::invalid_argument("with an assumption the distribution may not depend on the outputs");
  }
}

namespace {

DPW boolean_dpw(const Formula& beta, const std::vector<std::string>& ap) {
  DPW d = determinize(ltl_to_nbw(beta, ap));
  d.validate();
  return d;
}

// A DPW run against the input model, as an MDP over (automaton, input) pairs.
struct Side {
  DPW dpw;
  ProductMDP pm;
  std::map<std::pair<int, int>, int> index;

  Side(DPW a, const InputModel& model, int num_outputs) : dpw(std::move(a)) {
    pm = induced_pre_mdp_dist(dpw.delta, dpw.initial, model, num_outputs);
    for (int s = 0; s < pm.mdp.size(); ++s) index.emplace(pm.state[s], s);
  }
  int at(int q, int d) const { return index.at({q, d}); }
  ParityMDP parity() const {
    ParityMDP p{pm.mdp, {}};
    for (const auto& [q, d] : pm.state) p.rank.push_back(dpw.rank[q]);
    return p;
  }
};

struct ValueSide {
  Rational value;
  Side side;
  std::vector<char> cwr;
  ParityResult win;
};

struct RestrictionSide {
  Side side;
  ParityResult win;
  std::vector<std::vector<char>> allowed;  // [pair state][output]
};

struct AssumptionSide {
  Side side;
  std::vector<char> rejecting;
};

std::vector<char> rejecting_bottoms(const Side& s) {
  const MDP& m = s.pm.mdp;
  Adjacency g(m.size());
  for (int v = 0; v < m.size(); ++v)
    for (const auto& [t, p] : m.actions[v][0].succ) g[v].push_back(t);
  auto scc = strongly_connected(g);
  std::vector<char> bottom(scc.count, 1);
  std::vector<int> top(scc.count, 0);
  for (int v = 0; v < m.size(); ++v) {
    top[scc.comp[v]] = std::max(top[scc.comp[v]], s.dpw.rank[s.pm.state[v].first]);
    for (int t : g[v])
      if (scc.comp[t] != scc.comp[v]) bottom[scc.comp[v]] = 0;
  }
  std::vector<char> out(m.size(), 0);
  for (int v = 0; v < m.size(); ++v) out[v] = bottom[scc.comp[v]] && top[scc.comp[v]] % 2 == 1;
  return out;
}

Side assumption_side(const Formula& psi, const std::vector<std::string>& inputs, const InputModel& model) {
  return Side(dpw_for(psi, ValuePredicate::at_least(1), inputs), model, 0);
}

}  // namespace

struct AchievabilityMdp::Impl {
  SynthesisSpec spec;
  InputModel model = InputModel::uniform(0);
  int ni = 0, no = 0;
  std::vector<Rational> all_values;
  std::vector<ValueSide> scored;
  std::optional<RestrictionSide> restriction;
  std::optional<AssumptionSide> assumption;
  bool realizable = true;
  std::vector<std::pair<int, int>> losing;

  RewardMDP mdp;
  std::vector<std::vector<int>> tuples;
  std::map<std::vector<int>, int> ids;
  std::vector<int> best_witness;  // per state: scored index with the largest value, -1 if none
  size_t automata = 0, automata_states = 0;

  int r_pos() const { return 1 + static_cast<int>(scored.size()); }
  int a_pos() const { return r_pos() + (restriction ? 1 : 0); }

  bool is_reset(const std::vector<int>& t) const {
    return assumption && assumption->rejecting[assumption->side.at(t[a_pos()], t[0])];
  }

  std::vector<Letter> allowed(const std::vector<int>& t) const {
    std::vector<Letter> out;
    for (Letter o = 0; o < (Letter(1) << no); ++o)
      if (!restriction || restriction->allowed[restriction->side.at(t[r_pos()], t[0])][o]) out.push_back(o);
    return out;
  }

  std::vector<int> next(const std::vector<int>& t, Letter o, const InputModel::Step& st) const {
    std::vector<int> n(t.size());
    n[0] = st.next;
    Letter letter = join(st.input, o, ni);
    for (size_t j = 0; j < scored.size(); ++j) n[1 + j] = scored[j].side.dpw.step(t[1 + j], letter);
    if (restriction) n[r_pos()] = restriction->side.dpw.step(t[r_pos()], letter);
    if (assumption) n[a_pos()] = assumption->side.dpw.step(t[a_pos()], st.input);
    return n;
  }

  void build();
};

void AchievabilityMdp::Impl::build() {
  spec.validate();
  model = spec.input_model();
  ni = static_cast<int>(spec.inputs.size());
  no = static_cast<int>(spec.outputs.size());
  const auto ap = spec.alphabet();
  const Formula& phi = spec.formula;
  all_values = hqs::values(phi);

  size_t first = 0;
  if (spec.threshold)
    while (first < all_values.size() && all_values[first] < *spec.threshold) ++first;

  std::optional<Formula> restrict_formula;
  if (spec.assumption && spec.threshold)
    restrict_formula = booleanize(f_implies(*spec.assumption, phi), ValuePredicate::at_least(*spec.threshold));
  else if (spec.threshold)
    restrict_formula = booleanize(phi, ValuePredicate::at_least(*spec.threshold));
  if (spec.hard_constraint)
    restrict_formula = restrict_formula ? f_and(*restrict_formula, *spec.hard_constraint) : *spec.hard_constraint;

  if (restrict_formula) {
    Side side(boolean_dpw(*restrict_formula, ap), model, no);
    ++automata;
    automata_states += side.dpw.size();
    auto win = almost_sure_parity(side.parity());
    if (!win.winning[side.pm.mdp.initial]) {
      realizable = false;
      for (int s = 0; s < side.pm.mdp.size(); ++s)
        if (!win.winning[s]) losing.push_back(side.pm.state[s]);
      return;
    }
    std::vector<std::vector<char>> allowed(side.pm.mdp.size(), std::vector<char>(size_t(1) << no, 0));
    for (int s = 0; s < side.pm.mdp.size(); ++s)
      for (const auto& a : side.pm.mdp.actions[s]) {
        bool inside = true;
        for (const auto& [t, p] : a.succ) inside = inside && win.winning[t];
        allowed[s][a.label] = inside;
      }
    restriction = RestrictionSide{std::move(side), std::move(win), std::move(allowed)};
  }

  for (size_t j = first; j < all_values.size(); ++j) {
    Formula beta = booleanize(phi, ValuePredicate::equal_to(all_values[j]));
    if (spec.hard_constraint) beta = f_and(beta, *spec.hard_constraint);
    Side side(boolean_dpw(beta, ap), model, no);
    ++automata;
    automata_states += side.dpw.size();
    auto pm = side.parity();
    auto cwr = cwr_states(pm).cwr;
    auto win = almost_sure_parity(pm);
    scored.push_back(ValueSide{all_values[j], std::move(side), std::move(cwr), std::move(win)});
  }

  if (spec.assumption) {
    Side side = assumption_side(*spec.assumption, spec.inputs, model);
    ++automata;
    automata_states += side.dpw.size();
    auto rej = rejecting_bottoms(side);
    assumption = AssumptionSide{std::move(side), std::move(rej)};
  }

  // Reachable product.
  std::vector<int> init{model.initial()};
  for (const auto& v : scored) init.push_back(v.side.dpw.initial);
  if (restriction) init.push_back(restriction->side.dpw.initial);
  if (assumption) init.push_back(assumption->side.dpw.initial);
  auto id_of = [&](std::vector<int> t) {
    auto [it, inserted] = ids.emplace(t, static_cast<int>(tuples.size()));
    if (inserted) {
      check_ceiling(tuples.size() + 1, "achievability MDP");
      tuples.push_back(std::move(t));
    }
    return it->second;
  };
  mdp.mdp.initial = id_of(init);
  for (size_t s = 0; s < tuples.size(); ++s) {
    const std::vector<int> t = tuples[s];
    std::vector<MDP::Action> acts;
    const bool reset = is_reset(t);
    for (Letter o : allowed(t)) {
      MDP::Action a;
      a.label = static_cast<int>(o);
      if (reset) {
        a.succ = {{mdp.mdp.initial, Rational(1)}};
      } else {
        for (const auto& st : model.step(t[0], o)) a.succ.emplace_back(id_of(next(t, o, st)), st.prob);
        normalize(a.succ);
      }
      acts.push_back(std::move(a));
    }
    if (acts.empty()) throw std::logic_error("product state without actions");
    mdp.mdp.actions.push_back(std::move(acts));
  }

  // Pointwise witnesses, lifted to the maximum over each end component.
  const int n = mdp.mdp.size();
  best_witness.assign(n, -1);
  for (int s = 0; s < n; ++s)
    for (size_t j = 0; j < scored.size(); ++j)
      if (scored[j].cwr[scored[j].side.at(tuples[s][1 + j], tuples[s][0])]) best_witness[s] = static_cast<int>(j);
  mdp.reward.assign(n, 0);
  for (const auto& ec : max_end_components(mdp.mdp)) {
    int best = -1;
    for (int s : ec.states) best = std::max(best, best_witness[s]);
    if (best >= 0)
      for (int s : ec.states) mdp.reward[s] = scored[best].value;
  }
}

AchievabilityMdp::AchievabilityMdp(const SynthesisSpec& spec) : impl_(std::make_unique<Impl>()) {
  impl_->spec = spec;
  impl_->build();
}
AchievabilityMdp::~AchievabilityMdp() = default;
AchievabilityMdp::AchievabilityMdp(AchievabilityMdp&&) noexcept = default;

bool AchievabilityMdp::realizable() const { return impl_->realizable; }
const RewardMDP& AchievabilityMdp::mdp() const { return impl_->mdp; }
const std::vector<std::vector<int>>& AchievabilityMdp::states() const { return impl_->tuples; }
const std::vector<Rational>& AchievabilityMdp::values() const { return impl_->all_values; }

namespace {

// Finite-memory controller over product tuples. `phase` 0 follows the MDP
// strategy; other phases are permanent sub-strategies.
struct Controller {
  std::function<std::vector<int>(std::vector<int>)> canon;  // tuple + phase
  std::function<Letter(const std::vector<int>&)> action;
};

Transducer extract(const AchievabilityMdp::Impl& I, const Controller& c) {
  // Transducer state: controller key plus the label it emits; -1 key = sink.
  std::map<std::pair<int, Letter>, int> ids;
  std::vector<std::pair<int, Letter>> states;
  std::map<std::vector<int>, int> keys;
  std::vector<std::vector<int>> key_list;
  auto key_id = [&](std::vector<int> k) {
    auto [it, inserted] = keys.emplace(k, static_cast<int>(key_list.size()));
    if (inserted) key_list.push_back(std::move(k));
    return it->second;
  };
  auto id_of = [&](int key, Letter label) {
    auto [it, inserted] = ids.emplace(std::make_pair(key, label), static_cast<int>(states.size()));
    if (inserted) {
      check_ceiling(states.size() + 1, "transducer");
      states.emplace_back(key, label);
    }
    return it->second;
  };
  Transducer t;
  t.inputs = I.spec.inputs;
  t.outputs = I.spec.outputs;
  std::vector<int> init = I.tuples[I.mdp.mdp.initial];
  init.push_back(0);
  t.initial = id_of(key_id(c.canon(init)), 0);
  const Letter letters = Letter(1) << I.ni;
  for (size_t s = 0; s < states.size(); ++s) {
    auto [key, label] = states[s];
    std::vector<int> row(letters);
    if (key < 0) {
      for (auto& r : row) r = id_of(-1, 0);
    } else {
      const std::vector<int> k = key_list[key];
      const Letter o = c.action(k);
      std::vector<int> tuple(k.begin(), k.end() - 1);
      for (Letter i = 0; i < letters; ++i) row[i] = -1;
      for (const auto& st : I.model.step(tuple[0], o)) {
        auto nt = I.next(tuple, o, st);
        nt.push_back(k.back());
        row[st.input] = id_of(key_id(c.canon(nt)), o);
      }
      // Inputs the model never produces here lead to a sink.
      for (Letter i = 0; i < letters; ++i)
        if (row[i] < 0) row[i] = id_of(-1, o);
    }
    t.delta.push_back(std::move(row));
    t.label.push_back(label);
  }
  return t;
}

}  // namespace

Transducer AchievabilityMdp::transducer(const Strategy& f) const {
  const Impl& I = *impl_;
  Controller c;
  c.canon = [](std::vector<int> k) { return k; };
  c.action = [&](const std::vector<int>& k) {
    std::vector<int> tuple(k.begin(), k.end() - 1);
    auto it = I.ids.find(tuple);
    if (it == I.ids.end()) return I.allowed(tuple).front();
    int a = f.choice[it->second] >= 0 ? f.choice[it->second] : 0;
    return static_cast<Letter>(I.mdp.mdp.actions[it->second][a].label);
  };
  return minimize(extract(I, c));
}

Transducer minimize(const Transducer& t) {
  const int n = t.size();
  std::vector<int> cls(n);
  {
    std::map<Letter, int> by_label;
    for (int q = 0; q < n; ++q) cls[q] = by_label.emplace(t.label[q], by_label.size()).first->second;
  }
  int count = 0;
  while (true) {
    std::map<std::vector<int>, int> sig_id;
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      std::vector<int> sig{cls[q]};
      for (int d : t.delta[q]) sig.push_back(cls[d]);
      next[q] = sig_id.emplace(std::move(sig), sig_id.size()).first->second;
    }
    int c = static_cast<int>(sig_id.size());
    cls = std::move(next);
    if (c == count) break;
    count = c;
  }
  std::vector<int> rep(count, -1), order(count, -1);
  for (int q = 0; q < n; ++q)
    if (rep[cls[q]] < 0) rep[cls[q]] = q;
  std::vector<int> queue{cls[t.initial]};
  order[cls[t.initial]] = 0;
  for (size_t i = 0; i < queue.size(); ++i)
    for (int d : t.delta[rep[queue[i]]])
      if (order[cls[d]] < 0) {
        order[cls[d]] = static_cast<int>(queue.size());
        queue.push_back(cls[d]);
      }
  Transducer out;
  out.inputs = t.inputs;
  out.outputs = t.outputs;
  out.initial = 0;
  for (int c : queue) {
    int q = rep[c];
    out.label.push_back(t.label[q]);
    std::vector<int> row;
    for (int d : t.delta[q]) row.push_back(order[cls[d]]);
    out.delta.push_back(std::move(row));
  }
  return out;
}

Rational prob_of_assumption(const Formula& psi, const std::vector<std::string>& inputs,
                            const std::optional<DistributionMDP>& dist) {
  if (!is_boolean(psi)) throw std::invalid_argument("assumption must be a Boolean formula");
  if (dist && !dist->output_independent())
    throw std::invalid_argument("with an assumption the distribution may not depend on the outputs");
  InputModel model = dist ? InputModel::from(*dist) : InputModel::uniform(static_cast<int>(inputs.size()));
  Side side = assumption_side(psi, inputs, model);
  MarkovChain chain = induced_chain(side.pm.mdp, Strategy{std::vector<int>(side.pm.mdp.size(), 0)});
  auto erg = mc_ergodic_analysis(chain);
  Rational p = 0;
  for (size_t c = 0; c < erg.components.size(); ++c) {
    int top = 0;
    for (int s : erg.components[c]) top = std::max(top, side.dpw.rank[side.pm.state[s].first]);
    if (top % 2 == 0) p += erg.rho[c];
  }
  return p;
}

SynthesisResult synthesize(const SynthesisSpec& input) {
  input.validate();
  SynthesisSpec spec = input;
  SynthesisResult res;
  if (spec.assumption) {
    Rational p = prob_of_assumption(*spec.assumption, spec.inputs, spec.distribution);
    res.assumption_probability = p;
    if (p == 0) throw AssumptionHasZeroProbability();
    // Conditioning on an almost-sure event changes nothing.
    if (p == 1) spec.assumption.reset();
  }
  const bool assume = spec.assumption.has_value();
  const bool threshold = spec.threshold || spec.hard_constraint;
  res.mode = assume ? (threshold ? "assume-threshold" : "assume") : (threshold ? "threshold" : "plain");

  AchievabilityMdp ach(spec);
  const auto& I = ach.impl();
  res.values = I.all_values;
  res.stats.values = I.all_values.size();
  res.stats.automata = I.automata;
  res.stats.automata_states = I.automata_states;
  if (!I.realizable) {
    res.realizable = false;
    res.losing_region = I.losing;
    return res;
  }
  res.stats.mdp_states = I.mdp.mdp.size();
  for (const auto& acts : I.mdp.mdp.actions) res.stats.mdp_actions += acts.size();

  MeanPayoffResult mp = solve_mean_payoff(I.mdp);
  res.value = mp.value;
  res.stats.end_components = mp.mecs.size();

  // Per staying component: the value automaton to satisfy, the state at which
  // to hand over to its winning strategy, and the way there.
  const int k = static_cast<int>(mp.mecs.size());
  const int n_scored = static_cast<int>(I.scored.size());
  const int redirect = n_scored + 1;
  std::vector<int> target_value(k, -1), target_state(k, -1);
  std::vector<std::vector<int>> approach(k);
  for (int u = 0; u < k; ++u) {
    if (!mp.stay[u]) continue;
    const auto& ec = mp.mecs[u];
    for (int s : ec.states) target_value[u] = std::max(target_value[u], I.best_witness[s]);
    if (target_value[u] < 0) continue;
    for (int s : ec.states)
      if (I.best_witness[s] == target_value[u]) {
        target_state[u] = s;
        break;
      }
    std::vector<char> goal(I.mdp.mdp.size(), 0);
    goal[target_state[u]] = 1;
    approach[u] = positive_attractor(I.mdp.mdp, ec, goal);
  }

  Controller c;
  c.canon = [&](std::vector<int> key) {
    if (key.back() != 0) return key;
    std::vector<int> tuple(key.begin(), key.end() - 1);
    if (I.is_reset(tuple)) return key;
    auto it = I.ids.find(tuple);
    if (it == I.ids.end()) return key;
    int s = it->second, u = mp.mec_of[s];
    if (u < 0 || !mp.stay[u]) return key;
    if (target_value[u] >= 0 && target_state[u] == s)
      key.back() = target_value[u] + 1;
    else if (target_value[u] < 0 && I.restriction)
      key.back() = redirect;
    return key;
  };
  c.action = [&](const std::vector<int>& key) -> Letter {
    const int phase = key.back();
    std::vector<int> tuple(key.begin(), key.end() - 1);
    if (phase == redirect) {
      const auto& r = *I.restriction;
      return static_cast<Letter>(r.win.strategy.choice[r.side.at(tuple[I.r_pos()], tuple[0])]);
    }
    if (phase > 0) {
      const auto& v = I.scored[phase - 1];
      int a = v.win.strategy.choice[v.side.at(tuple[phase], tuple[0])];
      if (a < 0) throw std::logic_error("value automaton left its winning region");
      return static_cast<Letter>(a);
    }
    auto it = I.ids.find(tuple);
    if (I.is_reset(tuple) || it == I.ids.end()) return I.allowed(tuple).front();
    int s = it->second, u = mp.mec_of[s];
    int a = u >= 0 && mp.stay[u] && target_value[u] >= 0 ? approach[u][s] : mp.strategy.choice[s];
    return static_cast<Letter>(I.mdp.mdp.actions[s][a].label);
  };
  res.transducer = minimize(extract(I, c));
  res.stats.transducer_states = res.transducer.size();

  // Certificates from the independent evaluator.
  const InputModel model = spec.input_model();
  if (assume) {
    res.certified_value = conditional_expected_value(res.transducer, spec.formula, *spec.assumption, model);
    if (spec.threshold)
      res.almost_sure_floor =
          conditional_almost_sure_value(res.transducer, spec.formula, *spec.assumption, model);
  } else {
    res.certified_value = expected_value(res.transducer, spec.formula, model);
    if (spec.threshold) res.almost_sure_floor = almost_sure_value(res.transducer, spec.formula, model);
    if (spec.hard_constraint && almost_sure_value(res.transducer, *spec.hard_constraint, model) != 1)
      throw std::logic_error("synthesized transducer violates the hard constraint");
  }
  if (res.certified_value != res.value)
    throw std::logic_error("synthesized transducer evaluates to " + to_string(res.certified_value) +
                           " instead of " + to_string(res.value));
  if (res.almost_sure_floor && *res.almost_sure_floor < *spec.threshold)
    throw std::logic_error("synthesized transducer misses the threshold");
  return res;
}

SynthesisResult synth(const Formula& phi, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs, const std::optional<DistributionMDP>& dist) {
  SynthesisSpec s{inputs, outputs, phi, std::nullopt, std::nullopt, std::nullopt, dist};
  return synthesize(s);
}

SynthesisResult synth_threshold(const Formula& phi, const Rational& t, const std::vector<std::string>& inputs,
                                const std::vector<std::string>& outputs,
                                const std::optional<DistributionMDP>& dist) {
  SynthesisSpec s{inputs, outputs, phi, std::nullopt, t, std::nullopt, dist};
  return synthesize(s);
}

SynthesisResult synth_assume(const Formula& phi, const Formula& psi, const std::vector<std::string>& inputs,
                             const std::vector<std::string>& outputs, const std::optional<DistributionMDP>& dist) {
  SynthesisSpec s{inputs, outputs, phi, psi, std::nullopt, std::nullopt, dist};
  return synthesize(s);
}

SynthesisResult synth_assume_threshold(const Formula& phi, const Formula& psi, const Rational& t,
                                       const std::vector<std::string>& inputs,
                                       const std::vector<std::string>& outputs,
                                       const std::optional<DistributionMDP>& dist) {
  SynthesisSpec s{inputs, outputs, phi, psi, t, std::nullopt, dist};
  return synthesize(s);
}

}  // namespace hqs
