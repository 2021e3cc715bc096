#include "hqsynth/mdp.hpp"
#include "hqsynth/graph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hqs {

void normalize(Distribution& d) {
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Distribution out;
  for (auto& [t, p] : d) {
    if (!out.empty() && out.back().first == t)
      out.back().second += p;
    else
      out.emplace_back(t, p);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  d = std::move(out);
}

void MDP::validate() const {
  if (initial < 0 || initial >= size()) throw std::logic_error("initial state out of range");
  for (int s = 0; s < size(); ++s) {
    if (actions[s].empty()) throw std::logic_error("state " + std::to_string(s) + " has no action");
    for (const auto& a : actions[s]) {
      Rational sum = 0;
      for (const auto& [t, p] : a.succ) {
        if (t < 0 || t >= size() || p <= 0) throw std::logic_error("bad transition");
        sum += p;
      }
      if (sum != 1) throw std::logic_error("action of state " + std::to_string(s) + " is not stochastic");
    }
  }
}

MarkovChain induced_chain(const MDP& m, const Strategy& f) {
  MarkovChain c;
  c.initial = m.initial;
  c.rows.resize(m.size());
  for (int s = 0; s < m.size(); ++s) {
    int a = f.choice[s] >= 0 ? f.choice[s] : 0;
    c.rows[s] = m.actions[s][a].succ;
  }
  return c;
}

void DistributionMDP::validate() const {
  const int outputs = 1 << num_outputs;
  if (initial < 0 || initial >= size()) throw std::invalid_argument("distribution: initial state out of range");
  if (static_cast<int>(trans.size()) != size()) throw std::invalid_argument("distribution: missing transitions");
  for (int s = 0; s < size(); ++s) {
    if (label[s] >> num_inputs) throw std::invalid_argument("distribution: label outside the inputs");
    if (static_cast<int>(trans[s].size()) != outputs)
      throw std::invalid_argument("distribution: state " + std::to_string(s) + " lacks an output row");
    for (const auto& row : trans[s]) {
      Rational sum = 0;
      for (const auto& [t, p] : row) {
        if (t < 0 || t >= size() || p < 0) throw std::invalid_argument("distribution: bad transition");
        sum += p;
      }
      if (sum != 1)
        throw std::invalid_argument("distribution: row of state " + std::to_string(s) + " does not sum to 1");
    }
  }
}

bool DistributionMDP::output_independent() const {
  for (const auto& rows : trans)
    for (const auto& row : rows)
      if (row != rows[0]) return false;
  return true;
}

bool DistributionMDP::observable() const {
  for (const auto& rows : trans)
    for (const auto& row : rows) {
      std::vector<Letter> seen;
      for (const auto& [t, p] : row) {
        if (p == 0) continue;
        if (std::find(seen.begin(), seen.end(), label[t]) != seen.end()) return false;
        seen.push_back(label[t]);
      }
    }
  return true;
}

InputModel InputModel::uniform(int num_inputs) {
  InputModel m;
  m.num_inputs_ = num_inputs;
  const Letter n = Letter(1) << num_inputs;
  std::vector<Step> row;
  for (Letter i = 0; i < n; ++i) row.push_back({0, i, Rational(1, n)});
  m.steps_ = {{row}};
  return m;
}

InputModel InputModel::from(const DistributionMDP& d) {
  d.validate();
  InputModel m;
  m.uniform_ = false;
  m.num_inputs_ = d.num_inputs;
  m.initial_ = d.initial;
  m.steps_.resize(d.size());
  for (int s = 0; s < d.size(); ++s)
    for (const auto& row : d.trans[s]) {
      Distribution dist = row;
      normalize(dist);
      std::vector<Step> steps;
      for (const auto& [t, p] : dist) steps.push_back({t, d.label[t], p});
      m.steps_[s].push_back(std::move(steps));
    }
  return m;
}

const std::vector<InputModel::Step>& InputModel::step(int state, Letter output) const {
  return uniform_ ? steps_[0][0] : steps_[state][output];
}

MDP induced_pre_mdp(const std::vector<std::vector<int>>& delta, int initial, int num_inputs, int num_outputs) {
  MDP m;
  m.initial = initial;
  m.actions.resize(delta.size());
  const Letter inputs = Letter(1) << num_inputs;
  const Rational share(1, inputs);
  for (size_t q = 0; q < delta.size(); ++q)
    for (Letter o = 0; o < (Letter(1) << num_outputs); ++o) {
      MDP::Action a;
      a.label = static_cast<int>(o);
      for (Letter i = 0; i < inputs; ++i) a.succ.emplace_back(delta[q][join(i, o, num_inputs)], share);
      normalize(a.succ);
      m.actions[q].push_back(std::move(a));
    }
  return m;
}

ProductMDP induced_pre_mdp_dist(const std::vector<std::vector<int>>& delta, int initial, const InputModel& inputs,
                                int num_outputs) {
  ProductMDP out;
  std::map<std::pair<int, int>, int> ids;
  auto id_of = [&](int q, int d) {
    auto [it, inserted] = ids.emplace(std::make_pair(q, d), static_cast<int>(out.state.size()));
    if (inserted) {
      check_ceiling(out.state.size() + 1, "MDP");
      out.state.emplace_back(q, d);
    }
    return it->second;
  };
  out.mdp.initial = id_of(initial, inputs.initial());
  for (size_t s = 0; s < out.state.size(); ++s) {
    auto [q, d] = out.state[s];
    std::vector<MDP::Action> acts;
    for (Letter o = 0; o < (Letter(1) << num_outputs); ++o) {
      MDP::Action a;
      a.label = static_cast<int>(o);
      for (const auto& st : inputs.step(d, o))
        a.succ.emplace_back(id_of(delta[q][join(st.input, o, inputs.num_inputs())], st.next), st.prob);
      normalize(a.succ);
      acts.push_back(std::move(a));
    }
    out.mdp.actions.push_back(std::move(acts));
  }
  return out;
}

std::vector<EndComponent> max_end_components(const MDP& m, const std::vector<char>* mask) {
  const int n = m.size();
  std::vector<char> alive(n, 1);
  if (mask) alive = *mask;
  std::vector<std::vector<int>> act(n);
  for (int s = 0; s < n; ++s)
    if (alive[s])
      for (int a = 0; a < static_cast<int>(m.actions[s].size()); ++a) act[s].push_back(a);

  std::vector<int> comp(n, -1);
  bool changed = true;
  while (changed) {
    changed = false;
    // Drop actions that may leave the alive set, then states left without actions.
    bool dropped = true;
    while (dropped) {
      dropped = false;
      for (int s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        auto& as = act[s];
        auto keep = std::remove_if(as.begin(), as.end(), [&](int a) {
          for (const auto& [t, p] : m.actions[s][a].succ)
            if (!alive[t]) return true;
          return false;
        });
        if (keep != as.end()) as.erase(keep, as.end());
        if (as.empty()) {
          alive[s] = 0;
          dropped = true;
        }
      }
    }
    Adjacency g(n);
    for (int s = 0; s < n; ++s)
      if (alive[s])
        for (int a : act[s])
          for (const auto& [t, p] : m.actions[s][a].succ) g[s].push_back(t);
    auto scc = strongly_connected(g, &alive);
    comp = scc.comp;
    for (int s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      auto& as = act[s];
      auto keep = std::remove_if(as.begin(), as.end(), [&](int a) {
        for (const auto& [t, p] : m.actions[s][a].succ)
          if (comp[t] != comp[s]) return true;
        return false;
      });
      if (keep != as.end()) {
        as.erase(keep, as.end());
        changed = true;
      }
      if (as.empty()) {
        alive[s] = 0;
        changed = true;
      }
    }
  }

  std::map<int, int> index;  // SCC id -> output position
  std::vector<EndComponent> out;
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    auto [it, inserted] = index.emplace(comp[s], static_cast<int>(out.size()));
    if (inserted) out.emplace_back();
    out[it->second].states.push_back(s);
    out[it->second].actions.push_back(act[s]);
  }
  return out;
}

CwrResult cwr_states(const ParityMDP& pm) {
  const int n = pm.mdp.size();
  CwrResult res;
  res.cwr.assign(n, 0);
  res.witness.assign(n, -1);
  int top = 0;
  for (int r : pm.rank) top = std::max(top, r);
  for (int d = 2; d <= top; d += 2) {
    std::vector<char> mask(n);
    bool any = false;
    for (int s = 0; s < n; ++s) {
      mask[s] = pm.rank[s] <= d;
      any = any || pm.rank[s] == d;
    }
    if (!any) continue;
    for (auto& ec : max_end_components(pm.mdp, &mask)) {
      bool has_top = false;
      for (int s : ec.states) has_top = has_top || pm.rank[s] == d;
      if (!has_top) continue;
      int id = static_cast<int>(res.components.size());
      for (int s : ec.states)
        if (pm.rank[s] == d) {
          res.cwr[s] = 1;
          res.witness[s] = id;
        }
      res.components.push_back(std::move(ec));
      res.witness_rank.push_back(d);
    }
  }
  return res;
}

std::vector<int> positive_attractor(const MDP& m, const EndComponent& ec, const std::vector<char>& targets) {
  std::vector<int> choice(m.size(), -1);
  std::vector<char> reached(m.size(), 0);
  for (int s : ec.states) reached[s] = targets[s];
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<int> fresh;
    for (size_t k = 0; k < ec.states.size(); ++k) {
      int s = ec.states[k];
      if (reached[s]) continue;
      for (int a : ec.actions[k]) {
        bool hit = false;
        for (const auto& [t, p] : m.actions[s][a].succ) hit = hit || reached[t];
        if (hit) {
          choice[s] = a;
          fresh.push_back(s);
          break;
        }
      }
    }
    for (int s : fresh) reached[s] = 1;
    progress = !fresh.empty();
  }
  return choice;
}

ParityResult almost_sure_parity(const ParityMDP& pm) {
  const MDP& m = pm.mdp;
  const int n = m.size();
  CwrResult cwr = cwr_states(pm);
  ParityResult res;
  res.strategy.choice.assign(n, -1);
  std::vector<char> good(n, 0);

  // Inside winning end components: head for the top rank, staying inside.
  std::vector<int> order(cwr.components.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return cwr.witness_rank[a] > cwr.witness_rank[b]; });
  for (int id : order) {
    const auto& ec = cwr.components[id];
    if (good[ec.states[0]]) continue;
    std::vector<char> targets(n, 0);
    for (int s : ec.states) targets[s] = pm.rank[s] == cwr.witness_rank[id];
    auto attr = positive_attractor(m, ec, targets);
    for (size_t k = 0; k < ec.states.size(); ++k) {
      int s = ec.states[k];
      good[s] = 1;
      res.strategy.choice[s] = targets[s] ? ec.actions[k][0] : attr[s];
    }
  }

  // Almost-sure reachability of the good states.
  std::vector<char> region(n, 1);
  while (true) {
    std::vector<char> keep = good;
    bool progress = true;
    while (progress) {
      progress = false;
      for (int s = 0; s < n; ++s) {
        if (keep[s] || !region[s]) continue;
        for (const auto& a : m.actions[s]) {
          bool inside = true, hit = false;
          for (const auto& [t, p] : a.succ) {
            inside = inside && region[t];
            hit = hit || keep[t];
          }
          if (inside && hit) {
            keep[s] = 1;
            progress = true;
            break;
          }
        }
      }
    }
    if (keep == region) break;
    region = keep;
  }

  std::vector<char> reached = good;
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<int> fresh;
    for (int s = 0; s < n; ++s) {
      if (reached[s] || !region[s]) continue;
      for (int a = 0; a < static_cast<int>(m.actions[s].size()); ++a) {
        bool inside = true, hit = false;
        for (const auto& [t, p] : m.actions[s][a].succ) {
          inside = inside && region[t];
          hit = hit || reached[t];
        }
        if (inside && hit) {
          res.strategy.choice[s] = a;
          fresh.push_back(s);
          break;
        }
      }
    }
    for (int s : fresh) reached[s] = 1;
    progress = !fresh.empty();
  }
  res.winning = region;
  return res;
}

namespace {

// x[s] = b[s] + Σ_t P(s,t) x[t] for unknown s; other entries of x are inputs.
void solve_in_place(const std::vector<Distribution>& rows, const std::vector<char>& unknown,
                    const std::vector<Rational>& b, std::vector<Rational>& x) {
  const int n = static_cast<int>(rows.size());
  Adjacency g(n);
  for (int s = 0; s < n; ++s)
    if (unknown[s])
      for (const auto& [t, p] : rows[s])
        if (unknown[t]) g[s].push_back(t);
  auto scc = strongly_connected(g, &unknown);
  std::vector<std::vector<int>> members(scc.count);
  for (int s = 0; s < n; ++s)
    if (unknown[s]) members[scc.comp[s]].push_back(s);

  for (int c = 0; c < scc.count; ++c) {
    const auto& mem = members[c];
    const int k = static_cast<int>(mem.size());
    std::map<int, int> local;
    for (int i = 0; i < k; ++i) local[mem[i]] = i;
    // Augmented matrix [I - P_cc | rhs].
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1));
    for (int i = 0; i < k; ++i) {
      int s = mem[i];
      a[i][i] = 1;
      a[i][k] = b[s];
      for (const auto& [t, p] : rows[s]) {
        auto it = unknown[t] && scc.comp[t] == c ? local.find(t) : local.end();
        if (it != local.end())
          a[i][it->second] -= p;
        else
          a[i][k] += p * x[t];
      }
    }
    for (int col = 0; col < k; ++col) {
      int pivot = col;
      while (pivot < k && a[pivot][col] == 0) ++pivot;
      if (pivot == k) throw std::logic_error("singular system: some states are never absorbed");
      std::swap(a[col], a[pivot]);
      Rational inv = 1 / a[col][col];
      for (int j = col; j <= k; ++j) a[col][j] *= inv;
      for (int i = 0; i < k; ++i) {
        if (i == col || a[i][col] == 0) continue;
        Rational f = a[i][col];
        for (int j = col; j <= k; ++j)
          if (a[col][j] != 0) a[i][j] -= f * a[col][j];
      }
    }
    for (int i = 0; i < k; ++i) x[mem[i]] = a[i][k];
  }
}

Adjacency chain_graph(const MarkovChain& c) {
  Adjacency g(c.size());
  for (int s = 0; s < c.size(); ++s)
    for (const auto& [t, p] : c.rows[s]) g[s].push_back(t);
  return g;
}

}  // namespace

std::vector<Rational> absorption_values(const MarkovChain& c, const std::vector<char>& fixed,
                                        const std::vector<Rational>& terminal) {
  const int n = c.size();
  std::vector<char> unknown(n);
  std::vector<Rational> x(n), b(n);
  for (int s = 0; s < n; ++s) {
    unknown[s] = !fixed[s];
    if (fixed[s]) x[s] = terminal[s];
  }
  solve_in_place(c.rows, unknown, b, x);
  return x;
}

ErgodicAnalysis mc_ergodic_analysis(const MarkovChain& c) {
  const int n = c.size();
  Adjacency g = chain_graph(c);
  auto reach = reachable(g, {c.initial});
  auto scc = strongly_connected(g, &reach);
  std::vector<char> bottom(scc.count, 1);
  for (int s = 0; s < n; ++s)
    if (reach[s])
      for (int t : g[s])
        if (scc.comp[t] != scc.comp[s]) bottom[scc.comp[s]] = 0;

  ErgodicAnalysis res;
  res.component_of.assign(n, -1);
  std::map<int, int> index;
  for (int s = 0; s < n; ++s) {
    if (!reach[s] || !bottom[scc.comp[s]]) continue;
    auto [it, inserted] = index.emplace(scc.comp[s], static_cast<int>(res.components.size()));
    if (inserted) res.components.emplace_back();
    res.components[it->second].push_back(s);
    res.component_of[s] = it->second;
  }

  // Expected visits y to transient states: y = e_init + Σ_t y[t] P(t,·).
  std::vector<char> transient(n, 0);
  for (int s = 0; s < n; ++s) transient[s] = reach[s] && res.component_of[s] < 0;
  std::vector<Distribution> reverse(n);
  for (int t = 0; t < n; ++t)
    if (transient[t])
      for (const auto& [s, p] : c.rows[t])
        if (transient[s]) reverse[s].emplace_back(t, p);
  std::vector<Rational> b(n), y(n);
  b[c.initial] = 1;
  solve_in_place(reverse, transient, b, y);

  res.rho.assign(res.components.size(), 0);
  if (res.component_of[c.initial] >= 0) res.rho[res.component_of[c.initial]] = 1;
  for (int t = 0; t < n; ++t) {
    if (!transient[t] || y[t] == 0) continue;
    for (const auto& [s, p] : c.rows[t])
      if (res.component_of[s] >= 0) res.rho[res.component_of[s]] += y[t] * p;
  }
  return res;
}

MeanPayoffResult solve_mean_payoff(const RewardMDP& rm) {
  const MDP& m = rm.mdp;
  const int n = m.size();
  MeanPayoffResult res;
  res.mecs = max_end_components(m);
  res.mec_of.assign(n, -1);
  const int k = static_cast<int>(res.mecs.size());
  for (int i = 0; i < k; ++i) {
    const auto& ec = res.mecs[i];
    for (int s : ec.states) {
      res.mec_of[s] = i;
      if (rm.reward[s] != rm.reward[ec.states[0]]) {
        std::string states;
        for (int t : ec.states) states += (states.empty() ? "" : ",") + std::to_string(t);
        throw std::domain_error("reward is not constant on the end component {" + states + "}");
      }
    }
  }

  // Quotient: one node per MEC followed by one per transient state.
  std::vector<int> node(n);
  std::vector<int> rep;  // transient state of each non-MEC node
  for (int s = 0; s < n; ++s)
    if (res.mec_of[s] < 0) {
      node[s] = k + static_cast<int>(rep.size());
      rep.push_back(s);
    } else {
      node[s] = res.mec_of[s];
    }
  const int nodes = k + static_cast<int>(rep.size());

  struct Choice {
    int state = -1, action = -1;  // state -1: stay forever
    Distribution succ;
  };
  std::vector<std::vector<Choice>> choices(nodes);
  std::vector<Rational> terminal(nodes);
  auto add_choice = [&](int v, int s, int a) {
    Choice c{s, a, {}};
    for (const auto& [t, p] : m.actions[s][a].succ) c.succ.emplace_back(node[t], p);
    normalize(c.succ);
    choices[v].push_back(std::move(c));
  };
  for (int i = 0; i < k; ++i) {
    const auto& ec = res.mecs[i];
    terminal[i] = rm.reward[ec.states[0]];
    choices[i].push_back(Choice{});
    for (size_t j = 0; j < ec.states.size(); ++j) {
      int s = ec.states[j];
      for (int a = 0; a < static_cast<int>(m.actions[s].size()); ++a)
        if (!std::binary_search(ec.actions[j].begin(), ec.actions[j].end(), a)) add_choice(i, s, a);
    }
  }
  for (size_t j = 0; j < rep.size(); ++j)
    for (int a = 0; a < static_cast<int>(m.actions[rep[j]].size()); ++a) add_choice(k + static_cast<int>(j), rep[j], a);

  std::vector<int> policy(nodes, 0);
  std::vector<Rational> x(nodes);
  auto q_value = [&](int v, int c) {
    const Choice& ch = choices[v][c];
    if (ch.state < 0) return terminal[v];
    Rational sum = 0;
    for (const auto& [t, p] : ch.succ) sum += p * x[t];
    return sum;
  };
  while (true) {
    std::vector<Distribution> rows(nodes);
    std::vector<Rational> b(nodes);
    for (int v = 0; v < nodes; ++v) {
      const Choice& ch = choices[v][policy[v]];
      if (ch.state < 0)
        b[v] = terminal[v];
      else
        rows[v] = ch.succ;
    }
    std::vector<char> unknown(nodes, 1);
    solve_in_place(rows, unknown, b, x);
    bool improved = false;
    for (int v = 0; v < nodes; ++v) {
      Rational best = q_value(v, policy[v]);
      int arg = policy[v];
      for (int c = 0; c < static_cast<int>(choices[v].size()); ++c) {
        Rational q = q_value(v, c);
        if (q > best) {
          best = q;
          arg = c;
        }
      }
      if (arg != policy[v]) {
        policy[v] = arg;
        improved = true;
      }
    }
    if (!improved) break;
  }

  res.values.resize(n);
  for (int s = 0; s < n; ++s) res.values[s] = x[node[s]];
  res.value = res.values[m.initial];
  res.stay.assign(k, 0);
  res.exit.assign(k, {-1, -1});
  res.strategy.choice.assign(n, -1);
  for (int v = 0; v < nodes; ++v) {
    const Choice& ch = choices[v][policy[v]];
    if (v >= k) {
      res.strategy.choice[rep[v - k]] = ch.action;
      continue;
    }
    const auto& ec = res.mecs[v];
    if (ch.state < 0) {
      res.stay[v] = 1;
      for (size_t j = 0; j < ec.states.size(); ++j) res.strategy.choice[ec.states[j]] = ec.actions[j][0];
      continue;
    }
    res.exit[v] = {ch.state, ch.action};
    std::vector<char> target(n, 0);
    target[ch.state] = 1;
    auto attr = positive_attractor(m, ec, target);
    for (int s : ec.states) res.strategy.choice[s] = s == ch.state ? ch.action : attr[s];
  }
  return res;
}

}  // namespace hqs
