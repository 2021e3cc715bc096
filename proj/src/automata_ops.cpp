#include "hqsynth/automata.hpp"
#include "hqsynth/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace hqs {

int DPW::max_rank() const {
  int d = 1;
  for (int r : rank) d = std::max(d, r);
  return d;
}

void DPW::validate() const {
  if (rank.size() != delta.size()) throw std::logic_error("rank table size mismatch");
  if (initial < 0 || initial >= size()) throw std::logic_error("initial state out of range");
  for (int q = 0; q < size(); ++q) {
    if (static_cast<int>(delta[q].size()) != letters())
      throw std::logic_error("transition function not total");
    for (int t : delta[q])
      if (t < 0 || t >= size()) throw std::logic_error("transition target out of range");
    if (rank[q] < 1) throw std::logic_error("rank below 1");
  }
}

bool run_lasso(const DPW& a, const LassoWord& w) {
  int q = a.initial;
  for (Letter l : w.prefix) q = a.step(q, l);
  std::map<int, size_t> seen;  // state at period start -> iteration
  std::vector<int> max_in_iteration;
  for (size_t it = 0;; ++it) {
    auto [pos, fresh] = seen.emplace(q, it);
    if (!fresh) {
      int m = 0;
      for (size_t j = pos->second; j < it; ++j) m = std::max(m, max_in_iteration[j]);
      return m % 2 == 0;
    }
    int m = 0;
    for (Letter l : w.period) {
      q = a.step(q, l);
      m = std::max(m, a.rank[q]);
    }
    max_in_iteration.push_back(m);
  }
}

namespace {

// Shortest path from `from` to `to` inside `mask`; returns the letters used.
std::vector<Letter> path_letters(const DPW& a, int from, int to, const std::vector<char>& mask,
                                 bool nonempty) {
  const int n = a.size();
  std::vector<int> prev(n, -1);
  std::vector<Letter> via(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<int> queue;
  // Seed with successors of `from` when a nonempty path is required.
  if (nonempty) {
    for (int l = 0; l < a.letters(); ++l) {
      int t = a.step(from, l);
      if (!mask[t] || seen[t]) continue;
      seen[t] = 1;
      prev[t] = from;
      via[t] = l;
      queue.push_back(t);
    }
  } else {
    seen[from] = 1;
    queue.push_back(from);
  }
  for (size_t i = 0; i < queue.size(); ++i) {
    int q = queue[i];
    for (int l = 0; l < a.letters(); ++l) {
      int t = a.step(q, l);
      if (!mask[t] || seen[t]) continue;
      seen[t] = 1;
      prev[t] = q;
      via[t] = l;
      queue.push_back(t);
    }
  }
  std::vector<Letter> out;
  if (!seen[to] || (!nonempty && to == from)) return out;
  int cur = to;
  do {
    out.push_back(via[cur]);
    cur = prev[cur];
  } while (cur != from && cur >= 0);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<LassoWord> nonempty_witness(const DPW& a, int q) {
  const int n = a.size();
  Adjacency g(n);
  for (int s = 0; s < n; ++s) {
    for (int t : a.delta[s]) g[s].push_back(t);
    std::sort(g[s].begin(), g[s].end());
    g[s].erase(std::unique(g[s].begin(), g[s].end()), g[s].end());
  }
  auto reach = reachable(g, {q});
  std::vector<char> all(n, 1);
  for (int d = 2; d <= a.max_rank(); d += 2) {
    std::vector<char> mask(n, 0);
    for (int s = 0; s < n; ++s) mask[s] = reach[s] && a.rank[s] <= d;
    auto scc = strongly_connected(g, &mask);
    auto cyclic = nontrivial_components(g, scc);
    for (int s = 0; s < n; ++s) {
      if (!mask[s] || a.rank[s] != d || !cyclic[scc.comp[s]]) continue;
      std::vector<char> inside(n, 0);
      for (int t = 0; t < n; ++t) inside[t] = scc.comp[t] == scc.comp[s];
      LassoWord w;
      w.prefix = path_letters(a, q, s, all, false);
      w.period = path_letters(a, s, s, inside, true);
      return w;
    }
  }
  return std::nullopt;
}

bool dpw_nonempty_from(const DPW& a, int q) { return nonempty_witness(a, q).has_value(); }

ProductAutomaton product(const std::vector<const DPW*>& components) {
  if (components.empty()) throw std::invalid_argument("empty product");
  const int letters = components[0]->letters();
  for (auto* c : components)
    if (c->letters() != letters) throw std::invalid_argument("alphabet mismatch in product");
  ProductAutomaton p;
  p.components = components;
  std::map<std::vector<int>, int> ids;
  auto id_of = [&](const std::vector<int>& s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(p.state.size());
    check_ceiling(p.state.size() + 1, "product automaton");
    ids.emplace(s, id);
    p.state.push_back(s);
    return id;
  };
  std::vector<int> init;
  for (auto* c : components) init.push_back(c->initial);
  p.initial = id_of(init);
  for (size_t i = 0; i < p.state.size(); ++i) {
    std::vector<int> row(letters);
    for (int l = 0; l < letters; ++l) {
      std::vector<int> t(components.size());
      for (size_t k = 0; k < components.size(); ++k)
        t[k] = components[k]->step(p.state[i][k], l);
      row[l] = id_of(t);
    }
    p.delta.push_back(std::move(row));
  }
  return p;
}

std::string letter_to_string(Letter a, const std::vector<std::string>& ap) {
  std::string s = "{";
  bool first = true;
  for (size_t k = 0; k < ap.size(); ++k)
    if (a & (Letter(1) << k)) {
      s += (first ? "" : ",") + ap[k];
      first = false;
    }
  return s + "}";
}

std::string to_dot(const DPW& a, const std::vector<std::string>& ap) {
  std::ostringstream os;
  os << "digraph dpw {\n  rankdir=LR;\n  init [shape=point];\n  init -> q" << a.initial << ";\n";
  for (int q = 0; q < a.size(); ++q)
    os << "  q" << q << " [label=\"q" << q << " / " << a.rank[q] << "\"];\n";
  for (int q = 0; q < a.size(); ++q) {
    std::map<int, std::vector<Letter>> by_dst;
    for (int l = 0; l < a.letters(); ++l) by_dst[a.delta[q][l]].push_back(l);
    for (const auto& [t, ls] : by_dst) {
      os << "  q" << q << " -> q" << t << " [label=\"";
      for (size_t i = 0; i < ls.size(); ++i) os << (i ? " " : "") << letter_to_string(ls[i], ap);
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_hoa(const DPW& a, const std::vector<std::string>& ap) {
  std::ostringstream os;
  os << "HOA: v1\nStates: " << a.size() << "\nStart: " << a.initial << "\nAP: " << ap.size();
  for (const auto& p : ap) os << " \"" << p << "\"";
  os << "\nacc-name: parity max even " << a.max_rank() + 1 << "\n--BODY--\n";
  for (int q = 0; q < a.size(); ++q) {
    os << "State: " << q << " {" << a.rank[q] << "}\n";
    for (int l = 0; l < a.letters(); ++l) {
      os << "  [";
      for (size_t k = 0; k < ap.size(); ++k) {
        if (k) os << "&";
        if (!(l & (1 << k))) os << "!";
        os << k;
      }
      if (ap.empty()) os << "t";
      os << "] " << a.delta[q][l] << "\n";
    }
  }
  os << "--END--\n";
  return os.str();
}

}  // namespace hqs
