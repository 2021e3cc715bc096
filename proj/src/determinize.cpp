#include "hqsynth/automata.hpp"
#include "hqsynth/graph.hpp"

#include <algorithm>
#include <climits>
#include <map>

namespace hqs {

// Safra-style construction with nested braces (Redziejowski's presentation):
// each macrostate maps NBW states to their innermost brace, braces form a
// forest stored as parent links with parent < child. Every transition emits
// a colour; the least colour seen infinitely often decides, odd accepts.

namespace {

constexpr unsigned kNoColour = UINT_MAX;

struct Macro {
  std::vector<std::pair<int, int>> nodes;  // (NBW state, brace or -1), sorted
  std::vector<int> braces;                 // parent of each brace
  bool operator<(const Macro& o) const {
    return std::tie(braces, nodes) < std::tie(o.braces, o.nodes);
  }
};

struct Builder {
  std::vector<int> braces;
  std::map<int, int> nodes;

  // Compare by the nesting below the common ancestor: true iff a is older.
  bool older(int a, int b) const {
    int last_a = -2, last_b = -2;
    while (a != b) {
      if (a > b) {
        last_a = a;
        a = braces[a];
      } else {
        last_b = b;
        b = braces[b];
      }
    }
    if (last_a != -2 && last_b != -2) return last_a < last_b;
    return last_a != -2 && last_b == -2;
  }

  void add(int brace, int dst, bool accepting) {
    int nb = brace;
    if (accepting) {
      nb = static_cast<int>(braces.size());
      braces.push_back(brace);
    }
    auto [it, inserted] = nodes.emplace(dst, nb);
    if (inserted) return;
    if (older(nb, it->second)) {
      it->second = nb;
    } else if (nb != brace) {
      braces.pop_back();
    }
  }

  void add_top(int dst, bool into_accepting_scc) {
    if (!into_accepting_scc) {
      nodes.emplace(dst, -1);
      return;
    }
    int nb = static_cast<int>(braces.size());
    auto [it, inserted] = nodes.emplace(dst, nb);
    if (inserted || it->second == -1) {
      braces.push_back(-1);
      it->second = nb;
    }
  }

  // Removes empty braces and braces nested in green ones, renumbers, and
  // returns the emitted colour.
  unsigned finalize(Macro& out) const {
    constexpr char kEmpty = 1, kGreen = 2;
    const size_t nb = braces.size();
    std::vector<char> flags(nb, kEmpty | kGreen);
    for (const auto& [q, b] : nodes) {
      if (b < 0) continue;
      flags[b] &= ~kGreen;
      for (int c = b; c >= 0 && (flags[c] & kEmpty); c = braces[c]) flags[c] &= ~kEmpty;
    }
    std::vector<int> top_green(nb), shift(nb);
    unsigned red = kNoColour, green = kNoColour;
    int removed = 0;
    for (size_t b = 0; b < nb; ++b) {
      top_green[b] = static_cast<int>(b);
      int parent = braces[b];
      if (parent >= 0 && (top_green[parent] != parent || (flags[parent] & kGreen))) {
        top_green[b] = top_green[parent];
        flags[b] |= kEmpty;
      }
      if (flags[b] & kEmpty) {
        ++removed;
        red = std::min(red, static_cast<unsigned>(2 * b));
      } else if (flags[b] & kGreen) {
        green = std::min(green, static_cast<unsigned>(2 * b + 1));
      }
      shift[b] = removed;
    }
    out.braces.assign(nb - removed, -1);
    out.nodes.clear();
    for (const auto& [q, b] : nodes) {
      if (b < 0) {
        out.nodes.emplace_back(q, -1);
        continue;
      }
      int i = top_green[b];
      int parent = braces[i] >= 0 ? braces[i] - shift[braces[i]] : -1;
      int renamed = i - shift[i];
      out.nodes.emplace_back(q, renamed);
      out.braces[renamed] = parent;
    }
    return std::min(red, green);
  }
};

// Keeps only states that can still reach an accepting cycle.
NBW trim(const NBW& a, std::vector<int>& scc_of, std::vector<char>& accepting_scc) {
  Adjacency g(a.size());
  for (int s = 0; s < a.size(); ++s)
    for (const auto& e : a.out[s]) g[s].push_back(e.dst);
  auto scc = strongly_connected(g);
  std::vector<char> good_scc(scc.count, 0);
  for (int s = 0; s < a.size(); ++s)
    for (const auto& e : a.out[s])
      if (e.accepting && scc.comp[e.dst] == scc.comp[s]) good_scc[scc.comp[s]] = 1;
  // Components are numbered sinks first, so one pass propagates usefulness.
  std::vector<char> useful_scc = good_scc;
  std::vector<std::vector<int>> members(scc.count);
  for (int s = 0; s < a.size(); ++s) members[scc.comp[s]].push_back(s);
  for (int c = 0; c < scc.count; ++c)
    for (int s : members[c])
      for (int t : g[s])
        if (useful_scc[scc.comp[t]]) useful_scc[c] = 1;

  NBW out = a;
  for (int s = 0; s < a.size(); ++s) {
    auto& edges = out.out[s];
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](const NBW::Edge& e) { return !useful_scc[scc.comp[e.dst]]; }),
                edges.end());
  }
  scc_of = scc.comp;
  accepting_scc = good_scc;
  if (!useful_scc[scc.comp[a.initial]]) out.out[a.initial].clear();
  return out;
}

}  // namespace

DPW determinize(const NBW& input) {
  std::vector<int> scc_of;
  std::vector<char> acc_scc;
  NBW a = trim(input, scc_of, acc_scc);
  const int letters = 1 << a.num_ap;

  std::map<Macro, int> macro_id;
  std::vector<Macro> macros;
  std::vector<std::vector<std::pair<int, unsigned>>> succ;  // per macro, per letter

  auto intern = [&](Macro m) {
    auto it = macro_id.find(m);
    if (it != macro_id.end()) return it->second;
    int id = static_cast<int>(macros.size());
    check_ceiling(macros.size() + 1, "parity automaton");
    macro_id.emplace(m, id);
    macros.push_back(std::move(m));
    return id;
  };

  Macro init;
  if (!a.out[a.initial].empty()) {
    if (acc_scc[scc_of[a.initial]]) {
      init.braces.push_back(-1);
      init.nodes.emplace_back(a.initial, 0);
    } else {
      init.nodes.emplace_back(a.initial, -1);
    }
  }
  intern(init);

  for (size_t m = 0; m < macros.size(); ++m) {
    std::vector<std::pair<int, unsigned>> row(letters);
    for (int l = 0; l < letters; ++l) {
      Builder b;
      b.braces = macros[m].braces;
      for (const auto& [q, brace] : macros[m].nodes) {
        for (const auto& e : a.out[q]) {
          if (!e.matches(static_cast<Letter>(l))) continue;
          if (scc_of[q] != scc_of[e.dst])
            b.add_top(e.dst, acc_scc[scc_of[e.dst]]);
          else
            b.add(brace, e.dst, e.accepting);
        }
      }
      Macro next;
      unsigned colour = b.finalize(next);
      row[l] = {intern(std::move(next)), colour};
    }
    succ.push_back(std::move(row));
  }

  // State-based version: remember the colour of the incoming transition.
  unsigned max_colour = 0;
  bool any_colour = false;
  for (const auto& row : succ)
    for (const auto& [t, c] : row)
      if (c != kNoColour) {
        max_colour = std::max(max_colour, c);
        any_colour = true;
      }
  int top = any_colour ? static_cast<int>(max_colour) + 2 : 1;
  if (top % 2 == 0) ++top;
  auto rank_of = [&](unsigned c) { return c == kNoColour ? 1 : top - static_cast<int>(c); };

  DPW out;
  out.num_ap = a.num_ap;
  std::map<std::pair<int, unsigned>, int> ids;
  std::vector<std::pair<int, unsigned>> order;
  auto id_of = [&](std::pair<int, unsigned> key) {
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(order.size());
    check_ceiling(order.size() + 1, "parity automaton");
    ids.emplace(key, id);
    order.push_back(key);
    return id;
  };
  out.initial = id_of({0, kNoColour});
  for (size_t i = 0; i < order.size(); ++i) {
    auto [m, c] = order[i];
    std::vector<int> row(letters);
    for (int l = 0; l < letters; ++l) row[l] = id_of(succ[m][l]);
    out.delta.push_back(std::move(row));
    out.rank.push_back(rank_of(c));
  }
  return minimize(out);
}

DPW minimize(const DPW& input) {
  // Ranks of states outside every cycle never matter; copy them from a
  // successor so that such states can merge.
  DPW a = input;
  const int n = a.size();
  {
    Adjacency g(n);
    for (int q = 0; q < n; ++q) g[q] = a.delta[q];
    auto scc = strongly_connected(g);
    auto cyclic = nontrivial_components(g, scc);
    std::vector<std::vector<int>> members(scc.count);
    for (int q = 0; q < n; ++q) members[scc.comp[q]].push_back(q);
    for (int c = 0; c < scc.count; ++c)
      if (!cyclic[c])
        for (int q : members[c]) a.rank[q] = a.rank[a.delta[q][0]];
  }
  const int letters = a.letters();
  std::vector<int> cls(n);
  {
    std::map<int, int> by_rank;
    for (int q = 0; q < n; ++q) cls[q] = by_rank.emplace(a.rank[q], by_rank.size()).first->second;
  }
  int count = 0;
  while (true) {
    std::map<std::vector<int>, int> sig_id;
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      std::vector<int> sig;
      sig.reserve(letters + 1);
      sig.push_back(cls[q]);
      for (int l = 0; l < letters; ++l) sig.push_back(cls[a.delta[q][l]]);
      next[q] = sig_id.emplace(std::move(sig), sig_id.size()).first->second;
    }
    int new_count = static_cast<int>(sig_id.size());
    cls = std::move(next);
    if (new_count == count) break;
    count = new_count;
  }
  // Renumber classes in BFS order from the initial state.
  std::vector<int> rep(count, -1), order_id(count, -1);
  for (int q = 0; q < n; ++q)
    if (rep[cls[q]] < 0) rep[cls[q]] = q;
  DPW out;
  out.num_ap = a.num_ap;
  std::vector<int> queue{cls[a.initial]};
  order_id[cls[a.initial]] = 0;
  for (size_t i = 0; i < queue.size(); ++i) {
    int q = rep[queue[i]];
    for (int l = 0; l < letters; ++l) {
      int c = cls[a.delta[q][l]];
      if (order_id[c] < 0) {
        order_id[c] = static_cast<int>(queue.size());
        queue.push_back(c);
      }
    }
  }
  out.delta.assign(queue.size(), std::vector<int>(letters));
  out.rank.assign(queue.size(), 1);
  for (size_t i = 0; i < queue.size(); ++i) {
    int q = rep[queue[i]];
    out.rank[i] = a.rank[q];
    for (int l = 0; l < letters; ++l) out.delta[i][l] = order_id[cls[a.delta[q][l]]];
  }
  out.initial = 0;
  return out;
}

DPW dpw_for(const Formula& f, const ValuePredicate& p, const std::vector<std::string>& ap) {
  DPW d = determinize(ltl_to_nbw(booleanize(f, p), ap));
  d.validate();
  return d;
}

}  // namespace hqs
