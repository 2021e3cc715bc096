#include "hqsynth/graph.hpp"

#include <algorithm>

namespace hqs {

SccResult strongly_connected(const Adjacency& g, const std::vector<char>* mask) {
  const int n = static_cast<int>(g.size());
  auto in = [&](int v) { return !mask || (*mask)[v]; };
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<int, size_t>> call;
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (!in(root) || index[root] != -1) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < g[v].size()) {
        int w = g[v][i++];
        if (!in(w)) continue;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.comp[w] = res.count;
        } while (w != v);
        ++res.count;
      }
      int done = v;
      call.pop_back();
      if (!call.empty()) {
        int parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return res;
}

std::vector<char> reachable(const Adjacency& g, const std::vector<int>& from,
                            const std::vector<char>* mask) {
  std::vector<char> seen(g.size(), 0);
  std::vector<int> todo;
  for (int s : from) {
    if ((!mask || (*mask)[s]) && !seen[s]) {
      seen[s] = 1;
      todo.push_back(s);
    }
  }
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (int w : g[v]) {
      if ((mask && !(*mask)[w]) || seen[w]) continue;
      seen[w] = 1;
      todo.push_back(w);
    }
  }
  return seen;
}

std::vector<char> nontrivial_components(const Adjacency& g, const SccResult& scc) {
  std::vector<char> out(scc.count, 0);
  for (size_t v = 0; v < g.size(); ++v) {
    if (scc.comp[v] < 0) continue;
    for (int w : g[v])
      if (scc.comp[w] == scc.comp[v]) out[scc.comp[v]] = 1;
  }
  return out;
}

}  // namespace hqs
