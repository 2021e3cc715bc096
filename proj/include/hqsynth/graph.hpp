#pragma once

#include <vector>

namespace hqs {

using Adjacency = std::vector<std::vector<int>>;

struct SccResult {
  std::vector<int> comp;  // -1 for vertices outside the mask
  int count = 0;          // components are numbered in reverse topological order
};

// Tarjan's algorithm without recursion. `mask` (optional) restricts the vertex set.
SccResult strongly_connected(const Adjacency& g, const std::vector<char>* mask = nullptr);

// Forward reachability from `from`, within `mask` when given.
std::vector<char> reachable(const Adjacency& g, const std::vector<int>& from,
                            const std::vector<char>* mask = nullptr);

// True iff the component has at least one internal edge (i.e. contains a cycle).
std::vector<char> nontrivial_components(const Adjacency& g, const SccResult& scc);

}  // namespace hqs
