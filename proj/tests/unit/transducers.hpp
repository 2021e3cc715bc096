#pragma once

// Tree-shaped transducers described by a function of the input history.

#include "hqsynth/transducer.hpp"

#include <functional>
#include <map>
#include <random>

namespace fixture {

using hqs::Letter;
using hqs::Transducer;

// Output at position j is out(i_0..i_j) for j < depth, then `tail` forever.
inline Transducer from_history(std::vector<std::string> inputs, std::vector<std::string> outputs, int depth,
                               const std::function<Letter(const std::vector<Letter>&)>& out, Letter tail = 0) {
  Transducer t;
  t.inputs = std::move(inputs);
  t.outputs = std::move(outputs);
  const Letter letters = Letter(1) << t.inputs.size();
  std::map<std::vector<Letter>, int> ids;
  std::vector<std::vector<Letter>> hist;
  auto id_of = [&](const std::vector<Letter>& h) {
    auto [it, inserted] = ids.emplace(h, static_cast<int>(hist.size()));
    if (inserted) hist.push_back(h);
    return it->second;
  };
  t.initial = id_of({});
  // Sink for positions past the depth, keyed by a marker history.
  const std::vector<Letter> sink(depth + 1, 0xffffffffu);
  for (size_t s = 0; s < hist.size(); ++s) {
    std::vector<Letter> h = hist[s];
    std::vector<int> row;
    for (Letter i = 0; i < letters; ++i) {
      if (h == sink || static_cast<int>(h.size()) == depth) {
        row.push_back(id_of(sink));
        continue;
      }
      auto next = h;
      next.push_back(i);
      row.push_back(id_of(next));
    }
    t.delta.push_back(row);
  }
  for (const auto& h : hist) t.label.push_back(h == sink ? tail : h.empty() ? 0 : out(h));
  return t;
}

inline Transducer random_transducer(std::mt19937& rng, int states, int ni, int no) {
  Transducer t;
  for (int i = 0; i < ni; ++i) t.inputs.push_back("i" + std::to_string(i));
  for (int o = 0; o < no; ++o) t.outputs.push_back("o" + std::to_string(o));
  t.label.resize(states);
  t.delta.assign(states, std::vector<int>(1 << ni));
  for (int q = 0; q < states; ++q) {
    t.label[q] = rng() % (1u << no);
    for (auto& d : t.delta[q]) d = rng() % states;
  }
  return t;
}

}  // namespace fixture
