#pragma once

#include "hqsynth/boolify.hpp"
#include "hqsynth/formula.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqs {

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ceiling on the number of states of any single constructed automaton or
// MDP. Defaults to 10^6.
size_t state_ceiling();
void set_state_ceiling(size_t n);
void check_ceiling(size_t n, const char* what);

// Büchi automaton with acceptance on transitions.
struct NBW {
  struct Edge {
    Letter pos = 0;  // atoms required true
    Letter neg = 0;  // atoms required false
    int dst = 0;
    bool accepting = false;
    bool matches(Letter a) const { return (a & pos) == pos && (a & neg) == 0; }
  };
  int num_ap = 0;
  int initial = 0;
  std::vector<std::vector<Edge>> out;

  int size() const { return static_cast<int>(out.size()); }
};

// Deterministic parity automaton; acceptance: the maximal rank seen
// infinitely often is even.
struct DPW {
  int num_ap = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // [state][letter]
  std::vector<int> rank;                // 1..d

  int size() const { return static_cast<int>(delta.size()); }
  int letters() const { return 1 << num_ap; }
  int step(int q, Letter a) const { return delta[q][a]; }
  int max_rank() const;
  // Throws std::logic_error when delta is not total or a rank is out of range.
  void validate() const;
};

NBW ltl_to_nbw(const Formula& boolean_formula, const std::vector<std::string>& ap);
bool nbw_nonempty(const NBW& a);
bool nbw_accepts(const NBW& a, const LassoWord& w);
DPW determinize(const NBW& a);
DPW dpw_for(const Formula& f, const ValuePredicate& p, const std::vector<std::string>& ap);
// Merges states with equal rank and equivalent successors.
DPW minimize(const DPW& a);

bool run_lasso(const DPW& a, const LassoWord& w);
// Accepted word from state q, if any.
std::optional<LassoWord> nonempty_witness(const DPW& a, int q);
bool dpw_nonempty_from(const DPW& a, int q);

struct ProductAutomaton {
  std::vector<const DPW*> components;
  std::vector<std::vector<int>> state;  // component states per product state
  std::vector<std::vector<int>> delta;  // [state][letter]
  int initial = 0;
  int size() const { return static_cast<int>(state.size()); }
};

ProductAutomaton product(const std::vector<const DPW*>& components);

std::string to_dot(const DPW& a, const std::vector<std::string>& ap);
std::string to_hoa(const DPW& a, const std::vector<std::string>& ap);
std::string letter_to_string(Letter a, const std::vector<std::string>& ap);

}  // namespace hqs
