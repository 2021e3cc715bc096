#pragma once

#include "hqsynth/automata.hpp"
#include "hqsynth/mdp.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqs {

struct AssumptionHasZeroProbability : std::runtime_error {
  AssumptionHasZeroProbability() : std::runtime_error("the assumption holds with probability 0") {}
};

// I/O machine: transitions read input letters, states carry output letters.
// On input i in state q the machine moves to q' = delta[q][i] and the
// computation letter is i together with label[q']; the initial label is
// never emitted.
struct Transducer {
  std::vector<std::string> inputs, outputs;
  int initial = 0;
  std::vector<Letter> label;
  std::vector<std::vector<int>> delta;  // [state][input letter]

  int size() const { return static_cast<int>(label.size()); }
  int num_inputs() const { return static_cast<int>(inputs.size()); }
  // Atoms of computation letters: inputs then outputs.
  std::vector<std::string> alphabet() const;
  void validate() const;
  // The output emitted next from q when it does not depend on the input.
  std::optional<Letter> committed_output(int q) const;
};

// Computation letters for a finite input word.
std::vector<Letter> exec(const Transducer& t, const std::vector<Letter>& inputs);
// Computation on an ultimately periodic input word, as a lasso.
LassoWord exec_lasso(const Transducer& t, const LassoWord& inputs);

// Exact analysis of the Markov chain obtained by running a transducer against
// an input model, with every run classified by its satisfaction value.
struct ChainAnalysis {
  std::vector<Rational> values;      // V(φ), ascending
  MarkovChain chain;
  ErgodicAnalysis ergodic;
  std::vector<int> value_of;         // per ergodic component: index into values
  std::vector<char> assumption;      // per ergodic component: ψ holds (all true without ψ)
  size_t automata_states = 0;
};

ChainAnalysis analyze(const Transducer& t, const Formula& phi, const Formula* psi, const InputModel& model);

Rational expected_value(const Transducer& t, const Formula& phi, const InputModel& model);
Rational conditional_expected_value(const Transducer& t, const Formula& phi, const Formula& psi,
                                    const InputModel& model);
Rational almost_sure_value(const Transducer& t, const Formula& phi, const InputModel& model);
// Largest v with Pr(value >= v | ψ) = 1.
Rational conditional_almost_sure_value(const Transducer& t, const Formula& phi, const Formula& psi,
                                       const InputModel& model);
// Pr(ψ) on the runs of t.
Rational assumption_probability(const Transducer& t, const Formula& psi, const InputModel& model);

struct WorstCase {
  Rational value;
  LassoWord inputs;       // input word attaining the value
  LassoWord computation;  // the corresponding computation
};

WorstCase worst_case(const Transducer& t, const Formula& phi);
inline Rational worst_case_value(const Transducer& t, const Formula& phi) { return worst_case(t, phi).value; }

struct Simulation {
  Rational estimate;
  std::vector<Rational> samples;
};

Simulation simulate(const Transducer& t, const Formula& phi, size_t samples, uint64_t seed, const InputModel& model);

std::string to_dot(const Transducer& t);

}  // namespace hqs
