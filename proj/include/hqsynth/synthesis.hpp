#pragma once

#include "hqsynth/mdp.hpp"
#include "hqsynth/transducer.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hqs {

struct SynthesisSpec {
  std::vector<std::string> inputs, outputs;
  Formula formula;
  std::optional<Formula> assumption;       // Boolean, inputs only
  std::optional<Rational> threshold;
  std::optional<Formula> hard_constraint;  // Boolean, must hold almost surely
  std::optional<DistributionMDP> distribution;

  std::vector<std::string> alphabet() const;
  InputModel input_model() const;
  // Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

struct SynthesisStats {
  size_t values = 0;
  size_t automata = 0;
  size_t automata_states = 0;
  size_t mdp_states = 0;
  size_t mdp_actions = 0;
  size_t end_components = 0;
  size_t transducer_states = 0;
};

struct SynthesisResult {
  std::string mode;  // plain, threshold, assume or assume-threshold
  bool realizable = true;
  Transducer transducer;
  Rational value;                                // optimum of the achievability MDP
  Rational certified_value;                      // re-evaluated on the transducer
  std::optional<Rational> almost_sure_floor;     // threshold modes, re-evaluated
  std::optional<Rational> assumption_probability;
  std::vector<Rational> values;                  // V(φ)
  SynthesisStats stats;
  // Unrealizable threshold: losing (automaton state, input-process state) pairs.
  std::vector<std::pair<int, int>> losing_region;
};

// The product MDP behind a synthesis run, exposed for inspection and
// brute-force comparison.
class AchievabilityMdp {
 public:
  explicit AchievabilityMdp(const SynthesisSpec& spec);
  ~AchievabilityMdp();
  AchievabilityMdp(AchievabilityMdp&&) noexcept;

  bool realizable() const;
  const RewardMDP& mdp() const;
  // Component states per MDP state: input-process state, value automata,
  // then restriction and assumption automata when present.
  const std::vector<std::vector<int>>& states() const;
  const std::vector<Rational>& values() const;
  // Transducer playing the memoryless strategy f directly.
  Transducer transducer(const Strategy& f) const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

// Dispatches on the optional fields of the spec.
SynthesisResult synthesize(const SynthesisSpec& spec);

SynthesisResult synth(const Formula& phi, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs,
                      const std::optional<DistributionMDP>& dist = std::nullopt);
SynthesisResult synth_threshold(const Formula& phi, const Rational& t, const std::vector<std::string>& inputs,
                                const std::vector<std::string>& outputs,
                                const std::optional<DistributionMDP>& dist = std::nullopt);
SynthesisResult synth_assume(const Formula& phi, const Formula& psi, const std::vector<std::string>& inputs,
                             const std::vector<std::string>& outputs,
                             const std::optional<DistributionMDP>& dist = std::nullopt);
SynthesisResult synth_assume_threshold(const Formula& phi, const Formula& psi, const Rational& t,
                                       const std::vector<std::string>& inputs,
                                       const std::vector<std::string>& outputs,
                                       const std::optional<DistributionMDP>& dist = std::nullopt);

// Pr(ψ) for a Boolean formula over the inputs.
Rational prob_of_assumption(const Formula& psi, const std::vector<std::string>& inputs,
                            const std::optional<DistributionMDP>& dist = std::nullopt);

// Moore-style minimization: merges states with equal labels and equivalent
// successors.
Transducer minimize(const Transducer& t);

}  // namespace hqs
