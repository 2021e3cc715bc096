#pragma once

#include "hqsynth/automata.hpp"
#include "hqsynth/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hqs {

// Sparse distribution, sorted by target, no zero entries.
using Distribution = std::vector<std::pair<int, Rational>>;

// Merges duplicate targets and drops zeros.
void normalize(Distribution& d);

struct MDP {
  struct Action {
    int label = 0;  // output letter or caller-defined tag
    Distribution succ;
  };
  int initial = 0;
  std::vector<std::vector<Action>> actions;

  int size() const { return static_cast<int>(actions.size()); }
  // Throws std::logic_error unless every state has an action and every
  // action's distribution sums to one.
  void validate() const;
};

struct ParityMDP {
  MDP mdp;
  std::vector<int> rank;
};

struct RewardMDP {
  MDP mdp;
  std::vector<Rational> reward;
};

struct MarkovChain {
  int initial = 0;
  std::vector<Distribution> rows;
  int size() const { return static_cast<int>(rows.size()); }
};

// Memoryless: action index per state, -1 where the strategy is irrelevant.
struct Strategy {
  std::vector<int> choice;
};

MarkovChain induced_chain(const MDP& m, const Strategy& f);

// Input process whose next input may depend on its own state and on the
// output just chosen. State labels are input letters; the label of the
// initial state is never read.
struct DistributionMDP {
  int num_inputs = 0;
  int num_outputs = 0;
  int initial = 0;
  std::vector<Letter> label;
  std::vector<std::vector<Distribution>> trans;  // [state][output letter]

  int size() const { return static_cast<int>(label.size()); }
  void validate() const;
  // Whether the successor distribution ignores the output letter.
  bool output_independent() const;
  // Whether distinct successors of each (state, output) carry distinct labels,
  // so the state can be recovered from the inputs seen.
  bool observable() const;
};

// Uniform inputs or a DistributionMDP, behind one stepping interface.
class InputModel {
 public:
  struct Step {
    int next;
    Letter input;
    Rational prob;
  };

  static InputModel uniform(int num_inputs);
  static InputModel from(const DistributionMDP& d);

  int num_inputs() const { return num_inputs_; }
  int initial() const { return initial_; }
  int size() const { return static_cast<int>(steps_.size()); }
  bool is_uniform() const { return uniform_; }
  const std::vector<Step>& step(int state, Letter output) const;

 private:
  bool uniform_ = true;
  int num_inputs_ = 0;
  int initial_ = 0;
  std::vector<std::vector<std::vector<Step>>> steps_;  // [state][output], one row when uniform
};

// Letters of automata over inputs then outputs.
inline Letter join(Letter input, Letter output, int num_inputs) { return input | (output << num_inputs); }

// Pre-MDP of a deterministic automaton with uniformly sampled inputs. Actions
// are the output letters in increasing order.
MDP induced_pre_mdp(const std::vector<std::vector<int>>& delta, int initial, int num_inputs, int num_outputs);

// Pre-MDP over pairs (automaton state, input-process state), reachable part.
struct ProductMDP {
  MDP mdp;
  std::vector<std::pair<int, int>> state;  // (automaton state, input-process state)
};
ProductMDP induced_pre_mdp_dist(const std::vector<std::vector<int>>& delta, int initial, const InputModel& inputs,
                                int num_outputs);

struct EndComponent {
  std::vector<int> states;                // sorted
  std::vector<std::vector<int>> actions;  // aligned with states
};

// Maximal end components, optionally within a state subset. Ordered by
// their smallest state.
std::vector<EndComponent> max_end_components(const MDP& m, const std::vector<char>* mask = nullptr);

struct CwrResult {
  std::vector<char> cwr;
  std::vector<int> witness;  // index into components, -1 when not c.w.r.
  std::vector<EndComponent> components;
  std::vector<int> witness_rank;  // even rank of each component's top
};

CwrResult cwr_states(const ParityMDP& m);

struct ParityResult {
  std::vector<char> winning;
  Strategy strategy;  // defined on winning states
};

ParityResult almost_sure_parity(const ParityMDP& m);

struct MeanPayoffResult {
  Rational value;                   // from the initial state
  std::vector<Rational> values;     // per state
  Strategy strategy;
  std::vector<EndComponent> mecs;
  std::vector<int> mec_of;          // -1 for transient states
  std::vector<char> stay;           // per MEC: remains there forever
  std::vector<std::pair<int, int>> exit;  // per leaving MEC: (state, action)
};

// Maximal expected limit-average reward for MDPs whose reward is constant
// on every maximal end component. Throws std::domain_error otherwise.
MeanPayoffResult solve_mean_payoff(const RewardMDP& m);

struct ErgodicAnalysis {
  std::vector<std::vector<int>> components;  // bottom SCCs reachable from the initial state
  std::vector<int> component_of;             // -1 for transient or unreachable states
  std::vector<Rational> rho;                 // absorption probability from the initial state
};

ErgodicAnalysis mc_ergodic_analysis(const MarkovChain& c);

// Expected terminal reward: x[s] = terminal[s] on states with fixed[s],
// otherwise x[s] = Σ P(s,t) x[t]. Assumes absorption with probability one.
std::vector<Rational> absorption_values(const MarkovChain& c, const std::vector<char>& fixed,
                                        const std::vector<Rational>& terminal);

// Attractor helpers used by strategy construction. Within `ec`, picks for
// each state an action of the component that moves towards `targets` with
// positive probability. Targets get -1.
std::vector<int> positive_attractor(const MDP& m, const EndComponent& ec, const std::vector<char>& targets);

}  // namespace hqs
