#pragma once

#include "hqsynth/synthesis.hpp"

#include <json.hpp>

#include <string>

namespace hqs::io {

using json = nlohmann::json;

// Atom lists <-> letters. Unknown atoms throw std::invalid_argument.
Letter letter_from_atoms(const json& atoms, const std::vector<std::string>& ap);
json atoms_of(Letter letter, const std::vector<std::string>& ap);

Rational rational_from_json(const json& j);

// {states: [{id, label: [inputs]}], initial, transitions: [{from, output?, to, prob}]}.
// A transition without "output" applies to every output letter.
DistributionMDP distribution_from_json(const json& j, const std::vector<std::string>& inputs,
                                       const std::vector<std::string>& outputs);
json to_json(const DistributionMDP& d, const std::vector<std::string>& inputs,
             const std::vector<std::string>& outputs);

// {inputs, outputs, formula, assumption?, threshold?, hard_constraint?, distribution?}
SynthesisSpec spec_from_json(const json& j);
json to_json(const SynthesisSpec& s);

// {inputs, outputs, states: [{id, label}], initial, transitions: [{from, input, to}]}
Transducer transducer_from_json(const json& j);
json to_json(const Transducer& t);

// Debug dump of an achievability MDP: component states, actions, rewards.
json to_json(const AchievabilityMdp& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json read_json(const std::string& path);

SynthesisSpec load_spec(const std::string& path);
Transducer load_transducer(const std::string& path);

}  // namespace hqs::io
