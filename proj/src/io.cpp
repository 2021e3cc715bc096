#include "hqsynth/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hqs::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be a list of atoms");
  std::vector<std::string> out;
  for (const auto& a : j) {
    if (!a.is_string()) throw std::invalid_argument(std::string(what) + " must be a list of atoms");
    out.push_back(a.get<std::string>());
  }
  return out;
}

int index_of(const json& j, const char* what) {
  if (!j.is_number_integer()) throw std::invalid_argument(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

Letter letter_from_atoms(const json& atoms, const std::vector<std::string>& ap) {
  Letter l = 0;
  for (const auto& a : string_list(atoms, "letter")) {
    auto it = std::find(ap.begin(), ap.end(), a);
    if (it == ap.end()) throw std::invalid_argument("unknown atom '" + a + "'");
    l |= Letter(1) << (it - ap.begin());
  }
  return l;
}

json atoms_of(Letter letter, const std::vector<std::string>& ap) {
  json out = json::array();
  for (size_t k = 0; k < ap.size(); ++k)
    if (letter >> k & 1) out.push_back(ap[k]);
  return out;
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("rationals are written as \"num/den\" strings");
}

DistributionMDP distribution_from_json(const json& j, const std::vector<std::string>& inputs,
                                       const std::vector<std::string>& outputs) {
  DistributionMDP d;
  d.num_inputs = static_cast<int>(inputs.size());
  d.num_outputs = static_cast<int>(outputs.size());
  const auto& states = field(j, "states");
  if (!states.is_array() || states.empty()) throw std::invalid_argument("distribution needs states");
  d.label.resize(states.size());
  for (size_t k = 0; k < states.size(); ++k) {
    int id = index_of(field(states[k], "id"), "state id");
    if (id != static_cast<int>(k)) throw std::invalid_argument("distribution state ids must be 0, 1, ... in order");
    d.label[k] = letter_from_atoms(field(states[k], "label"), inputs);
  }
  d.initial = index_of(field(j, "initial"), "initial");
  const size_t outs = size_t(1) << outputs.size();
  d.trans.assign(states.size(), std::vector<Distribution>(outs));
  for (const auto& t : field(j, "transitions")) {
    int from = index_of(field(t, "from"), "from"), to = index_of(field(t, "to"), "to");
    if (from < 0 || from >= d.size() || to < 0 || to >= d.size())
      throw std::invalid_argument("distribution transition out of range");
    Rational p = rational_from_json(field(t, "prob"));
    if (t.contains("output")) {
      d.trans[from][letter_from_atoms(t.at("output"), outputs)].emplace_back(to, p);
    } else {
      for (auto& row : d.trans[from]) row.emplace_back(to, p);
    }
  }
  for (auto& rows : d.trans)
    for (auto& row : rows) normalize(row);
  d.validate();
  return d;
}

json to_json(const DistributionMDP& d, const std::vector<std::string>& inputs,
             const std::vector<std::string>& outputs) {
  json states = json::array(), trans = json::array();
  for (int s = 0; s < d.size(); ++s) states.push_back({{"id", s}, {"label", atoms_of(d.label[s], inputs)}});
  for (int s = 0; s < d.size(); ++s)
    for (size_t o = 0; o < d.trans[s].size(); ++o)
      for (const auto& [t, p] : d.trans[s][o])
        trans.push_back({{"from", s}, {"output", atoms_of(static_cast<Letter>(o), outputs)}, {"to", t},
                         {"prob", to_string(p)}});
  return {{"states", states}, {"initial", d.initial}, {"transitions", trans}};
}

SynthesisSpec spec_from_json(const json& j) {
  SynthesisSpec s;
  s.inputs = string_list(field(j, "inputs"), "inputs");
  s.outputs = string_list(field(j, "outputs"), "outputs");
  const auto ap = s.alphabet();
  auto formula = [&](const char* key) {
    const auto& f = field(j, key);
    if (!f.is_string()) throw std::invalid_argument(std::string(key) + " must be a string");
    return parse(f.get<std::string>(), ap);
  };
  s.formula = formula("formula");
  if (j.contains("assumption") && !j.at("assumption").is_null()) s.assumption = formula("assumption");
  if (j.contains("hard_constraint") && !j.at("hard_constraint").is_null())
    s.hard_constraint = formula("hard_constraint");
  if (j.contains("threshold") && !j.at("threshold").is_null()) s.threshold = rational_from_json(j.at("threshold"));
  if (j.contains("distribution") && !j.at("distribution").is_null())
    s.distribution = distribution_from_json(j.at("distribution"), s.inputs, s.outputs);
  s.validate();
  return s;
}

json to_json(const SynthesisSpec& s) {
  json j = {{"inputs", s.inputs}, {"outputs", s.outputs}, {"formula", to_string(s.formula)}};
  if (s.assumption) j["assumption"] = to_string(*s.assumption);
  if (s.threshold) j["threshold"] = to_string(*s.threshold);
  if (s.hard_constraint) j["hard_constraint"] = to_string(*s.hard_constraint);
  if (s.distribution) j["distribution"] = to_json(*s.distribution, s.inputs, s.outputs);
  return j;
}

Transducer transducer_from_json(const json& j) {
  Transducer t;
  t.inputs = string_list(field(j, "inputs"), "inputs");
  t.outputs = string_list(field(j, "outputs"), "outputs");
  const auto& states = field(j, "states");
  if (!states.is_array() || states.empty()) throw std::invalid_argument("transducer needs states");
  for (size_t k = 0; k < states.size(); ++k) {
    if (index_of(field(states[k], "id"), "state id") != static_cast<int>(k))
      throw std::invalid_argument("transducer state ids must be 0, 1, ... in order");
    t.label.push_back(letter_from_atoms(field(states[k], "label"), t.outputs));
  }
  t.initial = index_of(field(j, "initial"), "initial");
  const size_t letters = size_t(1) << t.inputs.size();
  t.delta.assign(states.size(), std::vector<int>(letters, -1));
  for (const auto& tr : field(j, "transitions")) {
    int from = index_of(field(tr, "from"), "from"), to = index_of(field(tr, "to"), "to");
    if (from < 0 || from >= t.size()) throw std::invalid_argument("transducer transition out of range");
    Letter i = letter_from_atoms(field(tr, "input"), t.inputs);
    if (t.delta[from][i] >= 0 && t.delta[from][i] != to)
      throw std::invalid_argument("transducer state " + std::to_string(from) + " has two moves on one input");
    t.delta[from][i] = to;
  }
  for (auto& row : t.delta)
    for (auto& d : row)
      if (d < 0) throw std::invalid_argument("transducer is not total over the inputs");
  t.validate();
  return t;
}

json to_json(const Transducer& t) {
  json states = json::array(), trans = json::array();
  for (int q = 0; q < t.size(); ++q) states.push_back({{"id", q}, {"label", atoms_of(t.label[q], t.outputs)}});
  for (int q = 0; q < t.size(); ++q)
    for (size_t i = 0; i < t.delta[q].size(); ++i)
      trans.push_back({{"from", q}, {"input", atoms_of(static_cast<Letter>(i), t.inputs)}, {"to", t.delta[q][i]}});
  return {{"inputs", t.inputs}, {"outputs", t.outputs}, {"states", states}, {"initial", t.initial},
          {"transitions", trans}};
}

json to_json(const AchievabilityMdp& m) {
  const auto& r = m.mdp();
  json states = json::array();
  for (int s = 0; s < r.mdp.size(); ++s) {
    json actions = json::array();
    for (const auto& a : r.mdp.actions[s]) {
      json succ = json::array();
      for (const auto& [t, p] : a.succ) succ.push_back({{"to", t}, {"prob", to_string(p)}});
      actions.push_back({{"output", a.label}, {"successors", succ}});
    }
    states.push_back({{"id", s}, {"components", m.states()[s]}, {"reward", to_string(r.reward[s])},
                      {"actions", actions}});
  }
  json values = json::array();
  for (const auto& v : m.values()) values.push_back(to_string(v));
  return {{"values", values}, {"initial", r.mdp.initial}, {"states", states}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

SynthesisSpec load_spec(const std::string& path) { return spec_from_json(read_json(path)); }

Transducer load_transducer(const std::string& path) { return transducer_from_json(read_json(path)); }

}  // namespace hqs::io
