#include "hqsynth/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hqs;
using io::json;

namespace {

// Documents cross the boundary as JSON text and rationals as "num/den";
// the Python package converts them.

SynthesisSpec spec_of(const std::string& text) { return io::spec_from_json(json::parse(text)); }

Transducer matching(const SynthesisSpec& spec, const std::string& text) {
  Transducer t = io::transducer_from_json(json::parse(text));
  if (t.inputs != spec.inputs || t.outputs != spec.outputs)
    throw std::invalid_argument("transducer atoms do not match the spec's inputs and outputs");
  return t;
}

std::string synthesize_json(const std::string& spec_text) {
  SynthesisResult r = synthesize(spec_of(spec_text));
  json out = {{"realizable", r.realizable}, {"mode", r.mode}};
  json vs = json::array();
  for (const auto& v : r.values) vs.push_back(to_string(v));
  out["values"] = vs;
  if (r.assumption_probability) out["assumption_probability"] = to_string(*r.assumption_probability);
  out["stats"] = {{"values", r.stats.values},
                  {"automata", r.stats.automata},
                  {"automata_states", r.stats.automata_states},
                  {"mdp_states", r.stats.mdp_states},
                  {"mdp_actions", r.stats.mdp_actions},
                  {"end_components", r.stats.end_components},
                  {"transducer_states", r.stats.transducer_states}};
  if (!r.realizable) {
    out["losing_region"] = r.losing_region;
    return out.dump();
  }
  out["value"] = to_string(r.value);
  out["certified_value"] = to_string(r.certified_value);
  if (r.almost_sure_floor) out["almost_sure_floor"] = to_string(*r.almost_sure_floor);
  out["transducer"] = io::to_json(r.transducer);
  return out.dump();
}

std::string evaluate(const std::string& spec_text, const std::string& t_text, const std::string& mode) {
  SynthesisSpec spec = spec_of(spec_text);
  Transducer t = matching(spec, t_text);
  const InputModel model = spec.input_model();
  if (mode == "expected") return to_string(expected_value(t, spec.formula, model));
  if (mode == "almost-sure") return to_string(almost_sure_value(t, spec.formula, model));
  if (mode == "worst-case") return to_string(worst_case_value(t, spec.formula));
  if (mode == "conditional") {
    if (!spec.assumption) throw std::invalid_argument("conditional mode needs an assumption");
    return to_string(conditional_expected_value(t, spec.formula, *spec.assumption, model));
  }
  if (mode == "conditional-almost-sure") {
    if (!spec.assumption) throw std::invalid_argument("conditional mode needs an assumption");
    return to_string(conditional_almost_sure_value(t, spec.formula, *spec.assumption, model));
  }
  throw std::invalid_argument("unknown mode '" + mode + "'");
}

std::pair<std::string, std::vector<std::string>> simulate_json(const std::string& spec_text,
                                                               const std::string& t_text, size_t samples,
                                                               uint64_t seed) {
  SynthesisSpec spec = spec_of(spec_text);
  auto sim = simulate(matching(spec, t_text), spec.formula, samples, seed, spec.input_model());
  std::vector<std::string> out;
  for (const auto& v : sim.samples) out.push_back(to_string(v));
  return {to_string(sim.estimate), out};
}

std::string prob_of_assumption_json(const std::string& formula, const std::vector<std::string>& inputs,
                                    const std::string& dist_text, const std::vector<std::string>& outputs) {
  std::optional<DistributionMDP> d;
  if (!dist_text.empty()) d = io::distribution_from_json(json::parse(dist_text), inputs, outputs);
  return to_string(prob_of_assumption(parse(formula, inputs), inputs, d));
}

std::vector<std::string> values_of(const std::string& formula, const std::vector<std::string>& atoms) {
  std::vector<std::string> out;
  for (const auto& v : values(parse(formula, atoms))) out.push_back(to_string(v));
  return out;
}

std::string eval_word(const std::string& formula, const std::vector<std::string>& atoms,
                      const std::vector<Letter>& prefix, const std::vector<Letter>& period) {
  if (period.empty()) throw std::invalid_argument("the period must be nonempty");
  return to_string(eval_lasso(parse(formula, atoms), LassoWord{prefix, period}, atoms));
}

}  // namespace

PYBIND11_MODULE(_hqsynth, m) {
  m.doc() = "Native core of hqsynth";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<AssumptionHasZeroProbability>(m, "AssumptionHasZeroProbability", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
  m.def("synthesize", &synthesize_json, py::arg("spec"));
  m.def("evaluate", &evaluate, py::arg("spec"), py::arg("transducer"), py::arg("mode"));
  m.def("simulate", &simulate_json, py::arg("spec"), py::arg("transducer"), py::arg("samples"), py::arg("seed"));
  m.def("prob_of_assumption", &prob_of_assumption_json, py::arg("formula"), py::arg("inputs"),
        py::arg("distribution"), py::arg("outputs"));
  m.def("values", &values_of, py::arg("formula"), py::arg("atoms"));
  m.def("eval_lasso", &eval_word, py::arg("formula"), py::arg("atoms"), py::arg("prefix"), py::arg("period"));
  m.def("format_formula", [](const std::string& f, const std::vector<std::string>& atoms) {
    return to_string(parse(f, atoms));
  });
  m.def("set_state_ceiling", &set_state_ceiling, py::arg("states"));
}
