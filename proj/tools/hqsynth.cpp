#include "hqsynth/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>

using namespace hqs;
using io::json;

namespace {

constexpr int kUnrealizable = 2;

// Ordered key/value report, printed as lines or as one JSON object.
struct Report {
  std::vector<std::pair<std::string, json>> items;

  void add(const std::string& key, json value) { items.emplace_back(key, std::move(value)); }
  void rational(const std::string& key, const Rational& r) {
    add(key, to_string(r));
    add(key + "_decimal", to_decimal(r));
  }

  std::string render(bool as_json) const {
    if (as_json) {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto& [k, v] : items) j[k] = v;
      return j.dump(2) + "\n";
    }
    std::string out;
    for (const auto& [k, v] : items) out += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    return out;
  }
};

std::string lasso_text(const LassoWord& w, const std::vector<std::string>& ap) {
  std::string out;
  for (Letter l : w.prefix) out += letter_to_string(l, ap) + " ";
  out += "(";
  for (size_t k = 0; k < w.period.size(); ++k) out += (k ? " " : "") + letter_to_string(w.period[k], ap);
  return out + ")^w";
}

std::string join_values(const std::vector<Rational>& vs) {
  std::string out;
  for (size_t k = 0; k < vs.size(); ++k) out += (k ? "," : "") + to_string(vs[k]);
  return out;
}

void emit(const Report& r, bool as_json, const std::string& report_path) {
  const std::string text = r.render(as_json);
  std::cout << text;
  if (!report_path.empty()) io::write_file(report_path, text);
}

struct SynthOptions {
  std::string spec, out, dot, threshold, assume, report, dump_mdp;
  bool json = false;
};

int run_synth(const SynthOptions& o) {
  SynthesisSpec spec = io::load_spec(o.spec);
  if (!o.threshold.empty()) spec.threshold = parse_rational(o.threshold);
  if (!o.assume.empty()) spec.assumption = parse(o.assume, spec.alphabet());
  spec.validate();
  if (!o.dump_mdp.empty()) io::write_file(o.dump_mdp, io::to_json(AchievabilityMdp(spec)).dump(1) + "\n");

  SynthesisResult res = synthesize(spec);
  Report r;
  r.add("status", res.realizable ? "REALIZABLE" : "UNREALIZABLE");
  r.add("mode", res.mode);
  r.add("values", join_values(res.values));
  if (res.assumption_probability) r.rational("assumption_probability", *res.assumption_probability);
  if (!res.realizable) {
    r.add("losing_pairs", res.losing_region.size());
    r.add("automata", res.stats.automata);
    r.add("automata_states", res.stats.automata_states);
    emit(r, o.json, o.report);
    return kUnrealizable;
  }
  r.rational("expected", res.value);
  r.rational("certified_expected", res.certified_value);
  if (res.almost_sure_floor) r.rational("almost_sure_floor", *res.almost_sure_floor);
  r.add("automata", res.stats.automata);
  r.add("automata_states", res.stats.automata_states);
  r.add("mdp_states", res.stats.mdp_states);
  r.add("mdp_actions", res.stats.mdp_actions);
  r.add("end_components", res.stats.end_components);
  r.add("transducer_states", res.stats.transducer_states);
  if (!o.out.empty()) io::write_file(o.out, io::to_json(res.transducer).dump(2) + "\n");
  if (!o.dot.empty()) io::write_file(o.dot, to_dot(res.transducer));
  emit(r, o.json, o.report);
  return 0;
}

Transducer load_matching(const SynthesisSpec& spec, const std::string& path) {
  Transducer t = io::load_transducer(path);
  if (t.inputs != spec.inputs || t.outputs != spec.outputs)
    throw std::invalid_argument("transducer atoms do not match the spec's inputs and outputs");
  return t;
}

struct EvalOptions {
  std::string spec, transducer, mode = "expected", assume, report;
  bool json = false;
};

int run_eval(const EvalOptions& o) {
  SynthesisSpec spec = io::load_spec(o.spec);
  if (!o.assume.empty()) spec.assumption = parse(o.assume, spec.alphabet());
  Transducer t = load_matching(spec, o.transducer);
  const InputModel model = spec.input_model();
  Report r;
  r.add("mode", o.mode);
  if (o.mode == "expected") {
    r.rational("value", expected_value(t, spec.formula, model));
  } else if (o.mode == "almost-sure") {
    r.rational("value", almost_sure_value(t, spec.formula, model));
  } else if (o.mode == "conditional") {
    if (!spec.assumption) throw std::invalid_argument("conditional mode needs an assumption");
    r.rational("value", conditional_expected_value(t, spec.formula, *spec.assumption, model));
    r.rational("conditional_almost_sure", conditional_almost_sure_value(t, spec.formula, *spec.assumption, model));
    r.rational("assumption_probability", assumption_probability(t, *spec.assumption, model));
  } else {
    auto w = worst_case(t, spec.formula);
    r.rational("value", w.value);
    r.add("witness_inputs", lasso_text(w.inputs, t.inputs));
    r.add("witness_computation", lasso_text(w.computation, t.alphabet()));
  }
  emit(r, o.json, o.report);
  return 0;
}

struct SimulateOptions {
  std::string spec, transducer, report;
  size_t samples = 10000;
  uint64_t seed = 1;
  bool json = false;
};

int run_simulate(const SimulateOptions& o) {
  SynthesisSpec spec = io::load_spec(o.spec);
  Transducer t = load_matching(spec, o.transducer);
  const InputModel model = spec.input_model();
  auto sim = simulate(t, spec.formula, o.samples, o.seed, model);
  const Rational exact = expected_value(t, spec.formula, model);
  double mean = sim.estimate.get_d(), var = 0;
  for (const auto& v : sim.samples) var += (v.get_d() - mean) * (v.get_d() - mean);
  const double se = o.samples > 1 ? std::sqrt(var / double(o.samples - 1) / double(o.samples)) : 0.0;
  Report r;
  r.add("samples", o.samples);
  r.add("seed", o.seed);
  r.rational("estimate", sim.estimate);
  r.rational("exact", exact);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", se);
  r.add("standard_error", buf);
  emit(r, o.json, o.report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative reactive synthesis for LTL with quality operators"};
  app.require_subcommand(1);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Synthesize a transducer maximizing the expected value");
  synth->add_option("spec", so.spec, "Spec JSON file")->required();
  synth->add_option("--out", so.out, "Write the transducer as JSON");
  synth->add_option("--dot", so.dot, "Write the transducer as DOT");
  synth->add_option("--threshold", so.threshold, "Almost-sure lower bound, as num/den");
  synth->add_option("--assume-inline,--assume", so.assume, "Boolean assumption over the inputs");
  synth->add_option("--report", so.report, "Also write the report to this file");
  synth->add_option("--dump-mdp", so.dump_mdp, "Write the achievability MDP as JSON");
  synth->add_flag("--json", so.json, "Print the report as JSON");

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Evaluate a transducer exactly");
  eval->add_option("spec", eo.spec, "Spec JSON file")->required();
  eval->add_option("transducer", eo.transducer, "Transducer JSON file")->required();
  eval->add_option("--mode", eo.mode, "expected, conditional, almost-sure or worst-case")
      ->check(CLI::IsMember({"expected", "conditional", "almost-sure", "worst-case"}));
  eval->add_option("--assume-inline,--assume", eo.assume, "Assumption for conditional mode");
  eval->add_option("--report", eo.report, "Also write the report to this file");
  eval->add_flag("--json", eo.json, "Print the report as JSON");

  SimulateOptions mo;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimate of the expected value");
  sim->add_option("spec", mo.spec, "Spec JSON file")->required();
  sim->add_option("transducer", mo.transducer, "Transducer JSON file")->required();
  sim->add_option("--samples", mo.samples, "Number of sampled runs")->check(CLI::PositiveNumber);
  sim->add_option("--seed", mo.seed, "Random seed");
  sim->add_option("--report", mo.report, "Also write the report to this file");
  sim->add_flag("--json", mo.json, "Print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (const char* env = std::getenv("HQSYNTH_STATE_CEILING")) {
      char* end = nullptr;
      unsigned long long n = std::strtoull(env, &end, 10);
      if (!*env || *end || n == 0) throw std::invalid_argument("HQSYNTH_STATE_CEILING must be a positive integer");
      set_state_ceiling(n);
    }
    if (*synth) return run_synth(so);
    if (*eval) return run_eval(eo);
    return run_simulate(mo);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
