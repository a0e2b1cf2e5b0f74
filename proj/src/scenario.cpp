#include "qcausal/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "qcausal/io.hpp"
#include "qcausal/measurement.hpp"
#include "qcausal/modified_born.hpp"
#include "qcausal/signaling.hpp"
#include "qcausal/spacetime.hpp"

namespace qcausal::cli {

namespace {

std::string qualify(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

bool is_index(const json& j) {
  return j.is_number_integer() && (j.is_number_unsigned() || j.get<long long>() >= 0);
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

/// An object whose keys are checked against an allow-list on construction.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
      if (!ok.count(key)) fail(qualify(path_, key), "unknown key");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string field(const std::string& key) const { return qualify(path_, key); }

  const json& required(const std::string& key) const {
    if (!has(key)) fail(field(key), "missing");
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail(field(key), "missing");
    }
    const json& v = j_.at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field(key), "must be finite");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t lo,
                    std::size_t hi) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!is_index(v)) fail(field(key), "expected a non-negative integer");
    const auto n = v.get<std::size_t>();
    if (n < lo || n > hi) {
      fail(field(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return n;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }

 private:
  const json& j_;
  std::string path_;
};

// ------------------------------------------------------------------ presets

Vector qubit(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

std::optional<StateVector> pure_preset(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "zero") return StateVector::basis(2, 0);
  if (name == "one") return StateVector::basis(2, 1);
  if (name == "plus") return StateVector(qubit(s, s));
  if (name == "minus") return StateVector(qubit(s, -s));
  if (name == "singlet") {
    Vector v = Vector::Zero(4);
    v(1) = s;
    v(2) = -s;
    return StateVector(v);
  }
  if (name == "qutrit-uniform") return StateVector::normalized(Vector::Ones(3));
  return std::nullopt;
}

const char* kStatePresets = "zero, one, plus, minus, singlet, qutrit-uniform, maximally-mixed-<dim>";

SpectralObservable fourier_qutrit() {
  const double pi = std::acos(-1.0);
  std::vector<Operator> projectors;
  for (int k = 0; k < 3; ++k) {
    Vector f(3);
    for (int m = 0; m < 3; ++m) f(m) = std::polar(1.0 / std::sqrt(3.0), 2.0 * pi * k * m / 3.0);
    projectors.push_back(Operator::outer(f));
  }
  return SpectralObservable::from_projectors(std::move(projectors), 1e-12);
}

std::optional<SpectralObservable> observable_preset(const std::string& name) {
  if (name == "sigma_x") return spectral_decompose(pauli::X());
  if (name == "sigma_y") return spectral_decompose(pauli::Y());
  if (name == "sigma_z") return spectral_decompose(pauli::Z());
  if (name == "fourier-qutrit") return fourier_qutrit();
  if (name == "computational-qutrit") {
    std::vector<Operator> ps;
    for (std::size_t k = 0; k < 3; ++k) ps.push_back(Operator::outer(StateVector::basis(3, k).amplitudes()));
    return SpectralObservable::from_projectors(std::move(ps));
  }
  return std::nullopt;
}

const char* kObservablePresets = "sigma_x, sigma_y, sigma_z, fourier-qutrit, computational-qutrit";

Operator parse_operator(const json& j, const std::string& field) {
  try {
    return io::operator_from_json(j);
  } catch (const ValidationError& e) {
    fail(field, e.what());
  }
}

StateVector parse_pure_state(const json& j, const std::string& field) {
  if (j.is_string()) {
    if (auto psi = pure_preset(j.get<std::string>())) return *psi;
    fail(field, "unknown pure state preset '" + j.get<std::string>() +
                    "' (known: zero, one, plus, minus, singlet, qutrit-uniform)");
  }
  try {
    return io::state_from_json(j);
  } catch (const ValidationError& e) {
    fail(field, e.what());
  }
}

json observable_summary(const SpectralObservable& o) {
  json ranks = json::array();
  for (const auto& p : o.projectors()) ranks.push_back(std::lround(p.trace().real()));
  return {{"eigenvalues", o.eigenvalues()}, {"ranks", ranks}};
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunReport make_report(const char* command, const json& config, json outputs, bool ok) {
  RunReport r;
  r.command = command;
  r.inputs_digest = inputs_digest({{"command", command}, {"config", config}});
  r.outputs = std::move(outputs);
  r.ok = ok;
  return r;
}

std::uint64_t seed_of(const json& config) {
  return config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;
}

json nullable(std::optional<double> x) { return x ? json(*x) : json(nullptr); }

}  // namespace

// ------------------------------------------------------------------ parsing

DensityMatrix parse_state(const json& j, const std::string& field) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (auto psi = pure_preset(name)) return DensityMatrix::pure(*psi);
    const std::string mixed = "maximally-mixed-";
    if (name.rfind(mixed, 0) == 0) {
      const std::string digits = name.substr(mixed.size());
      if (!digits.empty() && digits.size() <= 2 &&
          digits.find_first_not_of("0123456789") == std::string::npos && std::stoi(digits) > 0) {
        return DensityMatrix::maximally_mixed(static_cast<std::size_t>(std::stoi(digits)));
      }
    }
    if (name == "maximally-mixed") return DensityMatrix::maximally_mixed(2);
    fail(field, "unknown state preset '" + name + "' (known: " + kStatePresets + ")");
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.at("re").is_array()) {
    fail(field, "expected a preset name or an object with dim/re/im");
  }
  const auto dim = is_index(j.at("dim")) ? j.at("dim").get<std::size_t>() : 0;
  try {
    if (dim > 0 && j.at("re").size() == dim * dim && dim > 1) {
      return DensityMatrix(io::operator_from_json(j), 1e-10);
    }
    return DensityMatrix::pure(io::state_from_json(j));
  } catch (const ValidationError& e) {
    fail(field, e.what());
  }
}

SpectralObservable parse_observable(const json& j, const std::string& field) {
  if (j.is_string()) {
    if (auto o = observable_preset(j.get<std::string>())) return *o;
    fail(field, "unknown observable preset '" + j.get<std::string>() + "' (known: " +
                    kObservablePresets + ")");
  }
  const Section s(j, field, {"matrix", "projectors", "eigenvalues"});
  if (s.has("matrix") == s.has("projectors")) {
    fail(field, "give exactly one of 'matrix' or 'projectors'");
  }
  try {
    if (s.has("matrix")) {
      if (s.has("eigenvalues")) fail(s.field("eigenvalues"), "only allowed with 'projectors'");
      return spectral_decompose(parse_operator(j.at("matrix"), s.field("matrix")));
    }
    const json& list = j.at("projectors");
    if (!list.is_array() || list.empty()) fail(s.field("projectors"), "expected a non-empty array");
    std::vector<Operator> ps;
    for (std::size_t k = 0; k < list.size(); ++k) {
      ps.push_back(parse_operator(list[k], s.field("projectors") + "[" + std::to_string(k) + "]"));
    }
    if (!s.has("eigenvalues")) return SpectralObservable::from_projectors(std::move(ps), 1e-10);
    const json& ev = j.at("eigenvalues");
    if (!ev.is_array()) fail(s.field("eigenvalues"), "expected an array of numbers");
    std::vector<double> values;
    for (const auto& x : ev) {
      if (!x.is_number()) fail(s.field("eigenvalues"), "expected an array of numbers");
      values.push_back(x.get<double>());
    }
    return SpectralObservable(std::move(values), std::move(ps), 1e-10);
  } catch (const ValidationError& e) {
    fail(field, e.what());
  }
}

json parse_config(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("; "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + what);
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string inputs_digest(const json& effective_config) {
  return fnv1a64(effective_config.dump());
}

json RunReport::to_json() const {
  json j = {{"command", command},
            {"inputs_digest", inputs_digest},
            {"status", ok ? "ok" : "failed"},
            {"outputs", outputs}};
  if (timing_ms) j["timing_ms"] = *timing_ms;
  return j;
}

std::vector<std::string> command_names() {
  return {"probabilities", "contextuality", "signaling", "onset", "verify-b", "gauge"};
}

RunReport run_command(const std::string& command, json config,
                      std::optional<std::uint64_t> seed_override) {
  if (!config.is_object()) throw ConfigError("scenario must be a JSON object");
  if (!config.contains("version")) fail("version", "missing");
  if (!config.at("version").is_number_integer() || config.at("version").get<long long>() != kScenarioVersion) {
    fail("version", "must be " + std::to_string(kScenarioVersion));
  }
  if (config.contains("seed") && !is_index(config.at("seed"))) {
    fail("seed", "expected a non-negative integer");
  }
  if (seed_override) config["seed"] = *seed_override;
  if (!config.contains("seed")) config["seed"] = 0;

  static const std::map<std::string, std::function<RunReport(const json&)>> table = {
      {"probabilities", cmd_probabilities}, {"contextuality", cmd_contextuality},
      {"signaling", cmd_signaling},         {"onset", cmd_onset},
      {"verify-b", cmd_verify_b},           {"gauge", cmd_gauge}};
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
  return it->second(config);
}

// ----------------------------------------------------------------- commands

RunReport cmd_probabilities(const json& config) {
  const Section s(config, "", {"version", "seed", "preset", "state", "A", "B"});
  json inputs = config;
  if (s.has("preset")) {
    for (const char* k : {"state", "A", "B"}) {
      if (s.has(k)) fail(k, "not allowed together with 'preset'");
    }
    const std::string preset = s.text("preset", "");
    if (preset == "qubit-zx") {
      inputs.update({{"state", "zero"}, {"A", "sigma_z"}, {"B", "sigma_x"}});
    } else if (preset == "repeat-z") {
      inputs.update({{"state", "maximally-mixed-2"}, {"A", "sigma_z"}, {"B", "sigma_z"}});
    } else {
      fail("preset", "unknown preset '" + preset + "' (known: qubit-zx, repeat-z)");
    }
  }
  const DensityMatrix rho = parse_state(inputs.contains("state") ? inputs.at("state") : s.required("state"), "state");
  const SpectralObservable a = parse_observable(inputs.contains("A") ? inputs.at("A") : s.required("A"), "A");
  const SpectralObservable b = parse_observable(inputs.contains("B") ? inputs.at("B") : s.required("B"), "B");
  if (a.dim() != rho.dim()) fail("A", "dimension does not match the state");
  if (b.dim() != rho.dim()) fail("B", "dimension does not match the state");

  const OutcomeDistribution joint = joint_distribution(rho, a, b);
  json pre = json::array();
  json post = json::array();
  json pre_sums = json::array();
  std::vector<std::optional<double>> post_sums(b.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    json pre_row = json::array();
    json post_row = json::array();
    std::optional<double> row_sum = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::optional<double> p;
      try {
        p = pre_condition_probability(rho, a, b, i, j);
      } catch (const ZeroProbabilityError&) {
      }
      std::optional<double> q;
      try {
        q = post_condition_probability(rho, a, b, i, j);
      } catch (const ZeroProbabilityError&) {
      }
      pre_row.push_back(nullable(p));
      post_row.push_back(nullable(q));
      row_sum = (row_sum && p) ? std::optional<double>(*row_sum + *p) : std::nullopt;
      post_sums[j] = (post_sums[j] && q) ? std::optional<double>(*post_sums[j] + *q) : std::nullopt;
    }
    pre.push_back(pre_row);
    post.push_back(post_row);
    pre_sums.push_back(nullable(row_sum));
  }
  json post_col = json::array();
  for (const auto& x : post_sums) post_col.push_back(nullable(x));

  const double total = joint.total();
  json out = {{"A", observable_summary(a)},
              {"B", observable_summary(b)},
              {"joint", io::to_json(joint)},
              {"pre_conditioning", {{"description", "P(j|i), rows i of A, columns j of B"}, {"table", pre}}},
              {"post_conditioning", {{"description", "P(i|j), rows i of A, columns j of B"}, {"table", post}}},
              {"normalization",
               {{"joint_total", total}, {"pre_row_sums", pre_sums}, {"post_column_sums", post_col}}}};
  return make_report("probabilities", config, std::move(out),
                     std::abs(total - 1.0) < kProbabilityTol);
}

RunReport cmd_contextuality(const json& config) {
  const Section s(config, "",
                  {"version", "seed", "preset", "mode", "state", "earlier", "coarsening", "later",
                   "i", "j"});
  const std::string mode_name = s.text("mode", "post");
  if (mode_name != "post" && mode_name != "pre") fail("mode", "expected 'post' or 'pre'");
  const ConditioningMode mode = mode_name == "post" ? ConditioningMode::Post : ConditioningMode::Pre;

  json inputs = config;
  if (s.has("preset")) {
    for (const char* k : {"state", "earlier", "coarsening", "later", "i", "j"}) {
      if (s.has(k)) fail(k, "not allowed together with 'preset'");
    }
    const std::string preset = s.text("preset", "");
    const json base = {{"state", "qutrit-uniform"},
                       {"earlier", "computational-qutrit"},
                       {"coarsening", json::array({json::array({0}), json::array({1, 2})})},
                       {"i", 0},
                       {"j", 0}};
    inputs.update(base);
    if (preset == "qutrit") {
      inputs["later"] = "fourier-qutrit";
    } else if (preset == "commuting") {
      inputs["later"] = "computational-qutrit";
    } else {
      fail("preset", "unknown preset '" + preset + "' (known: qutrit, commuting)");
    }
  }
  for (const char* k : {"state", "earlier", "coarsening", "later", "i", "j"}) {
    if (!inputs.contains(k)) fail(k, "missing");
  }
  const DensityMatrix rho = parse_state(inputs.at("state"), "state");
  const SpectralObservable fine = parse_observable(inputs.at("earlier"), "earlier");
  const SpectralObservable later = parse_observable(inputs.at("later"), "later");
  if (fine.dim() != rho.dim()) fail("earlier", "dimension does not match the state");
  if (later.dim() != rho.dim()) fail("later", "dimension does not match the state");

  Coarsening coarsening;
  const json& blocks = inputs.at("coarsening");
  if (!blocks.is_array()) fail("coarsening", "expected an array of index arrays");
  for (const auto& block : blocks) {
    if (!block.is_array()) fail("coarsening", "expected an array of index arrays");
    std::vector<std::size_t> b;
    for (const auto& k : block) {
      if (!is_index(k)) fail("coarsening", "indices must be non-negative integers");
      b.push_back(k.get<std::size_t>());
    }
    coarsening.blocks.push_back(std::move(b));
  }
  const json& ji = inputs.at("i");
  const json& jj = inputs.at("j");
  if (!is_index(ji)) fail("i", "expected a non-negative integer");
  if (!is_index(jj)) fail("j", "expected a non-negative integer");
  const auto i = ji.get<std::size_t>();
  const auto j = jj.get<std::size_t>();
  if (i >= fine.size()) fail("i", "outcome index out of range");
  if (j >= later.size()) fail("j", "outcome index out of range");

  SpectralObservable coarse = fine;
  try {
    coarse = coarsen(fine, coarsening);
  } catch (const ValidationError& e) {
    fail("coarsening", e.what());
  } catch (const std::out_of_range& e) {
    fail("coarsening", e.what());
  }

  const ContextualityReport r =
      contextuality_probe(rho, fine, coarse, coarsening, later, i, j, mode);
  double commutator = 0.0;
  for (const auto& p : fine.projectors())
    for (const auto& q : later.projectors()) commutator = std::max(commutator, commutator_norm(p, q));
  const bool commuting = commutator < 1e-12;

  json out = {{"mode", mode_name},
              {"i", i},
              {"j", j},
              {"probe", io::to_json(r)},
              {"max_commutator_norm", commutator},
              {"commuting", commuting}};
  // Commuting families or pre-conditioning must not see the coarsening.
  const bool ok = !(commuting || mode == ConditioningMode::Pre) || std::abs(r.delta) < 1e-12;
  return make_report("contextuality", config, std::move(out), ok);
}

RunReport cmd_signaling(const json& config) {
  const Section s(config, "",
                  {"version", "seed", "law", "hamiltonian", "t", "dt", "series_points", "state",
                   "alice_choices", "bob_observable"});
  const std::string law_name = s.text("law", "default");
  const double t = s.number("t", 0.5);
  const double dt = s.number("dt", kDefaultTimeStep);
  if (t < 0.0) fail("t", "must be non-negative");
  if (dt <= 0.0) fail("dt", "must be positive");
  if (t / dt > 1e8) fail("dt", "too small for the requested duration");
  const std::size_t points = s.count("series_points", 11, 0, 100000);

  NonlinearLaw law;
  if (law_name == "default") {
    if (s.has("hamiltonian")) fail("hamiltonian", "only used with law 'linear'");
    law = default_law();
  } else if (law_name == "linear") {
    const json h = s.has("hamiltonian") ? config.at("hamiltonian") : json("sigma_z");
    const SpectralObservable spec = parse_observable(h, "hamiltonian");
    law = linear_law("linear", spec.reconstruct());
  } else if (law_name == "null") {
    if (s.has("hamiltonian")) fail("hamiltonian", "only used with law 'linear'");
    law = null_law(2);
  } else {
    fail("law", "unknown law '" + law_name + "' (known: default, linear, null)");
  }

  EPRScenario scenario = EPRScenario::standard(t, law);
  scenario.dt = dt;
  if (s.has("state")) scenario.shared_state = parse_pure_state(config.at("state"), "state");
  if (s.has("alice_choices")) {
    const json& c = config.at("alice_choices");
    if (!c.is_array() || c.size() != 2) fail("alice_choices", "expected two observables");
    scenario.alice_choices = {parse_observable(c[0], "alice_choices[0]"),
                              parse_observable(c[1], "alice_choices[1]")};
  }
  if (s.has("bob_observable")) {
    scenario.bob_observable = parse_observable(config.at("bob_observable"), "bob_observable");
  }
  if (scenario.bob_observable.dim() != law.dim) fail("bob_observable", "must act on Bob's qubit");
  if (law.dim == 0 || scenario.shared_state.dim() % law.dim != 0) {
    fail("state", "dimension is not a multiple of Bob's dimension");
  }
  scenario.alice_dim = scenario.shared_state.dim() / law.dim;
  for (std::size_t k = 0; k < 2; ++k) {
    if (scenario.alice_choices[k].dim() != scenario.alice_dim) {
      fail("alice_choices[" + std::to_string(k) + "]", "must act on Alice's factor");
    }
  }

  const EPRSignal signal = epr_signal(scenario, points);
  const bool linear = law_name != "default";
  json out = {{"law", law.name}, {"t", t}, {"dt", dt}, {"signal", io::to_json(signal)}};
  if (linear) out["no_signaling_tolerance"] = 1e-10;
  return make_report("signaling", config, std::move(out),
                     !linear || std::abs(signal.delta) < 1e-10);
}

RunReport cmd_onset(const json& config) {
  const Section s(config, "", {"version", "seed", "v", "L", "eps"});
  const double v = s.number("v");
  const double distance = s.number("L");
  const double eps = s.number("eps", 0.0);
  if (!(std::abs(v) < 1.0)) fail("v", "|v| must be below 1");
  if (!(distance > 0.0)) fail("L", "must be positive");
  if (eps < 0.0) fail("eps", "must be non-negative");
  const OnsetReport r = onset_in_frame(v, distance, eps);
  return make_report("onset", config, {{"onset", io::to_json(r)}}, true);
}

RunReport cmd_verify_b(const json& config) {
  const Section s(config, "",
                  {"version", "seed", "family", "lambda", "n_sites", "n_steps", "periodic",
                   "samples"});
  const std::string family = s.text("family", "identity");
  const auto names = family_names();
  if (std::find(names.begin(), names.end(), family) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    fail("family", "unknown family '" + family + "' (known: " + known + ")");
  }
  LatticeModel model;
  model.n_sites = s.count("n_sites", 3, 1, 6);
  model.n_steps = s.count("n_steps", 2, 1, 8);
  model.periodic = s.flag("periodic", true);
  if (!model.periodic) fail("periodic", "the covariance check needs a periodic lattice");
  const double lambda = s.number("lambda", 0.7);
  const std::size_t samples = s.count("samples", kDefaultConstraintSamples, 1, 100000);

  const FamilyVerdict verdict =
      verify_family(make_family(family, model, lambda), samples, seed_of(config));
  json out = io::to_json(verdict);
  out["lambda"] = lambda;
  return make_report("verify-b", config, std::move(out), verdict.all_pass());
}

RunReport cmd_gauge(const json& config) {
  const Section s(config, "",
                  {"version", "seed", "map", "dim", "lambda", "alpha", "basis_index", "samples"});
  const std::string map = s.text("map", "nonlinear-phase");
  const std::size_t dim = s.count("dim", 3, 2, 64);
  const double lambda = s.number("lambda", 0.7);
  const double alpha = s.number("alpha", 0.4);
  const std::size_t basis = s.count("basis_index", 0, 0, dim - 1);
  const std::size_t samples = s.count("samples", 100, 1, 100000);

  GaugeMap t = identity_gauge(dim);
  if (map == "identity") {
  } else if (map == "global-phase") {
    t = global_phase_gauge(dim, alpha);
  } else if (map == "nonlinear-phase") {
    t = nonlinear_phase_gauge(dim, lambda, basis);
  } else if (map == "broken") {
    t = broken_gauge(dim, lambda);
  } else {
    fail("map", "unknown gauge map '" + map +
                    "' (known: identity, global-phase, nonlinear-phase, broken)");
  }
  const std::uint64_t seed = seed_of(config);
  const GaugeReport r = verify_gauge_equivalence(random_theory(dim, seed), t, samples, seed);
  return make_report("gauge", config, {{"gauge", io::to_json(r)}}, r.passed());
}

std::string signaling_csv(const RunReport& report) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,first_choice,second_choice,delta\n";
  for (const auto& p : report.outputs.at("signal").at("series")) {
    os << p.at("t").get<double>() << ',' << p.at("first_choice").get<double>() << ','
       << p.at("second_choice").get<double>() << ',' << p.at("delta").get<double>() << '\n';
  }
  return os.str();
}

}  // namespace qcausal::cli
