#include "qcausal/io.hpp"

#include <string>
#include <type_traits>

namespace qcausal::io {

namespace {

json complex_parts(const Complex* data, std::size_t n) {
  json re = json::array();
  json im = json::array();
  for (std::size_t k = 0; k < n; ++k) {
    re.push_back(data[k].real());
    im.push_back(data[k].imag());
  }
  return {{"re", re}, {"im", im}};
}

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.contains(field)) throw ValidationError(std::string("missing field '") + field + "'");
  const json& a = j.at(field);
  if (!a.is_array()) throw ValidationError(std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& x : a) {
    if (!x.is_number()) {
      throw ValidationError(std::string("field '") + field + "' must contain numbers only");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

/// Reads {"dim", "re", "im"}; "im" may be omitted for real data.
std::pair<std::size_t, std::vector<Complex>> read_complex(const json& j, std::size_t per_dim_power) {
  if (!j.is_object()) throw ValidationError("expected an object with dim/re/im");
  for (const auto& [key, value] : j.items()) {
    if (key != "dim" && key != "re" && key != "im") {
      throw ValidationError("unknown key '" + key + "'");
    }
  }
  if (!j.contains("dim") || !j.at("dim").is_number_integer() || j.at("dim").get<long long>() <= 0) {
    throw ValidationError("field 'dim' must be a positive integer");
  }
  const auto dim = j.at("dim").get<std::size_t>();
  const std::size_t n = per_dim_power == 2 ? dim * dim : dim;
  const auto re = number_array(j, "re");
  const auto im = j.contains("im") ? number_array(j, "im") : std::vector<double>(re.size(), 0.0);
  if (re.size() != n || im.size() != n) {
    throw ValidationError("fields 're'/'im' must hold " + std::to_string(n) + " entries");
  }
  std::vector<Complex> data(n);
  for (std::size_t k = 0; k < n; ++k) data[k] = {re[k], im[k]};
  return {dim, data};
}

json mat3(const PoincareReport::Mat3& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(json(row));
  return out;
}

}  // namespace

json to_json(const Operator& op) {
  const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = op.matrix();
  json j = complex_parts(rm.data(), static_cast<std::size_t>(rm.size()));
  j["dim"] = op.dim();
  return j;
}

json to_json(const StateVector& psi) {
  json j = complex_parts(psi.amplitudes().data(), psi.dim());
  j["dim"] = psi.dim();
  return j;
}

json to_json(const DensityMatrix& rho) { return to_json(rho.op()); }

Operator operator_from_json(const json& j) {
  const auto [dim, data] = read_complex(j, 2);
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * dim + c];
  return Operator(std::move(m));
}

StateVector state_from_json(const json& j) {
  const auto [dim, data] = read_complex(j, 1);
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) v(static_cast<Eigen::Index>(k)) = data[k];
  return StateVector(std::move(v));
}

json to_json(const OutcomeDistribution& d) {
  json outcomes = json::array();
  for (const auto& [indices, p] : d.outcomes) outcomes.push_back({{"indices", indices}, {"p", p}});
  return {{"outcomes", outcomes}, {"total", d.total()}};
}

json to_json(const ContextualityReport& r) {
  return {{"p_fine", r.p_fine}, {"p_coarse", r.p_coarse}, {"delta", r.delta}};
}

json to_json(const CompositionReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"indices", {e.i, e.j}},
                       {"joint", e.joint},
                       {"factorized", e.factorized},
                       {"state_discrepancy", e.state_discrepancy},
                       {"conditioned", e.conditioned}});
  }
  return {{"entries", entries},
          {"max_probability_discrepancy", r.max_probability_discrepancy},
          {"max_state_discrepancy", r.max_state_discrepancy},
          {"commutator_norm", r.commutator_norm},
          {"pass", r.passed()}};
}

json to_json(const Event& e) { return {{"t", e.t}, {"x", e.x}}; }

json to_json(CausalRelation r) { return to_string(r); }

json to_json(const Region& r) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Diamond>) {
          return {{"kind", "diamond"}, {"t", v.center.t}, {"x", v.center.x}, {"radius", v.radius}};
        } else {
          return {{"kind", "lattice_interval"},
                  {"time_step", v.time_step},
                  {"first", v.first},
                  {"last", v.last}};
        }
      },
      r);
}

json to_json(const OnsetReport& r) {
  return {{"v", r.v},
          {"L", r.distance},
          {"eps", r.eps},
          {"rest_frame", {{"rest_onset", to_json(r.rest_onset)},
                          {"boosted_prediction", to_json(r.boosted_prediction)}}},
          {"moving_frame", {{"rest_onset", to_json(r.rest_onset_moving)},
                            {"boosted_prediction", to_json(r.boosted_prediction_moving)}}},
          {"shift", r.shift},
          {"discrepancy", r.discrepancy}};
}

json to_json(const PoincareReport& r) {
  return {{"H", mat3(r.H)},
          {"P", mat3(r.P)},
          {"K", mat3(r.K)},
          {"KP_commutator", mat3(r.KP_commutator)},
          {"KH_commutator", mat3(r.KH_commutator)},
          {"HP_commutator", mat3(r.HP_commutator)},
          {"residual_KP_minus_H", r.residual_KP_minus_H},
          {"residual_KH_minus_P", r.residual_KH_minus_P},
          {"residual_HP", r.residual_HP},
          {"pass", r.passed()}};
}

json to_json(const EPRSignal& s) {
  json series = json::array();
  for (const auto& p : s.series) {
    series.push_back({{"t", p.t}, {"first_choice", p.first_choice},
                      {"second_choice", p.second_choice},
                      {"delta", p.second_choice - p.first_choice}});
  }
  return {{"signal_first", s.signal_first},
          {"signal_second", s.signal_second},
          {"delta", s.delta},
          {"schmidt_rank", s.schmidt_rank},
          {"product_state_warning", s.product_state_warning},
          {"series", series}};
}

json to_json(const FlagCheck& f) {
  return {{"samples", f.samples},
          {"max_norm_defect", f.max_norm_defect},
          {"max_inverse_defect", f.max_inverse_defect},
          {"norm_preserving_ok", f.norm_preserving_ok},
          {"invertible_ok", f.invertible_ok}};
}

json to_json(const GaugeReport& r) {
  return {{"map", r.map_name},
          {"samples", r.samples},
          {"max_discrepancy", r.max_discrepancy},
          {"tolerance", kGaugeTol},
          {"pass", r.passed()},
          {"flags", to_json(r.flags)}};
}

json to_json(const ConstraintReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back({{"description", w.description}, {"residual", w.residual}});
  }
  json j = {{"constraint", r.constraint},
            {"samples", r.samples},
            {"max_residual", r.max_residual},
            {"max_ray_residual", r.max_ray_residual},
            {"tolerance", r.tolerance},
            {"pass", r.pass()},
            {"witnesses", witnesses}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const FamilyVerdict& v) {
  json reports = json::array();
  for (const auto& r : v.reports) reports.push_back(to_json(r));
  const auto& m = v.assignment.model;
  return {{"family", v.assignment.family_name},
          {"model", {{"n_sites", m.n_sites}, {"n_steps", m.n_steps}, {"periodic", m.periodic}}},
          {"reports", reports},
          {"all_pass", v.all_pass()}};
}

}  // namespace qcausal::io
