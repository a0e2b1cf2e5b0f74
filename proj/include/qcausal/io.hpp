#pragma once

// JSON encodings of the library's values. Operators and states use
// {"dim": n, "re": [...], "im": [...]} in row-major order; doubles are
// written in shortest round-trip form.

#include <nlohmann/json.hpp>

#include "qcausal/hilbert.hpp"
#include "qcausal/measurement.hpp"
#include "qcausal/modified_born.hpp"
#include "qcausal/signaling.hpp"
#include "qcausal/spacetime.hpp"

namespace qcausal::io {

using nlohmann::json;

json to_json(const Operator& op);
json to_json(const StateVector& psi);
json to_json(const DensityMatrix& rho);
/// Throws ValidationError on a malformed or inconsistent object.
Operator operator_from_json(const json& j);
StateVector state_from_json(const json& j);

json to_json(const OutcomeDistribution& d);
json to_json(const ContextualityReport& r);
json to_json(const CompositionReport& r);

json to_json(const Event& e);
json to_json(CausalRelation r);
json to_json(const Region& r);
json to_json(const OnsetReport& r);
json to_json(const PoincareReport& r);

json to_json(const EPRSignal& s);
json to_json(const FlagCheck& f);
json to_json(const GaugeReport& r);

json to_json(const ConstraintReport& r);
json to_json(const FamilyVerdict& v);

}  // namespace qcausal::io
