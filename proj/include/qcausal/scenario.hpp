#pragma once

// Scenario files and the commands behind the qcausal tool. A scenario is a
// JSON object with "version": 1, an optional "seed" and command-specific
// keys; unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcausal/hilbert.hpp"

namespace qcausal::cli {

using nlohmann::json;

inline constexpr int kScenarioVersion = 1;

/// Unreadable, malformed or schema-violating scenario (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string command;
  std::string inputs_digest;
  json outputs;
  /// False when a verified property failed (exit status 1).
  bool ok = true;
  std::optional<double> timing_ms;

  json to_json() const;
};

std::vector<std::string> command_names();

/// Parse errors carry line and column.
json parse_config(const std::string& text);
json load_config(const std::string& path);

/// FNV-1a 64 over the sorted-key dump, as "fnv1a64:<16 hex digits>".
std::string inputs_digest(const json& effective_config);

/// Validates the version, applies the seed override and dispatches.
RunReport run_command(const std::string& command, json config,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

RunReport cmd_probabilities(const json& config);
RunReport cmd_contextuality(const json& config);
RunReport cmd_signaling(const json& config);
RunReport cmd_onset(const json& config);
RunReport cmd_verify_b(const json& config);
RunReport cmd_gauge(const json& config);

/// t, first_choice, second_choice, delta rows of a signaling report.
std::string signaling_csv(const RunReport& report);

/// Named presets or {"dim","re","im"} (amplitudes, or a dim*dim density matrix).
DensityMatrix parse_state(const json& j, const std::string& field);
/// Named presets, {"matrix": op} or {"projectors": [op...], "eigenvalues": [...]}.
SpectralObservable parse_observable(const json& j, const std::string& field);

}  // namespace qcausal::cli
