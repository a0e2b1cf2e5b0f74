#pragma once

// Region-operator assignments O -> B_O on a qubit-chain lattice, the
// sequence probability with P_i replaced by P_i B_i after a time-like past
// region, and sampling verifiers for the three consistency constraints:
//
//   1. space-like regions: B_O B_O' = B_O' B_O and B_O P = P B_O for P in A(O')
//   2. O subset of O', P in A(O): P B_O' = P B_O
//   3. B_{gO} = U(g)^dagger B_O U(g)
//
// Algebra membership is decided by site support only, so A(O) for a region
// at any time step is the algebra of operators on the region's sites.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcausal/hilbert.hpp"
#include "qcausal/spacetime.hpp"

namespace qcausal {

inline constexpr double kConstraintTol = 1e-9;
inline constexpr std::size_t kDefaultConstraintSamples = 200;

/// A region with no assigned operator, or an unknown family name.
class AssignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasurementEvent {
  LatticeInterval region;
  Operator projector;  // full-chain operator supported on the region's sites
};

struct RegionOperatorAssignment {
  std::string family_name;
  LatticeModel model;
  std::function<std::optional<NonlinearMap>(const LatticeInterval&)> assign;

  /// Throws AssignmentError when the region is unassigned.
  NonlinearMap at(const LatticeInterval& region) const;
};

/// Shipped families: identity, local-phase, local-twist, and the negative
/// controls global-coupled (constraint 1), local-unitary (constraint 2) and
/// step-phase (constraint 3).
std::vector<std::string> family_names();
RegionOperatorAssignment make_family(const std::string& name, const LatticeModel& model,
                                     double lambda = 0.7);

/// Site shift U with U^dagger A_s U = A_{s+shift} for single-site operators.
Operator translation_unitary(const LatticeModel& model, std::size_t shift);
/// Region moved by `shift` sites (mod n_sites) and `steps` time steps.
LatticeInterval translate(const LatticeInterval& region, std::size_t shift, int steps,
                          const LatticeModel& model);

struct ModifiedSequenceResult {
  double probability = 0.0;
  std::vector<std::size_t> order;  // chronological, indices into the input
  std::vector<bool> modified;      // per input event: B inserted
};

/// ||X_1 ... X_n psi||^2 with X_i = P_i B_i when another listed region lies in
/// the time-like past of region i, else X_i = P_i. The earliest event acts
/// first. Neither-related regions raise CausalConfigurationError.
ModifiedSequenceResult evaluate_modified_sequence(const StateVector& psi,
                                                  const std::vector<MeasurementEvent>& events,
                                                  const RegionOperatorAssignment& assignment);
double modified_sequence_probability(const StateVector& psi,
                                     const std::vector<MeasurementEvent>& events,
                                     const RegionOperatorAssignment& assignment);

/// Raw and normalised modified probabilities over every outcome tuple of
/// complete local families (one per region, acting on the region's sites).
/// The raw total is reported as is.
struct NormalizationAudit {
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<double> raw;
  std::vector<double> normalized;
  double raw_total = 0.0;
  double deviation = 0.0;  // raw_total - 1
};

NormalizationAudit audit_normalization(const StateVector& psi,
                                       const std::vector<LatticeInterval>& regions,
                                       const std::vector<SpectralObservable>& local_families,
                                       const RegionOperatorAssignment& assignment);

struct ConstraintWitness {
  std::string description;
  double residual = 0.0;
};

struct ConstraintReport {
  int constraint = 0;
  std::size_t samples = 0;
  double max_residual = 0.0;
  /// Same comparison modulo a global phase of the compared vectors.
  double max_ray_residual = 0.0;
  double tolerance = kConstraintTol;
  std::vector<ConstraintWitness> witnesses;
  std::string note;

  bool pass() const { return max_residual < tolerance; }
};

/// Phase-insensitive distance min_alpha ||a - e^{i alpha} b||.
double ray_distance(const Vector& a, const Vector& b);

ConstraintReport check_commutation_constraint(const RegionOperatorAssignment& assignment,
                                              std::size_t samples = kDefaultConstraintSamples,
                                              std::uint64_t seed = 0);
ConstraintReport check_restriction_constraint(const RegionOperatorAssignment& assignment,
                                              std::size_t samples = kDefaultConstraintSamples,
                                              std::uint64_t seed = 0);
/// Requires a periodic model; samples lattice translations and time shifts.
ConstraintReport check_covariance_constraint(const RegionOperatorAssignment& assignment,
                                             std::size_t samples = kDefaultConstraintSamples,
                                             std::uint64_t seed = 0);

struct FamilyVerdict {
  RegionOperatorAssignment assignment;
  std::array<ConstraintReport, 3> reports;

  bool all_pass() const { return reports[0].pass() && reports[1].pass() && reports[2].pass(); }
};

FamilyVerdict verify_family(const RegionOperatorAssignment& assignment,
                            std::size_t samples = kDefaultConstraintSamples,
                            std::uint64_t seed = 0);

/// Every shipped family on the given (periodic) model with its reports.
std::vector<FamilyVerdict> shipped_families(const LatticeModel& model, double lambda = 0.7,
                                            std::size_t samples = kDefaultConstraintSamples,
                                            std::uint64_t seed = 0);

}  // namespace qcausal
