#pragma once

// Nonlinear state-dependent evolution, EPR ensemble signaling, the frame
// dependence of the signal onset, and gauge (change of Hilbert-space
// coordinates) equivalence tests.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcausal/hilbert.hpp"
#include "qcausal/spacetime.hpp"

namespace qcausal {

inline constexpr double kDefaultTimeStep = 1e-3;

/// psi' = -i H(psi) psi with a state-dependent Hermitian H.
struct NonlinearLaw {
  std::string name;
  std::size_t dim = 2;
  std::function<Operator(const Vector&)> hamiltonian;
  std::string description;
};

/// H(psi) = 0.
NonlinearLaw null_law(std::size_t dim);
/// State-independent H.
NonlinearLaw linear_law(std::string name, const Operator& h);
/// H(psi) = <psi|sigma_x|psi> sigma_z on a single qubit. The sigma_x
/// eigenstates drift towards +y with <sigma_y>(t) = tanh(2t).
NonlinearLaw default_law();

/// Largest anti-Hermitian residual of H(psi) over sampled unit vectors.
double max_hermiticity_defect(const NonlinearLaw& law, std::size_t samples = 200,
                              std::uint64_t seed = 0);

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EvolutionObserver = std::function<void(double, const Vector&)>;

/// Fourth-order Runge-Kutta with step <= dt and renormalisation after every
/// step. A per-step norm drift above 1e-6 raises IntegrationError. The
/// observer, if any, sees the initial state and every accepted step.
StateVector evolve_nonlinear(const StateVector& psi, const NonlinearLaw& law, double t,
                             double dt = kDefaultTimeStep, const EvolutionObserver& observer = {});

struct EPRScenario {
  /// Alice's factor first: dim = alice_dim * law.dim.
  StateVector shared_state;
  std::size_t alice_dim = 2;
  /// The two measurement settings Alice switches between.
  std::array<SpectralObservable, 2> alice_choices;
  SpectralObservable bob_observable;
  NonlinearLaw evolution;
  double t = 0.0;
  double dt = kDefaultTimeStep;

  /// Singlet, Alice choosing sigma_z or sigma_x, Bob reading sigma_y under
  /// the default law.
  static EPRScenario standard(double t, NonlinearLaw law = default_law());
};

struct SignalSample {
  double t = 0.0;
  double first_choice = 0.0;
  double second_choice = 0.0;
};

struct EPRSignal {
  double signal_first = 0.0;   // Alice measured alice_choices[0] (sigma_z)
  double signal_second = 0.0;  // Alice measured alice_choices[1] (sigma_x)
  double delta = 0.0;          // signal_second - signal_first
  std::size_t schmidt_rank = 0;
  bool product_state_warning = false;
  std::vector<SignalSample> series;
};

/// Bob's pure-state ensemble after Alice measures `choice`: (weight, state).
std::vector<std::pair<double, StateVector>> bob_ensemble(const EPRScenario& s,
                                                         const SpectralObservable& choice);

std::size_t schmidt_rank(const StateVector& psi, std::size_t left_dim, double tol = 1e-10);

/// Ensemble-averaged <bob_observable> after evolving every member for time t,
/// for each of Alice's choices. series_points > 0 also records a time series.
EPRSignal epr_signal(const EPRScenario& s, std::size_t series_points = 0);

struct OnsetReport {
  double v = 0.0;
  double distance = 0.0;
  double eps = 0.0;
  Event rest_onset;               // rest coordinates
  Event boosted_prediction;       // rest coordinates
  Event rest_onset_moving;        // moving-frame coordinates
  Event boosted_prediction_moving;
  double shift = 0.0;             // boosted_prediction.t - rest_onset.t
  double discrepancy = 0.0;       // |shift|
};

/// Signal onset on Bob's world-line x = L as predicted in the rest frame and
/// by an observer moving with velocity v whose collapse plane passes through
/// Alice's switch event at the origin.
OnsetReport onset_in_frame(double v, double distance, double eps);

struct GaugeMap {
  std::string name;
  NonlinearMap map;
  NonlinearMap inverse;
};

GaugeMap identity_gauge(std::size_t dim);
GaugeMap global_phase_gauge(std::size_t dim, double alpha);
/// T(psi) = exp(i lambda |<e_k, psi>|^2) psi.
GaugeMap nonlinear_phase_gauge(std::size_t dim, double lambda, std::size_t basis_index = 0);
/// Nonlinear phase whose declared inverse also swaps e_0 and e_1.
GaugeMap broken_gauge(std::size_t dim, double lambda);

/// Checks the gauge map's claims and inverse relation on sampled states.
FlagCheck verify_gauge_flags(const GaugeMap& t, std::size_t samples = 200,
                             std::uint64_t seed = 0);

/// Evolution plus measurement in some Hilbert-space picture. Outcome weights
/// are ||readout(final vector)||^2.
struct Theory {
  std::size_t dim = 2;
  std::string picture = "original";
  std::vector<SpectralObservable> families;
  std::function<Vector(const Vector&, double)> evolve;
  std::function<Vector(const Vector&)> prepare;
  std::function<Vector(const Operator&, const Vector&)> project;
  std::function<Vector(const Vector&)> readout;
};

/// Unitary evolution exp(-i H t).
Theory linear_theory(const Operator& hamiltonian, std::vector<SpectralObservable> families);
/// Evolution under a nonlinear law, applied to the normalised direction.
Theory nonlinear_theory(const NonlinearLaw& law, std::vector<SpectralObservable> families,
                        double dt = kDefaultTimeStep);
/// Random Hamiltonian and two or three random projector families.
Theory random_theory(std::size_t dim, std::uint64_t seed);

/// States T psi, evolution T U(t) T^-1, collapse T P T^-1, weights from
/// T^-1. Throws ValidationError when T's flags do not verify.
Theory gauge_transform(const Theory& theory, const GaugeMap& t);

struct MeasurementStep {
  double time = 0.0;  // evolution before this measurement
  std::size_t family = 0;
  std::size_t outcome = 0;
};

double outcome_weight(const Theory& theory, const StateVector& psi,
                      const std::vector<MeasurementStep>& steps);

inline constexpr double kGaugeTol = 1e-9;

struct GaugeReport {
  std::string map_name;
  std::size_t samples = 0;
  double max_discrepancy = 0.0;
  FlagCheck flags;

  bool passed() const { return max_discrepancy < kGaugeTol; }
};

/// Compares outcome statistics of the original and gauge-transformed
/// pictures on random initial states, times and projector chains. Never
/// throws on failure; the report carries it.
GaugeReport verify_gauge_equivalence(const Theory& theory, const GaugeMap& t,
                                     std::size_t samples, std::uint64_t seed = 0);

}  // namespace qcausal
