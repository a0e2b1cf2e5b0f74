#include "qcausal/signaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcausal/random.hpp"

namespace qcausal {

// ------------------------------------------------------------------- laws

NonlinearLaw null_law(std::size_t dim) {
  const Operator zero = Operator::zero(dim);
  return {"null", dim, [zero](const Vector&) { return zero; }, "H(psi) = 0"};
}

NonlinearLaw linear_law(std::string name, const Operator& h) {
  if (!h.is_hermitian()) throw ValidationError("linear law needs a hermitian Hamiltonian");
  return {std::move(name), h.dim(), [h](const Vector&) { return h; },
          "state-independent Hamiltonian"};
}

NonlinearLaw default_law() {
  const Operator x = pauli::X();
  const Operator z = pauli::Z();
  return {"default", 2,
          [x, z](const Vector& psi) {
            const double sx = psi.dot(x.matrix() * psi).real() / psi.squaredNorm();
            return Complex(sx, 0.0) * z;
          },
          "H(psi) = <psi|sigma_x|psi> sigma_z"};
}

double max_hermiticity_defect(const NonlinearLaw& law, std::size_t samples, std::uint64_t seed) {
  Sampler sampler(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Operator h = law.hamiltonian(sampler.unit_vector(law.dim).amplitudes());
    worst = std::max(worst, max_asymmetry(h.matrix()));
  }
  return worst;
}

// -------------------------------------------------------------- evolution

StateVector evolve_nonlinear(const StateVector& psi, const NonlinearLaw& law, double t, double dt,
                             const EvolutionObserver& observer) {
  if (!(dt > 0.0)) throw ValidationError("evolve_nonlinear: dt must be positive");
  if (!(t >= 0.0)) throw ValidationError("evolve_nonlinear: t must be non-negative");
  if (psi.dim() != law.dim) throw ValidationError("evolve_nonlinear: state/law dimension mismatch");

  const auto rhs = [&law](const Vector& v) -> Vector {
    return Complex(0.0, -1.0) * (law.hamiltonian(v).matrix() * v);
  };
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-12));
  const double h = steps == 0 ? 0.0 : t / static_cast<double>(steps);

  Vector v = psi.amplitudes();
  if (observer) observer(0.0, v);
  for (std::size_t n = 0; n < steps; ++n) {
    const Vector k1 = rhs(v);
    const Vector k2 = rhs(v + 0.5 * h * k1);
    const Vector k3 = rhs(v + 0.5 * h * k2);
    const Vector k4 = rhs(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = v.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
      std::ostringstream os;
      os << "evolve_nonlinear: norm drift " << std::abs(norm - 1.0) << " at step " << n
         << " exceeds 1e-6; reduce dt (currently " << dt << ")";
      throw IntegrationError(os.str());
    }
    v /= norm;
    if (observer) observer(h * static_cast<double>(n + 1), v);
  }
  return StateVector(v, 1e-10);
}

// -------------------------------------------------------------------- EPR

EPRScenario EPRScenario::standard(double t, NonlinearLaw law) {
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  return EPRScenario{StateVector(singlet),
                     2,
                     {spectral_decompose(pauli::Z()), spectral_decompose(pauli::X())},
                     spectral_decompose(pauli::Y()),
                     std::move(law),
                     t,
                     kDefaultTimeStep};
}

std::size_t schmidt_rank(const StateVector& psi, std::size_t left_dim, double tol) {
  const auto right_dim = psi.dim() / left_dim;
  if (left_dim * right_dim != psi.dim()) throw ValidationError("schmidt_rank: bad factor size");
  Matrix m(static_cast<Eigen::Index>(left_dim), static_cast<Eigen::Index>(right_dim));
  for (std::size_t a = 0; a < left_dim; ++a)
    for (std::size_t b = 0; b < right_dim; ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi[a * right_dim + b];
  Eigen::JacobiSVD<Matrix> svd(m);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) > tol) ++rank;
  }
  return rank;
}

std::vector<std::pair<double, StateVector>> bob_ensemble(const EPRScenario& s,
                                                         const SpectralObservable& choice) {
  const std::size_t da = s.alice_dim;
  const std::size_t db = s.shared_state.dim() / da;
  if (choice.dim() != da) throw ValidationError("Alice's observable has the wrong dimension");
  std::vector<std::pair<double, StateVector>> members;
  for (const Operator& p : choice.projectors()) {
    if (std::abs(p.trace().real() - 1.0) > 1e-9) {
      throw ValidationError("Alice's projectors must be rank one for a pure Bob ensemble");
    }
    // Unit vector spanning the projector's range.
    Eigen::Index col = 0;
    p.matrix().colwise().norm().maxCoeff(&col);
    const Vector u = p.matrix().col(col).normalized();
    Vector phi = Vector::Zero(static_cast<Eigen::Index>(db));
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t b = 0; b < db; ++b)
        phi(static_cast<Eigen::Index>(b)) +=
            std::conj(u(static_cast<Eigen::Index>(a))) * s.shared_state[a * db + b];
    const double weight = phi.squaredNorm();
    if (weight > 1e-15) members.emplace_back(weight, StateVector::normalized(phi));
  }
  return members;
}

namespace {

// Ensemble-averaged expectation at `series_points` evenly spaced step
// indices (both ends included), followed by the final value.
std::vector<double> ensemble_average(const EPRScenario& s, const SpectralObservable& choice,
                                     const Operator& bob, std::size_t series_points,
                                     std::vector<double>* times) {
  const auto members = bob_ensemble(s, choice);
  const auto steps = static_cast<std::size_t>(std::ceil(s.t / s.dt - 1e-12));
  std::vector<std::size_t> wanted;
  for (std::size_t k = 0; k < series_points; ++k) {
    const std::size_t idx =
        series_points == 1 ? steps
                           : static_cast<std::size_t>(std::llround(
                                 static_cast<double>(k * steps) / static_cast<double>(series_points - 1)));
    if (wanted.empty() || wanted.back() != idx) wanted.push_back(idx);
  }

  std::vector<double> series(wanted.size(), 0.0);
  if (times != nullptr) times->assign(wanted.size(), 0.0);
  double final_value = 0.0;
  for (const auto& [weight, state] : members) {
    std::size_t step = 0;
    std::size_t slot = 0;
    const auto record = [&](double t, const Vector& v) {
      if (slot < wanted.size() && wanted[slot] == step) {
        series[slot] += weight * v.dot(bob.matrix() * v).real();
        if (times != nullptr) (*times)[slot] = t;
        ++slot;
      }
      ++step;
    };
    const StateVector out = evolve_nonlinear(state, s.evolution, s.t, s.dt, record);
    final_value += weight * out.expectation(bob);
  }
  series.push_back(final_value);
  return series;
}

}  // namespace

EPRSignal epr_signal(const EPRScenario& s, std::size_t series_points) {
  if (s.shared_state.dim() != s.alice_dim * s.evolution.dim) {
    throw ValidationError("EPR scenario: shared state dimension must be alice_dim * law.dim");
  }
  if (s.bob_observable.dim() != s.evolution.dim) {
    throw ValidationError("EPR scenario: Bob's observable has the wrong dimension");
  }
  EPRSignal out;
  out.schmidt_rank = schmidt_rank(s.shared_state, s.alice_dim);
  out.product_state_warning = out.schmidt_rank < 2;

  const Operator bob = s.bob_observable.reconstruct();
  std::vector<double> times;
  const auto first = ensemble_average(s, s.alice_choices[0], bob, series_points, &times);
  const auto second = ensemble_average(s, s.alice_choices[1], bob, series_points, nullptr);
  out.signal_first = first.back();
  out.signal_second = second.back();
  out.delta = out.signal_second - out.signal_first;
  if (series_points > 0) {
    for (std::size_t k = 0; k + 1 < first.size() && k + 1 < second.size(); ++k) {
      out.series.push_back({times[k], first[k], second[k]});
    }
  }
  return out;
}

// ------------------------------------------------------------------ onset

OnsetReport onset_in_frame(double v, double distance, double eps) {
  const double g = lorentz_gamma(v);
  if (!(distance > 0.0)) throw ValidationError("onset_in_frame: distance must be positive");
  if (!(eps >= 0.0)) throw ValidationError("onset_in_frame: eps must be non-negative");

  OnsetReport r;
  r.v = v;
  r.distance = distance;
  r.eps = eps;
  r.rest_onset = {eps, distance};

  // Bob sits at x = L. In the moving frame the collapse plane through the
  // origin is t' = 0, which meets Bob's world-line at x' = L / gamma.
  const Event collapse_moving{0.0, distance / g};
  const Event collapse_rest = boost_event(collapse_moving, -v);
  // Bob is at rest, so his proper-time delay eps is a rest-frame time delay.
  r.boosted_prediction = {collapse_rest.t + eps, distance};

  r.rest_onset_moving = boost_event(r.rest_onset, v);
  r.boosted_prediction_moving = boost_event(r.boosted_prediction, v);
  r.shift = r.boosted_prediction.t - r.rest_onset.t;
  r.discrepancy = std::abs(r.shift);
  return r;
}

// ------------------------------------------------------------------ gauge

GaugeMap identity_gauge(std::size_t dim) {
  return {"identity", NonlinearMap::identity(dim), NonlinearMap::identity(dim)};
}

GaugeMap global_phase_gauge(std::size_t dim, double alpha) {
  const Complex phase = std::polar(1.0, alpha);
  auto fwd = [phase](const Vector& v) -> Vector { return phase * v; };
  auto bwd = [phase](const Vector& v) -> Vector { return std::conj(phase) * v; };
  return {"global-phase", NonlinearMap(dim, fwd, {true, true}, bwd),
          NonlinearMap(dim, bwd, {true, true}, fwd)};
}

GaugeMap nonlinear_phase_gauge(std::size_t dim, double lambda, std::size_t basis_index) {
  if (basis_index >= dim) throw ValidationError("nonlinear phase: basis index out of range");
  const auto k = static_cast<Eigen::Index>(basis_index);
  // |<e_k, T psi>| = |<e_k, psi>|, so the opposite phase undoes T exactly.
  auto fwd = [lambda, k](const Vector& v) -> Vector {
    return std::polar(1.0, lambda * std::norm(v(k))) * v;
  };
  auto bwd = [lambda, k](const Vector& v) -> Vector {
    return std::polar(1.0, -lambda * std::norm(v(k))) * v;
  };
  return {"nonlinear-phase", NonlinearMap(dim, fwd, {true, true}, bwd),
          NonlinearMap(dim, bwd, {true, true}, fwd)};
}

GaugeMap broken_gauge(std::size_t dim, double lambda) {
  if (dim < 2) throw ValidationError("broken gauge needs dim >= 2");
  GaugeMap good = nonlinear_phase_gauge(dim, lambda);
  auto fwd = [good](const Vector& v) -> Vector { return good.map(v); };
  auto bad_inverse = [good](const Vector& v) -> Vector {
    Vector out = good.inverse(v);
    std::swap(out(0), out(1));
    return out;
  };
  return {"broken", NonlinearMap(dim, fwd, {true, true}, bad_inverse),
          NonlinearMap(dim, bad_inverse, {true, true}, fwd)};
}

FlagCheck verify_gauge_flags(const GaugeMap& t, std::size_t samples, std::uint64_t seed) {
  FlagCheck check = verify_flags(t.map, samples, seed);
  Sampler sampler(seed ^ 0x9e3779b97f4a7c15ULL);
  double worst = check.max_inverse_defect;
  for (std::size_t k = 0; k < samples; ++k) {
    const Vector psi = sampler.unit_vector(t.map.dim()).amplitudes();
    worst = std::max(worst, (t.inverse(t.map(psi)) - psi).norm());
  }
  check.max_inverse_defect = worst;
  if (worst > 1e-9) check.invertible_ok = false;
  return check;
}

// ----------------------------------------------------------------- theory

namespace {

Theory base_theory(std::size_t dim, std::vector<SpectralObservable> families) {
  for (const auto& f : families) {
    if (f.dim() != dim) throw ValidationError("theory: projector family has the wrong dimension");
  }
  Theory th;
  th.dim = dim;
  th.families = std::move(families);
  th.prepare = [](const Vector& v) { return v; };
  th.project = [](const Operator& p, const Vector& v) -> Vector { return p.matrix() * v; };
  th.readout = [](const Vector& v) { return v; };
  return th;
}

Theory transform_unchecked(const Theory& theory, const GaugeMap& t) {
  Theory out = theory;
  out.picture = theory.picture + "/" + t.name;
  const NonlinearMap fwd = t.map;
  const NonlinearMap bwd = t.inverse;
  out.prepare = [prev = theory.prepare, fwd](const Vector& v) -> Vector { return fwd(prev(v)); };
  out.evolve = [prev = theory.evolve, fwd, bwd](const Vector& v, double time) -> Vector {
    return fwd(prev(bwd(v), time));
  };
  out.project = [prev = theory.project, fwd, bwd](const Operator& p, const Vector& v) -> Vector {
    return fwd(prev(p, bwd(v)));
  };
  out.readout = [prev = theory.readout, bwd](const Vector& v) -> Vector { return prev(bwd(v)); };
  return out;
}

}  // namespace

Theory linear_theory(const Operator& hamiltonian, std::vector<SpectralObservable> families) {
  if (!hamiltonian.is_hermitian()) throw ValidationError("theory: Hamiltonian must be hermitian");
  Theory th = base_theory(hamiltonian.dim(), std::move(families));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian.matrix());
  const Matrix vecs = es.eigenvectors();
  const Eigen::VectorXd vals = es.eigenvalues();
  th.evolve = [vecs, vals](const Vector& v, double time) -> Vector {
    Vector c = vecs.adjoint() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -vals(k) * time);
    return vecs * c;
  };
  return th;
}

Theory nonlinear_theory(const NonlinearLaw& law, std::vector<SpectralObservable> families,
                        double dt) {
  Theory th = base_theory(law.dim, std::move(families));
  th.evolve = [law, dt](const Vector& v, double time) -> Vector {
    const double n = v.norm();
    if (!(n > 0.0)) return v;
    return n * evolve_nonlinear(StateVector(v / n, 1e-9), law, time, dt).amplitudes();
  };
  return th;
}

Theory random_theory(std::size_t dim, std::uint64_t seed) {
  Sampler sampler(seed);
  const Operator h = sampler.hermitian(dim);
  std::vector<SpectralObservable> families;
  const std::size_t count = sampler.integer(2, 3);
  for (std::size_t k = 0; k < count; ++k) families.push_back(sampler.observable(dim, 0));
  return linear_theory(h, std::move(families));
}

Theory gauge_transform(const Theory& theory, const GaugeMap& t) {
  if (t.map.dim() != theory.dim) throw ValidationError("gauge map has the wrong dimension");
  const FlagCheck check = verify_gauge_flags(t);
  if (!t.map.claims().norm_preserving || !t.map.claims().invertible || !check.passed()) {
    std::ostringstream os;
    os << "gauge map " << t.name << " failed flag verification (norm defect "
       << check.max_norm_defect << ", inverse defect " << check.max_inverse_defect << ")";
    throw ValidationError(os.str());
  }
  return transform_unchecked(theory, t);
}

double outcome_weight(const Theory& theory, const StateVector& psi,
                      const std::vector<MeasurementStep>& steps) {
  if (psi.dim() != theory.dim) throw ValidationError("outcome_weight: dimension mismatch");
  Vector v = theory.prepare(psi.amplitudes());
  for (const auto& step : steps) {
    if (step.family >= theory.families.size()) {
      throw std::out_of_range("outcome_weight: unknown projector family");
    }
    v = theory.evolve(v, step.time);
    v = theory.project(theory.families[step.family].projector(step.outcome), v);
  }
  return theory.readout(v).squaredNorm();
}

GaugeReport verify_gauge_equivalence(const Theory& theory, const GaugeMap& t,
                                     std::size_t samples, std::uint64_t seed) {
  GaugeReport report;
  report.map_name = t.name;
  report.samples = samples;
  report.flags = verify_gauge_flags(t, 200, seed);
  const Theory transformed = transform_unchecked(theory, t);

  Sampler sampler(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const StateVector psi = sampler.unit_vector(theory.dim);
    std::vector<MeasurementStep> chain(sampler.integer(1, 4));
    for (auto& step : chain) {
      step.time = sampler.uniform(0.0, 2.0);
      step.family = sampler.index(theory.families.size());
      step.outcome = sampler.index(theory.families[step.family].size());
    }
    const double original = outcome_weight(theory, psi, chain);
    const double gauged = outcome_weight(transformed, psi, chain);
    report.max_discrepancy = std::max(report.max_discrepancy, std::abs(original - gauged));
  }
  return report;
}

}  // namespace qcausal
