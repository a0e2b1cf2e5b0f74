#include "qcausal/modified_born.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcausal/random.hpp"

namespace qcausal {

namespace {

std::string describe(const LatticeInterval& r) {
  std::ostringstream os;
  os << "{step " << r.time_step << ", sites " << r.first << ".." << r.last << "}";
  return os.str();
}

Operator number_operator(const LatticeModel& model, const std::vector<std::size_t>& sites) {
  Operator n = Operator::zero(model.dim());
  for (std::size_t s : sites) n = n + embed_local(pauli::N(), {s}, model.n_sites);
  return n;
}

Operator pauli_sum(const LatticeModel& model, const Operator& p,
                   const std::vector<std::size_t>& sites) {
  Operator out = Operator::zero(model.dim());
  for (std::size_t s : sites) out = out + embed_local(p, {s}, model.n_sites);
  return out;
}

/// <v|op|v> / <v|v>, zero for the zero vector.
double normalized_expectation(const Matrix& op, const Vector& v) {
  const double n2 = v.squaredNorm();
  return n2 > 0.0 ? v.dot(op * v).real() / n2 : 0.0;
}

/// exp(-i theta Z_O) is diagonal with phases exp(-i theta z(b)).
Eigen::VectorXd z_sum_diagonal(const LatticeModel& model, const std::vector<std::size_t>& sites) {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(model.dim()));
  for (std::size_t b = 0; b < model.dim(); ++b) {
    double z = 0.0;
    for (std::size_t s : sites) z += ((b >> (model.n_sites - 1 - s)) & 1U) ? -1.0 : 1.0;
    diag(static_cast<Eigen::Index>(b)) = z;
  }
  return diag;
}

NonlinearMap local_phase_map(const LatticeModel& model, const std::vector<std::size_t>& sites,
                             double lambda) {
  const Matrix n = number_operator(model, sites).matrix();
  auto fwd = [n, lambda](const Vector& v) -> Vector {
    return std::polar(1.0, lambda * normalized_expectation(n, v)) * v;
  };
  auto bwd = [n, lambda](const Vector& v) -> Vector {
    return std::polar(1.0, -lambda * normalized_expectation(n, v)) * v;
  };
  return NonlinearMap(model.dim(), fwd, {true, true}, bwd);
}

NonlinearMap local_twist_map(const LatticeModel& model, const std::vector<std::size_t>& sites,
                             double lambda) {
  const Matrix n = number_operator(model, sites).matrix();
  const Eigen::VectorXd z = z_sum_diagonal(model, sites);
  // The twist is diagonal, so it leaves <N_O> and hence its own angle intact.
  auto twist = [n, z](double sign, double lambda, const Vector& v) -> Vector {
    const double theta = sign * lambda * normalized_expectation(n, v);
    Vector out = v;
    for (Eigen::Index k = 0; k < out.size(); ++k) out(k) *= std::polar(1.0, -theta * z(k));
    return out;
  };
  return NonlinearMap(
      model.dim(), [twist, lambda](const Vector& v) { return twist(1.0, lambda, v); },
      {true, true}, [twist, lambda](const Vector& v) { return twist(-1.0, lambda, v); });
}

NonlinearMap global_coupled_map(const LatticeModel& model, double lambda) {
  std::vector<std::size_t> all(model.n_sites);
  for (std::size_t s = 0; s < model.n_sites; ++s) all[s] = s;
  const Matrix n = number_operator(model, all).matrix();
  const Eigen::SelfAdjointEigenSolver<Matrix> es(pauli_sum(model, pauli::X(), all).matrix());
  const Matrix vecs = es.eigenvectors();
  const Eigen::VectorXd vals = es.eigenvalues();
  auto fwd = [n, vecs, vals, lambda](const Vector& v) -> Vector {
    const double theta = lambda * normalized_expectation(n, v);
    Vector c = vecs.adjoint() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -theta * vals(k));
    return vecs * c;
  };
  return NonlinearMap(model.dim(), fwd, {true, false});
}

NonlinearMap local_unitary_map(const LatticeModel& model, const std::vector<std::size_t>& sites,
                               double lambda) {
  Matrix w(2, 2);
  w << std::cos(lambda), Complex(0.0, -std::sin(lambda)), Complex(0.0, -std::sin(lambda)),
      std::cos(lambda);
  Operator u = Operator::identity(model.dim());
  for (std::size_t s : sites) u = embed_local(Operator(w), {s}, model.n_sites) * u;
  return NonlinearMap::linear(u);
}

}  // namespace

NonlinearMap RegionOperatorAssignment::at(const LatticeInterval& region) const {
  model.validate(region);
  std::optional<NonlinearMap> b = assign ? assign(region) : std::nullopt;
  if (!b) {
    throw AssignmentError("family " + family_name + " assigns no operator to region " +
                          describe(region));
  }
  if (b->dim() != model.dim()) {
    throw AssignmentError("family " + family_name + " assigns an operator of the wrong dimension");
  }
  return *b;
}

std::vector<std::string> family_names() {
  return {"identity", "local-phase", "local-twist", "global-coupled", "local-unitary",
          "step-phase"};
}

RegionOperatorAssignment make_family(const std::string& name, const LatticeModel& model,
                                     double lambda) {
  if (model.n_sites == 0 || model.n_sites > 10) {
    throw ValidationError("lattice model must have between 1 and 10 sites");
  }
  RegionOperatorAssignment a{name, model, {}};
  if (name == "identity") {
    a.assign = [model](const LatticeInterval&) -> std::optional<NonlinearMap> {
      return NonlinearMap::identity(model.dim());
    };
  } else if (name == "local-phase") {
    a.assign = [model, lambda](const LatticeInterval& r) -> std::optional<NonlinearMap> {
      return local_phase_map(model, model.sites(r), lambda);
    };
  } else if (name == "local-twist") {
    a.assign = [model, lambda](const LatticeInterval& r) -> std::optional<NonlinearMap> {
      return local_twist_map(model, model.sites(r), lambda);
    };
  } else if (name == "global-coupled") {
    const NonlinearMap b = global_coupled_map(model, lambda);
    a.assign = [b](const LatticeInterval&) -> std::optional<NonlinearMap> { return b; };
  } else if (name == "local-unitary") {
    a.assign = [model, lambda](const LatticeInterval& r) -> std::optional<NonlinearMap> {
      return local_unitary_map(model, model.sites(r), lambda);
    };
  } else if (name == "step-phase") {
    a.assign = [model, lambda](const LatticeInterval& r) -> std::optional<NonlinearMap> {
      const Complex phase = std::polar(1.0, lambda * static_cast<double>(r.time_step + 1));
      return NonlinearMap::linear(phase * Operator::identity(model.dim()));
    };
  } else {
    throw AssignmentError("unknown region-operator family: " + name);
  }
  return a;
}

// ------------------------------------------------------------ translations

Operator translation_unitary(const LatticeModel& model, std::size_t shift) {
  const std::size_t n = model.n_sites;
  const std::size_t dim = model.dim();
  // S moves the content of site s to site s + shift; S A_s S^dagger = A_{s+shift}.
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    std::size_t image = 0;
    for (std::size_t site = 0; site < n; ++site) {
      const std::size_t bit = (b >> (n - 1 - site)) & 1U;
      const std::size_t target = (site + shift) % n;
      image |= bit << (n - 1 - target);
    }
    s(static_cast<Eigen::Index>(image), static_cast<Eigen::Index>(b)) = 1.0;
  }
  return Operator(s.adjoint());
}

LatticeInterval translate(const LatticeInterval& region, std::size_t shift, int steps,
                          const LatticeModel& model) {
  const std::size_t n = model.n_sites;
  LatticeInterval out{region.time_step + steps, (region.first + shift) % n,
                      (region.last + shift) % n};
  model.validate(out);
  return out;
}

// ------------------------------------------------------- modified sequence

ModifiedSequenceResult evaluate_modified_sequence(const StateVector& psi,
                                                  const std::vector<MeasurementEvent>& events,
                                                  const RegionOperatorAssignment& assignment) {
  const LatticeModel& model = assignment.model;
  if (psi.dim() != model.dim()) {
    throw ValidationError("modified sequence: state dimension does not match the chain");
  }
  std::vector<Region> regions;
  std::vector<NonlinearMap> maps;
  regions.reserve(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    const auto sites = model.sites(e.region);
    if (e.projector.dim() != model.dim() || !e.projector.is_projector(1e-10)) {
      throw ValidationError("event " + std::to_string(k) + " does not carry a projector");
    }
    if (!supported_on(e.projector, sites, model.n_sites, 1e-10)) {
      throw ValidationError("event " + std::to_string(k) + ": projector is not localized in " +
                            describe(e.region));
    }
    regions.emplace_back(e.region);
    maps.push_back(assignment.at(e.region));
  }

  ModifiedSequenceResult result;
  result.order = causal_sort(regions, &model);
  result.modified.assign(events.size(), false);
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = 0; j < events.size(); ++j) {
      if (i != j && classify_regions(events[j].region, events[i].region, model) ==
                        CausalRelation::TimeLikeFuture) {
        result.modified[i] = true;
        break;
      }
    }
  }

  Vector v = psi.amplitudes();
  for (std::size_t idx : result.order) {
    if (result.modified[idx]) v = maps[idx](v);
    v = events[idx].projector.matrix() * v;
  }
  result.probability = v.squaredNorm();
  return result;
}

double modified_sequence_probability(const StateVector& psi,
                                     const std::vector<MeasurementEvent>& events,
                                     const RegionOperatorAssignment& assignment) {
  return evaluate_modified_sequence(psi, events, assignment).probability;
}

NormalizationAudit audit_normalization(const StateVector& psi,
                                       const std::vector<LatticeInterval>& regions,
                                       const std::vector<SpectralObservable>& local_families,
                                       const RegionOperatorAssignment& assignment) {
  if (regions.size() != local_families.size()) {
    throw ValidationError("normalization audit: one family per region is required");
  }
  const LatticeModel& model = assignment.model;
  std::vector<std::vector<Operator>> embedded(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto sites = model.sites(regions[r]);
    for (const Operator& p : local_families[r].projectors()) {
      embedded[r].push_back(embed_local(p, sites, model.n_sites));
    }
  }

  NormalizationAudit audit;
  std::vector<std::size_t> tuple(regions.size(), 0);
  while (true) {
    std::vector<MeasurementEvent> events;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      events.push_back({regions[r], embedded[r][tuple[r]]});
    }
    audit.tuples.push_back(tuple);
    audit.raw.push_back(modified_sequence_probability(psi, events, assignment));
    audit.raw_total += audit.raw.back();

    std::size_t r = 0;
    while (r < tuple.size() && ++tuple[r] == embedded[r].size()) tuple[r++] = 0;
    if (r == tuple.size()) break;
  }
  for (double p : audit.raw) {
    audit.normalized.push_back(audit.raw_total > 0.0 ? p / audit.raw_total : 0.0);
  }
  audit.deviation = audit.raw_total - 1.0;
  return audit;
}

// ------------------------------------------------------------- constraints

double ray_distance(const Vector& a, const Vector& b) {
  const Complex overlap = b.dot(a);
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a - phase * b).norm();
}

namespace {

constexpr std::size_t kMaxWitnesses = 5;

void record(ConstraintReport& report, const Vector& lhs, const Vector& rhs,
            const std::string& what) {
  const double residual = (lhs - rhs).norm();
  report.max_residual = std::max(report.max_residual, residual);
  report.max_ray_residual = std::max(report.max_ray_residual, ray_distance(lhs, rhs));
  if (residual >= report.tolerance && report.witnesses.size() < kMaxWitnesses) {
    report.witnesses.push_back({what, residual});
  }
}

/// Random projector of rank in [1, 2^k - 1] on the region's sites.
Operator local_projector(Sampler& sampler, const LatticeModel& model,
                         const std::vector<std::size_t>& sites) {
  const std::size_t local_dim = std::size_t{1} << sites.size();
  const std::size_t rank = sampler.integer(1, local_dim - 1);
  return embed_local(sampler.projector(local_dim, rank), sites, model.n_sites);
}

}  // namespace

ConstraintReport check_commutation_constraint(const RegionOperatorAssignment& assignment,
                                              std::size_t samples, std::uint64_t seed) {
  const LatticeModel& model = assignment.model;
  ConstraintReport report;
  report.constraint = 1;
  report.samples = samples;

  const auto regions = model.all_regions();
  std::vector<std::pair<LatticeInterval, LatticeInterval>> pairs;
  for (const auto& a : regions)
    for (const auto& b : regions)
      if (classify_regions(a, b, model) == CausalRelation::SpaceLike) pairs.emplace_back(a, b);
  if (pairs.empty()) {
    report.samples = 0;
    report.note = "model has no space-like region pairs";
    return report;
  }

  Sampler sampler(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const auto& [o, o2] = pairs[sampler.index(pairs.size())];
    const Vector psi = sampler.unit_vector(model.dim()).amplitudes();
    const NonlinearMap b = assignment.at(o);
    const NonlinearMap b2 = assignment.at(o2);
    record(report, b(b2(psi)), b2(b(psi)),
           "B_O B_O' vs B_O' B_O, O=" + describe(o) + " O'=" + describe(o2));

    const Operator p = local_projector(sampler, model, model.sites(o2));
    record(report, b(p.apply(psi)), p.apply(b(psi)),
           "B_O P vs P B_O with P in A(O'), O=" + describe(o) + " O'=" + describe(o2));
  }
  return report;
}

ConstraintReport check_restriction_constraint(const RegionOperatorAssignment& assignment,
                                              std::size_t samples, std::uint64_t seed) {
  const LatticeModel& model = assignment.model;
  ConstraintReport report;
  report.constraint = 2;
  report.samples = samples;

  const auto regions = model.all_regions();
  std::vector<std::pair<LatticeInterval, LatticeInterval>> nested;
  for (const auto& inner : regions) {
    const auto si = model.sites(inner);
    for (const auto& outer : regions) {
      if (inner.time_step != outer.time_step || inner == outer) continue;
      const auto so = model.sites(outer);
      const bool contained = std::all_of(si.begin(), si.end(), [&](std::size_t s) {
        return std::find(so.begin(), so.end(), s) != so.end();
      });
      if (contained && so.size() > si.size()) nested.emplace_back(inner, outer);
    }
  }
  if (nested.empty()) {
    report.samples = 0;
    report.note = "model has no nested region pairs";
    return report;
  }

  Sampler sampler(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const auto& [inner, outer] = nested[sampler.index(nested.size())];
    const Vector psi = sampler.unit_vector(model.dim()).amplitudes();
    const Operator p = local_projector(sampler, model, model.sites(inner));
    record(report, p.apply(assignment.at(outer)(psi)), p.apply(assignment.at(inner)(psi)),
           "P B_O' vs P B_O, O=" + describe(inner) + " O'=" + describe(outer));
  }
  return report;
}

ConstraintReport check_covariance_constraint(const RegionOperatorAssignment& assignment,
                                             std::size_t samples, std::uint64_t seed) {
  const LatticeModel& model = assignment.model;
  if (!model.periodic) {
    throw ValidationError(
        "covariance check needs a periodic lattice; translations would leave the chain");
  }
  ConstraintReport report;
  report.constraint = 3;
  report.samples = samples;
  report.note =
      "group elements sampled: lattice translations and time-step shifts; boosts have no "
      "unitary representation on the finite chain and are not checked";

  const auto regions = model.all_regions();
  Sampler sampler(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const LatticeInterval o = regions[sampler.index(regions.size())];
    const std::size_t shift = sampler.index(model.n_sites);
    const int lo = -o.time_step;
    const int hi = static_cast<int>(model.n_steps) - 1 - o.time_step;
    const int steps = lo + static_cast<int>(sampler.index(static_cast<std::size_t>(hi - lo + 1)));
    const LatticeInterval moved = translate(o, shift, steps, model);
    // Time shifts act trivially: algebras are identified across steps.
    const Operator u = translation_unitary(model, shift);
    const Vector psi = sampler.unit_vector(model.dim()).amplitudes();
    const Vector lhs = assignment.at(moved)(psi);
    const Vector rhs = u.adjoint().apply(assignment.at(o)(u.apply(psi)));
    std::ostringstream what;
    what << "B_gO vs U^dagger B_O U, O=" << describe(o) << " shift=" << shift
         << " steps=" << steps;
    record(report, lhs, rhs, what.str());
  }
  return report;
}

FamilyVerdict verify_family(const RegionOperatorAssignment& assignment, std::size_t samples,
                            std::uint64_t seed) {
  return {assignment,
          {check_commutation_constraint(assignment, samples, seed),
           check_restriction_constraint(assignment, samples, seed),
           check_covariance_constraint(assignment, samples, seed)}};
}

std::vector<FamilyVerdict> shipped_families(const LatticeModel& model, double lambda,
                                            std::size_t samples, std::uint64_t seed) {
  std::vector<FamilyVerdict> out;
  for (const auto& name : family_names()) {
    out.push_back(verify_family(make_family(name, model, lambda), samples, seed));
  }
  return out;
}

}  // namespace qcausal
