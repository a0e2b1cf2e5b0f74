#include "qcausal/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qcausal {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << expected << " vs " << got << ")";
    throw ValidationError(os.str());
  }
}

[[noreturn]] void zero_probability(const std::string& what, double p) {
  std::ostringstream os;
  os << what << ": conditioning on an outcome of probability " << p
     << " (below threshold); the conditional is undefined";
  throw ZeroProbabilityError(os.str(), p);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

// -------------------------------------------------------------- Instrument

Instrument::Instrument(std::string label, SpectralObservable observable,
                       std::vector<std::string> outcome_labels, std::optional<Region> region)
    : label_(std::move(label)),
      observable_(std::move(observable)),
      outcome_labels_(std::move(outcome_labels)),
      region_(std::move(region)) {
  if (outcome_labels_.empty()) {
    for (std::size_t k = 0; k < observable_.size(); ++k) {
      outcome_labels_.push_back(label_ + ":" + std::to_string(k));
    }
  }
  if (outcome_labels_.size() != observable_.size()) {
    throw ValidationError("instrument " + label_ + ": " + std::to_string(outcome_labels_.size()) +
                          " outcome labels for " + std::to_string(observable_.size()) +
                          " projectors");
  }
  std::set<std::string> seen(outcome_labels_.begin(), outcome_labels_.end());
  if (seen.size() != outcome_labels_.size()) {
    throw ValidationError("instrument " + label_ + ": outcome labels must be distinct");
  }
}

Instrument Instrument::trivial(std::string label, std::size_t dim) {
  return Instrument(std::move(label), SpectralObservable({1.0}, {Operator::identity(dim)}));
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const auto& [key, p] : outcomes) sum += p;
  return sum;
}

// ------------------------------------------------------ joint probabilities

double joint_probability(const DensityMatrix& rho0, const SpectralObservable& a,
                         const SpectralObservable& b, std::size_t i, std::size_t j) {
  require_dim(rho0.dim(), a.dim(), "joint_probability");
  require_dim(rho0.dim(), b.dim(), "joint_probability");
  const Matrix r = b.projector(j).matrix() * a.projector(i).matrix();
  return (r * rho0.matrix() * r.adjoint()).trace().real();
}

OutcomeDistribution joint_distribution(const DensityMatrix& rho0, const SpectralObservable& a,
                                       const SpectralObservable& b) {
  OutcomeDistribution out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out.outcomes[{i, j}] = joint_probability(rho0, a, b, i, j);
    }
  }
  return out;
}

DensityMatrix luders_update(const DensityMatrix& rho, const Operator& p, double threshold) {
  require_dim(rho.dim(), p.dim(), "luders_update");
  const double prob = rho.expectation(p);
  if (!(prob > threshold)) zero_probability("luders_update", prob);
  Matrix out = p.matrix() * rho.matrix() * p.matrix() / prob;
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(Operator(std::move(out)), 1e-10);
}

double pre_condition_probability(const DensityMatrix& rho0, const SpectralObservable& a,
                                 const SpectralObservable& b, std::size_t i, std::size_t j) {
  const double marginal = rho0.expectation(a.projector(i));
  if (!(marginal > kConditioningThreshold)) zero_probability("pre_condition_probability", marginal);
  return joint_probability(rho0, a, b, i, j) / marginal;
}

double post_condition_probability(const DensityMatrix& rho0, const SpectralObservable& a,
                                  const SpectralObservable& b, std::size_t i, std::size_t j) {
  const double numerator = joint_probability(rho0, a, b, i, j);
  double denominator = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) denominator += joint_probability(rho0, a, b, k, j);
  if (!(denominator > kConditioningThreshold)) {
    zero_probability("post_condition_probability", denominator);
  }
  return numerator / denominator;
}

// ------------------------------------------------------------- preparation

double outcome_probability(const PreparationProcedure& w, const Instrument& instrument,
                           std::size_t i) {
  return w.state.expectation(instrument.projector(i));
}

PreparationProcedure condition(const PreparationProcedure& w, const Instrument& instrument,
                               std::size_t i) {
  PreparationProcedure out{luders_update(w.state, instrument.projector(i)), w.history};
  out.history.push_back({instrument.label(), i});
  return out;
}

double max_cross_commutator(const Instrument& a, const Instrument& b) {
  double worst = 0.0;
  for (const Operator& p : a.observable().projectors()) {
    for (const Operator& q : b.observable().projectors()) {
      worst = std::max(worst, commutator_norm(p, q));
    }
  }
  return worst;
}

namespace {

void require_compatible(const Instrument& a, const Instrument& b, double norm) {
  if (!(norm < 1e-10)) {
    std::ostringstream os;
    os << "instruments " << a.label() << " and " << b.label()
       << " are not compatible (max commutator norm " << norm
       << "); the composition law is only asserted for compatible instruments";
    throw IncompatibleInstrumentsError(os.str(), norm);
  }
}

}  // namespace

Instrument conjunction(const Instrument& first, const Instrument& second) {
  require_compatible(first, second, max_cross_commutator(first, second));
  std::vector<double> values;
  std::vector<Operator> projectors;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < second.size(); ++j) {
      Matrix r = second.projector(j).matrix() * first.projector(i).matrix();
      r = 0.5 * (r + r.adjoint());
      projectors.emplace_back(std::move(r));
      values.push_back(static_cast<double>(values.size()));
      labels.push_back(first.outcome_labels()[i] + "&" + second.outcome_labels()[j]);
    }
  }
  return Instrument(first.label() + "&" + second.label(),
                    SpectralObservable(std::move(values), std::move(projectors), 1e-10),
                    std::move(labels));
}

CompositionReport verify_composition_law(const PreparationProcedure& w, const Instrument& first,
                                         const Instrument& second) {
  CompositionReport report;
  report.commutator_norm = max_cross_commutator(first, second);
  require_compatible(first, second, report.commutator_norm);
  const Instrument joint = conjunction(first, second);

  for (std::size_t i = 0; i < first.size(); ++i) {
    const double p_first = outcome_probability(w, first, i);
    for (std::size_t j = 0; j < second.size(); ++j) {
      CompositionEntry e{i, j};
      e.joint = outcome_probability(w, joint, i * second.size() + j);
      if (p_first > kConditioningThreshold) {
        e.conditioned = true;
        const PreparationProcedure after_first = condition(w, first, i);
        e.factorized = outcome_probability(after_first, second, j) * p_first;
        if (e.joint > kConditioningThreshold) {
          const PreparationProcedure sequential = condition(after_first, second, j);
          const PreparationProcedure direct = condition(w, joint, i * second.size() + j);
          e.state_discrepancy = max_abs(sequential.state.matrix() - direct.state.matrix());
        }
      }
      report.max_probability_discrepancy =
          std::max(report.max_probability_discrepancy, std::abs(e.joint - e.factorized));
      report.max_state_discrepancy = std::max(report.max_state_discrepancy, e.state_discrepancy);
      report.entries.push_back(e);
    }
  }
  return report;
}

// ---------------------------------------------------------- contextuality

std::size_t Coarsening::block_of(std::size_t fine_index) const {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (std::find(blocks[b].begin(), blocks[b].end(), fine_index) != blocks[b].end()) return b;
  }
  throw ValidationError("coarsening does not cover fine outcome " + std::to_string(fine_index));
}

namespace {

void validate_partition(const Coarsening& c, std::size_t fine_size) {
  std::vector<int> hits(fine_size, 0);
  for (const auto& block : c.blocks) {
    if (block.empty()) throw ValidationError("coarsening has an empty block");
    for (std::size_t k : block) {
      if (k >= fine_size) {
        throw ValidationError("coarsening refers to fine outcome " + std::to_string(k) +
                              " of " + std::to_string(fine_size));
      }
      ++hits[k];
    }
  }
  for (std::size_t k = 0; k < fine_size; ++k) {
    if (hits[k] != 1) {
      throw ValidationError("coarsening is not a partition: fine outcome " + std::to_string(k) +
                            " appears " + std::to_string(hits[k]) + " times");
    }
  }
}

}  // namespace

SpectralObservable coarsen(const SpectralObservable& fine, const Coarsening& coarsening) {
  validate_partition(coarsening, fine.size());
  std::vector<double> values;
  std::vector<Operator> projectors;
  for (const auto& block : coarsening.blocks) {
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(fine.dim()),
                              static_cast<Eigen::Index>(fine.dim()));
    double label = fine.eigenvalues()[block.front()];
    for (std::size_t k : block) {
      sum += fine.projector(k).matrix();
      label = std::min(label, fine.eigenvalues()[k]);
    }
    values.push_back(label);
    projectors.emplace_back(std::move(sum));
  }
  return SpectralObservable(std::move(values), std::move(projectors), 1e-10);
}

void validate_coarsening(const SpectralObservable& fine, const SpectralObservable& coarse,
                         const Coarsening& coarsening) {
  validate_partition(coarsening, fine.size());
  if (coarse.size() != coarsening.blocks.size() || coarse.dim() != fine.dim()) {
    throw ValidationError("coarse family does not match the coarsening partition");
  }
  for (std::size_t b = 0; b < coarsening.blocks.size(); ++b) {
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(fine.dim()),
                              static_cast<Eigen::Index>(fine.dim()));
    for (std::size_t k : coarsening.blocks[b]) sum += fine.projector(k).matrix();
    const double err = max_abs(sum - coarse.projector(b).matrix());
    if (err > 1e-10) {
      throw ValidationError("coarse projector " + std::to_string(b) +
                            " is not the merge of its fine block (deviation " +
                            std::to_string(err) + ")");
    }
  }
}

ContextualityReport contextuality_probe(const DensityMatrix& rho0,
                                        const SpectralObservable& earlier_fine,
                                        const SpectralObservable& earlier_coarse,
                                        const Coarsening& coarsening,
                                        const SpectralObservable& later, std::size_t i,
                                        std::size_t j, ConditioningMode mode) {
  validate_coarsening(earlier_fine, earlier_coarse, coarsening);
  const std::size_t block = coarsening.block_of(i);
  if (coarsening.blocks[block].size() != 1) {
    throw ValidationError("earlier outcome " + std::to_string(i) +
                          " is merged by the coarsening; its projector must be shared");
  }
  ContextualityReport r;
  if (mode == ConditioningMode::Post) {
    r.p_fine = post_condition_probability(rho0, earlier_fine, later, i, j);
    r.p_coarse = post_condition_probability(rho0, earlier_coarse, later, block, j);
  } else {
    r.p_fine = pre_condition_probability(rho0, earlier_fine, later, i, j);
    r.p_coarse = pre_condition_probability(rho0, earlier_coarse, later, block, j);
  }
  r.delta = r.p_fine - r.p_coarse;
  return r;
}

double sequence_probability(const StateVector& psi, const std::vector<Operator>& projectors) {
  Vector v = psi.amplitudes();
  for (auto it = projectors.rbegin(); it != projectors.rend(); ++it) {
    require_dim(psi.dim(), it->dim(), "sequence_probability");
    v = it->matrix() * v;
  }
  return v.squaredNorm();
}

}  // namespace qcausal
