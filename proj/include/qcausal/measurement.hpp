#pragma once

// Probability calculus of successive projective (Lueders) measurements:
// joint and conditional probabilities, conditioning of preparations, the
// composition law for compatible instruments, and contextuality probes.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcausal/hilbert.hpp"
#include "qcausal/spacetime.hpp"

namespace qcausal {

/// Conditioning below this probability is refused.
inline constexpr double kConditioningThreshold = 1e-12;
/// Probability comparison tolerance.
inline constexpr double kProbabilityTol = 1e-10;

/// Conditioning on an outcome whose probability is (numerically) zero.
class ZeroProbabilityError : public std::runtime_error {
 public:
  ZeroProbabilityError(const std::string& what, double probability)
      : std::runtime_error(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

/// Two instruments whose projectors fail to commute.
class IncompatibleInstrumentsError : public std::runtime_error {
 public:
  IncompatibleInstrumentsError(const std::string& what, double norm)
      : std::runtime_error(what), norm_(norm) {}
  double commutator_norm() const { return norm_; }

 private:
  double norm_;
};

class Instrument {
 public:
  /// Empty outcome_labels are generated as "<label>:<k>".
  Instrument(std::string label, SpectralObservable observable,
             std::vector<std::string> outcome_labels = {}, std::optional<Region> region = {});

  const std::string& label() const { return label_; }
  const SpectralObservable& observable() const { return observable_; }
  const std::vector<std::string>& outcome_labels() const { return outcome_labels_; }
  const std::optional<Region>& region() const { return region_; }
  std::size_t size() const { return observable_.size(); }
  const Operator& projector(std::size_t i) const { return observable_.projector(i); }

  /// Single-outcome instrument whose only projector is the identity.
  static Instrument trivial(std::string label, std::size_t dim);

 private:
  std::string label_;
  SpectralObservable observable_;
  std::vector<std::string> outcome_labels_;
  std::optional<Region> region_;
};

struct HistoryRecord {
  std::string instrument;
  std::size_t outcome = 0;
};

/// A state together with the conditioning steps that produced it.
struct PreparationProcedure {
  DensityMatrix state;
  std::vector<HistoryRecord> history;
};

struct OutcomeDistribution {
  std::map<std::vector<std::size_t>, double> outcomes;
  double total() const;
};

/// Tr(Q_j P_i rho P_i Q_j), A measured first.
double joint_probability(const DensityMatrix& rho0, const SpectralObservable& a,
                         const SpectralObservable& b, std::size_t i, std::size_t j);
OutcomeDistribution joint_distribution(const DensityMatrix& rho0, const SpectralObservable& a,
                                       const SpectralObservable& b);

/// P rho P / Tr(P rho).
DensityMatrix luders_update(const DensityMatrix& rho, const Operator& p,
                            double threshold = kConditioningThreshold);

/// P(j | i) = Tr(Q_j P_i rho P_i Q_j) / Tr(P_i rho): later outcome given earlier.
double pre_condition_probability(const DensityMatrix& rho0, const SpectralObservable& a,
                                 const SpectralObservable& b, std::size_t i, std::size_t j);

/// P(i | j) = P(i, j) / sum_k P(k, j): earlier outcome given later. The sum
/// runs over the outcomes of the earlier observable a.
double post_condition_probability(const DensityMatrix& rho0, const SpectralObservable& a,
                                  const SpectralObservable& b, std::size_t i, std::size_t j);

/// Tr(P_i rho) under the procedure's current state.
double outcome_probability(const PreparationProcedure& w, const Instrument& instrument,
                           std::size_t i);

/// Indirect preparation: Lueders update on outcome i plus a history record.
PreparationProcedure condition(const PreparationProcedure& w, const Instrument& instrument,
                               std::size_t i);

/// Largest Frobenius norm of [P_i, Q_j] over both projector families.
double max_cross_commutator(const Instrument& a, const Instrument& b);

/// Joint instrument with projectors Q_j P_i, outcome index i * |J| + j.
/// Requires compatible instruments.
Instrument conjunction(const Instrument& first, const Instrument& second);

struct CompositionEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double joint = 0.0;        // P^{I and J}_{ij}(W)
  double factorized = 0.0;   // P^J_j(pi^I_i W) P^I_i(W)
  double state_discrepancy = 0.0;
  bool conditioned = false;  // false when P^I_i(W) is below the threshold
};

struct CompositionReport {
  std::vector<CompositionEntry> entries;
  double max_probability_discrepancy = 0.0;
  double max_state_discrepancy = 0.0;
  double commutator_norm = 0.0;

  bool passed(double tol = kProbabilityTol) const {
    return max_probability_discrepancy < tol && max_state_discrepancy < tol;
  }
};

/// Checks P^{I and J}_{ij}(W) = P^J_j(pi^I_i W) P^I_i(W) and
/// pi^{I and J}_{ij} = pi^J_j pi^I_i for every outcome pair. Throws
/// IncompatibleInstrumentsError when the commutator norm reaches 1e-10.
CompositionReport verify_composition_law(const PreparationProcedure& w, const Instrument& first,
                                         const Instrument& second);

/// Partition of fine outcome indices; block k becomes coarse outcome k.
struct Coarsening {
  std::vector<std::vector<std::size_t>> blocks;

  std::size_t block_of(std::size_t fine_index) const;
};

/// Merges projectors (and takes the lowest eigenvalue label of each block).
SpectralObservable coarsen(const SpectralObservable& fine, const Coarsening& coarsening);

/// Throws ValidationError unless `coarse` equals the merge of `fine` under
/// `coarsening`.
void validate_coarsening(const SpectralObservable& fine, const SpectralObservable& coarse,
                         const Coarsening& coarsening);

enum class ConditioningMode { Post, Pre };

struct ContextualityReport {
  double p_fine = 0.0;
  double p_coarse = 0.0;
  double delta = 0.0;
};

/// Evaluates a conditional probability twice, once with the earlier
/// measurement's fine projector family and once with its coarsening. The
/// earlier outcome `i` (a fine index) must sit alone in its block so its
/// projector is shared by both families; `j` is the later outcome.
///
/// Post mode computes P(i | j), whose normalisation sums over the whole
/// earlier family and therefore sees the other projectors. Pre mode computes
/// P(j | i), which never does.
ContextualityReport contextuality_probe(const DensityMatrix& rho0,
                                        const SpectralObservable& earlier_fine,
                                        const SpectralObservable& earlier_coarse,
                                        const Coarsening& coarsening,
                                        const SpectralObservable& later, std::size_t i,
                                        std::size_t j,
                                        ConditioningMode mode = ConditioningMode::Post);

/// ||P_1 P_2 ... P_n psi||^2; the last projector acts first.
double sequence_probability(const StateVector& psi, const std::vector<Operator>& projectors);

}  // namespace qcausal
