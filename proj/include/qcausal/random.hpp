#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "qcausal/hilbert.hpp"

namespace qcausal {

/// Seedable source of random states, operators and observables.
/// All artifact randomness flows through this type (default seed 0).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform(double lo, double hi);
  double normal();
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);
  /// Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi);

  Vector gaussian_vector(std::size_t dim);
  StateVector unit_vector(std::size_t dim);
  /// Ginibre-induced mixed state GG^dagger / Tr.
  DensityMatrix density_matrix(std::size_t dim);
  Operator hermitian(std::size_t dim);
  /// Haar-like unitary from the QR decomposition of a Ginibre matrix.
  Operator unitary(std::size_t dim);
  /// Orthogonal projector of the given rank onto a random subspace.
  Operator projector(std::size_t dim, std::size_t rank);
  /// Random complete projector family with `outcomes` members, each of
  /// rank >= 1, in a random basis. outcomes == 0 picks a count in [1, dim].
  SpectralObservable observable(std::size_t dim, std::size_t outcomes = 0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcausal
