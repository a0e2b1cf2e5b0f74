#pragma once

// Finite-dimensional complex Hilbert-space kernel: operators, states,
// spectral decompositions and qubit-chain tensor bookkeeping.
//
// Basis convention: computational basis, left factor major. For a chain of
// n qubits, site 0 is the most significant bit of the basis index.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcausal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default tolerance for structural checks (hermiticity, unitarity, norms).
inline constexpr double kStructureTol = 1e-12;
/// Default merge tolerance for nearly degenerate eigenvalues.
inline constexpr double kEigenMergeTol = 1e-8;

/// Raised when a value violates the invariants of its type.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense square operator. The certified properties are computed on demand.
class Operator {
 public:
  explicit Operator(Matrix m);

  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim);
  /// |v><v| for an arbitrary (not necessarily normalized) vector.
  static Operator outer(const Vector& v);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  bool is_hermitian(double tol = kStructureTol) const;
  bool is_unitary(double tol = kStructureTol) const;
  bool is_projector(double tol = kStructureTol) const;

  Operator adjoint() const { return Operator(m_.adjoint()); }
  Complex trace() const { return m_.trace(); }
  Vector apply(const Vector& v) const;

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  Matrix m_;
};

/// Largest |M_ij - conj(M_ji)|.
double max_asymmetry(const Matrix& m);
/// Frobenius norm of AB - BA.
double commutator_norm(const Operator& a, const Operator& b);
Operator commutator(const Operator& a, const Operator& b);

/// Unit vector (Euclidean norm 1 within kStructureTol).
class StateVector {
 public:
  explicit StateVector(Vector amplitudes, double tol = kStructureTol);

  static StateVector normalized(const Vector& v);
  static StateVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t k) const { return amps_(static_cast<Eigen::Index>(k)); }

  double expectation(const Operator& op) const;

 private:
  Vector amps_;
};

/// Hermitian, positive semidefinite (min eigenvalue >= -1e-10), unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator op, double tol = kStructureTol);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return op_.dim(); }
  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

  /// Re Tr(rho O).
  double expectation(const Operator& o) const;

 private:
  Operator op_;
};

/// A = sum_i lambda_i P_i with a complete family of orthogonal projectors.
class SpectralObservable {
 public:
  SpectralObservable(std::vector<double> eigenvalues, std::vector<Operator> projectors,
                     double tol = kStructureTol);

  /// Labels the outcomes 0, 1, ..., k-1.
  static SpectralObservable from_projectors(std::vector<Operator> projectors,
                                            double tol = kStructureTol);

  std::size_t size() const { return projectors_.size(); }
  std::size_t dim() const { return projectors_.front().dim(); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<Operator>& projectors() const { return projectors_; }
  const Operator& projector(std::size_t i) const;
  /// Reassembled sum_i lambda_i P_i.
  Operator reconstruct() const;

 private:
  std::vector<double> eigenvalues_;
  std::vector<Operator> projectors_;
};

/// Spectral decomposition of a Hermitian operator, eigenvalues descending.
/// Eigenvalues closer than merge_tol share one projector.
SpectralObservable spectral_decompose(const Operator& m, double merge_tol = kEigenMergeTol);

/// Kronecker product, left factor major.
Operator tensor(const Operator& a, const Operator& b);
StateVector tensor(const StateVector& a, const StateVector& b);

/// Extends an operator on the listed qubit sites (in the listed order) by the
/// identity on the remaining sites of an n_sites chain.
Operator embed_local(const Operator& m, std::span<const std::size_t> sites, std::size_t n_sites);
Operator embed_local(const Operator& m, std::initializer_list<std::size_t> sites,
                     std::size_t n_sites);

/// True when op acts as the identity on every site outside `sites`.
bool supported_on(const Operator& op, std::span<const std::size_t> sites, std::size_t n_sites,
                  double tol = kStructureTol);

namespace pauli {
Operator I();
Operator X();
Operator Y();
Operator Z();
/// |1><1|, the single-site number operator.
Operator N();
}  // namespace pauli

/// A (possibly nonlinear) transformation of state vectors. The claimed
/// properties are checked by verify_flags, never assumed.
struct MapClaims {
  bool norm_preserving = false;
  bool invertible = false;
};

class NonlinearMap {
 public:
  using Fn = std::function<Vector(const Vector&)>;
  using Claims = MapClaims;

  NonlinearMap(std::size_t dim, Fn apply, Claims claims = {}, Fn inverse = {});

  static NonlinearMap identity(std::size_t dim);
  static NonlinearMap linear(const Operator& u);

  std::size_t dim() const { return dim_; }
  const Claims& claims() const { return claims_; }
  bool has_inverse() const { return static_cast<bool>(inverse_); }

  Vector operator()(const Vector& v) const;
  Vector inverse(const Vector& v) const;
  /// The map with apply and inverse swapped; requires an inverse.
  NonlinearMap inverted() const;

 private:
  std::size_t dim_;
  Fn apply_;
  Fn inverse_;
  Claims claims_;
};

struct FlagCheck {
  std::size_t samples = 0;
  double max_norm_defect = 0.0;
  double max_inverse_defect = 0.0;
  bool norm_preserving_ok = true;
  bool invertible_ok = true;

  bool passed() const { return norm_preserving_ok && invertible_ok; }
};

/// Samples pseudo-random unit vectors and checks every claimed property:
/// norm preservation within 1e-10 and T^-1(T(psi)) = psi within 1e-9.
FlagCheck verify_flags(const NonlinearMap& map, std::size_t samples = 1000,
                       std::uint64_t seed = 0);

}  // namespace qcausal
