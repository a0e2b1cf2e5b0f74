#include "qcausal/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcausal/random.hpp"

namespace qcausal {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------- Operator

Operator::Operator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    std::ostringstream os;
    os << "operator must be square and non-empty, got " << m_.rows() << "x" << m_.cols();
    throw ValidationError(os.str());
  }
}

Operator Operator::identity(std::size_t dim) {
  return Operator(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

Operator Operator::zero(std::size_t dim) {
  return Operator(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

Operator Operator::outer(const Vector& v) { return Operator(v * v.adjoint()); }

bool Operator::is_hermitian(double tol) const { return max_asymmetry(m_) <= tol; }

bool Operator::is_unitary(double tol) const {
  return max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())) <= tol;
}

bool Operator::is_projector(double tol) const {
  return is_hermitian(tol) && max_abs(m_ * m_ - m_) <= tol;
}

Vector Operator::apply(const Vector& v) const {
  require_same_dim(dim(), static_cast<std::size_t>(v.size()), "Operator::apply");
  return m_ * v;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "operator product");
  return Operator(a.m_ * b.m_);
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "operator sum");
  return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "operator difference");
  return Operator(a.m_ - b.m_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.m_); }

double max_asymmetry(const Matrix& m) { return max_abs(m - m.adjoint()); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double commutator_norm(const Operator& a, const Operator& b) {
  return commutator(a, b).matrix().norm();
}

// ------------------------------------------------------------- StateVector

StateVector::StateVector(Vector amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw ValidationError("state vector must be non-empty");
  const double n = amps_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "state vector must have unit norm, got " << n;
    throw ValidationError(os.str());
  }
}

StateVector StateVector::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("cannot normalize a zero vector");
  return StateVector(v / n);
}

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw ValidationError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return StateVector(std::move(v));
}

double StateVector::expectation(const Operator& op) const {
  return amps_.dot(op.apply(amps_)).real();
}

// ----------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Operator op, double tol) : op_(std::move(op)) {
  const double asym = max_asymmetry(op_.matrix());
  if (asym > tol) {
    std::ostringstream os;
    os << "density matrix must be hermitian (max asymmetry " << asym << ")";
    throw ValidationError(os.str());
  }
  const Complex tr = op_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix must have unit trace, got " << tr.real();
    throw ValidationError(os.str());
  }
  const Matrix herm = 0.5 * (op_.matrix() + op_.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    std::ostringstream os;
    os << "density matrix must be positive semidefinite (min eigenvalue "
       << es.eigenvalues().minCoeff() << ")";
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(Operator::outer(psi.amplitudes()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(Complex(1.0 / static_cast<double>(dim), 0.0) * Operator::identity(dim));
}

double DensityMatrix::expectation(const Operator& o) const {
  require_same_dim(dim(), o.dim(), "DensityMatrix::expectation");
  return (op_.matrix() * o.matrix()).trace().real();
}

// ------------------------------------------------------ SpectralObservable

SpectralObservable::SpectralObservable(std::vector<double> eigenvalues,
                                       std::vector<Operator> projectors, double tol)
    : eigenvalues_(std::move(eigenvalues)), projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw ValidationError("observable needs at least one projector");
  if (eigenvalues_.size() != projectors_.size()) {
    throw ValidationError("observable: eigenvalue count differs from projector count");
  }
  const std::size_t d = projectors_.front().dim();
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const Operator& p = projectors_[i];
    require_same_dim(d, p.dim(), "observable projector");
    if (!p.is_projector(tol)) {
      throw ValidationError("observable: member " + std::to_string(i) + " is not a projector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (max_abs(p.matrix() * projectors_[j].matrix()) > tol) {
        throw ValidationError("observable: projectors " + std::to_string(j) + " and " +
                              std::to_string(i) + " are not orthogonal");
      }
      if (std::abs(eigenvalues_[i] - eigenvalues_[j]) <= 1e-9) {
        throw ValidationError("observable: eigenvalues " + std::to_string(j) + " and " +
                              std::to_string(i) + " are not distinct");
      }
    }
    sum += p.matrix();
  }
  if (max_abs(sum - Matrix::Identity(sum.rows(), sum.cols())) > tol) {
    throw ValidationError("observable: projectors do not sum to the identity");
  }
}

SpectralObservable SpectralObservable::from_projectors(std::vector<Operator> projectors,
                                                       double tol) {
  std::vector<double> labels(projectors.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<double>(i);
  return SpectralObservable(std::move(labels), std::move(projectors), tol);
}

const Operator& SpectralObservable::projector(std::size_t i) const {
  if (i >= projectors_.size()) {
    throw std::out_of_range("outcome index " + std::to_string(i) + " out of range (" +
                            std::to_string(projectors_.size()) + " outcomes)");
  }
  return projectors_[i];
}

Operator SpectralObservable::reconstruct() const {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < size(); ++i) m += eigenvalues_[i] * projectors_[i].matrix();
  return Operator(std::move(m));
}

SpectralObservable spectral_decompose(const Operator& m, double merge_tol) {
  const Matrix& a = m.matrix();
  const Eigen::MatrixXd diff = (a - a.adjoint()).cwiseAbs();
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  const double worst = diff.maxCoeff(&r, &c);
  if (worst > kStructureTol) {
    std::ostringstream os;
    os << "spectral_decompose: operator is not hermitian, max asymmetry " << worst
       << " at entry (" << r << ", " << c << ")";
    throw ValidationError(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  const Eigen::VectorXd& vals = es.eigenvalues();  // ascending
  const Matrix& vecs = es.eigenvectors();

  std::vector<double> eigenvalues;
  std::vector<Operator> projectors;
  Eigen::Index hi = vals.size() - 1;
  while (hi >= 0) {
    Eigen::Index lo = hi;
    while (lo > 0 && vals(hi) - vals(lo - 1) <= merge_tol) --lo;
    const Matrix block = vecs.middleCols(lo, hi - lo + 1);
    eigenvalues.push_back(vals.segment(lo, hi - lo + 1).mean());
    projectors.emplace_back(block * block.adjoint());
    hi = lo - 1;
  }
  return SpectralObservable(std::move(eigenvalues), std::move(projectors), 1e-10);
}

// ------------------------------------------------------------------ tensor

Operator tensor(const Operator& a, const Operator& b) {
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return Operator(std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const Eigen::Index da = a.amplitudes().size();
  const Eigen::Index db = b.amplitudes().size();
  Vector out(da * db);
  for (Eigen::Index i = 0; i < da; ++i) out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return StateVector::normalized(out);
}

Operator embed_local(const Operator& m, std::span<const std::size_t> sites, std::size_t n_sites) {
  const std::size_t k = sites.size();
  if (n_sites == 0 || n_sites > 20) throw ValidationError("embed_local: unsupported chain length");
  std::vector<bool> used(n_sites, false);
  for (std::size_t s : sites) {
    if (s >= n_sites) {
      throw std::out_of_range("embed_local: site " + std::to_string(s) + " out of range for " +
                              std::to_string(n_sites) + " sites");
    }
    if (used[s]) throw ValidationError("embed_local: duplicate site " + std::to_string(s));
    used[s] = true;
  }
  if (m.dim() != (std::size_t{1} << k)) {
    throw ValidationError("embed_local: operator dimension " + std::to_string(m.dim()) +
                          " does not match 2^" + std::to_string(k));
  }

  const std::size_t dim = std::size_t{1} << n_sites;
  auto bit_of = [n_sites](std::size_t index, std::size_t site) {
    return (index >> (n_sites - 1 - site)) & 1U;
  };
  // Local index of the listed sites, first listed site most significant.
  auto local_index = [&](std::size_t index) {
    std::size_t li = 0;
    for (std::size_t s : sites) li = (li << 1) | bit_of(index, s);
    return li;
  };
  std::size_t rest_mask = 0;
  for (std::size_t s = 0; s < n_sites; ++s) {
    if (!used[s]) rest_mask |= std::size_t{1} << (n_sites - 1 - s);
  }

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & rest_mask) != (c & rest_mask)) continue;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m.matrix()(static_cast<Eigen::Index>(local_index(r)),
                     static_cast<Eigen::Index>(local_index(c)));
    }
  }
  return Operator(std::move(out));
}

Operator embed_local(const Operator& m, std::initializer_list<std::size_t> sites,
                     std::size_t n_sites) {
  return embed_local(m, std::span<const std::size_t>(sites.begin(), sites.size()), n_sites);
}

bool supported_on(const Operator& op, std::span<const std::size_t> sites, std::size_t n_sites,
                  double tol) {
  if (op.dim() != (std::size_t{1} << n_sites)) return false;
  const Operator locals[] = {pauli::X(), pauli::Y(), pauli::Z()};
  for (std::size_t s = 0; s < n_sites; ++s) {
    if (std::find(sites.begin(), sites.end(), s) != sites.end()) continue;
    for (const Operator& p : locals) {
      if (max_abs(commutator(op, embed_local(p, {s}, n_sites)).matrix()) > tol) return false;
    }
  }
  return true;
}

namespace pauli {

Operator I() { return Operator::identity(2); }

Operator X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(m);
}

Operator Y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return Operator(m);
}

Operator Z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(m);
}

Operator N() {
  Matrix m(2, 2);
  m << 0, 0, 0, 1;
  return Operator(m);
}

}  // namespace pauli

// ------------------------------------------------------------ NonlinearMap

NonlinearMap::NonlinearMap(std::size_t dim, Fn apply, Claims claims, Fn inverse)
    : dim_(dim), apply_(std::move(apply)), inverse_(std::move(inverse)), claims_(claims) {
  if (dim_ == 0) throw ValidationError("nonlinear map dimension must be positive");
  if (!apply_) throw ValidationError("nonlinear map needs an apply function");
}

NonlinearMap NonlinearMap::identity(std::size_t dim) {
  auto id = [](const Vector& v) { return v; };
  return NonlinearMap(dim, id, {true, true}, id);
}

NonlinearMap NonlinearMap::linear(const Operator& u) {
  const Matrix m = u.matrix();
  const bool unitary = u.is_unitary(1e-10);
  Fn inverse;
  if (unitary) {
    const Matrix inv = m.adjoint();
    inverse = [inv](const Vector& v) -> Vector { return inv * v; };
  }
  return NonlinearMap(
      u.dim(), [m](const Vector& v) -> Vector { return m * v; }, {unitary, unitary}, inverse);
}

Vector NonlinearMap::operator()(const Vector& v) const {
  require_same_dim(dim_, static_cast<std::size_t>(v.size()), "NonlinearMap");
  return apply_(v);
}

Vector NonlinearMap::inverse(const Vector& v) const {
  if (!inverse_) throw ValidationError("nonlinear map has no inverse");
  require_same_dim(dim_, static_cast<std::size_t>(v.size()), "NonlinearMap inverse");
  return inverse_(v);
}

NonlinearMap NonlinearMap::inverted() const {
  if (!inverse_) throw ValidationError("nonlinear map has no inverse");
  return NonlinearMap(dim_, inverse_, claims_, apply_);
}

FlagCheck verify_flags(const NonlinearMap& map, std::size_t samples, std::uint64_t seed) {
  FlagCheck check;
  check.samples = samples;
  if (map.claims().invertible && !map.has_inverse()) check.invertible_ok = false;
  Sampler sampler(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const Vector psi = sampler.unit_vector(map.dim()).amplitudes();
    const Vector image = map(psi);
    if (map.claims().norm_preserving) {
      check.max_norm_defect = std::max(check.max_norm_defect, std::abs(image.norm() - 1.0));
    }
    if (map.claims().invertible && map.has_inverse()) {
      check.max_inverse_defect =
          std::max(check.max_inverse_defect, (map.inverse(image) - psi).norm());
    }
  }
  if (check.max_norm_defect > 1e-10) check.norm_preserving_ok = false;
  if (check.max_inverse_defect > 1e-9) check.invertible_ok = false;
  return check;
}

}  // namespace qcausal
