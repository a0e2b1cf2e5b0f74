#include "qcausal/random.hpp"

#include <algorithm>
#include <numeric>

namespace qcausal {

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Sampler::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

std::size_t Sampler::index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::size_t Sampler::integer(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
}

Vector Sampler::gaussian_vector(std::size_t dim) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(), normal());
  return v;
}

StateVector Sampler::unit_vector(std::size_t dim) {
  return StateVector::normalized(gaussian_vector(dim));
}

DensityMatrix Sampler::density_matrix(std::size_t dim) {
  Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index c = 0; c < g.cols(); ++c) g.col(c) = gaussian_vector(dim);
  Matrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(Operator(std::move(rho)));
}

Operator Sampler::hermitian(std::size_t dim) {
  Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index c = 0; c < g.cols(); ++c) g.col(c) = gaussian_vector(dim);
  return Operator(0.5 * (g + g.adjoint()));
}

Operator Sampler::unitary(std::size_t dim) {
  Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index c = 0; c < g.cols(); ++c) g.col(c) = gaussian_vector(dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return Operator(std::move(q));
}

Operator Sampler::projector(std::size_t dim, std::size_t rank) {
  if (rank > dim) throw ValidationError("projector rank exceeds dimension");
  const Matrix u = unitary(dim).matrix();
  const Matrix cols = u.leftCols(static_cast<Eigen::Index>(rank));
  Matrix p = cols * cols.adjoint();
  p = 0.5 * (p + p.adjoint());
  return Operator(std::move(p));
}

SpectralObservable Sampler::observable(std::size_t dim, std::size_t outcomes) {
  if (outcomes == 0) outcomes = integer(1, dim);
  if (outcomes > dim) throw ValidationError("more outcomes than dimensions");
  const Matrix u = unitary(dim).matrix();

  // Random surjective assignment of basis columns to outcomes.
  std::vector<std::size_t> owner(dim);
  std::iota(owner.begin(), owner.begin() + static_cast<std::ptrdiff_t>(outcomes), 0);
  for (std::size_t c = outcomes; c < dim; ++c) owner[c] = index(outcomes);
  std::shuffle(owner.begin(), owner.end(), engine_);

  std::vector<Operator> projectors;
  projectors.reserve(outcomes);
  for (std::size_t k = 0; k < outcomes; ++k) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
      if (owner[c] == k) {
        const Vector col = u.col(static_cast<Eigen::Index>(c));
        p += col * col.adjoint();
      }
    }
    projectors.emplace_back(0.5 * (p + p.adjoint()));
  }
  std::vector<double> eigenvalues(outcomes);
  for (std::size_t k = 0; k < outcomes; ++k) eigenvalues[k] = static_cast<double>(k) + uniform(0.0, 0.5);
  return SpectralObservable(std::move(eigenvalues), std::move(projectors), 1e-10);
}

}  // namespace qcausal
