#pragma once

#include "noiselab/core/linalg.hpp"

#include <utility>

namespace noiselab {

/// A 2^n x 2^n complex matrix on n qubits.
class DenseOperator {
 public:
  DenseOperator() = default;

  explicit DenseOperator(CMatrix m) : n_(qubits_of_dim(m.rows())), m_(std::move(m)) {
    require(m_.rows() == m_.cols(), "operator must be square");
  }

  static DenseOperator identity(int n) {
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return DenseOperator(CMatrix::Identity(d, d));
  }

  static DenseOperator zero(int n) {
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return DenseOperator(CMatrix::Zero(d, d));
  }

  int qubits() const { return n_; }
  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  bool is_unitary(double tol = 1e-10) const {
    const CMatrix g = m_.adjoint() * m_;
    return max_abs_deviation(g, CMatrix::Identity(dim(), dim())) <= tol;
  }

  DenseOperator adjoint() const { return DenseOperator(m_.adjoint()); }

  // Normalized Hilbert-Schmidt norm, ||A||_HS / 2^{n/2}: 1 for unitaries.
  double norm() const { return std::sqrt(normalized_hs_norm2(m_)); }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    require(a.n_ == b.n_, "operator size mismatch");
    return DenseOperator(a.m_ * b.m_);
  }

 private:
  int n_ = 0;
  CMatrix m_;
};

/// A density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m, double tol = 1e-10) : n_(qubits_of_dim(m.rows())), m_(std::move(m)) {
    require(m_.rows() == m_.cols(), "density matrix must be square");
    require(max_abs_deviation(m_, m_.adjoint()) <= tol, "density matrix is not Hermitian");
    require(std::abs(m_.trace() - cplx(1.0, 0.0)) <= tol, "density matrix trace is not 1");
    require(min_eigenvalue() >= -1e-9, "density matrix is not positive semidefinite");
  }

  static DensityMatrix pure(const CVector& psi) {
    const CVector u = psi / psi.norm();
    return DensityMatrix(u * u.adjoint());
  }

  static DensityMatrix basis_state(int n, std::size_t index) {
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    CVector v = CVector::Zero(d);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return pure(v);
  }

  static DensityMatrix maximally_mixed(int n) {
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  int qubits() const { return n_; }
  const CMatrix& matrix() const { return m_; }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  int n_ = 0;
  CMatrix m_;
};

}  // namespace noiselab
