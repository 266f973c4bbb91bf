#pragma once

// Dense complex linear algebra shared by every module, plus the index
// conventions for n-qubit operators.
//
// Qubit q of an n-qubit register is bit (n - 1 - q) of a basis index, so
// qubit 0 is the leftmost tensor factor: |q0 q1 ... q_{n-1}>.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace noiselab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kDefaultQubitCap = 12;

inline std::size_t dim_of(int n) { return std::size_t{1} << n; }

inline std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }

inline int bit_of_qubit(int n, int q) { return n - 1 - q; }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Literal messages skip the std::string construction on the hot path.
inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void check_targets(const std::vector<int>& targets, int n) {
  std::uint64_t seen = 0;
  for (int t : targets) {
    if (t < 0 || t >= n) {
      throw std::out_of_range("qubit index " + std::to_string(t) + " out of range for " +
                              std::to_string(n) + " qubits");
    }
    if (seen & (std::uint64_t{1} << t)) {
      throw std::invalid_argument("duplicate qubit index " + std::to_string(t));
    }
    seen |= std::uint64_t{1} << t;
  }
}

// Index offsets of the 2^k local basis states of `targets` inside an n-qubit
// index. Local qubit 0 (targets[0]) is the most significant local bit.
inline std::vector<std::size_t> local_offsets(const std::vector<int>& targets, int n) {
  const int k = static_cast<int>(targets.size());
  std::vector<std::size_t> offs(dim_of(k), 0);
  for (std::size_t a = 0; a < offs.size(); ++a) {
    std::size_t o = 0;
    for (int i = 0; i < k; ++i) {
      if ((a >> (k - 1 - i)) & 1U) o |= std::size_t{1} << bit_of_qubit(n, targets[i]);
    }
    offs[a] = o;
  }
  return offs;
}

// All n-qubit indices whose target bits are zero.
inline std::vector<std::size_t> base_indices(const std::vector<int>& targets, int n) {
  std::size_t mask = 0;
  for (int t : targets) mask |= std::size_t{1} << bit_of_qubit(n, t);
  std::vector<std::size_t> out;
  out.reserve(dim_of(n) >> targets.size());
  for (std::size_t i = 0; i < dim_of(n); ++i) {
    if ((i & mask) == 0) out.push_back(i);
  }
  return out;
}

// Precomputed gather pattern for applying a k-qubit operator inside n qubits.
struct LocalPattern {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> bases;

  LocalPattern(const std::vector<int>& targets, int n)
      : offsets(local_offsets(targets, n)), bases(base_indices(targets, n)) {}
};

// M <- (E acting on targets) * M
inline void apply_left(const CMatrix& e, const LocalPattern& pat, CMatrix& m) {
  const auto ld = static_cast<Eigen::Index>(pat.offsets.size());
  CMatrix in(ld, m.cols()), out(ld, m.cols());
  for (std::size_t b : pat.bases) {
    for (Eigen::Index a = 0; a < ld; ++a) in.row(a) = m.row(static_cast<Eigen::Index>(b + pat.offsets[a]));
    out.noalias() = e * in;
    for (Eigen::Index a = 0; a < ld; ++a) m.row(static_cast<Eigen::Index>(b + pat.offsets[a])) = out.row(a);
  }
}

// v <- (E acting on targets) * v
inline void apply_left(const CMatrix& e, const LocalPattern& pat, CVector& v) {
  const auto ld = static_cast<Eigen::Index>(pat.offsets.size());
  CVector in(ld), out(ld);
  for (std::size_t b : pat.bases) {
    for (Eigen::Index a = 0; a < ld; ++a) in(a) = v(static_cast<Eigen::Index>(b + pat.offsets[a]));
    out.noalias() = e * in;
    for (Eigen::Index a = 0; a < ld; ++a) v(static_cast<Eigen::Index>(b + pat.offsets[a])) = out(a);
  }
}

// M <- M * (E acting on targets)^dagger
inline void apply_right_adjoint(const CMatrix& e, const LocalPattern& pat, CMatrix& m) {
  const auto ld = static_cast<Eigen::Index>(pat.offsets.size());
  const CMatrix ed = e.adjoint();
  Eigen::RowVectorXcd in(ld), out(ld);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (std::size_t b : pat.bases) {
      for (Eigen::Index a = 0; a < ld; ++a) in(a) = m(r, static_cast<Eigen::Index>(b + pat.offsets[a]));
      out.noalias() = in * ed;
      for (Eigen::Index a = 0; a < ld; ++a) m(r, static_cast<Eigen::Index>(b + pat.offsets[a])) = out(a);
    }
  }
}

// Dense n-qubit matrix of E acting on targets (identity elsewhere).
inline CMatrix embed_matrix(const CMatrix& e, const std::vector<int>& targets, int n) {
  CMatrix m = CMatrix::Identity(static_cast<Eigen::Index>(dim_of(n)), static_cast<Eigen::Index>(dim_of(n)));
  apply_left(e, LocalPattern(targets, n), m);
  return m;
}

// Normalized Hilbert-Schmidt inner-product norm: ||A||^2 / 2^n.
inline double normalized_hs_norm2(const CMatrix& a) {
  return a.squaredNorm() / static_cast<double>(a.rows());
}

inline double max_abs_deviation(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline int qubits_of_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  if ((Eigen::Index{1} << n) != d) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

}  // namespace noiselab
