#pragma once

// Tiny rotations used by the graph-walk and ILS samplers.
//
//   R_X(d)  = exp(-i d X / 2)                on one qubit
//   R_CX(d) = exp(i d P) = I + (e^{id} - 1) P on an ordered pair,
//             P = |1><1| (x) (I - X)/2
//
// R_CX(pi) is exactly CNOT (control first). Element i and i ^ 1 are inverses.

#include "noiselab/core/linalg.hpp"
#include "noiselab/core/random.hpp"

#include <array>
#include <cmath>
#include <complex>

namespace noiselab {

inline CMatrix rotation_x(double delta) {
  const cplx c(std::cos(delta / 2), 0), s(0, -std::sin(delta / 2));
  CMatrix m(2, 2);
  m << c, s, s, c;
  return m;
}

inline CMatrix rotation_cx(double delta) {
  CMatrix p = CMatrix::Zero(4, 4);
  // |1><1| on the control, |-><-| on the target.
  p(2, 2) = p(3, 3) = 0.5;
  p(2, 3) = p(3, 2) = -0.5;
  return CMatrix::Identity(4, 4) + (std::exp(cplx(0, delta)) - 1.0) * p;
}

// exp(-i d H) with H a GUE draw rescaled to spectral norm 1.
inline CMatrix tiny_hermitian_unitary(int k, double delta, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dim_of(k));
  const CMatrix g = complex_gaussian(d, d, rng);
  const CMatrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  CVector phases(d);
  for (Eigen::Index i = 0; i < d; ++i) phases(i) = std::exp(cplx(0, -delta * es.eigenvalues()(i) / norm));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

class TinyGeneratorSet {
 public:
  enum Element { kRxPlus = 0, kRxMinus = 1, kRcxPlus = 2, kRcxMinus = 3 };

  explicit TinyGeneratorSet(double delta) : delta_(delta) {
    require(std::isfinite(delta), "rotation angle must be finite");
    elements_ = {rotation_x(delta), rotation_x(-delta), rotation_cx(delta), rotation_cx(-delta)};
  }

  double delta() const { return delta_; }
  static constexpr int size() { return 4; }
  static int arity(int e) { return e < 2 ? 1 : 2; }
  static int inverse(int e) { return e ^ 1; }
  const CMatrix& matrix(int e) const { return elements_.at(static_cast<std::size_t>(e)); }

  static const char* name(int e) {
    static constexpr std::array<const char*, 4> names{"RX+", "RX-", "RCX+", "RCX-"};
    return names.at(static_cast<std::size_t>(e));
  }

 private:
  double delta_;
  std::array<CMatrix, 4> elements_;
};

}  // namespace noiselab
