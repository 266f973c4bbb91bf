#pragma once

// Multi-Pauli expansion U = sum_v c_v K_v with c_v = tr(K_v U) / 2^n.
//
// The fast path interleaves row and column bits so every qubit owns one
// base-4 digit, then applies a 4-point transform per qubit: O(n 4^n).

#include "noiselab/pauli/operator.hpp"
#include "noiselab/pauli/pauli_string.hpp"

#include <vector>

namespace noiselab {

using PauliCoefficients = std::vector<cplx>;

namespace detail {

// Spreads the low 32 bits of x to the even bit positions.
inline std::uint64_t spread_bits(std::uint64_t x) {
  x &= 0xffffffffULL;
  x = (x | (x << 16)) & 0x0000ffff0000ffffULL;
  x = (x | (x << 8)) & 0x00ff00ff00ff00ffULL;
  x = (x | (x << 4)) & 0x0f0f0f0f0f0f0f0fULL;
  x = (x | (x << 2)) & 0x3333333333333333ULL;
  x = (x | (x << 1)) & 0x5555555555555555ULL;
  return x;
}

inline void check_cap(int n, int cap) {
  if (n > cap) {
    throw std::length_error("operator on " + std::to_string(n) + " qubits exceeds the size cap of " +
                            std::to_string(cap));
  }
}

}  // namespace detail

inline PauliCoefficients pauli_expand(const CMatrix& u, int cap = kDefaultQubitCap) {
  const int n = qubits_of_dim(u.rows());
  detail::check_cap(n, cap);
  const std::size_t d = dim_of(n);
  PauliCoefficients a(pow4(n));
  for (std::size_t r = 0; r < d; ++r) {
    const std::uint64_t rs = detail::spread_bits(r) << 1;
    for (std::size_t c = 0; c < d; ++c) {
      a[rs | detail::spread_bits(c)] = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  const cplx i(0.0, 1.0);
  for (int b = 0; b < n; ++b) {
    const std::size_t stride = std::size_t{1} << (2 * b);
    for (std::size_t base = 0; base < a.size(); base += 4 * stride) {
      for (std::size_t o = 0; o < stride; ++o) {
        cplx* p = &a[base + o];
        const cplx m00 = p[0], m01 = p[stride], m10 = p[2 * stride], m11 = p[3 * stride];
        p[0] = 0.5 * (m00 + m11);
        p[stride] = 0.5 * (m01 + m10);
        p[2 * stride] = 0.5 * i * (m01 - m10);
        p[3 * stride] = 0.5 * (m00 - m11);
      }
    }
  }
  return a;
}

inline PauliCoefficients pauli_expand(const DenseOperator& u, int cap = kDefaultQubitCap) {
  return pauli_expand(u.matrix(), cap);
}

// Reference route: one trace per basis element, O(8^n).
inline PauliCoefficients pauli_expand_direct(const CMatrix& u, int cap = kDefaultQubitCap) {
  const int n = qubits_of_dim(u.rows());
  detail::check_cap(n, cap);
  const std::size_t d = dim_of(n);
  PauliCoefficients c(pow4(n));
  for (std::size_t v = 0; v < c.size(); ++v) {
    const PauliString k = PauliString::from_index(n, v);
    const std::size_t xb = k.index_x_bits();
    cplx tr = 0.0;
    // tr(K U) = sum_l K[l^xb, l] U[l, l^xb]
    for (std::size_t l = 0; l < d; ++l) {
      tr += k.amplitude(l) * u(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l ^ xb));
    }
    c[v] = tr / static_cast<double>(d);
  }
  return c;
}

inline CMatrix pauli_resum(const PauliCoefficients& coeffs, int n) {
  require(coeffs.size() == pow4(n), "coefficient vector has wrong length");
  std::vector<cplx> a = coeffs;
  const cplx i(0.0, 1.0);
  for (int b = 0; b < n; ++b) {
    const std::size_t stride = std::size_t{1} << (2 * b);
    for (std::size_t base = 0; base < a.size(); base += 4 * stride) {
      for (std::size_t o = 0; o < stride; ++o) {
        cplx* p = &a[base + o];
        const cplx ci = p[0], cx = p[stride], cy = p[2 * stride], cz = p[3 * stride];
        p[0] = ci + cz;
        p[stride] = cx - i * cy;
        p[2 * stride] = cx + i * cy;
        p[3 * stride] = ci - cz;
      }
    }
  }
  const std::size_t d = dim_of(n);
  CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    const std::uint64_t rs = detail::spread_bits(r) << 1;
    for (std::size_t c = 0; c < d; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[rs | detail::spread_bits(c)];
    }
  }
  return m;
}

// Sum of |c_v|^2 grouped by height.
inline std::vector<double> height_profile(const PauliCoefficients& c, int n) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t v = 0; v < c.size(); ++v) w[static_cast<std::size_t>(height_of_index(v))] += std::norm(c[v]);
  return w;
}

}  // namespace noiselab
