#pragma once

// Seeded generators and the derived-seed discipline: every stochastic call
// site receives its own generator built from hash(master seed, labels...).

#include "noiselab/core/linalg.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cstdint>
#include <random>
#include <string_view>

namespace noiselab {

using Rng = std::mt19937_64;

// Ziggurat sampler; several times faster than std::normal_distribution.
using Normal = boost::random::normal_distribution<double>;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t acc, std::uint64_t v) { return splitmix64(acc ^ splitmix64(v)); }

inline std::uint64_t mix_seed(std::uint64_t acc, std::string_view label) { return mix_seed(acc, fnv1a64(label)); }

template <typename... Labels>
std::uint64_t derive_seed(std::uint64_t master, const Labels&... labels) {
  std::uint64_t acc = splitmix64(master);
  ((acc = mix_seed(acc, labels)), ...);
  return acc;
}

template <typename... Labels>
Rng derive_rng(std::uint64_t master, const Labels&... labels) {
  return Rng(derive_seed(master, labels...));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Normal g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  return m;
}

// Haar-distributed unitary of dimension d: QR of a complex Ginibre matrix with
// the phases of R's diagonal moved into Q.
inline CMatrix haar_unitary_dim(Eigen::Index d, Rng& rng) {
  const CMatrix z = complex_gaussian(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    const cplx ph = a > 0 ? rjj / a : cplx(1.0, 0.0);
    q.col(j) *= ph;
  }
  return q;
}

inline CMatrix haar_unitary(int n_qubits, Rng& rng) {
  return haar_unitary_dim(static_cast<Eigen::Index>(dim_of(n_qubits)), rng);
}

// Uniformly random permutation of 0..n-1 (Fisher-Yates driven by `rng`).
inline std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = uniform_index(rng, static_cast<std::size_t>(i) + 1);
    std::swap(p[static_cast<std::size_t>(i)], p[j]);
  }
  return p;
}

}  // namespace noiselab
