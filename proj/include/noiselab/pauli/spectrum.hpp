#pragma once

// Chi-diagonal weights of a channel and everything derived from them: the
// height spectrum w_k, total error e(T) = sum k w_k, per-qubit rates e_q, and
// the devastating / alarming classification.

#include "noiselab/core/stats.hpp"
#include "noiselab/pauli/channel.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace noiselab {

struct SpectrumOptions {
  int qubit_cap = kDefaultQubitCap;
  // Largest number of Kraus branches enumerated one by one; above this the
  // middle of the channel is flattened with rank compression instead.
  std::size_t leaf_cap = std::size_t{1} << 20;
};

namespace detail {

inline bool is_full_register(const std::vector<int>& targets, int n) {
  if (static_cast<int>(targets.size()) != n) return false;
  for (int q = 0; q < n; ++q)
    if (targets[static_cast<std::size_t>(q)] != q) return false;
  return true;
}

// out = chi convolved with a local Pauli table (XOR on base-4 indices).
inline std::vector<double> convolve_pauli(const std::vector<double>& chi, const Layer& l, int n) {
  const auto& p = l.table().probs;
  const bool full = is_full_register(l.targets, n);
  if (chi[0] == 1.0) {
    // chi is the identity's delta: the result is the embedded table itself.
    if (full) return p;
    std::vector<double> out(chi.size(), 0.0);
    for (std::size_t u = 0; u < p.size(); ++u) out[embed_index(u, l.width(), l.targets, n)] = p[u];
    return out;
  }
  std::vector<std::pair<std::size_t, double>> terms;
  for (std::size_t u = 0; u < p.size(); ++u) {
    if (p[u] > 0.0) terms.emplace_back(full ? u : embed_index(u, l.width(), l.targets, n), p[u]);
  }
  std::vector<double> out(chi.size(), 0.0);
  for (std::size_t w = 0; w < chi.size(); ++w) {
    if (chi[w] == 0.0) continue;
    for (const auto& [e, pu] : terms) out[w ^ e] += pu * chi[w];
  }
  return out;
}

inline bool is_scaled_identity(const CMatrix& e, cplx& scale) {
  const Eigen::Index d = e.rows();
  scale = e(0, 0);
  return max_abs_deviation(e, scale * CMatrix::Identity(d, d)) <= 1e-15;
}

inline void accumulate_expansion(const CMatrix& m, std::vector<double>& chi, int cap, double scale = 1.0) {
  const PauliCoefficients c = pauli_expand(m, cap);
  for (std::size_t v = 0; v < c.size(); ++v) chi[v] += scale * std::norm(c[v]);
}

struct Branch {
  CMatrix op;
  bool scalar = false;
  cplx scale{1.0, 0.0};
};

// Scalar branches only rescale, so they ride along in `weight` instead of
// copying the running product.
inline void chi_dfs(const std::vector<std::vector<Branch>>& branches, const std::vector<LocalPattern>& pats,
                    std::size_t depth, const CMatrix& m, double weight, std::vector<double>& chi, int cap) {
  if (depth == branches.size()) {
    accumulate_expansion(m, chi, cap, weight);
    return;
  }
  for (const auto& b : branches[depth]) {
    if (b.scalar) {
      const double w = weight * std::norm(b.scale);
      if (w > 0.0) chi_dfs(branches, pats, depth + 1, m, w, chi, cap);
      continue;
    }
    CMatrix t = m;
    apply_left(b.op, pats[depth], t);
    if (t.squaredNorm() == 0.0) continue;
    chi_dfs(branches, pats, depth + 1, t, weight, chi, cap);
  }
}

}  // namespace detail

/// chi_vv for every base-4 index v, i.e. sum_j |a_{jv}|^2 over the Kraus
/// expansion E_j = sum_v a_{jv} K_v.
inline std::vector<double> chi_diagonal(const Channel& ch, const SpectrumOptions& opt = {}) {
  const int n = ch.qubits();
  detail::check_cap(n, opt.qubit_cap);
  const auto& layers = ch.layers();
  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].is_pauli()) {
      if (!first) first = i;
      last = i;
    }
  }
  std::vector<double> chi(pow4(n), 0.0);
  if (!first) {
    chi[0] = 1.0;
  } else {
    std::size_t leaves = 1;
    bool over = false;
    for (std::size_t i = *first; i <= *last; ++i) {
      const std::size_t b = layers[i].branch_count();
      if (b != 0 && leaves > opt.leaf_cap / b) over = true;
      leaves *= b;
    }
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    if (over) {
      Channel middle = Channel::identity(n);
      for (std::size_t i = *first; i <= *last; ++i) {
        Channel one = Channel::identity(n);
        const auto& l = layers[i];
        one = l.is_pauli() ? Channel::local_pauli(n, l.targets, l.table().probs)
                           : Channel::local_kraus(n, l.targets, l.kraus().ops, 1e-6);
        middle = middle.then(one);
      }
      for (const auto& e : middle.kraus_operators()) detail::accumulate_expansion(e, chi, opt.qubit_cap);
    } else {
      std::vector<std::vector<detail::Branch>> branches;
      std::vector<LocalPattern> pats;
      for (std::size_t i = *first; i <= *last; ++i) {
        std::vector<detail::Branch> bs;
        for (auto& e : layers[i].branch_ops()) {
          detail::Branch b;
          b.scalar = detail::is_scaled_identity(e, b.scale);
          b.op = std::move(e);
          bs.push_back(std::move(b));
        }
        branches.push_back(std::move(bs));
        pats.emplace_back(layers[i].targets, n);
      }
      detail::chi_dfs(branches, pats, 0, CMatrix::Identity(d, d), 1.0, chi, opt.qubit_cap);
    }
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const bool in_middle = first && i >= *first && i <= *last;
    if (layers[i].is_pauli() && !in_middle) chi = detail::convolve_pauli(chi, layers[i], n);
  }
  return chi;
}

/// Height spectrum and derived noise measures of a channel.
struct WeightSpectrum {
  int n = 0;
  std::vector<double> w;            // w[k], k = 0..n
  double e_total = 0.0;             // sum_k k w_k
  std::vector<double> e_per_qubit;  // chi mass touching each qubit
  double hs_noise = 0.0;

  double total_weight() const {
    double s = 0.0;
    for (double x : w) s += x;
    return s;
  }

  double weight_at_least(int k) const {
    double s = 0.0;
    for (int h = std::max(k, 0); h <= n; ++h) s += w[static_cast<std::size_t>(h)];
    return s;
  }

  double max_qubit_rate() const {
    double m = 0.0;
    for (double e : e_per_qubit) m = std::max(m, e);
    return m;
  }
};

// hs_noise = sqrt(2 - 2 sqrt(w_0)): the smallest normalized Hilbert-Schmidt
// distance between a Kraus tuple of the channel and (I, 0, 0, ...), minimized
// over Kraus representations. Equals ||I - U||_HS / 2^{n/2} for a unitary
// whose global phase makes tr U real and nonnegative.
inline double hs_noise_from_identity_weight(double w0) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(std::clamp(w0, 0.0, 1.0))));
}

inline WeightSpectrum spectrum_from_chi(const std::vector<double>& chi, int n) {
  require(chi.size() == pow4(n), "chi diagonal has the wrong length");
  WeightSpectrum s;
  s.n = n;
  s.w.assign(static_cast<std::size_t>(n) + 1, 0.0);
  s.e_per_qubit.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t v = 0; v < chi.size(); ++v) {
    const double x = chi[v];
    if (x == 0.0) continue;
    s.w[static_cast<std::size_t>(height_of_index(v))] += x;
    for (int q = 0; q < n; ++q) {
      if (index_touches(v, n, q)) s.e_per_qubit[static_cast<std::size_t>(q)] += x;
    }
  }
  for (int k = 0; k <= n; ++k) s.e_total += k * s.w[static_cast<std::size_t>(k)];
  s.hs_noise = hs_noise_from_identity_weight(s.w[0]);
  return s;
}

inline WeightSpectrum weight_spectrum(const Channel& ch, const SpectrumOptions& opt = {}) {
  return spectrum_from_chi(chi_diagonal(ch, opt), ch.qubits());
}

// Spectrum of the single-operator (unitary) channel without building a Channel.
inline WeightSpectrum operator_spectrum(const CMatrix& u, int cap = kDefaultQubitCap) {
  const int n = qubits_of_dim(u.rows());
  const PauliCoefficients c = pauli_expand(u, cap);
  std::vector<double> chi(c.size());
  for (std::size_t v = 0; v < c.size(); ++v) chi[v] = std::norm(c[v]);
  return spectrum_from_chi(chi, n);
}

inline bool is_eps_noise(const WeightSpectrum& s, double eps) { return s.max_qubit_rate() <= eps; }

inline bool is_eps_noise(const Channel& ch, double eps) { return is_eps_noise(weight_spectrum(ch), eps); }

// Per-qubit rates straight from Kraus operators via partial traces:
// e_q = 1 - sum_j ||tr_q E_j||_F^2 / 2^{n+1}. Exact; O(r n 4^n).
inline std::vector<double> per_qubit_rates(const std::vector<CMatrix>& ops) {
  require(!ops.empty(), "per_qubit_rates: no operators");
  const int n = qubits_of_dim(ops.front().rows());
  const std::size_t d = dim_of(n);
  std::vector<double> e(static_cast<std::size_t>(n), 1.0);
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << bit_of_qubit(n, q);
    double kept = 0.0;
    for (const auto& m : ops) {
      for (std::size_t i = 0; i < d; ++i) {
        if (i & bit) continue;
        for (std::size_t j = 0; j < d; ++j) {
          if (j & bit) continue;
          const cplx t = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                         m(static_cast<Eigen::Index>(i | bit), static_cast<Eigen::Index>(j | bit));
          kept += std::norm(t);
        }
      }
    }
    e[static_cast<std::size_t>(q)] = 1.0 - kept / static_cast<double>(2 * d);
  }
  return e;
}

inline double e_total_partial_trace(const std::vector<CMatrix>& ops) {
  double s = 0.0;
  for (double x : per_qubit_rates(ops)) s += x;
  return s;
}

struct SpectrumClass {
  bool devastating = false;
  bool alarming = false;
  std::optional<double> powerlaw_exponent;
  double high_weight = 0.0;  // mass at heights >= ceil(0.74 n)
  double fit_r2 = 0.0;
};

inline int devastating_height(int n) { return (74 * n + 99) / 100; }

inline SpectrumClass classify_spectrum(const WeightSpectrum& s, double eps) {
  SpectrumClass c;
  c.high_weight = s.weight_at_least(devastating_height(s.n));
  c.devastating = c.high_weight >= eps / 2.0;
  std::vector<double> lx, ly;
  for (int k = 2; k <= s.n; ++k) {
    const double wk = s.w[static_cast<std::size_t>(k)];
    if (wk > 0.0) {
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(wk));
    }
  }
  if (lx.size() >= 3) {
    const LinearFit f = linear_fit(lx, ly);
    const double beta = -f.slope;
    c.fit_r2 = f.r2;
    if (f.r2 >= 0.9 && beta > 0.0 && beta <= 4.0) {
      c.alarming = true;
      c.powerlaw_exponent = beta;
    }
  }
  return c;
}

}  // namespace noiselab
