#pragma once

// Logical error rates by Pauli sampling, and exact recovery fidelity with an
// ideal syndrome measurement followed by the lookup correction.

#include "noiselab/core/random.hpp"
#include "noiselab/core/stats.hpp"
#include "noiselab/pauli/spectrum.hpp"
#include "noiselab/qec/code.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace noiselab {

struct QecResult {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double rate = 0.0;
  double ci = 0.0;  // 95% half-width
  std::optional<double> fidelity;
};

// fail[v] is true when the Pauli error with index v survives decoding as a logical.
inline std::vector<bool> failure_table(const StabilizerCode& code) {
  const int n = code.n();
  std::vector<bool> fail(pow4(n));
  for (std::size_t v = 0; v < fail.size(); ++v) fail[v] = !syndrome_correct(code, PauliString::from_index(n, v)).corrected;
  return fail;
}

inline double exact_logical_error_rate(const StabilizerCode& code, const std::vector<double>& chi) {
  require(chi.size() == pow4(code.n()), "error distribution has the wrong length");
  const auto fail = failure_table(code);
  double r = 0;
  for (std::size_t v = 0; v < chi.size(); ++v)
    if (fail[v]) r += chi[v];
  return r;
}

// Uniform in [0, 1) from the (seed, trial) pair alone, so runs can be paired.
inline double trial_uniform(std::uint64_t seed, std::size_t trial) {
  return static_cast<double>(derive_seed(seed, "qec-trial", static_cast<std::uint64_t>(trial)) >> 11) * 0x1.0p-53;
}

inline QecResult logical_error_rate(const StabilizerCode& code, const std::vector<double>& chi, std::size_t trials,
                                    std::uint64_t seed) {
  require(chi.size() == pow4(code.n()), "error distribution has the wrong length");
  require(trials > 0, "need at least one trial");
  const auto fail = failure_table(code);
  std::vector<double> cdf(chi.size());
  double acc = 0;
  for (std::size_t v = 0; v < chi.size(); ++v) cdf[v] = (acc += std::max(0.0, chi[v]));
  require(std::abs(acc - 1.0) < 1e-6, "error distribution must sum to 1");
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double u = trial_uniform(seed, t) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    if (fail[static_cast<std::size_t>(it - cdf.begin())]) ++failures;
  }
  const auto e = proportion(failures, trials);
  return {trials, failures, e.value, kZ95 * e.stderr_, std::nullopt};
}

inline QecResult logical_error_rate(const StabilizerCode& code, const Channel& ch, std::size_t trials, std::uint64_t seed) {
  require(ch.qubits() == code.n(), "channel size does not match the code");
  require(ch.is_identity() || ch.tag() == ChannelTag::pauli_diagonal,
          "logical_error_rate needs a Pauli-diagonal channel; twirl it first");
  return logical_error_rate(code, chi_diagonal(ch), trials, seed);
}

// Same chi diagonal, off-diagonal terms dropped.
inline Channel twirl(const Channel& ch) { return Channel::pauli(ch.qubits(), chi_diagonal(ch)); }

// |0_L>: the +1 eigenvector of every generator and of logical Z.
inline CVector logical_zero(const StabilizerCode& code) {
  const auto d = static_cast<Eigen::Index>(dim_of(code.n()));
  std::vector<PauliString> proj = code.generators();
  proj.push_back(code.logical_z());
  for (Eigen::Index b = 0; b < d; ++b) {
    CVector v = CVector::Zero(d);
    v(b) = 1.0;
    for (const auto& g : proj) {
      CVector gv = v;
      g.apply(gv);
      v = 0.5 * (v + gv);
    }
    if (v.norm() > 1e-6) return v / v.norm();
  }
  throw std::logic_error("code space is empty");
}

inline std::array<CVector, 6> logical_pauli_states(const StabilizerCode& code) {
  const CVector zero = logical_zero(code);
  CVector one = zero;
  code.logical_x().apply(one);
  const double s = std::sqrt(0.5);
  const cplx i(0, 1);
  return {zero, one, s * (zero + one), s * (zero - one), s * (zero + i * one), s * (zero - i * one)};
}

inline QecResult recovery_fidelity(const StabilizerCode& code, const Channel& ch, int qubit_cap = 10) {
  require(code.n() <= qubit_cap, "code exceeds the exact-backend cap");
  require(ch.qubits() == code.n(), "channel size does not match the code");
  double worst = 1.0;
  for (const auto& psi : logical_pauli_states(code)) {
    const CMatrix rho = apply_matrix(ch, psi * psi.adjoint());
    // F = sum_s <C_s psi| rho |C_s psi>; C_s psi spans the syndrome-s image of psi.
    double f = 0;
    for (std::size_t s = 0; s < code.syndrome_count(); ++s) {
      CVector phi = psi;
      code.correction(s).apply(phi);
      f += (phi.adjoint() * rho * phi)(0, 0).real();
    }
    worst = std::min(worst, f);
  }
  QecResult r;
  r.fidelity = worst;
  r.rate = std::clamp(1.0 - worst, 0.0, 1.0);
  return r;
}

}  // namespace noiselab
