#pragma once

// Gibbs damping of strictly positive distributions on {-1,+1}^n. Inputs are
// indexed as in the Boolean module: bit i of the index set means x_i = -1.
// mu = exp(-H) / Z with H = sum_k H_k, H_k the degree-k Fourier part; damping
// rescales H_k by c(k, t) and renormalizes.

#include "noiselab/boolean/function.hpp"
#include "noiselab/core/csv.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <functional>
#include <vector>

namespace noiselab {

inline constexpr int kSpinCap = 16;

class SpinDistribution {
 public:
  SpinDistribution(int n, std::vector<double> p) : n_(n), p_(std::move(p)) {
    require(n >= 1 && n <= kSpinCap, "spin distribution: n out of range");
    require(p_.size() == (std::size_t{1} << n), "spin distribution needs 2^n entries");
    double s = 0;
    for (double x : p_) {
      require(std::isfinite(x) && x > 0.0, "spin distribution must be strictly positive");
      s += x;
    }
    require(std::abs(s - 1.0) <= 1e-12, "spin distribution must sum to 1");
  }

  static SpinDistribution from_weights(int n, std::vector<double> w) {
    double s = 0;
    for (double x : w) s += x;
    require(s > 0 && std::isfinite(s), "weights must have a positive finite sum");
    for (double& x : w) x /= s;
    return {n, std::move(w)};
  }

  // mu(x) proportional to exp(-energy(x)), shifted for stability.
  static SpinDistribution from_energy(int n, const std::vector<double>& energy) {
    double lo = energy.front();
    for (double e : energy) lo = std::min(lo, e);
    std::vector<double> w(energy.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-(energy[i] - lo));
    return from_weights(n, std::move(w));
  }

  int n() const { return n_; }
  const std::vector<double>& probabilities() const { return p_; }
  double operator[](std::size_t x) const { return p_[x]; }

  static int spin(std::size_t x, int i) { return ((x >> i) & 1U) ? -1 : 1; }

 private:
  int n_;
  std::vector<double> p_;
};

// Independent spins with E[x_i] = tanh(h_i).
inline SpinDistribution product_measure(const std::vector<double>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<double> energy(std::size_t{1} << n, 0.0);
  for (std::size_t x = 0; x < energy.size(); ++x)
    for (int i = 0; i < n; ++i) energy[x] -= h[static_cast<std::size_t>(i)] * SpinDistribution::spin(x, i);
  return SpinDistribution::from_energy(n, energy);
}

struct HamiltonianDecomposition {
  int n = 0;
  std::vector<double> coeff;  // h(S) by subset mask; H(x) = sum_S h(S) chi_S(x)

  std::vector<double> component(int k) const {
    std::vector<double> c(coeff.size(), 0.0);
    for (std::size_t s = 0; s < coeff.size(); ++s)
      if (std::popcount(s) == k) c[s] = coeff[s];
    return c;
  }

  // H(x) for every x.
  std::vector<double> energy() const {
    std::vector<double> e = coeff;
    walsh_hadamard(e);
    return e;
  }

  void write_csv(std::ostream& os) const {
    CsvWriter w(os, {"mask", "degree", "coefficient"});
    for (std::size_t s = 0; s < coeff.size(); ++s)
      w.write(CsvRow().add(s).add(static_cast<int>(std::popcount(s))).add(coeff[s]));
  }
};

inline HamiltonianDecomposition gibbs_decompose(const SpinDistribution& mu) {
  HamiltonianDecomposition h{mu.n(), std::vector<double>(mu.probabilities().size())};
  const double scale = std::ldexp(1.0, mu.n());
  for (std::size_t x = 0; x < h.coeff.size(); ++x) h.coeff[x] = -std::log(mu[x] * scale);
  walsh_hadamard(h.coeff);
  for (double& c : h.coeff) c /= scale;
  return h;
}

using DampingSchedule = std::function<double(int k, double t)>;

inline double default_damping(int k, double t) { return std::exp(-(k - 1) * t); }

inline void check_schedule(const DampingSchedule& c, int n, double t) {
  require(std::abs(c(1, t) - 1.0) <= 1e-12, "damping schedule must satisfy c(1, t) = 1");
  for (int k = 1; k <= n; ++k) {
    const double v = c(k, t);
    require(std::isfinite(v) && v >= 0.0, "damping schedule must be non-negative");
    if (k > 1) require(v <= c(k - 1, t) + 1e-15, "damping schedule must be non-increasing in k");
    require(v <= c(k, 0.5 * t) + 1e-15, "damping schedule must be non-increasing in t");
  }
}

inline SpinDistribution damp(const SpinDistribution& mu, double t, const DampingSchedule& c = default_damping) {
  require(t >= 0.0, "damping time must be non-negative");
  check_schedule(c, mu.n(), t);
  auto h = gibbs_decompose(mu);
  h.coeff[0] = 0.0;  // absorbed into Z
  for (std::size_t s = 1; s < h.coeff.size(); ++s) h.coeff[s] *= c(std::popcount(s), t);
  return SpinDistribution::from_energy(mu.n(), h.energy());
}

// The t -> infinity limit of the default schedule: exp(-H_1) / Z.
inline SpinDistribution degree_one_product(const SpinDistribution& mu) {
  HamiltonianDecomposition h = gibbs_decompose(mu);
  h.coeff = h.component(1);
  return SpinDistribution::from_energy(mu.n(), h.energy());
}

inline double total_variation(const SpinDistribution& a, const SpinDistribution& b) {
  require(a.n() == b.n(), "distributions differ in size");
  double s = 0;
  for (std::size_t x = 0; x < a.probabilities().size(); ++x) s += std::abs(a[x] - b[x]);
  return 0.5 * s;
}

inline Eigen::MatrixXd covariance_matrix(const SpinDistribution& mu) {
  const int n = mu.n();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < mu.probabilities().size(); ++x) {
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = SpinDistribution::spin(x, i);
    m += mu[x] * s;
    second += mu[x] * s * s.transpose();
  }
  return second - m * m.transpose();
}

inline void write_distribution_csv(std::ostream& os, const SpinDistribution& mu) {
  CsvWriter w(os, {"bitmask", "probability"});
  for (std::size_t x = 0; x < mu.probabilities().size(); ++x) w.write(CsvRow().add(x).add(mu[x]));
}

inline SpinDistribution read_distribution_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  require(rows.size() >= 2 && rows[0].size() == 2 && rows[0][0] == "bitmask", "expected bitmask,probability header");
  const std::size_t m = rows.size() - 1;
  require(std::has_single_bit(m), "row count must be a power of two");
  std::vector<double> p(m);
  std::vector<bool> seen(m);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    require(rows[r].size() == 2, "each row needs two columns");
    const std::size_t x = std::stoull(rows[r][0]);
    require(x < m && !seen[x], "bad or repeated bitmask");
    seen[x] = true;
    p[x] = std::stod(rows[r][1]);
  }
  return SpinDistribution(std::countr_zero(m), std::move(p));
}

}  // namespace noiselab
