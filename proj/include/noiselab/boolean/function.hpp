#pragma once

// Boolean functions on n <= 24 bits in the +-1 convention. Table index bit i
// is input i; bit value 1 stands for x_i = -1, so chi_S(x) = (-1)^{|S & x|}.

#include "noiselab/core/csv.hpp"
#include "noiselab/core/random.hpp"
#include "noiselab/core/stats.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace noiselab {

inline constexpr int kBooleanCap = 24;

class BooleanFunction {
 public:
  BooleanFunction(int n, std::vector<int8_t> table, std::string name = {})
      : n_(n), table_(std::move(table)), name_(std::move(name)) {
    require(n >= 0 && n <= kBooleanCap, "Boolean function: n out of range");
    require(table_.size() == (std::size_t{1} << n), "truth table length must be 2^n");
    for (auto v : table_) require(v == 1 || v == -1, "truth table values must be +1 or -1");
  }

  template <typename F>
  static BooleanFunction from(int n, F&& f, std::string name = {}) {
    require(n >= 0 && n <= kBooleanCap, "Boolean function: n out of range");
    std::vector<int8_t> t(std::size_t{1} << n);
    for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = f(x) ? 1 : -1;
    return {n, std::move(t), std::move(name)};
  }

  int n() const { return n_; }
  std::size_t size() const { return table_.size(); }
  const std::string& name() const { return name_; }
  int operator()(std::uint32_t x) const { return table_[x]; }
  const std::vector<int8_t>& table() const { return table_; }
  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) { return a.table_ == b.table_; }

  // Hex digit j packs entries 4j..4j+3, entry 4j+t in bit t; bit set = -1.
  // Digits are written in increasing j.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (std::size_t j = 0; j < (table_.size() + 3) / 4; ++j) {
      unsigned v = 0;
      for (std::size_t t = 0; t < 4 && 4 * j + t < table_.size(); ++t)
        if (table_[4 * j + t] < 0) v |= 1U << t;
      s += digits[v];
    }
    return s;
  }

  static BooleanFunction from_hex(int n, const std::string& hex, std::string name = {}) {
    require(n >= 0 && n <= kBooleanCap, "Boolean function: n out of range");
    const std::size_t len = std::size_t{1} << n;
    require(hex.size() == (len + 3) / 4, "hex table has the wrong length");
    std::vector<int8_t> t(len);
    for (std::size_t j = 0; j < hex.size(); ++j) {
      const char c = hex[j];
      unsigned v = 0;
      if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
      else throw std::invalid_argument("bad hex digit");
      for (std::size_t b = 0; b < 4; ++b) {
        if (4 * j + b < len) t[4 * j + b] = ((v >> b) & 1U) ? -1 : 1;
        else require(((v >> b) & 1U) == 0, "hex padding bits must be zero");
      }
    }
    return {n, std::move(t), std::move(name)};
  }

 private:
  int n_;
  std::vector<int8_t> table_;
  std::string name_;
};

// In-place unnormalized Walsh-Hadamard transform.
template <typename T>
void walsh_hadamard(std::vector<T>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
}

struct FourierExpansion {
  int n = 0;
  std::vector<double> coeff;  // indexed by subset mask

  std::vector<double> level_weights() const {
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t s = 0; s < coeff.size(); ++s) w[static_cast<std::size_t>(std::popcount(s))] += coeff[s] * coeff[s];
    return w;
  }

  double total_weight() const {
    double t = 0;
    for (double c : coeff) t += c * c;
    return t;
  }

  // Inverse transform back to function values.
  std::vector<double> values() const {
    std::vector<double> v = coeff;
    walsh_hadamard(v);
    return v;
  }

  void write_levels_csv(std::ostream& os) const {
    CsvWriter w(os, {"k", "W_k"});
    const auto lw = level_weights();
    for (std::size_t k = 0; k < lw.size(); ++k) w.write(CsvRow().add(k).add(lw[k]));
  }

  void write_coefficients_csv(std::ostream& os) const {
    CsvWriter w(os, {"mask", "value"});
    for (std::size_t s = 0; s < coeff.size(); ++s) w.write(CsvRow().add(s).add(coeff[s]));
  }
};

inline FourierExpansion wht(const BooleanFunction& f) {
  FourierExpansion e{f.n(), std::vector<double>(f.table().begin(), f.table().end())};
  walsh_hadamard(e.coeff);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (double& c : e.coeff) c *= scale;
  return e;
}

inline double noise_stability(const FourierExpansion& e, double rho) {
  require(rho >= -1.0 && rho <= 1.0, "rho must be in [-1, 1]");
  const auto w = e.level_weights();
  double s = 0;
  for (std::size_t k = 0; k < w.size(); ++k) s += std::pow(rho, static_cast<double>(k)) * w[k];
  return s;
}

inline double noise_stability(const BooleanFunction& f, double rho) { return noise_stability(wht(f), rho); }

inline std::uint32_t random_input(int n, Rng& rng) {
  return n == 0 ? 0U : static_cast<std::uint32_t>(rng() >> (64 - n));
}

// Each bit flips independently with probability delta.
inline std::uint32_t flip_mask(int n, double delta, Rng& rng) {
  std::uint32_t m = 0;
  for (int i = 0; i < n; ++i)
    if (uniform01(rng) < delta) m |= 1U << i;
  return m;
}

inline Estimate empirical_flip_correlation(const BooleanFunction& f, double delta, std::size_t trials, Rng& rng) {
  require(delta >= 0.0 && delta <= 1.0, "flip probability must be in [0, 1]");
  require(trials > 0, "need at least one trial");
  std::vector<double> xs(trials);
  for (auto& v : xs) {
    const std::uint32_t x = random_input(f.n(), rng);
    v = f(x) * f(x ^ flip_mask(f.n(), delta, rng));
  }
  return sample_mean(xs);
}

// Built-in families ---------------------------------------------------------

inline BooleanFunction majority(int n) {
  require(n >= 1 && n % 2 == 1, "majority needs odd n");
  return BooleanFunction::from(n, [n](std::uint32_t x) { return 2 * std::popcount(x) < n; }, "majority");
}

inline int recursive_majority_value(std::uint32_t x, int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = ((x >> i) & 1U) ? -1 : 1;
  while (v.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i < v.size(); i += 3) next.push_back(v[i] + v[i + 1] + v[i + 2] > 0 ? 1 : -1);
    v.swap(next);
  }
  return v.front();
}

inline BooleanFunction rec_maj3(int depth) {
  require(depth >= 0, "depth must be non-negative");
  int n = 1;
  for (int d = 0; d < depth; ++d) n *= 3;
  require(n <= kBooleanCap, "rec_maj3 exceeds the truth-table cap");
  return BooleanFunction::from(n, [n](std::uint32_t x) { return recursive_majority_value(x, n) > 0; }, "rec_maj3");
}

inline BooleanFunction parity(int n) {
  return BooleanFunction::from(n, [](std::uint32_t x) { return std::popcount(x) % 2 == 0; }, "parity");
}

// (-1)^{x_0 x_1 + x_2 x_3 + ...}
inline BooleanFunction bent_ip(int n) {
  require(n >= 2 && n % 2 == 0, "bent_ip needs even n");
  return BooleanFunction::from(
      n, [](std::uint32_t x) { return std::popcount(x & (x >> 1) & 0x55555555U) % 2 == 0; }, "bent_ip");
}

inline int run_count(std::uint32_t x, int n) {
  return n == 0 ? 0 : 1 + std::popcount((x ^ (x >> 1)) & ((1U << (n - 1)) - 1U));
}

// Median of the run count of a uniform string: smallest m with P(R <= m) >= 1/2.
// R - 1 counts the n - 1 adjacent changes, each present with probability 1/2.
inline int runs_median_threshold(int n) {
  require(n >= 1, "runs_median needs n >= 1");
  std::vector<double> dist{1.0};
  for (int i = 0; i < n - 1; ++i) {
    std::vector<double> next(dist.size() + 1, 0.0);
    for (std::size_t j = 0; j < dist.size(); ++j) {
      next[j] += 0.5 * dist[j];
      next[j + 1] += 0.5 * dist[j];
    }
    dist.swap(next);
  }
  double acc = 0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    acc += dist[j];
    if (acc >= 0.5 - 1e-15) return static_cast<int>(j) + 1;
  }
  return n;
}

inline BooleanFunction runs_median(int n) {
  const int med = runs_median_threshold(n);
  return BooleanFunction::from(n, [n, med](std::uint32_t x) { return run_count(x, n) > med; }, "runs_median");
}

inline BooleanFunction builtin_function(const std::string& name, int n) {
  if (name == "majority") return majority(n);
  if (name == "parity") return parity(n);
  if (name == "bent_ip") return bent_ip(n);
  if (name == "runs_median") return runs_median(n);
  if (name == "rec_maj3") {
    int d = 0, m = 1;
    while (m < n) {
      m *= 3;
      ++d;
    }
    require(m == n, "rec_maj3 needs n = 3^d");
    return rec_maj3(d);
  }
  throw std::invalid_argument("unknown Boolean function: " + name);
}

// Level weights of rec_maj3 at any depth via W_d(z) = 3/4 W_{d-1}(z) + 1/4 W_{d-1}(z)^3,
// valid because the inner functions are balanced and act on disjoint inputs.
inline std::vector<double> rec_maj3_level_weights(int depth) {
  require(depth >= 0 && depth <= 8, "rec_maj3 depth out of range");
  std::vector<double> p{0.0, 1.0};
  for (int d = 0; d < depth; ++d) {
    std::vector<double> sq(2 * p.size() - 1, 0.0), cube(3 * p.size() - 2, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j) sq[i + j] += p[i] * p[j];
    for (std::size_t i = 0; i < sq.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j) cube[i + j] += sq[i] * p[j];
    std::vector<double> next(cube.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) next[i] += 0.75 * p[i];
    for (std::size_t i = 0; i < cube.size(); ++i) next[i] += 0.25 * cube[i];
    p.swap(next);
  }
  return p;
}

inline double mean_level(const std::vector<double>& w) {
  double m = 0;
  for (std::size_t k = 0; k < w.size(); ++k) m += static_cast<double>(k) * w[k];
  return m;
}

// Fits mean level ~ n^alpha over depths 1..max_depth.
inline LinearFit rec_maj3_alpha_fit(int max_depth) {
  require(max_depth >= 2, "need at least two depths");
  std::vector<double> x, y;
  for (int d = 1; d <= max_depth; ++d) {
    x.push_back(d * std::log(3.0));
    y.push_back(std::log(mean_level(rec_maj3_level_weights(d))));
  }
  return linear_fit(x, y);
}

// Classical noise models ----------------------------------------------------

// Probability that majority decoding of N copies survives i.i.d. flips.
inline double majority_repair_exact(int N, double flip_p) {
  require(N >= 1 && N % 2 == 1, "majority repair needs odd N");
  if (flip_p == 0.0) return 1.0;
  boost::math::binomial_distribution<double> b(N, flip_p);
  return boost::math::cdf(b, (N - 1) / 2);
}

inline Estimate majority_repair(int N, double flip_p, std::size_t trials, Rng& rng) {
  require(N >= 1 && N % 2 == 1, "majority repair needs odd N");
  require(flip_p >= 0.0 && flip_p < 0.5, "flip_p must be in [0, 1/2)");
  require(trials > 0, "need at least one trial");
  std::binomial_distribution<int> flips(N, flip_p);
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t)
    if (flips(rng) <= (N - 1) / 2) ++ok;
  return proportion(ok, trials);
}

// With probability delta every spin is set to rule(x); otherwise x is kept.
inline std::uint32_t cluster_noise(std::uint32_t x, double delta, const BooleanFunction& rule, Rng& rng) {
  require(delta >= 0.0 && delta <= 1.0, "delta must be in [0, 1]");
  require(x < rule.size(), "input has more bits than the rule");
  if (!(uniform01(rng) < delta)) return x;
  const std::uint32_t all = static_cast<std::uint32_t>(rule.size() - 1);
  return rule(x) > 0 ? 0U : all;
}

}  // namespace noiselab
