#include "noiselab/boolean/gcode.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <sstream>

namespace noiselab {
namespace {

// Oracle: f^(S) = 2^{-n} sum_x f(x) prod_{i in S} x_i, term by term.
std::vector<double> direct_fourier(const BooleanFunction& f) {
  std::vector<double> c(f.size(), 0.0);
  for (std::uint32_t s = 0; s < f.size(); ++s) {
    for (std::uint32_t x = 0; x < f.size(); ++x) {
      int chi = 1;
      for (int i = 0; i < f.n(); ++i)
        if (((s >> i) & 1U) && ((x >> i) & 1U)) chi = -chi;
      c[s] += f(x) * chi;
    }
    c[s] /= static_cast<double>(f.size());
  }
  return c;
}

BooleanFunction random_function(int n, Rng& rng) {
  return BooleanFunction::from(n, [&](std::uint32_t) { return uniform01(rng) < 0.5; });
}

TEST(Wht, MatchesDirectSumAndInverts) {
  Rng rng(1);
  for (int n : {1, 3, 6}) {
    const auto f = random_function(n, rng);
    const auto e = wht(f);
    const auto o = direct_fourier(f);
    for (std::size_t s = 0; s < o.size(); ++s) EXPECT_NEAR(e.coeff[s], o[s], 1e-14);
  }
  const auto f = random_function(10, rng);
  const auto back = wht(f).values();
  for (std::uint32_t x = 0; x < f.size(); ++x) EXPECT_EQ(back[x], f(x));
}

TEST(Wht, Parity) {
  for (int n : {1, 4, 8}) {
    const auto e = wht(parity(n));
    for (std::size_t s = 0; s < e.coeff.size(); ++s) EXPECT_EQ(std::abs(e.coeff[s]), s + 1 == e.coeff.size() ? 1.0 : 0.0);
  }
}

TEST(Wht, Maj3) {
  const auto e = wht(majority(3));
  EXPECT_DOUBLE_EQ(e.coeff[0b001], 0.5);
  EXPECT_DOUBLE_EQ(e.coeff[0b010], 0.5);
  EXPECT_DOUBLE_EQ(e.coeff[0b100], 0.5);
  EXPECT_DOUBLE_EQ(e.coeff[0b111], -0.5);
  const auto w = e.level_weights();
  EXPECT_DOUBLE_EQ(w[1], 0.75);
  EXPECT_DOUBLE_EQ(w[3], 0.25);
  EXPECT_DOUBLE_EQ(w[0] + w[2], 0.0);
}

TEST(Wht, BentInnerProduct) {
  const auto f = bent_ip(4);
  for (std::uint32_t x = 0; x < 16; ++x) {
    const int b = [&](int i) { return static_cast<int>((x >> i) & 1U); }(0) * static_cast<int>((x >> 1) & 1U) +
                  static_cast<int>((x >> 2) & 1U) * static_cast<int>((x >> 3) & 1U);
    EXPECT_EQ(f(x), b % 2 == 0 ? 1 : -1);
  }
  for (double c : wht(f).coeff) EXPECT_NEAR(c * c, 1.0 / 16, 1e-15);
}

TEST(Wht, ParsevalOnRandomFunctions) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(wht(random_function(1 + i % 12, rng)).total_weight(), 1.0, 1e-9);
}

TEST(Wht, CapAndValidation) {
  EXPECT_THROW(BooleanFunction(25, {}), std::invalid_argument);
  EXPECT_THROW(BooleanFunction(2, {1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(BooleanFunction(1, {1, 0}), std::invalid_argument);
}

TEST(Stability, Examples) {
  Rng rng(3);
  EXPECT_NEAR(noise_stability(random_function(6, rng), 1.0), 1.0, 1e-12);
  EXPECT_NEAR(noise_stability(parity(5), 0.7), std::pow(0.7, 5), 1e-14);
  EXPECT_NEAR(noise_stability(majority(3), 0.8), 0.728, 1e-14);
}

TEST(Stability, FlipCorrelationMatchesClosedForm) {
  Rng rng(4);
  const auto f0 = random_function(5, rng);
  EXPECT_DOUBLE_EQ(empirical_flip_correlation(f0, 0.0, 100, rng).value, 1.0);
  for (const auto& f : {majority(9), rec_maj3(2), parity(8), majority(3)}) {
    for (double d : {0.05, 0.1}) {
      const auto est = empirical_flip_correlation(f, d, 40000, rng);
      EXPECT_NEAR(est.value, noise_stability(f, 1 - 2 * d), 3 * est.stderr_ + 1e-12) << f.name() << " " << d;
    }
  }
  EXPECT_NEAR(noise_stability(parity(8), 0.8), 0.16777216, 1e-12);
}

TEST(Builtins, MajorityAndRecursiveMajority) {
  EXPECT_EQ(builtin_function("majority", 3), majority(3));
  EXPECT_EQ(builtin_function("rec_maj3", 3), majority(3));
  const auto r = rec_maj3(2);
  EXPECT_EQ(r.n(), 9);
  EXPECT_EQ(r(0), 1);
  // One -1 per triple: bits 0, 4, 8.
  EXPECT_EQ(r((1U << 0) | (1U << 4) | (1U << 8)), 1);
  // Two -1 in two triples flips the outer majority.
  EXPECT_EQ(r(0b000011011U), -1);
  EXPECT_THROW(builtin_function("majority", 4), std::invalid_argument);
  EXPECT_THROW(builtin_function("rec_maj3", 6), std::invalid_argument);
  EXPECT_THROW(builtin_function("bent_ip", 3), std::invalid_argument);
  EXPECT_THROW(builtin_function("nope", 3), std::invalid_argument);
}

TEST(Builtins, RunsMedianByEnumeration) {
  for (int n : {3, 5, 8}) {
    std::vector<int> runs;
    for (std::uint32_t x = 0; x < (1U << n); ++x) {
      int r = 1;
      for (int i = 0; i + 1 < n; ++i)
        if (((x >> i) & 1U) != ((x >> (i + 1)) & 1U)) ++r;
      runs.push_back(r);
    }
    std::vector<int> sorted = runs;
    std::sort(sorted.begin(), sorted.end());
    const int median = sorted[(sorted.size() - 1) / 2];  // lower median
    const auto f = runs_median(n);
    for (std::uint32_t x = 0; x < (1U << n); ++x) EXPECT_EQ(f(x), runs[x] > median ? 1 : -1);
  }
}

TEST(Builtins, RecMajLevelRecursion) {
  for (int d : {1, 2}) {
    const auto w = wht(rec_maj3(d)).level_weights();
    const auto r = rec_maj3_level_weights(d);
    ASSERT_EQ(r.size(), w.size());
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(r[k], w[k], 1e-12);
  }
  const auto w3 = rec_maj3_level_weights(3);
  EXPECT_EQ(w3.size(), 28U);
  double s = 0;
  for (double x : w3) s += x;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(mean_level(w3), std::pow(1.5, 3), 1e-12);
  EXPECT_NEAR(rec_maj3_alpha_fit(5).slope, std::log(1.5) / std::log(3.0), 1e-12);
}

TEST(Hex, RoundTrip) {
  Rng rng(5);
  for (int n : {0, 1, 2, 5}) {
    const auto f = random_function(n, rng);
    EXPECT_EQ(BooleanFunction::from_hex(n, f.to_hex()), f);
  }
  EXPECT_EQ(majority(3).to_hex(), "8e");
  EXPECT_THROW(BooleanFunction::from_hex(3, "8g"), std::invalid_argument);
  EXPECT_THROW(BooleanFunction::from_hex(1, "4"), std::invalid_argument);
}

TEST(Hex, CsvDumps) {
  std::ostringstream a, b;
  wht(majority(3)).write_levels_csv(a);
  wht(majority(3)).write_coefficients_csv(b);
  EXPECT_EQ(parse_csv(a.str()).size(), 5U);
  EXPECT_EQ(parse_csv(b.str()).size(), 9U);
}

double repair_oracle(int n, double p) {
  // P(Binom(n, p) <= (n - 1)/2) summed in log space.
  double s = 0;
  for (int k = 0; k <= (n - 1) / 2; ++k)
    s += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
  return s;
}

TEST(MajorityRepair, Examples) {
  Rng rng(6);
  EXPECT_DOUBLE_EQ(majority_repair(101, 0.0, 100, rng).value, 1.0);
  EXPECT_NEAR(majority_repair_exact(3, 0.1), 1 - (3 * 0.01 * 0.9 + 0.001), 1e-14);
  for (int n : {101, 1001, 10001}) EXPECT_NEAR(majority_repair_exact(n, 0.49), repair_oracle(n, 0.49), 1e-9);
  EXPECT_NEAR(repair_oracle(10001, 0.49), 0.978, 0.001);
  EXPECT_NEAR(repair_oracle(101, 0.49), 0.579, 0.001);
  EXPECT_NEAR(repair_oracle(1001, 0.49), 0.737, 0.001);
  double prev = 0;
  for (int n : {101, 1001, 10001}) {
    const auto e = majority_repair(n, 0.49, 10000, rng);
    EXPECT_NEAR(e.value, repair_oracle(n, 0.49), 3 * std::sqrt(repair_oracle(n, 0.49) * (1 - repair_oracle(n, 0.49)) / 1e4));
    EXPECT_GT(e.value, prev);
    prev = e.value;
  }
  EXPECT_THROW(majority_repair(100, 0.1, 10, rng), std::invalid_argument);
  EXPECT_THROW(majority_repair(101, 0.5, 10, rng), std::invalid_argument);
}

TEST(ClusterNoise, Examples) {
  Rng rng(7);
  const auto maj = majority(5);
  EXPECT_EQ(cluster_noise(0b10110U, 0.0, maj, rng), 0b10110U);
  // Three of five bits set means three spins at -1: the cluster is all -1.
  EXPECT_EQ(cluster_noise(0b10110U, 1.0, maj, rng), 0b11111U);
  EXPECT_EQ(cluster_noise(0b00110U, 1.0, maj, rng), 0U);
}

TEST(ClusterNoise, PairCorrelationMatchesEnumeration) {
  const auto maj = majority(3);
  const double delta = 0.3;
  // Exact: average over 8 inputs of both branches.
  double exact = 0;
  for (std::uint32_t x = 0; x < 8; ++x) {
    const int keep = (((x >> 0) & 1U) == ((x >> 1) & 1U)) ? 1 : -1;
    exact += ((1 - delta) * keep + delta * 1) / 8;
  }
  EXPECT_NEAR(exact, delta, 1e-15);
  Rng rng(8);
  std::vector<double> xs;
  for (int t = 0; t < 40000; ++t) {
    const std::uint32_t y = cluster_noise(random_input(3, rng), delta, maj, rng);
    xs.push_back((((y >> 0) & 1U) == ((y >> 1) & 1U)) ? 1.0 : -1.0);
  }
  const auto e = sample_mean(xs);
  EXPECT_NEAR(e.value, exact, 3 * e.stderr_);
}

BooleanFunction ball(int n, int r) {
  return BooleanFunction::from(n, [r](std::uint32_t z) { return std::popcount(z) <= r; });
}

// Oracle: largest valid code by trying every subset (n <= 3).
std::size_t brute_max_code(const BooleanFunction& g) {
  std::size_t best = 0;
  const std::size_t m = g.size();
  for (std::uint32_t set = 1; set < (1U << m); ++set) {
    std::vector<std::uint32_t> x;
    for (std::uint32_t c = 0; c < m; ++c)
      if ((set >> c) & 1U) x.push_back(c);
    if (x.size() <= best) continue;
    bool ok = true;
    for (std::uint32_t y = 0; y < m && ok; ++y) {
      int hits = 0;
      for (auto c : x) hits += g(c ^ y) > 0;
      ok = hits <= 1;
    }
    if (ok) best = x.size();
  }
  return best;
}

TEST(GCode, Examples) {
  const auto r = g_code_search(ball(3, 1), GCodeMode::exact);
  EXPECT_EQ(r.codewords, (std::vector<std::uint32_t>{0b000, 0b111}));
  EXPECT_TRUE(r.optimal);
  EXPECT_TRUE(verify_gcode(ball(3, 1), r.codewords));
  const auto all = BooleanFunction::from(4, [](std::uint32_t) { return true; });
  EXPECT_EQ(g_code_search(all, GCodeMode::exact).codewords.size(), 1U);
  const auto zero = BooleanFunction::from(4, [](std::uint32_t z) { return z == 0; });
  EXPECT_EQ(g_code_search(zero, GCodeMode::exact).codewords.size(), 16U);
  EXPECT_EQ(g_code_search(zero, GCodeMode::greedy).codewords.size(), 16U);
}

TEST(GCode, ExactMatchesBruteForce) {
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const auto g = BooleanFunction::from(3, [&](std::uint32_t) { return uniform01(rng) < 0.3; });
    const auto r = g_code_search(g, GCodeMode::exact);
    EXPECT_TRUE(verify_gcode(g, r.codewords));
    EXPECT_EQ(r.codewords.size(), brute_max_code(g));
  }
}

TEST(GCode, GreedyIsValidAndExactIsNoWorse) {
  const auto g = ball(7, 1);
  const auto gr = g_code_search(g, GCodeMode::greedy);
  const auto ex = g_code_search(g, GCodeMode::exact, 20.0);
  EXPECT_TRUE(verify_gcode(g, gr.codewords));
  EXPECT_TRUE(verify_gcode(g, ex.codewords));
  EXPECT_GE(ex.codewords.size(), gr.codewords.size());
  // Lexicographic first fit on radius-1 balls finds the Hamming code.
  EXPECT_EQ(gr.codewords.size(), 16U);
  EXPECT_FALSE(verify_gcode(g, {0b0000000U, 0b0000011U}));
}

TEST(GCode, TimeoutFallsBackToGreedy) {
  const auto g = ball(12, 1);
  const auto r = g_code_search(g, GCodeMode::exact, 0.05);
  EXPECT_TRUE(r.timed_out);
  EXPECT_FALSE(r.optimal);
  EXPECT_TRUE(verify_gcode(g, r.codewords));
  EXPECT_THROW(g_code_search(ball(15, 1), GCodeMode::exact), std::invalid_argument);
}

}  // namespace
}  // namespace noiselab
