#include "noiselab/gibbs/gibbs.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace noiselab {
namespace {

SpinDistribution two_spin(double theta) {
  std::vector<double> e(4);
  for (std::size_t x = 0; x < 4; ++x) e[x] = -theta * SpinDistribution::spin(x, 0) * SpinDistribution::spin(x, 1);
  return SpinDistribution::from_energy(2, e);
}

SpinDistribution random_distribution(int n, Rng& rng) {
  std::vector<double> w(std::size_t{1} << n);
  for (double& x : w) x = 0.05 + uniform01(rng);
  return SpinDistribution::from_weights(n, w);
}

TEST(Decompose, TwoSpinCoupling) {
  const auto h = gibbs_decompose(two_spin(1.0));
  EXPECT_NEAR(h.coeff[0b11], -1.0, 1e-14);
  EXPECT_NEAR(h.coeff[0b01], 0.0, 1e-14);
  EXPECT_NEAR(h.coeff[0b10], 0.0, 1e-14);
}

TEST(Decompose, ProductAndUniform) {
  const auto p = gibbs_decompose(product_measure({0.3, -0.5, 1.1}));
  for (std::size_t s = 0; s < p.coeff.size(); ++s)
    if (std::popcount(s) >= 2) {
      EXPECT_NEAR(p.coeff[s], 0.0, 1e-14);
    }
  EXPECT_NEAR(p.coeff[0b001], -0.3, 1e-14);
  const auto u = gibbs_decompose(SpinDistribution(3, std::vector<double>(8, 0.125)));
  for (double c : u.coeff) EXPECT_NEAR(c, 0.0, 1e-15);
}

TEST(Decompose, ResumRecoversDistribution) {
  Rng rng(1);
  const auto mu = random_distribution(5, rng);
  const auto back = SpinDistribution::from_energy(5, gibbs_decompose(mu).energy());
  for (std::size_t x = 0; x < 32; ++x) EXPECT_NEAR(back[x], mu[x], 1e-12);
}

TEST(Decompose, RejectsZeros) {
  EXPECT_THROW(SpinDistribution(1, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(SpinDistribution(1, {0.6, 0.6}), std::invalid_argument);
}

TEST(Damp, TwoSpinClosedForm) {
  const auto mu = two_spin(1.0);
  EXPECT_NEAR(covariance_matrix(mu)(0, 1), std::tanh(1.0), 1e-12);
  const auto d = damp(mu, std::log(2.0));
  EXPECT_NEAR(gibbs_decompose(d).coeff[0b11], -0.5, 1e-12);
  EXPECT_NEAR(covariance_matrix(d)(0, 1), std::tanh(0.5), 1e-9);
  double prev = 1.0;
  for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 4.0}) {
    const double c = covariance_matrix(damp(mu, t))(0, 1);
    EXPECT_NEAR(c, std::tanh(std::exp(-t)), 1e-12);
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(Damp, ZeroTimeAndSemigroup) {
  Rng rng(2);
  const auto mu = random_distribution(4, rng);
  const auto z = damp(mu, 0.0);
  for (std::size_t x = 0; x < 16; ++x) EXPECT_NEAR(z[x], mu[x], 1e-10);
  const auto a = damp(damp(mu, 0.3), 0.7), b = damp(mu, 1.0);
  for (std::size_t x = 0; x < 16; ++x) EXPECT_NEAR(a[x], b[x], 1e-9);
}

TEST(Damp, ProductMeasuresAreFixed) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> h(6);
    for (double& x : h) x = 2 * uniform01(rng) - 1;
    const auto mu = product_measure(h);
    const auto d = damp(mu, 5.0);
    double worst = 0;
    for (std::size_t x = 0; x < 64; ++x) worst = std::max(worst, std::abs(d[x] - mu[x]));
    EXPECT_LT(worst, 1e-8);
    EXPECT_NEAR(covariance_matrix(mu)(2, 2), 1 - std::pow(std::tanh(h[2]), 2), 1e-12);
  }
}

TEST(Damp, LongTimeLimitIsDegreeOneProduct) {
  Rng rng(4);
  const auto mu = random_distribution(5, rng);
  EXPECT_LT(total_variation(damp(mu, 20.0), degree_one_product(mu)), 1e-6);
  const auto cov = covariance_matrix(degree_one_product(mu));
  EXPECT_NEAR(cov(0, 3), 0.0, 1e-12);
}

TEST(Damp, ScheduleValidation) {
  const auto mu = two_spin(1.0);
  EXPECT_THROW(damp(mu, 1.0, [](int, double) { return 1.0 / 2; }), std::invalid_argument);
  EXPECT_THROW(damp(mu, 1.0, [](int k, double) { return static_cast<double>(k); }), std::invalid_argument);
  EXPECT_THROW(damp(mu, 1.0, [](int k, double t) { return k == 1 ? 1.0 : std::min(1.0, t); }), std::invalid_argument);
  EXPECT_NO_THROW(damp(mu, 1.0, [](int k, double t) { return 1.0 / (1.0 + (k - 1) * t); }));
  EXPECT_THROW(damp(mu, -1.0), std::invalid_argument);
}

TEST(Covariance, Uniform) {
  const auto c = covariance_matrix(SpinDistribution(3, std::vector<double>(8, 0.125)));
  EXPECT_NEAR((c - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Io, CsvRoundTrips) {
  Rng rng(5);
  const auto mu = random_distribution(3, rng);
  std::ostringstream os;
  write_distribution_csv(os, mu);
  const auto back = read_distribution_csv(os.str());
  EXPECT_EQ(back.probabilities(), mu.probabilities());
  std::ostringstream hs;
  gibbs_decompose(mu).write_csv(hs);
  EXPECT_EQ(parse_csv(hs.str()).size(), 9U);
}

}  // namespace
}  // namespace noiselab
