#include "noiselab/noise/models.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace noiselab {
namespace {

CMatrix expm_i(const CMatrix& h) { return (cplx(0, 1) * h).exp(); }

TEST(Generators, MatchMatrixExponentials) {
  const double d = 0.37;
  EXPECT_LT(max_abs_deviation(rotation_x(d), expm_i(-d / 2 * testing::pauli2('X'))), 1e-13);
  const CMatrix p = testing::kron(testing::pauli2('I') - testing::pauli2('Z'), testing::pauli2('I') - testing::pauli2('X')) / 4.0;
  EXPECT_LT(max_abs_deviation(rotation_cx(d), expm_i(d * p)), 1e-13);
}

TEST(Generators, RcxAtPiIsCnot) { EXPECT_LT(max_abs_deviation(rotation_cx(std::numbers::pi), testing::cnot()), 1e-15); }

TEST(Generators, ClosedUnderInversion) {
  const TinyGeneratorSet w(0.1);
  for (int e = 0; e < TinyGeneratorSet::size(); ++e) {
    const CMatrix prod = w.matrix(e) * w.matrix(TinyGeneratorSet::inverse(e));
    EXPECT_LT(max_abs_deviation(prod, CMatrix::Identity(prod.rows(), prod.cols())), 1e-15);
  }
}

TEST(Generators, TinyHermitianUnitaryHasBoundedAngle) {
  Rng rng(2);
  const CMatrix v = tiny_hermitian_unitary(2, 0.1, rng);
  EXPECT_LT(max_abs_deviation(v * v.adjoint(), CMatrix::Identity(4, 4)), 1e-13);
  Eigen::ComplexEigenSolver<CMatrix> es(v);
  double maxangle = 0;
  for (Eigen::Index i = 0; i < 4; ++i) maxangle = std::max(maxangle, std::abs(std::arg(es.eigenvalues()(i))));
  EXPECT_NEAR(maxangle, 0.1, 1e-12);
}

TEST(Graph, ShapesAndValidation) {
  EXPECT_EQ(GraphSpec::complete_with_loops(3).edges().size(), 6U);
  EXPECT_EQ(GraphSpec::grid(2, 3).edges().size(), 7U);
  EXPECT_EQ(GraphSpec::cycle(4).edges().size(), 4U);
  EXPECT_THROW(GraphSpec(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(GraphSpec(3, {{0, 3}}), std::invalid_argument);
  const auto g = GraphSpec::from_json(json{{"shape", "grid"}, {"rows", 2}, {"cols", 2}});
  EXPECT_EQ(GraphSpec::from_json(g.to_json()).edges(), g.edges());
}

TEST(BlockModel, ZeroRateIsIdentity) {
  Rng rng(1);
  const auto r = sample_block_model(4, 1, 0.0, rng);
  EXPECT_TRUE(r.channel.is_identity());
  EXPECT_DOUBLE_EQ(weight_spectrum(r.channel).e_total, 0.0);
}

TEST(BlockModel, HaarFillIsCalibrated) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = sample_block_model(5, 2, 0.1, rng);
    const auto s = weight_spectrum(r.channel);
    EXPECT_TRUE(r.meta["calibrated"].get<bool>());
    // Each block's worst qubit sits exactly at t; the partner sits at or below it.
    for (const auto& b : r.meta["blocks"]) {
      double mx = 0;
      for (int q : b.get<std::vector<int>>()) mx = std::max(mx, s.e_per_qubit[static_cast<std::size_t>(q)]);
      EXPECT_NEAR(mx, 0.1, 1e-10);
    }
    EXPECT_LT(trace_preservation_defect(r.channel.kraus_operators()), 1e-9);
    EXPECT_GE(choi_min_eigenvalue(r.channel.kraus_operators()), -1e-9);
  }
}

TEST(BlockModel, FullStrengthSingleBlockConcentratesAtThreeQuarters) {
  Rng rng(3);
  const int n = 4, draws = 60;
  double mean = 0;
  for (int i = 0; i < draws; ++i) {
    const auto r = sample_block_model(n, n, 1.0, rng);
    EXPECT_EQ(r.meta["blocks"].size(), 1U);
    const auto s = weight_spectrum(r.channel);
    mean += s.e_total / draws;
  }
  EXPECT_NEAR(mean, 0.75 * n, 0.15);
}

TEST(BlockModel, DepolarizingSingletonsGiveBinomialSpectrum) {
  Rng rng(4);
  const int n = 5;
  const double p = 0.07;
  const auto s = weight_spectrum(sample_block_model(n, 1, p, rng, BlockFill::depolarizing).channel);
  const auto b = weight_spectrum(baseline(BaselineKind::depolarizing, n, p));
  for (int k = 0; k <= n; ++k) {
    const double oracle = testing::binom(n, k) * std::pow(p, k) * std::pow(1 - p, n - k);
    EXPECT_NEAR(s.w[static_cast<std::size_t>(k)], oracle, 1e-14);
    EXPECT_NEAR(b.w[static_cast<std::size_t>(k)], oracle, 1e-14);
  }
}

TEST(BlockModel, DepolarizingSingletonsMatchBaselineInDistribution) {
  // Both e_total samples are point masses up to float rounding; compare on a 1e-12 grid.
  auto grid = [](double x) { return std::round(x * 1e12) / 1e12; };
  std::vector<double> a, b;
  for (int i = 0; i < 500; ++i) {
    Rng rng = derive_rng(77, "ks", i);
    a.push_back(grid(weight_spectrum(sample_block_model(4, 1, 0.05, rng, BlockFill::depolarizing).channel).e_total));
    b.push_back(grid(weight_spectrum(baseline(BaselineKind::depolarizing, 4, 0.05)).e_total));
  }
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}

TEST(BlockModel, WideDepolarizingBlocksKeepPerQubitRate) {
  Rng rng(5);
  const auto s = weight_spectrum(sample_block_model(4, 2, 0.2, rng, BlockFill::depolarizing).channel);
  for (double e : s.e_per_qubit) EXPECT_NEAR(e, 0.2, 1e-14);
  EXPECT_THROW(sample_block_model(4, 2, 0.9, rng, BlockFill::depolarizing), std::invalid_argument);
}

TEST(BlockModel, InvalidParams) {
  Rng rng(6);
  EXPECT_THROW(sample_block_model(3, 4, 0.1, rng), std::invalid_argument);
  EXPECT_THROW(sample_block_model(3, 0, 0.1, rng), std::invalid_argument);
  EXPECT_THROW(sample_block_model(3, 1, 1.5, rng), std::invalid_argument);
}

TEST(BlockModel, SameSeedSameChannel) {
  Rng r1(9), r2(9);
  const auto a = sample_block_model(4, 2, 0.1, r1);
  const auto b = sample_block_model(4, 2, 0.1, r2);
  EXPECT_EQ(channel_to_json(a.channel).dump(), channel_to_json(b.channel).dump());
  EXPECT_EQ(a.meta, b.meta);
}

TEST(RandomBlockSize, DoublyExponentialWeights) {
  const auto d = doubly_exponential_blocksize(3);
  // 0.25, 0.0625, 0.00390625 renormalized.
  const double z = 0.25 + 0.0625 + 0.00390625;
  EXPECT_NEAR(d[0], 0.25 / z, 1e-15);
  EXPECT_NEAR(d[1], 0.0625 / z, 1e-15);
  EXPECT_NEAR(d[2], 0.00390625 / z, 1e-15);
  EXPECT_NEAR(d[0], 0.790123, 1e-6);
  EXPECT_NEAR(d[1], 0.197531, 1e-6);
  EXPECT_NEAR(d[2], 0.012346, 1e-6);
}

TEST(RandomBlockSize, PointMassAndZeroStrength) {
  Rng rng(10);
  for (int i = 0; i < 5; ++i) {
    const auto r = sample_random_blocksize_model(4, {1.0}, 0.1, rng);
    EXPECT_EQ(r.meta["k"], 1);
    for (double e : weight_spectrum(r.channel).e_per_qubit) EXPECT_NEAR(e, 0.1, 1e-10);
  }
  EXPECT_TRUE(sample_random_blocksize_model(4, {0.5, 0.5}, 0.0, rng).channel.is_identity());
  EXPECT_THROW(sample_random_blocksize_model(2, {0.5, 0.0, 0.5}, 0.1, rng), std::invalid_argument);
  EXPECT_THROW(sample_random_blocksize_model(2, {0.5, 0.4}, 0.1, rng), std::invalid_argument);
}

TEST(Ils, InversePairsCancel) {
  Rng rng(11);
  const double delta = 0.2;
  const IlsMu rx_only{{1.0}, 1.0};
  const auto r = sample_ils(3, rx_only, 2, delta, rng, {true});
  EXPECT_LT(weight_spectrum(r.channel).e_total, 1e-12);
  EXPECT_NEAR(r.meta["factor_e_sum"].get<double>(), 2 * std::pow(std::sin(delta / 2), 2), 1e-14);
}

TEST(Ils, InversePairsCancelForDefaultMu) {
  Rng rng(12);
  const auto r = sample_ils(4, IlsMu{}, 10, 0.3, rng, {true});
  EXPECT_LT(weight_spectrum(r.channel).e_total, 1e-12);
  EXPECT_GT(r.meta["factor_e_sum"].get<double>(), 0.0);
}

TEST(Ils, SingleRotation) {
  Rng rng(13);
  const double delta = 0.4;
  const auto s = weight_spectrum(sample_ils(2, IlsMu{{1.0}, 1.0}, 1, delta, rng).channel);
  EXPECT_NEAR(s.w[1], std::pow(std::sin(delta / 2), 2), 1e-14);
}

TEST(Ils, ZeroAngleIsIdentity) {
  Rng rng(14);
  const auto r = sample_ils(3, IlsMu{}, 25, 0.0, rng);
  EXPECT_LT(weight_spectrum(r.channel).e_total, 1e-14);
}

TEST(Ils, FewQubitsDropLargeSubsets) {
  Rng rng(15);
  const auto r = sample_ils(1, IlsMu{}, 5, 0.1, rng);
  for (const auto& f : r.meta["factors"]) EXPECT_EQ(f["targets"].size(), 1U);
  EXPECT_THROW(sample_ils(2, IlsMu{{0.5, 0.6}, 0.5}, 1, 0.1, rng), std::invalid_argument);
  EXPECT_THROW(sample_ils(2, IlsMu{{0.0, 0.0, 1.0}, 0.5}, 1, 0.1, rng), std::invalid_argument);
}

TEST(GraphWalk, ZeroTarget) {
  Rng rng(16);
  const auto r = sample_graph_walk(GraphSpec::complete_with_loops(3), TinyGeneratorSet(0.1), 0.0, 100, rng);
  EXPECT_EQ(r.m, 0);
  EXPECT_TRUE(r.reached);
  EXPECT_DOUBLE_EQ(weight_spectrum(r.channel).e_total, 0.0);
}

TEST(GraphWalk, FullRotationsReachTargetQuickly) {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    const double target = 2.0;
    const auto r = sample_graph_walk(GraphSpec::complete_with_loops(3), TinyGeneratorSet(std::numbers::pi), target, 1000, rng);
    EXPECT_TRUE(r.reached);
    EXPECT_LE(r.m, 10 * static_cast<int>(std::ceil(target)));
    EXPECT_GE(weight_spectrum(r.channel).e_total, target - 1e-9);
  }
}

TEST(GraphWalk, DeterministicAndMonotone) {
  Rng r1(17), r2(17);
  const auto a = sample_graph_walk(GraphSpec::complete_with_loops(2), TinyGeneratorSet(0.05), 0.1, 100000, r1);
  const auto b = sample_graph_walk(GraphSpec::complete_with_loops(2), TinyGeneratorSet(0.05), 0.1, 100000, r2);
  EXPECT_TRUE(a.reached);
  EXPECT_GT(a.m, 0);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(channel_to_json(a.channel).dump(), channel_to_json(b.channel).dump());
  for (std::size_t i = 1; i < a.estimates.size(); ++i) EXPECT_GE(a.estimates[i], a.estimates[i - 1]);
  EXPECT_GE(a.estimates.back(), 0.1);
}

TEST(GraphWalk, ProductOrderMatchesSteps) {
  Rng rng(18);
  const TinyGeneratorSet w(0.3);
  const auto r = sample_graph_walk(GraphSpec::path(3), w, 0.5, 50, rng);
  // Rebuild T_1 T_2 ... T_m from the recorded steps.
  CMatrix t = CMatrix::Identity(8, 8);
  for (const auto& s : r.meta["steps"]) {
    int e = 0;
    while (TinyGeneratorSet::name(e) != s["gen"].get<std::string>()) ++e;
    t = t * embed_matrix(w.matrix(e), s["targets"].get<std::vector<int>>(), 3);
  }
  EXPECT_LT(max_abs_deviation(t, r.channel.kraus_operators().front()), 1e-12);
}

TEST(GraphWalk, LoopsOnlyUseSingleQubitGenerators) {
  Rng rng(19);
  const auto r = sample_graph_walk(GraphSpec(2, {{0, 0}, {1, 1}}), TinyGeneratorSet(0.2), 0.5, 30, rng);
  for (const auto& s : r.meta["steps"]) EXPECT_EQ(s["targets"].size(), 1U);
}

TEST(GraphWalk, MaxMIsFlagged) {
  Rng rng(20);
  const auto r = sample_graph_walk(GraphSpec::complete_with_loops(2), TinyGeneratorSet(0.01), 1.5, 5, rng);
  EXPECT_FALSE(r.reached);
  EXPECT_EQ(r.m, 5);
}

TEST(PauliBall, Normalized) {
  Rng rng(21);
  const auto r = sample_random_pauli_channel(1, rng);
  const auto chi = chi_diagonal(r.channel);
  double s = 0;
  for (double x : chi) s += x;
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_THROW(sample_random_pauli_channel(9, rng), std::invalid_argument);
}

TEST(PauliBall, MeanHeightIsThreeQuartersN) {
  Rng rng(22);
  const int n = 4, draws = 10000;
  double mean = 0;
  for (int i = 0; i < draws; ++i) mean += weight_spectrum(sample_random_pauli_channel(n, rng).channel).e_total / draws;
  EXPECT_NEAR(mean, 3.0, 0.05);
}

TEST(Baseline, Examples) {
  EXPECT_DOUBLE_EQ(weight_spectrum(baseline(BaselineKind::depolarizing, 3, 0.0)).w[0], 1.0);
  const auto d = weight_spectrum(baseline(BaselineKind::depolarizing, 1, 0.12));
  EXPECT_NEAR(d.w[0], 0.88, 1e-15);
  EXPECT_NEAR(d.w[1], 0.12, 1e-15);
  const auto z = weight_spectrum(baseline(BaselineKind::dephasing, 2, 0.5));
  EXPECT_NEAR(z.w[0], 0.25, 1e-15);
  EXPECT_NEAR(z.w[1], 0.5, 1e-15);
  EXPECT_NEAR(z.w[2], 0.25, 1e-15);
}

TEST(Spec, JsonRoundTripAndDispatch) {
  const json j = json::parse(R"({"variant":"ILS","n":3,"seed":5,
      "params":{"m":4,"delta":0.1,"mu":{"size_probs":[0.8,0.2],"tiny_probability":1.0}}})");
  const auto s = NoiseModelSpec::from_json(j);
  EXPECT_EQ(NoiseModelSpec::from_json(s.to_json()).to_json(), s.to_json());
  const auto a = sample(s), b = sample(s);
  EXPECT_EQ(channel_to_json(a.channel).dump(), channel_to_json(b.channel).dump());
  EXPECT_EQ(a.meta["factors"].size(), 4U);
  EXPECT_THROW(NoiseModelSpec::from_json(json{{"variant", "ILS"}, {"bogus", 1}}), std::invalid_argument);
  EXPECT_THROW(NoiseModelSpec::from_json(json{{"variant", "Nope"}}), std::invalid_argument);
  EXPECT_THROW(NoiseModelSpec::from_json(json{{"variant", "BlockModel"}, {"n", 2}, {"params", {{"k", 3}}}}),
               std::invalid_argument);
  for (const char* v : {"BlockModel", "RandomBlockSize", "GraphWalk", "RandomPauliBall", "Depolarizing", "Dephasing"}) {
    json js{{"variant", v}, {"n", 2}, {"seed", 1}, {"params", {{"t", 0.1}, {"p", 0.1}, {"eps", 0.05}, {"delta", 0.1}}}};
    if (std::string(v) == "RandomBlockSize") js["params"]["D"] = {0.5, 0.5};
    const auto r = sample(NoiseModelSpec::from_json(js));
    EXPECT_EQ(r.channel.qubits(), 2) << v;
    EXPECT_LT(trace_preservation_defect(r.channel.kraus_operators()), 1e-9) << v;
  }
}

}  // namespace
}  // namespace noiselab
