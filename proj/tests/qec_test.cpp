#include "noiselab/noise/models.hpp"
#include "noiselab/qec/simulate.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <map>

namespace noiselab {
namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

TEST(Codes, BuiltinShapes) {
  const auto rep = builtin_code("rep3");
  EXPECT_EQ(rep.stabilizer_strings(), (std::vector<std::string>{"ZZI", "IZZ"}));
  EXPECT_EQ(rep.logical_x().symbols(), "XXX");
  EXPECT_EQ(rep.logical_z().symbols(), "ZII");
  EXPECT_EQ(builtin_code("steane7").generators().size(), 6U);
  EXPECT_EQ(builtin_code("shor9").generators().size(), 8U);
  EXPECT_THROW(builtin_code("golay"), std::invalid_argument);
}

TEST(Codes, Distances) {
  EXPECT_EQ(builtin_code("steane7").distance(), 3);
  EXPECT_EQ(builtin_code("shor9").distance(), 3);
  // Phase errors are invisible to the bit-flip code.
  EXPECT_EQ(builtin_code("rep3").distance(), 1);
}

TEST(Codes, RejectsInconsistentGenerators) {
  EXPECT_THROW(StabilizerCode("bad", {P("XZI"), P("ZXI")}, P("XXX"), P("ZII")), std::invalid_argument);
  EXPECT_THROW(StabilizerCode("bad", {P("ZZI"), P("IZZ")}, P("XII"), P("ZII")), std::invalid_argument);
  EXPECT_THROW(StabilizerCode("bad", {P("ZZI"), P("ZZI")}, P("XXX"), P("ZII")), std::invalid_argument);
}

TEST(Decoder, Rep3Examples) {
  const auto code = builtin_code("rep3");
  const auto a = syndrome_correct(code, P("IXI"));
  EXPECT_TRUE(a.corrected);
  EXPECT_EQ(a.residual, Pauli::I);
  const auto b = syndrome_correct(code, P("XXI"));
  EXPECT_FALSE(b.corrected);
  EXPECT_EQ(b.residual, Pauli::X);
  EXPECT_EQ(code.correction(code.syndrome(P("XXI"))).symbols(), "IIX");
  // Y on qubit 0 and X on qubit 0 share a syndrome; the tie goes to X.
  EXPECT_EQ(code.correction(code.syndrome(P("YII"))).symbols(), "XII");
}

TEST(Decoder, SingleQubitErrorsAreCorrected) {
  for (const char* name : {"steane7", "shor9"}) {
    const auto code = builtin_code(name);
    int cases = 0;
    for (int q = 0; q < code.n(); ++q) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        PauliString e(code.n());
        e.set(q, p);
        const auto r = syndrome_correct(code, e);
        EXPECT_TRUE(r.corrected) << name << " " << e.symbols();
        EXPECT_EQ(r.residual, Pauli::I);
        ++cases;
      }
    }
    EXPECT_EQ(cases, 3 * code.n());
  }
}

TEST(Decoder, TableCoversAllSyndromes) {
  for (const char* name : {"rep3", "steane7", "shor9"}) {
    const auto code = builtin_code(name);
    for (std::size_t s = 0; s < code.syndrome_count(); ++s) EXPECT_EQ(code.syndrome(code.correction(s)), s);
  }
}

double rep3_oracle(double e) {
  // Enumerate the 8 flip patterns; majority of flips is a failure.
  double r = 0;
  for (int m = 0; m < 8; ++m) {
    const int w = __builtin_popcount(static_cast<unsigned>(m));
    if (w >= 2) r += std::pow(e, w) * std::pow(1 - e, 3 - w);
  }
  return r;
}

TEST(LogicalRate, Rep3MatchesClosedForm) {
  const auto code = builtin_code("rep3");
  for (double e : {0.02, 0.05, 0.1}) {
    EXPECT_NEAR(rep3_oracle(e), 3 * e * e - 2 * e * e * e, 1e-15);
    const auto r = logical_error_rate(code, iid_pauli(3, {1 - e, e, 0, 0}), 100000, 7);
    const double sigma = std::sqrt(rep3_oracle(e) * (1 - rep3_oracle(e)) / 1e5);
    EXPECT_NEAR(r.rate, rep3_oracle(e), 3 * sigma) << e;
    EXPECT_NEAR(exact_logical_error_rate(code, chi_diagonal(iid_pauli(3, {1 - e, e, 0, 0}))), rep3_oracle(e), 1e-14);
  }
}

TEST(LogicalRate, ZeroNoise) {
  for (const char* name : {"rep3", "steane7", "shor9"}) {
    const auto code = builtin_code(name);
    EXPECT_EQ(logical_error_rate(code, Channel::identity(code.n()), 1000, 1).failures, 0U);
  }
}

TEST(LogicalRate, RejectsNonDiagonalChannels) {
  const auto code = builtin_code("rep3");
  const Channel rot = Channel::local_unitary(3, {0}, testing::rx(0.2));
  EXPECT_THROW(logical_error_rate(code, rot, 10, 1), std::invalid_argument);
  EXPECT_NO_THROW(logical_error_rate(code, twirl(rot), 10, 1));
}

// Independent weight <= 2 failure enumeration on symbol strings.
struct LowWeightOracle {
  double fail_mass = 0;  // failures among weight <= 2
  double tail = 0;       // total mass at weight >= 3
};

LowWeightOracle steane_oracle(double p) {
  const auto code = builtin_code("steane7");
  const int n = 7;
  auto anti = [](const std::string& a, const std::string& b) {
    int c = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != 'I' && b[i] != 'I' && a[i] != b[i]) ++c;
    return c % 2 == 1;
  };
  auto mul = [](const std::string& a, const std::string& b) {
    std::string r = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 'I') r[i] = b[i];
      else if (b[i] == 'I') r[i] = a[i];
      else if (a[i] == b[i]) r[i] = 'I';
      else r[i] = static_cast<char>('X' + 'Y' + 'Z' - a[i] - b[i]);
    }
    return r;
  };
  std::vector<std::string> errs{"IIIIIII"};
  for (int q = 0; q < n; ++q)
    for (char a : std::string("XYZ")) {
      std::string s(7, 'I');
      s[static_cast<std::size_t>(q)] = a;
      errs.push_back(s);
    }
  for (int q1 = 0; q1 < n; ++q1)
    for (int q2 = q1 + 1; q2 < n; ++q2)
      for (char a : std::string("XYZ"))
        for (char b : std::string("XYZ")) {
          std::string s(7, 'I');
          s[static_cast<std::size_t>(q1)] = a;
          s[static_cast<std::size_t>(q2)] = b;
          errs.push_back(s);
        }
  auto weight = [](const std::string& s) { return static_cast<int>(7 - std::count(s.begin(), s.end(), 'I')); };
  auto synd = [&](const std::string& e) {
    std::string s;
    for (const auto& g : code.stabilizer_strings()) s += anti(e, g) ? '1' : '0';
    return s;
  };
  std::map<std::string, std::string> leader;
  for (const auto& e : errs) {
    auto it = leader.find(synd(e));
    if (it == leader.end() || weight(e) < weight(it->second) || (weight(e) == weight(it->second) && e < it->second))
      leader[synd(e)] = e;
  }
  LowWeightOracle o;
  double low = 0;
  for (const auto& e : errs) {
    const double pr = std::pow(p / 3, weight(e)) * std::pow(1 - p, 7 - weight(e));
    low += pr;
    const std::string r = mul(leader[synd(e)], e);
    if (anti(r, "XXXXXXX") || anti(r, "ZZZZZZZ")) o.fail_mass += pr;
  }
  o.tail = 1 - low;
  return o;
}

TEST(LogicalRate, SteaneDepolarizingAgainstLowWeightEnumeration) {
  const double p = 0.05;
  const auto o = steane_oracle(p);
  const auto code = builtin_code("steane7");
  const Channel ch = baseline(BaselineKind::depolarizing, 7, p);
  const double exact = exact_logical_error_rate(code, chi_diagonal(ch));
  EXPECT_GE(exact, o.fail_mass - 1e-12);
  EXPECT_LE(exact, o.fail_mass + o.tail + 1e-12);
  const auto r = logical_error_rate(code, ch, 100000, 3);
  const double se = std::sqrt(exact * (1 - exact) / 1e5);
  EXPECT_GE(r.rate, o.fail_mass - 3 * se);
  EXPECT_LE(r.rate, o.fail_mass + o.tail + 3 * se);
  EXPECT_NEAR(r.rate, exact, 3 * se);
}

TEST(LogicalRate, PairedRunsShareTrialUniforms) {
  const auto code = builtin_code("rep3");
  const auto a = logical_error_rate(code, iid_pauli(3, {0.9, 0.1, 0, 0}), 5000, 11);
  const auto b = logical_error_rate(code, iid_pauli(3, {0.9, 0.1, 0, 0}), 5000, 11);
  EXPECT_EQ(a.failures, b.failures);
}

TEST(Twirl, Examples) {
  const Channel d = Channel::pauli(1, {0.7, 0.1, 0.15, 0.05});
  EXPECT_EQ(chi_diagonal(twirl(d)), chi_diagonal(d));
  const double delta = 0.7;
  const auto chi = chi_diagonal(twirl(Channel::unitary(DenseOperator(testing::rx(delta)))));
  EXPECT_NEAR(chi[0], std::pow(std::cos(delta / 2), 2), 1e-15);
  EXPECT_NEAR(chi[1], std::pow(std::sin(delta / 2), 2), 1e-15);
  EXPECT_NEAR(chi[2] + chi[3], 0.0, 1e-15);
}

TEST(Twirl, PreservesSpectrumAndIsIdempotent) {
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    const Channel c = testing::random_kraus_channel(2, 3, rng);
    const Channel t = twirl(c);
    EXPECT_NEAR(weight_spectrum(t).e_total, weight_spectrum(c).e_total, 1e-10);
    const auto a = chi_diagonal(t), b = chi_diagonal(twirl(t));
    for (std::size_t v = 0; v < a.size(); ++v) EXPECT_NEAR(a[v], b[v], 1e-12);
  }
}

// Oracle: explicit syndrome projectors and corrections as dense matrices.
double fidelity_oracle(const StabilizerCode& code, const Channel& ch) {
  const int n = code.n();
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  std::vector<CMatrix> recover;  // C_s P_s
  for (std::size_t s = 0; s < code.syndrome_count(); ++s) {
    CMatrix proj = CMatrix::Identity(d, d);
    for (std::size_t i = 0; i < code.generators().size(); ++i) {
      const double sign = ((s >> i) & 1U) ? -1.0 : 1.0;
      proj = proj * (CMatrix::Identity(d, d) + sign * testing::pauli_word(code.generators()[i].symbols())) / 2.0;
    }
    recover.push_back(testing::pauli_word(code.correction(s).symbols()) * proj);
  }
  double worst = 1;
  for (const auto& psi : logical_pauli_states(code)) {
    const CMatrix rho = apply_matrix(ch, psi * psi.adjoint());
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& r : recover) out += r * rho * r.adjoint();
    worst = std::min(worst, (psi.adjoint() * out * psi)(0, 0).real());
  }
  return worst;
}

TEST(Fidelity, LogicalStatesAreCodewords) {
  for (const char* name : {"rep3", "steane7", "shor9"}) {
    const auto code = builtin_code(name);
    const auto st = logical_pauli_states(code);
    for (const auto& g : code.generators()) {
      CVector v = st[2];
      g.apply(v);
      EXPECT_LT((v - st[2]).norm(), 1e-12);
    }
    EXPECT_NEAR(std::abs(st[0].dot(st[1])), 0.0, 1e-12);
  }
}

TEST(Fidelity, IdentityAndCorrectableErrors) {
  for (const char* name : {"rep3", "steane7", "shor9"}) {
    const auto code = builtin_code(name);
    EXPECT_NEAR(*recovery_fidelity(code, Channel::identity(code.n())).fidelity, 1.0, 1e-9) << name;
  }
  const auto rep = builtin_code("rep3");
  EXPECT_NEAR(*recovery_fidelity(rep, Channel::unitary(DenseOperator(P("IXI").to_matrix()))).fidelity, 1.0, 1e-12);
  Rng rng(4);
  const auto steane = builtin_code("steane7");
  const Channel one_qubit = embed(testing::random_kraus_channel(1, 4, rng), {3}, 7);
  EXPECT_NEAR(*recovery_fidelity(steane, one_qubit).fidelity, 1.0, 1e-9);
}

TEST(Fidelity, MatchesDenseOracle) {
  Rng rng(5);
  const auto rep = builtin_code("rep3");
  for (int i = 0; i < 3; ++i) {
    const Channel c = testing::random_kraus_channel(3, 2, rng);
    const double f = *recovery_fidelity(rep, c).fidelity;
    EXPECT_NEAR(f, fidelity_oracle(rep, c), 1e-10);
    EXPECT_GE(f, -1e-12);
    EXPECT_LE(f, 1 + 1e-9);
  }
  const auto steane = builtin_code("steane7");
  const Channel two = embed(testing::random_kraus_channel(2, 2, rng), {1, 5}, 7);
  const double f = *recovery_fidelity(steane, two).fidelity;
  EXPECT_NEAR(f, fidelity_oracle(steane, two), 1e-10);
  EXPECT_LT(f, 1.0 - 1e-3);
}

}  // namespace
}  // namespace noiselab
