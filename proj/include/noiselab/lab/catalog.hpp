#pragma once

// The experiment catalog. Each entry fixes its CSV columns; params not given
// in a config take the defaults listed here.

#include "noiselab/boolean/function.hpp"
#include "noiselab/elections/elections.hpp"
#include "noiselab/gibbs/gibbs.hpp"
#include "noiselab/lab/harness.hpp"
#include "noiselab/locality/locality.hpp"
#include "noiselab/noise/models.hpp"
#include "noiselab/qec/simulate.hpp"

namespace noiselab {

namespace lab {

using nlohmann::json;

inline std::uint64_t label(std::size_t i) { return static_cast<std::uint64_t>(i); }

// Per-height mean and standard error over a set of spectra.
inline std::pair<std::vector<Estimate>, Estimate> summarize_spectra(const std::vector<WeightSpectrum>& ss) {
  const int n = ss.front().n;
  std::vector<Estimate> w;
  for (int k = 0; k <= n; ++k) {
    std::vector<double> xs;
    for (const auto& s : ss) xs.push_back(s.w[static_cast<std::size_t>(k)]);
    w.push_back(sample_mean(xs));
  }
  std::vector<double> e;
  for (const auto& s : ss) e.push_back(s.e_total);
  return {w, sample_mean(e)};
}

inline double counting_weight(int n, int k) { return binomial_coefficient(n, k) * std::pow(3.0, k) / std::pow(4.0, n); }

// haar-height ----------------------------------------------------------------

inline json run_haar_height(RunContext& ctx) {
  const int n = ctx.param<int>("n");
  const auto spectra = ctx.map<WeightSpectrum>(ctx.trials(), [&](std::size_t i) {
    Rng rng = ctx.rng(label(i), "haar");
    return operator_spectrum(haar_unitary(n, rng));
  });
  const auto [w, e] = summarize_spectra(spectra);
  double worst = 0;
  for (int k = 0; k <= n; ++k) {
    const auto& est = w[static_cast<std::size_t>(k)];
    worst = std::max(worst, std::abs(est.value - counting_weight(n, k)));
    ctx.write(CsvRow().add(n).add(k).add(est.value).add(est.stderr_).add(counting_weight(n, k)));
  }
  return {{"draws", ctx.trials()}, {"mean_e_total", e.value}, {"mean_height_fraction", e.value / n},
          {"max_abs_deviation", worst}};
}

// block-product-spectrum -------------------------------------------------------

// Per-factor rate t with sum_f e_total(T_f) / n = target on average: factor
// e_total is linear in t (until a block saturates), so a small probe rate fixes
// the slope. First order in the noise; the realized composite rate is reported.
inline double calibrate_factor_rate(RunContext& ctx, int n, int k, int m, double target, BlockFill fill,
                                    std::size_t draws) {
  constexpr double probe = 1e-3;
  const auto slopes = ctx.map<double>(draws, [&](std::size_t j) {
    Rng rng = ctx.rng(label(static_cast<std::size_t>(k)), label(j), "calibration");
    return weight_spectrum(sample_block_model(n, k, probe, rng, fill).channel).e_total / probe;
  });
  double mean = 0;
  for (double s : slopes) mean += s / static_cast<double>(slopes.size());
  require(mean > 0, "calibration found no noise");
  return target * n / (m * mean);
}

inline json run_block_product(RunContext& ctx) {
  const int n = ctx.param<int>("n");
  const int m = ctx.param<int>("m");
  const double target = ctx.param<double>("target_rate");
  const BlockFill fill = fill_from_name(ctx.param<std::string>("fill"));
  const auto cal = static_cast<std::size_t>(ctx.param<int>("calibration_draws"));
  json per_k = json::array();
  for (int k : ctx.param<std::vector<int>>("block_sizes")) {
    const double t = calibrate_factor_rate(ctx, n, k, m, target, fill, cal);
    require(t <= 1.0, "target rate needs a per-factor rate above 1");
    struct Draw {
      WeightSpectrum s;
      bool calibrated = true;
    };
    const auto draws = ctx.map<Draw>(ctx.trials(), [&](std::size_t i) {
      Draw d;
      Channel ch = Channel::identity(n);
      for (int f = 0; f < m; ++f) {
        Rng rng = ctx.rng(label(static_cast<std::size_t>(k)), label(i), "factor", label(static_cast<std::size_t>(f)));
        auto sc = sample_block_model(n, k, t, rng, fill);
        d.calibrated = d.calibrated && sc.meta.at("calibrated").get<bool>();
        ch = ch.then(sc.channel);
      }
      d.s = weight_spectrum(ch);
      return d;
    });
    std::vector<WeightSpectrum> ss;
    bool calibrated = true;
    for (const auto& d : draws) {
      ss.push_back(d.s);
      calibrated = calibrated && d.calibrated;
    }
    const auto [w, e] = summarize_spectra(ss);
    for (int h = 0; h <= n; ++h) {
      const auto& est = w[static_cast<std::size_t>(h)];
      ctx.write(CsvRow().add(k).add(t).add(h).add(est.value).add(est.stderr_).add(e.value / n));
    }
    per_k.push_back({{"block_size", k}, {"factor_rate", t}, {"mean_e_total_per_qubit", e.value / n},
                     {"stderr", e.stderr_ / n}, {"all_blocks_calibrated", calibrated}});
  }
  return {{"draws", ctx.trials()}, {"m", m}, {"per_block_size", per_k}};
}

// graph walks ------------------------------------------------------------------

inline GraphSpec graph_from_shape(const std::string& shape, int n) {
  if (shape == "grid") {
    require(n % 2 == 0, "grid shape needs even n (2 x n/2)");
    return GraphSpec::grid(2, n / 2);
  }
  return GraphSpec::from_json(json{{"shape", shape}, {"n", n}});
}

inline void check_shape(const std::string& shape, int n) {
  require(shape == "complete" || shape == "path" || shape == "cycle" || shape == "grid",
          "shape must be complete, path, cycle or grid");
  if (shape == "cycle") require(n >= 3, "cycle needs n >= 3");
  if (shape == "grid") require(n % 2 == 0, "grid shape needs even n");
}

inline void check_walk(const json& p) {
  const int n = p.at("n").get<int>();
  require(n >= 2 && n <= 10, "graph walks need 2 <= n <= 10");
  require(p.at("delta").get<double>() > 0 && p.at("delta").get<double>() <= 1, "delta must be in (0, 1]");
  require(p.at("target_rate").get<double>() > 0, "target_rate must be positive");
  require(p.at("max_m").get<int>() >= 1, "max_m must be >= 1");
}

inline json walk_rows(RunContext& ctx, const std::string& shape) {
  const int n = ctx.param<int>("n");
  const GraphSpec g = graph_from_shape(shape, n);
  const TinyGeneratorSet w(ctx.param<double>("delta"));
  const double target = ctx.param<double>("target_rate") * n;
  const int max_m = ctx.param<int>("max_m");
  struct Walk {
    WeightSpectrum s;
    int m = 0;
    bool reached = false;
  };
  const auto walks = ctx.map<Walk>(ctx.trials(), [&](std::size_t i) {
    Rng rng = ctx.rng(shape, label(i), "walk");
    auto r = sample_graph_walk(g, w, target, max_m, rng);
    return Walk{weight_spectrum(r.channel), r.m, r.reached};
  });
  std::vector<WeightSpectrum> ss;
  std::vector<double> ms;
  std::size_t reached = 0;
  for (const auto& x : walks) {
    ss.push_back(x.s);
    ms.push_back(x.m);
    reached += x.reached ? 1 : 0;
  }
  const auto [wk, e] = summarize_spectra(ss);
  const Estimate steps = sample_mean(ms);
  const double frac = static_cast<double>(reached) / static_cast<double>(walks.size());
  std::vector<double> mean_w;
  for (int h = 0; h <= n; ++h) {
    const auto& est = wk[static_cast<std::size_t>(h)];
    mean_w.push_back(est.value);
    ctx.write(CsvRow().add(shape).add(h).add(est.value).add(est.stderr_).add(steps.value).add(frac));
  }
  WeightSpectrum avg;
  avg.n = n;
  avg.w = mean_w;
  const auto cls = classify_spectrum(avg, ctx.param<double>("target_rate"));
  return {{"shape", shape}, {"edges", g.edges().size()}, {"mean_steps", steps.value}, {"reached_fraction", frac},
          {"mean_e_total", e.value}, {"high_weight", cls.high_weight}, {"devastating", cls.devastating},
          {"alarming", cls.alarming}};
}

inline json run_graph_walk(RunContext& ctx) {
  json s = walk_rows(ctx, ctx.param<std::string>("shape"));
  s["draws"] = ctx.trials();
  return s;
}

inline json run_geometry(RunContext& ctx) {
  json per = json::array();
  for (const auto& shape : ctx.param<std::vector<std::string>>("shapes")) per.push_back(walk_rows(ctx, shape));
  return {{"draws", ctx.trials()}, {"per_shape", per}};
}

// majority-repair --------------------------------------------------------------

inline json run_majority_repair(RunContext& ctx) {
  const double p = ctx.param<double>("flip_p");
  json per = json::array();
  double prev = -1;
  bool monotone = true;
  for (int N : ctx.param<std::vector<int>>("N_values")) {
    const auto ok = ctx.map<char>(ctx.trials(), [&](std::size_t t) {
      Rng rng = ctx.rng(label(static_cast<std::size_t>(N)), label(t), "flips");
      return static_cast<char>(majority_repair(N, p, 1, rng).value == 1.0);
    });
    std::size_t hits = 0;
    for (char c : ok) hits += static_cast<std::size_t>(c);
    const Estimate est = proportion(hits, ctx.trials());
    const double exact = majority_repair_exact(N, p);
    ctx.write(CsvRow().add(N).add(p).add(ctx.trials()).add(est.value).add(est.stderr_).add(exact));
    monotone = monotone && est.value > prev;
    prev = est.value;
    per.push_back({{"N", N}, {"rate", est.value}, {"exact", exact},
                   {"z", est.stderr_ > 0 ? (est.value - exact) / est.stderr_ : 0.0}});
  }
  return {{"trials", ctx.trials()}, {"monotone_in_N", monotone}, {"per_N", per}};
}

// qec-correlated-vs-iid ----------------------------------------------------------

// Single-qubit marginal of a chi diagonal: p_q[s] = sum of chi_v with digit s at q.
inline std::vector<std::array<double, 4>> pauli_marginals(const std::vector<double>& chi, int n) {
  std::vector<std::array<double, 4>> m(static_cast<std::size_t>(n), {0, 0, 0, 0});
  for (std::size_t v = 0; v < chi.size(); ++v)
    for (int q = 0; q < n; ++q) m[static_cast<std::size_t>(q)][(v >> (2 * (n - 1 - q))) & 3U] += chi[v];
  return m;
}

// Height distribution of independent qubits with error probabilities e_q.
inline std::vector<double> poisson_binomial(const std::vector<double>& e) {
  std::vector<double> d{1.0};
  for (double p : e) {
    std::vector<double> nd(d.size() + 1, 0.0);
    for (std::size_t h = 0; h < d.size(); ++h) {
      nd[h] += d[h] * (1 - p);
      nd[h + 1] += d[h] * p;
    }
    d = std::move(nd);
  }
  return d;
}

inline json run_qec_pair(RunContext& ctx) {
  const StabilizerCode code = builtin_code(ctx.param<std::string>("code"));
  const int n = code.n();
  const int k = ctx.param<int>("block_size");
  const double t = ctx.param<double>("rate");
  const BlockFill fill = fill_from_name(ctx.param<std::string>("fill"));
  struct Pair {
    WeightSpectrum sb, si;
    double fb = 0, fi = 0, lb = 0, li = 0, pred_residual = 0;
  };
  const auto pairs = ctx.map<Pair>(ctx.trials(), [&](std::size_t i) {
    Rng rng = ctx.rng(label(i), "block");
    const Channel block = sample_block_model(n, k, t, rng, fill).channel;
    const auto chi_b = chi_diagonal(block);
    const auto marg = pauli_marginals(chi_b, n);
    Channel iid = Channel::identity(n);
    std::vector<double> e;
    for (int q = 0; q < n; ++q) {
      const auto& mq = marg[static_cast<std::size_t>(q)];
      iid = iid.then(Channel::local_pauli(n, {q}, {mq[0], mq[1], mq[2], mq[3]}));
      e.push_back(1.0 - mq[0]);
    }
    const auto chi_i = chi_diagonal(iid);
    Pair p;
    p.sb = spectrum_from_chi(chi_b, n);
    p.si = spectrum_from_chi(chi_i, n);
    const auto pred = poisson_binomial(e);
    double pred2 = 0;
    for (std::size_t h = 2; h < pred.size(); ++h) pred2 += pred[h];
    p.pred_residual = std::abs(p.si.weight_at_least(2) - pred2);
    p.fb = recovery_fidelity(code, block).rate;
    p.fi = recovery_fidelity(code, iid).rate;
    p.lb = exact_logical_error_rate(code, chi_b);
    p.li = exact_logical_error_rate(code, chi_i);
    return p;
  });
  double worst_pred = 0, min_block_high = 1;
  std::vector<double> fb, fi;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    for (const auto& [model, s, f, l] : {std::tuple{"block", &p.sb, p.fb, p.lb}, std::tuple{"iid", &p.si, p.fi, p.li}}) {
      for (int h = 0; h <= n; ++h)
        ctx.write(CsvRow().add(i).add(model).add(h).add(s->w[static_cast<std::size_t>(h)]).add(s->e_total).add(f).add(l));
    }
    worst_pred = std::max(worst_pred, p.pred_residual);
    min_block_high = std::min(min_block_high, p.sb.weight_at_least(2));
    fb.push_back(p.fb);
    fi.push_back(p.fi);
  }
  return {{"code", code.name()}, {"draws", ctx.trials()}, {"block_min_weight_ge2", min_block_high},
          {"iid_prediction_max_residual", worst_pred}, {"mean_block_failure", sample_mean(fb).value},
          {"mean_iid_failure", sample_mean(fi).value}};
}

// elections-contrast ---------------------------------------------------------------

inline json run_elections(RunContext& ctx) {
  const double qp = ctx.param<double>("q");
  const double delta = ctx.param<double>("delta");
  const double miscount = ctx.param<double>("miscount");
  json per = json::array();
  std::vector<double> corr;
  for (int a : ctx.param<std::vector<int>>("sizes")) {
    ElectionSpec spec;
    spec.a = spec.b = a;
    spec.q = qp > 0 ? qp : std::pow(static_cast<double>(a) * a, -0.25);
    spec.influence_fraction = ctx.param<double>("influence_fraction");
    ctx.check_time();
    const Estimate s = signal_sensitivity(spec, delta, ctx.trials(), ctx.seed_for(label(static_cast<std::size_t>(a)), "sensitivity"));
    ctx.check_time();
    const Estimate c = count_stability(spec, miscount, ctx.trials(), ctx.seed_for(label(static_cast<std::size_t>(a)), "miscount"));
    ctx.write(CsvRow().add(spec.a).add(spec.b).add(spec.q).add(delta).add(s.value).add(s.stderr_).add(miscount)
                  .add(c.value).add(c.stderr_));
    corr.push_back(s.value);
    per.push_back({{"a", a}, {"q", spec.q}, {"signal_correlation", s.value}, {"miscount_reversal", c.value}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < corr.size(); ++i) decreasing = decreasing && corr[i] < corr[i - 1];
  return {{"trials", ctx.trials()}, {"correlation_strictly_decreasing", decreasing}, {"per_size", per}};
}

// gibbs-decay ----------------------------------------------------------------------

// exp(-H)/Z with h(S) ~ coupling * N(0, 1) for 1 <= |S| <= max_degree.
inline SpinDistribution random_gibbs_measure(int n, double coupling, int max_degree, Rng& rng) {
  Normal g(0.0, 1.0);
  std::vector<double> h(std::size_t{1} << n, 0.0);
  for (std::size_t s = 1; s < h.size(); ++s)
    if (std::popcount(s) <= max_degree) h[s] = coupling * g(rng);
  walsh_hadamard(h);
  return SpinDistribution::from_energy(n, h);
}

inline double mean_abs_offdiagonal(const Eigen::MatrixXd& c, double* max_out) {
  double s = 0, mx = 0;
  int cnt = 0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) {
      s += std::abs(c(i, j));
      mx = std::max(mx, std::abs(c(i, j)));
      ++cnt;
    }
  *max_out = mx;
  return cnt ? s / cnt : 0.0;
}

inline json run_gibbs(RunContext& ctx) {
  const int n = ctx.param<int>("n");
  const auto times = ctx.param<std::vector<double>>("times");
  struct Row {
    std::vector<double> mean_cov, max_cov, tv;
  };
  const auto rows = ctx.map<Row>(ctx.trials(), [&](std::size_t i) {
    Rng rng = ctx.rng(label(i), "couplings");
    const auto mu = random_gibbs_measure(n, ctx.param<double>("coupling"), ctx.param<int>("max_degree"), rng);
    const auto limit = degree_one_product(mu);
    Row r;
    for (double t : times) {
      const auto d = damp(mu, t);
      double mx = 0;
      r.mean_cov.push_back(mean_abs_offdiagonal(covariance_matrix(d), &mx));
      r.max_cov.push_back(mx);
      r.tv.push_back(total_variation(d, limit));
    }
    return r;
  });
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::vector<double> a, b, c;
    for (const auto& r : rows) {
      a.push_back(r.mean_cov[j]);
      b.push_back(r.max_cov[j]);
      c.push_back(r.tv[j]);
    }
    const Estimate ea = sample_mean(a);
    ctx.write(CsvRow().add(times[j]).add(ea.value).add(ea.stderr_).add(sample_mean(b).value).add(sample_mean(c).value));
    monotone = monotone && ea.value <= prev;
    prev = ea.value;
  }
  return {{"measures", ctx.trials()}, {"mean_covariance_nonincreasing", monotone}};
}

// neps-filter-sweep ------------------------------------------------------------------

inline DenseOperator filter_target(RunContext& ctx) {
  const std::string name = ctx.param<std::string>("target");
  if (name == "cnot") return DenseOperator(rotation_cx(std::numbers::pi));
  if (name == "swap") {
    CMatrix s = CMatrix::Zero(4, 4);
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
    return DenseOperator(s);
  }
  Rng rng = ctx.rng("haar");
  return DenseOperator(haar_unitary(ctx.param<int>("n"), rng));
}

inline json run_neps(RunContext& ctx) {
  const DenseOperator a = filter_target(ctx);
  const int n = a.qubits();
  const Channel ch = Channel::unitary(a, 1e-8);
  const WeightSpectrum base = operator_spectrum(a.matrix());
  double worst_formula = 0;
  for (double eps : ctx.param<std::vector<double>>("eps_values")) {
    ctx.check_time();
    const DenseOperator f = n_eps_filter(a, eps);
    const double norm2 = f.matrix().squaredNorm() / static_cast<double>(dim_of(n));
    double formula = 0;
    for (int k = 0; k <= n; ++k) formula += std::pow(eps, 2 * k) * base.w[static_cast<std::size_t>(k)];
    worst_formula = std::max(worst_formula, std::abs(norm2 - formula));
    const FilteredChannel fc = filter_channel(ch, eps);
    for (int k = 0; k <= n; ++k)
      ctx.write(CsvRow().add(eps).add(k).add(std::pow(eps, 2 * k) * base.w[static_cast<std::size_t>(k)]).add(norm2)
                    .add(fc.choi_min_eigenvalue).add(fc.trace_defect));
  }
  return {{"n", n}, {"target", ctx.param<std::string>("target")}, {"norm_formula_max_residual", worst_formula}};
}

}  // namespace lab

inline const std::vector<ExperimentDescriptor>& catalog() {
  using lab::json;
  using T = ParamType;
  static const std::vector<ExperimentDescriptor> c = [] {
    std::vector<ExperimentDescriptor> v;
    v.push_back({"haar-height",
                 "Haar-random unitaries put almost all Pauli weight at heights around 3n/4",
                 "Mean chi-diagonal weight per height over Haar draws, next to the counting value C(n,k) 3^k / 4^n.",
                 200, "Haar draws",
                 {{"n", T::integer, 6, "qubits (1..8)"}},
                 {"n", "k", "mean_w", "stderr_w", "counting_reference"},
                 [](const json& p) { require(p.at("n").get<int>() >= 1 && p.at("n").get<int>() <= 8, "n must be in 1..8"); },
                 lab::run_haar_height});
    v.push_back({"block-product-spectrum",
                 "Random eps-noise operator T = T_1 T_2 ... T_m with m = log n, each factor built from k-qubit blocks",
                 "Weight spectrum of a product of m block-model factors; per-factor rate calibrated so the composite "
                 "e_total / n is near target_rate.",
                 4, "composite draws per block size",
                 {{"n", T::integer, 8, "qubits"},
                  {"m", T::integer, 3, "factors per product (ceil(log2 n) at n = 8)"},
                  {"block_sizes", T::int_list, json::array({2, 4}), "block sizes k"},
                  {"target_rate", T::real, 0.1, "target composite e_total / n"},
                  {"fill", T::string, "haar", "block fill: haar or depolarizing"},
                  {"calibration_draws", T::integer, 32, "single-factor draws used to fix the per-factor rate"}},
                 {"block_size", "factor_rate", "height", "mean_w", "stderr_w", "mean_e_total_per_qubit"},
                 [](const json& p) {
                   const int n = p.at("n").get<int>();
                   require(n >= 2 && n <= 9, "n must be in 2..9");
                   require(p.at("m").get<int>() >= 1, "m must be >= 1");
                   for (int k : p.at("block_sizes").get<std::vector<int>>()) require(k >= 1 && k <= n, "block size out of range");
                   require(p.at("target_rate").get<double>() > 0 && p.at("target_rate").get<double>() < 1, "target_rate must be in (0, 1)");
                   fill_from_name(p.at("fill").get<std::string>());
                   require(p.at("calibration_draws").get<int>() >= 1, "calibration_draws must be >= 1");
                 },
                 lab::run_block_product});
    v.push_back({"graph-walk-spectrum",
                 "Ising-like noise on graphs: products of tiny rotations along edges, grown until the noise level is reached",
                 "Weight spectrum of graph walks over the tiny generator set, stopped at e_total = target_rate * n.",
                 20, "walks",
                 {{"shape", T::string, "complete", "complete, path, cycle or grid (2 x n/2)"},
                  {"n", T::integer, 6, "qubits (2..10)"},
                  {"delta", T::real, 0.1, "rotation angle"},
                  {"target_rate", T::real, 0.1, "stop when e_total / n reaches this"},
                  {"max_m", T::integer, 5000, "step cap per walk"}},
                 {"shape", "height", "mean_w", "stderr_w", "mean_steps", "reached_fraction"},
                 [](const json& p) {
                   lab::check_walk(p);
                   lab::check_shape(p.at("shape").get<std::string>(), p.at("n").get<int>());
                 },
                 lab::run_graph_walk});
    v.push_back({"geometry-restriction",
                 "Noise restricted by geometry: the same walk on different interaction graphs",
                 "graph-walk-spectrum repeated over several graph shapes with matched noise level.",
                 20, "walks per shape",
                 {{"shapes", T::string_list, json::array({"complete", "cycle", "path", "grid"}), "graph shapes"},
                  {"n", T::integer, 6, "qubits (2..10)"},
                  {"delta", T::real, 0.1, "rotation angle"},
                  {"target_rate", T::real, 0.1, "stop when e_total / n reaches this"},
                  {"max_m", T::integer, 5000, "step cap per walk"}},
                 {"shape", "height", "mean_w", "stderr_w", "mean_steps", "reached_fraction"},
                 [](const json& p) {
                   lab::check_walk(p);
                   for (const auto& s : p.at("shapes").get<std::vector<std::string>>()) lab::check_shape(s, p.at("n").get<int>());
                 },
                 lab::run_geometry});
    v.push_back({"majority-repair",
                 "Majority of N noisy copies repairs noise very close to 50 percent as N grows",
                 "Monte Carlo recovery rate of majority decoding next to the exact binomial tail.",
                 10000, "Monte Carlo trials per N",
                 {{"N_values", T::int_list, json::array({101, 1001, 10001}), "odd copy counts"},
                  {"flip_p", T::real, 0.49, "per-copy flip probability"}},
                 {"N", "flip_p", "trials", "recovered_rate", "stderr", "exact"},
                 [](const json& p) {
                   for (int N : p.at("N_values").get<std::vector<int>>()) require(N >= 1 && N % 2 == 1, "N must be odd and positive");
                   const double f = p.at("flip_p").get<double>();
                   require(f >= 0 && f < 0.5, "flip_p must be in [0, 1/2)");
                 },
                 lab::run_majority_repair});
    v.push_back({"qec-correlated-vs-iid",
                 "Correlated block noise versus independent noise with the same single-qubit marginals under a code",
                 "Block-model channel and the product of its single-qubit Pauli marginals: both spectra, both "
                 "recovery failure rates and both twirled logical error rates.",
                 4, "block-model draws",
                 {{"code", T::string, "steane7", "rep3, steane7 or shor9"},
                  {"block_size", T::integer, 2, "block size k"},
                  {"rate", T::real, 0.01, "per-qubit block rate"},
                  {"fill", T::string, "haar", "haar or depolarizing"}},
                 {"draw", "model", "height", "w", "e_total", "recovery_failure", "twirled_logical_rate"},
                 [](const json& p) {
                   const auto code = builtin_code(p.at("code").get<std::string>());
                   const int k = p.at("block_size").get<int>();
                   require(k >= 1 && k <= code.n(), "block size out of range");
                   const double t = p.at("rate").get<double>();
                   require(t >= 0 && t <= 1, "rate must be in [0, 1]");
                   fill_from_name(p.at("fill").get<std::string>());
                 },
                 lab::run_qec_pair});
    v.push_back({"elections-contrast",
                 "Community bloc voting is noise sensitive while vote counting stays stable",
                 "Signal-flip correlation and miscount reversal rate along a = b sizes; q <= 0 means q = (ab)^(-1/4).",
                 10000, "trials per size and measurement",
                 {{"sizes", T::int_list, json::array({8, 16, 32}), "a = b values"},
                  {"q", T::real, -1.0, "decisive tail probability; <= 0 selects (ab)^(-1/4)"},
                  {"delta", T::real, 0.1, "signal flip probability"},
                  {"miscount", T::real, 0.4, "vote miscount probability"},
                  {"influence_fraction", T::real, 1.0, "chance a decisive-community member follows the bloc"}},
                 {"a", "b", "q", "delta", "signal_correlation", "signal_stderr", "miscount", "reversal_rate",
                  "reversal_stderr"},
                 [](const json& p) {
                   const double q = p.at("q").get<double>();
                   require(q < 0.5, "q must be below 1/2");
                   for (int a : p.at("sizes").get<std::vector<int>>()) {
                     require(a >= 1, "sizes must be positive");
                     require(q > 0 || a > 4, "q = (ab)^(-1/4) needs a = b > 4");
                   }
                   const double d = p.at("delta").get<double>(), m = p.at("miscount").get<double>();
                   require(d >= 0 && d <= 0.5 && m >= 0 && m <= 0.5, "delta and miscount must be in [0, 1/2]");
                   const double f = p.at("influence_fraction").get<double>();
                   require(f >= 0 && f <= 1, "influence_fraction must be in [0, 1]");
                 },
                 lab::run_elections});
    v.push_back({"gibbs-decay",
                 "Damping the degree-k parts of the Gibbs Hamiltonian decreases correlations and fixes product measures",
                 "Mean and max absolute pairwise covariance and TV distance to the degree-one product measure "
                 "along the damping time.",
                 20, "random measures",
                 {{"n", T::integer, 6, "spins (2..16)"},
                  {"coupling", T::real, 0.5, "scale of the random Hamiltonian coefficients"},
                  {"max_degree", T::integer, 3, "highest interaction degree"},
                  {"times", T::real_list, json::array({0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}), "damping times"}},
                 {"t", "mean_abs_covariance", "stderr", "max_abs_covariance", "tv_to_product"},
                 [](const json& p) {
                   const int n = p.at("n").get<int>();
                   require(n >= 2 && n <= kSpinCap, "n must be in 2..16");
                   require(p.at("coupling").get<double>() >= 0, "coupling must be non-negative");
                   require(p.at("max_degree").get<int>() >= 1, "max_degree must be >= 1");
                   for (double t : p.at("times").get<std::vector<double>>()) require(t >= 0, "times must be non-negative");
                 },
                 lab::run_gibbs});
    v.push_back({"neps-filter-sweep",
                 "The N_eps filter scales height-k content by eps^k",
                 "Filtered weights, squared norm and Choi / trace diagnostics of the filtered channel over eps.",
                 1, "unused",
                 {{"target", T::string, "cnot", "cnot, swap or haar"},
                  {"n", T::integer, 3, "qubits for the haar target"},
                  {"eps_values", T::real_list, json::array({0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}), "filter values"}},
                 {"eps", "height", "filtered_w", "norm2", "choi_min_eigenvalue", "trace_defect"},
                 [](const json& p) {
                   const auto t = p.at("target").get<std::string>();
                   require(t == "cnot" || t == "swap" || t == "haar", "target must be cnot, swap or haar");
                   require(p.at("n").get<int>() >= 1 && p.at("n").get<int>() <= 6, "n must be in 1..6");
                   for (double e : p.at("eps_values").get<std::vector<double>>()) require(e >= 0 && e <= 1, "eps must be in [0, 1]");
                 },
                 lab::run_neps});
    return v;
  }();
  return c;
}

inline const ExperimentDescriptor* find_experiment(const std::string& id) {
  for (const auto& d : catalog())
    if (d.id == id) return &d;
  return nullptr;
}

inline ExperimentConfig parse_config(const nlohmann::json& j) { return parse_config(j, find_experiment); }

inline ExperimentConfig parse_config_text(const std::string& text) { return parse_config_text(text, find_experiment); }

inline RunRecord run(const ExperimentConfig& c, unsigned threads = 1) {
  const ExperimentDescriptor* d = find_experiment(c.experiment);
  require(d != nullptr, "unknown experiment: " + c.experiment);
  return execute(*d, c, threads);
}

}  // namespace noiselab
