#pragma once

// Noise-model samplers. Each returns the sampled channel together with a
// JSON record of what was drawn (blocks, mixing weights, factor noises, ...).

#include "noiselab/core/random.hpp"
#include "noiselab/noise/generators.hpp"
#include "noiselab/noise/graph.hpp"
#include "noiselab/pauli/io.hpp"
#include "noiselab/pauli/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace noiselab {

struct SampledChannel {
  Channel channel;
  json meta;
};

enum class BlockFill { haar, depolarizing };

inline const char* fill_name(BlockFill f) { return f == BlockFill::haar ? "haar" : "depolarizing"; }

inline BlockFill fill_from_name(const std::string& s) {
  if (s == "haar") return BlockFill::haar;
  if (s == "depolarizing") return BlockFill::depolarizing;
  throw std::invalid_argument("unknown block fill: " + s);
}

// Uniform random partition into consecutive runs of a random permutation.
inline std::vector<std::vector<int>> random_blocks(int n, int k, Rng& rng) {
  require(k >= 1 && k <= n, "block size must be in [1, n]");
  const auto perm = random_permutation(n, rng);
  std::vector<std::vector<int>> blocks;
  for (int s = 0; s < n; s += k) {
    std::vector<int> b(perm.begin() + s, perm.begin() + std::min(n, s + k));
    std::sort(b.begin(), b.end());
    blocks.push_back(std::move(b));
  }
  return blocks;
}

// Uniform non-identity Pauli error on b qubits with per-qubit rate t.
inline std::vector<double> uniform_block_pauli_table(int b, double t) {
  const double total = static_cast<double>(pow4(b) - 1);
  const double touching = 3.0 * static_cast<double>(pow4(b - 1));
  const double p = t * total / touching;
  require(p <= 1.0 + 1e-12, "per-qubit rate too large for a uniform Pauli fill on this block size");
  std::vector<double> probs(pow4(b), std::min(p, 1.0) / total);
  probs[0] = 1.0 - std::min(p, 1.0);
  return probs;
}

inline SampledChannel sample_block_model(int n, int k, double t, Rng& rng, BlockFill fill = BlockFill::haar) {
  require(n >= 1, "need at least one qubit");
  require(t >= 0.0 && t <= 1.0, "per-qubit rate t must be in [0, 1]");
  const auto blocks = random_blocks(n, k, rng);
  Channel ch = Channel::identity(n);
  json jb = json::array(), jl = json::array();
  bool calibrated = true;
  for (const auto& b : blocks) {
    const int bs = static_cast<int>(b.size());
    jb.push_back(b);
    if (fill == BlockFill::depolarizing) {
      if (t > 0.0) ch = ch.then(Channel::local_pauli(n, b, uniform_block_pauli_table(bs, t)));
      jl.push_back(t > 0.0 ? 1.0 : 0.0);
      continue;
    }
    // The Haar draw happens even at t = 0 so the stream does not depend on t.
    const CMatrix u = haar_unitary(bs, rng);
    const auto s = operator_spectrum(u);
    const double emax = s.max_qubit_rate();
    // Per-qubit rates of (1 - lam) rho + lam U rho U^dag are lam * e_q(U).
    double lam = emax > 0.0 ? t / emax : 0.0;
    if (lam > 1.0) {
      lam = 1.0;
      calibrated = false;
    }
    jl.push_back(lam);
    if (lam == 0.0) continue;
    std::vector<CMatrix> ops;
    if (lam < 1.0) ops.push_back(std::sqrt(1.0 - lam) * CMatrix::Identity(u.rows(), u.cols()));
    ops.push_back(std::sqrt(lam) * u);
    ch = ch.then(Channel::local_kraus(n, b, std::move(ops)));
  }
  return {std::move(ch), json{{"variant", "BlockModel"}, {"n", n}, {"k", k}, {"t", t}, {"fill", fill_name(fill)},
                              {"blocks", jb}, {"lambda", jl}, {"calibrated", calibrated}}};
}

inline std::vector<double> normalized(std::vector<double> w) {
  double s = 0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0, "weights must be non-negative");
    s += x;
  }
  require(s > 0.0, "weights must not all be zero");
  for (double& x : w) x /= s;
  return w;
}

// D(k) proportional to 2^{-2^k} on k = 1..kmax.
inline std::vector<double> doubly_exponential_blocksize(int kmax) {
  std::vector<double> w;
  for (int k = 1; k <= kmax; ++k) w.push_back(std::exp2(-std::exp2(k)));
  return normalized(std::move(w));
}

inline void check_distribution(const std::vector<double>& d, const char* what) {
  require(!d.empty(), std::string(what) + " is empty");
  double s = 0;
  for (double x : d) {
    require(std::isfinite(x) && x >= 0.0, std::string(what) + " has a negative entry");
    s += x;
  }
  require(std::abs(s - 1.0) <= 1e-9, std::string(what) + " must sum to 1");
}

inline std::size_t draw_index(const std::vector<double>& p, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc && p[i] > 0) return i;
  }
  // Rounding left u above the last partial sum.
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i] > 0) return i;
  return 0;
}

// dist[i] is the probability of block size i + 1.
inline SampledChannel sample_random_blocksize_model(int n, const std::vector<double>& dist, double strength, Rng& rng,
                                                    BlockFill fill = BlockFill::haar) {
  check_distribution(dist, "block-size distribution");
  for (std::size_t i = static_cast<std::size_t>(n); i < dist.size(); ++i)
    require(dist[i] == 0.0, "block-size distribution has support above n");
  const int k = static_cast<int>(draw_index(dist, rng)) + 1;
  auto r = sample_block_model(n, k, strength, rng, fill);
  r.meta["variant"] = "RandomBlockSize";
  r.meta["D"] = dist;
  return r;
}

// Site distribution for ILS factors.
struct IlsMu {
  std::vector<double> size_probs{0.9, 0.09, 0.01};  // subset sizes 1, 2, 3
  double tiny_probability = 0.5;                    // use a TinyGeneratorSet element when the size allows

  void validate() const {
    check_distribution(size_probs, "ILS subset-size distribution");
    require(size_probs.size() <= 3, "ILS subsets have at most 3 qubits");
    require(tiny_probability >= 0.0 && tiny_probability <= 1.0, "tiny_probability must be in [0, 1]");
  }

  json to_json() const { return {{"size_probs", size_probs}, {"tiny_probability", tiny_probability}}; }

  static IlsMu from_json(const json& j) {
    IlsMu mu;
    for (const auto& [key, v] : j.items()) {
      if (key == "size_probs") mu.size_probs = v.get<std::vector<double>>();
      else if (key == "tiny_probability") mu.tiny_probability = v.get<double>();
      else throw std::invalid_argument("unknown mu field: " + key);
    }
    mu.validate();
    return mu;
  }
};

struct IlsOptions {
  bool force_inverse_pairs = false;  // factor 2j+1 undoes factor 2j
};

inline SampledChannel sample_ils(int n, const IlsMu& mu, int m, double delta, Rng& rng, IlsOptions opt = {}) {
  mu.validate();
  require(m >= 1, "ILS needs m >= 1");
  require(std::abs(delta) <= std::numbers::pi, "ILS angle must satisfy |delta| <= pi");
  // Sizes above n are dropped and the rest renormalized.
  std::vector<double> sizes(mu.size_probs.begin(), mu.size_probs.begin() + std::min<std::ptrdiff_t>(n, static_cast<std::ptrdiff_t>(mu.size_probs.size())));
  sizes = normalized(sizes);
  const TinyGeneratorSet w(delta);
  Channel ch = Channel::identity(n);
  json factors = json::array();
  std::vector<double> fe;
  double fsum = 0;
  CMatrix prev;
  std::vector<int> prev_targets;
  for (int i = 0; i < m; ++i) {
    std::vector<int> targets;
    CMatrix v;
    std::string family;
    if (opt.force_inverse_pairs && i % 2 == 1) {
      targets = prev_targets;
      v = prev.adjoint();
      family = "inverse";
    } else {
      const int s = static_cast<int>(draw_index(sizes, rng)) + 1;
      const auto perm = random_permutation(n, rng);
      targets.assign(perm.begin(), perm.begin() + s);
      if (s <= 2 && uniform01(rng) < mu.tiny_probability) {
        const int e = (s == 1 ? 0 : 2) + static_cast<int>(uniform_index(rng, 2));
        v = w.matrix(e);
        family = TinyGeneratorSet::name(e);
      } else {
        v = tiny_hermitian_unitary(s, delta, rng);
        family = "hermitian";
      }
    }
    const double e = operator_spectrum(v).e_total;
    fe.push_back(e);
    fsum += e;
    factors.push_back({{"targets", targets}, {"family", family}, {"e_total", e}});
    ch = ch.then(Channel::local_unitary(n, targets, v));
    prev = std::move(v);
    prev_targets = std::move(targets);
  }
  return {std::move(ch), json{{"variant", "ILS"}, {"n", n}, {"m", m}, {"delta", delta}, {"mu", mu.to_json()},
                              {"force_inverse_pairs", opt.force_inverse_pairs}, {"factors", factors},
                              {"factor_e_totals", fe}, {"factor_e_sum", fsum}}};
}

struct GraphWalkResult {
  Channel channel;
  int m = 0;
  bool reached = false;            // false: stopped at max_m
  std::vector<double> estimates;   // running estimate seen by the stopping rule, one per step
  json meta;
};

// Grows T = T_1 T_2 ... T_m one generator at a time until e_total(T) >= target.
// Each step picks an edge uniformly, then a generator uniformly; loops take only
// single-qubit generators, single-qubit generators land on a random endpoint,
// and R_CX gets a random orientation.
inline GraphWalkResult sample_graph_walk(const GraphSpec& g, const TinyGeneratorSet& w, double target, int max_m,
                                         Rng& rng, int qubit_cap = 10) {
  require(target >= 0.0, "graph-walk target must be non-negative");
  require(max_m >= 0, "max_m must be non-negative");
  const int n = g.vertices();
  require(n <= qubit_cap, "graph walk exceeds the qubit cap");
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  CMatrix u = CMatrix::Identity(d, d);
  GraphWalkResult r;
  json steps = json::array();
  double running = 0.0;
  while (running < target && r.m < max_m) {
    const auto [a, b] = g.edges()[uniform_index(rng, g.edges().size())];
    const int e = a == b ? static_cast<int>(uniform_index(rng, 2)) : static_cast<int>(uniform_index(rng, 4));
    std::vector<int> targets;
    if (TinyGeneratorSet::arity(e) == 1) {
      targets = {a == b || uniform_index(rng, 2) == 0 ? a : b};
    } else {
      targets = uniform_index(rng, 2) == 0 ? std::vector<int>{a, b} : std::vector<int>{b, a};
    }
    // T = T_1 ... T_m: the newest factor multiplies on the right.
    CMatrix ut = u.adjoint();
    apply_left(w.matrix(e).adjoint(), LocalPattern(targets, n), ut);
    u = ut.adjoint();
    ++r.m;
    running = std::max(running, e_total_partial_trace({u}));
    r.estimates.push_back(running);
    steps.push_back({{"gen", TinyGeneratorSet::name(e)}, {"targets", targets}});
  }
  r.reached = running >= target;
  r.channel = Channel::unitary(DenseOperator(u), 1e-8);
  r.meta = json{{"variant", "GraphWalk"}, {"n", n}, {"delta", w.delta()}, {"target", target}, {"max_m", max_m},
                {"m", r.m}, {"reached", r.reached}, {"graph", g.to_json()}, {"steps", steps}};
  return r;
}

// a_v = t_v^2 with t uniform on the unit sphere of R^{4^n}.
inline SampledChannel sample_random_pauli_channel(int n, Rng& rng, int qubit_cap = 8) {
  require(n >= 1 && n <= qubit_cap, "random Pauli channel: qubit count over cap");
  Normal gauss(0.0, 1.0);
  std::vector<double> a(pow4(n));
  double s = 0;
  for (double& x : a) {
    const double z = gauss(rng);
    x = z * z;
    s += x;
  }
  for (double& x : a) x /= s;
  return {Channel::pauli(n, std::move(a)), json{{"variant", "RandomPauliBall"}, {"n", n}}};
}

enum class BaselineKind { depolarizing, dephasing };

inline BaselineKind baseline_from_name(const std::string& s) {
  if (s == "depolarizing") return BaselineKind::depolarizing;
  if (s == "dephasing") return BaselineKind::dephasing;
  throw std::invalid_argument("unknown baseline kind: " + s);
}

// Product of identical single-qubit Pauli channels.
inline Channel iid_pauli(int n, const std::vector<double>& probs) {
  Channel ch = Channel::identity(n);
  if (probs.at(0) == 1.0) return ch;
  for (int q = 0; q < n; ++q) ch = ch.then(Channel::local_pauli(n, {q}, probs));
  return ch;
}

inline Channel baseline(BaselineKind kind, int n, double p) {
  require(p >= 0.0 && p <= 1.0, "baseline p must be in [0, 1]");
  if (kind == BaselineKind::depolarizing) return iid_pauli(n, {1 - p, p / 3, p / 3, p / 3});
  return iid_pauli(n, {1 - p, 0, 0, p});
}

// Serializable description of any of the samplers above.
struct NoiseModelSpec {
  enum class Variant { BlockModel, RandomBlockSize, ILS, GraphWalk, RandomPauliBall, Depolarizing, Dephasing };

  Variant variant = Variant::BlockModel;
  int n = 1;
  std::uint64_t seed = 0;
  int k = 1;
  double t = 0.0;  // block rate / strength
  BlockFill fill = BlockFill::haar;
  std::vector<double> D;
  double delta = 0.0;
  int m = 1;
  IlsMu mu;
  bool force_inverse_pairs = false;
  double eps = 0.0;  // graph-walk target is eps * n
  int max_m = 100000;
  std::optional<GraphSpec> graph;
  double p = 0.0;

  static const char* variant_name(Variant v) {
    switch (v) {
      case Variant::BlockModel: return "BlockModel";
      case Variant::RandomBlockSize: return "RandomBlockSize";
      case Variant::ILS: return "ILS";
      case Variant::GraphWalk: return "GraphWalk";
      case Variant::RandomPauliBall: return "RandomPauliBall";
      case Variant::Depolarizing: return "Depolarizing";
      case Variant::Dephasing: return "Dephasing";
    }
    return "?";
  }

  static Variant variant_from_name(const std::string& s) {
    for (auto v : {Variant::BlockModel, Variant::RandomBlockSize, Variant::ILS, Variant::GraphWalk,
                   Variant::RandomPauliBall, Variant::Depolarizing, Variant::Dephasing})
      if (s == variant_name(v)) return v;
    throw std::invalid_argument("unknown noise variant: " + s);
  }

  void validate() const {
    require(n >= 1, "n must be >= 1");
    require(t >= 0.0 && t <= 1.0, "t must be in [0, 1]");
    require(p >= 0.0 && p <= 1.0, "p must be in [0, 1]");
    require(eps >= 0.0, "eps must be non-negative");
    switch (variant) {
      case Variant::BlockModel: require(k >= 1 && k <= n, "block size must be in [1, n]"); break;
      case Variant::RandomBlockSize: check_distribution(D, "block-size distribution"); break;
      case Variant::ILS: mu.validate(); require(m >= 1, "m must be >= 1"); break;
      case Variant::GraphWalk: require(!graph || graph->vertices() == n, "graph size must equal n"); break;
      default: break;
    }
  }

  json to_json() const {
    json j{{"variant", variant_name(variant)}, {"n", n}, {"seed", seed}};
    json p_;
    switch (variant) {
      case Variant::BlockModel: p_ = {{"k", k}, {"t", t}, {"fill", fill_name(fill)}}; break;
      case Variant::RandomBlockSize: p_ = {{"D", D}, {"t", t}, {"fill", fill_name(fill)}}; break;
      case Variant::ILS:
        p_ = {{"m", m}, {"delta", delta}, {"mu", mu.to_json()}, {"force_inverse_pairs", force_inverse_pairs}};
        break;
      case Variant::GraphWalk:
        p_ = {{"delta", delta}, {"eps", eps}, {"max_m", max_m}};
        if (graph) p_["graph"] = graph->to_json();
        break;
      case Variant::RandomPauliBall: p_ = json::object(); break;
      case Variant::Depolarizing:
      case Variant::Dephasing: p_ = {{"p", p}}; break;
    }
    j["params"] = p_;
    return j;
  }

  static NoiseModelSpec from_json(const json& j) {
    require(j.is_object(), "noise model must be an object");
    NoiseModelSpec s;
    for (const auto& [key, v] : j.items()) {
      if (key == "variant") s.variant = variant_from_name(v.get<std::string>());
      else if (key == "n") s.n = v.get<int>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key != "params") throw std::invalid_argument("unknown noise model field: " + key);
    }
    if (j.contains("params")) {
      for (const auto& [key, v] : j.at("params").items()) {
        if (key == "k") s.k = v.get<int>();
        else if (key == "t") s.t = v.get<double>();
        else if (key == "fill") s.fill = fill_from_name(v.get<std::string>());
        else if (key == "D") s.D = v.get<std::vector<double>>();
        else if (key == "delta") s.delta = v.get<double>();
        else if (key == "m") s.m = v.get<int>();
        else if (key == "mu") s.mu = IlsMu::from_json(v);
        else if (key == "force_inverse_pairs") s.force_inverse_pairs = v.get<bool>();
        else if (key == "eps") s.eps = v.get<double>();
        else if (key == "max_m") s.max_m = v.get<int>();
        else if (key == "graph") s.graph = GraphSpec::from_json(v);
        else if (key == "p") s.p = v.get<double>();
        else throw std::invalid_argument("unknown noise model parameter: " + key);
      }
    }
    s.validate();
    return s;
  }
};

inline SampledChannel sample(const NoiseModelSpec& s) {
  s.validate();
  Rng rng = derive_rng(s.seed, "noise", NoiseModelSpec::variant_name(s.variant));
  SampledChannel r;
  using V = NoiseModelSpec::Variant;
  switch (s.variant) {
    case V::BlockModel: r = sample_block_model(s.n, s.k, s.t, rng, s.fill); break;
    case V::RandomBlockSize: r = sample_random_blocksize_model(s.n, s.D, s.t, rng, s.fill); break;
    case V::ILS: r = sample_ils(s.n, s.mu, s.m, s.delta, rng, {s.force_inverse_pairs}); break;
    case V::GraphWalk: {
      auto g = sample_graph_walk(s.graph.value_or(GraphSpec::complete_with_loops(s.n)), TinyGeneratorSet(s.delta),
                                 s.eps * s.n, s.max_m, rng);
      r = {std::move(g.channel), std::move(g.meta)};
      break;
    }
    case V::RandomPauliBall: r = sample_random_pauli_channel(s.n, rng); break;
    case V::Depolarizing:
      r = {baseline(BaselineKind::depolarizing, s.n, s.p), json{{"variant", "Depolarizing"}, {"n", s.n}, {"p", s.p}}};
      break;
    case V::Dephasing:
      r = {baseline(BaselineKind::dephasing, s.n, s.p), json{{"variant", "Dephasing"}, {"n", s.n}, {"p", s.p}}};
      break;
  }
  r.meta["seed"] = s.seed;
  return r;
}

}  // namespace noiselab
