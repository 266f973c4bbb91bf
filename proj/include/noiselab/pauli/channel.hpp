#pragma once

// Quantum operations as an ordered list of local layers.
//
// Each layer acts on a subset of qubits either through a Kraus set or through
// a Pauli probability table (rho -> sum_u p_u K_u rho K_u). The full channel
// applies layers front to back. Composition concatenates layers; the dense
// operator-sum form is produced on demand by kraus_operators().

#include "noiselab/pauli/expand.hpp"
#include "noiselab/pauli/operator.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <variant>

namespace noiselab {

inline constexpr std::size_t kDefaultKrausCap = 4096;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kCompressionFloor = 1e-12;

struct KrausSet {
  std::vector<CMatrix> ops;
};

struct PauliTable {
  std::vector<double> probs;  // indexed by local base-4 Pauli index
};

struct Layer {
  std::vector<int> targets;
  std::variant<KrausSet, PauliTable> action;

  int width() const { return static_cast<int>(targets.size()); }
  bool is_pauli() const { return std::holds_alternative<PauliTable>(action); }
  const KrausSet& kraus() const { return std::get<KrausSet>(action); }
  const PauliTable& table() const { return std::get<PauliTable>(action); }

  std::size_t branch_count() const {
    if (is_pauli()) {
      const auto& p = table().probs;
      return static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; }));
    }
    return kraus().ops.size();
  }

  // Local branch operators: the Kraus set, or sqrt(p_u) K_u for p_u > 0.
  std::vector<CMatrix> branch_ops() const {
    if (!is_pauli()) return kraus().ops;
    std::vector<CMatrix> out;
    const auto& p = table().probs;
    for (std::size_t u = 0; u < p.size(); ++u) {
      if (p[u] > 0.0) out.push_back(std::sqrt(p[u]) * PauliString::from_index(width(), u).to_matrix());
    }
    return out;
  }
};

enum class ChannelTag { unitary, pauli_diagonal, general };

inline const char* tag_name(ChannelTag t) {
  switch (t) {
    case ChannelTag::unitary: return "unitary";
    case ChannelTag::pauli_diagonal: return "pauli-diagonal";
    default: return "general";
  }
}

namespace detail {

inline void check_trace_preserving(const std::vector<CMatrix>& ops, Eigen::Index d, double tol) {
  require(!ops.empty(), "a channel needs at least one Kraus operator");
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& e : ops) {
    require(e.rows() == d && e.cols() == d, "Kraus operator has the wrong dimension");
    s.noalias() += e.adjoint() * e;
  }
  const double dev = max_abs_deviation(s, CMatrix::Identity(d, d));
  if (dev > tol) {
    throw std::invalid_argument("Kraus operators are not trace preserving (deviation " + std::to_string(dev) + ")");
  }
}

inline void check_probabilities(const std::vector<double>& p, std::size_t expected) {
  require(p.size() == expected, "Pauli table has the wrong length");
  double s = 0.0;
  for (double x : p) {
    require(x >= -1e-12 && std::isfinite(x), "Pauli probabilities must be nonnegative");
    s += x;
  }
  require(std::abs(s - 1.0) <= kTraceTolerance, "Pauli probabilities must sum to 1");
}

// Gram-matrix (or Choi) rank reduction of a Kraus list; keeps the channel.
inline std::vector<CMatrix> compress_kraus(const std::vector<CMatrix>& ops) {
  if (ops.size() <= 1) return ops;
  const Eigen::Index d = ops.front().rows();
  const auto r = static_cast<Eigen::Index>(ops.size());
  const Eigen::Index d2 = d * d;
  std::vector<CMatrix> out;
  if (r <= d2) {
    CMatrix gram(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = i; j < r; ++j) {
        const cplx g = (ops[static_cast<std::size_t>(i)].conjugate().cwiseProduct(ops[static_cast<std::size_t>(j)])).sum();
        gram(i, j) = g;
        gram(j, i) = std::conj(g);
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    for (Eigen::Index k = r - 1; k >= 0; --k) {
      if (es.eigenvalues()(k) < kCompressionFloor) continue;
      CMatrix f = CMatrix::Zero(d, d);
      for (Eigen::Index j = 0; j < r; ++j) f += es.eigenvectors()(j, k) * ops[static_cast<std::size_t>(j)];
      out.push_back(std::move(f));
    }
  } else {
    CMatrix choi = CMatrix::Zero(d2, d2);
    for (const auto& e : ops) {
      const Eigen::Map<const CVector> v(e.data(), d2);
      choi.noalias() += v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(choi);
    for (Eigen::Index k = d2 - 1; k >= 0; --k) {
      const double lam = es.eigenvalues()(k);
      if (lam < kCompressionFloor) continue;
      CVector v = std::sqrt(lam) * es.eigenvectors().col(k);
      out.emplace_back(Eigen::Map<CMatrix>(v.data(), d, d));
    }
  }
  return out;
}

}  // namespace detail

class Channel {
 public:
  Channel() = default;

  static Channel identity(int n) {
    require(n >= 0 && n <= 30, "qubit count out of range");
    Channel c;
    c.n_ = n;
    return c;
  }

  static Channel unitary(const DenseOperator& u, double tol = 1e-10) {
    require(u.is_unitary(tol), "operator is not unitary");
    return local_kraus(u.qubits(), all_qubits(u.qubits()), {u.matrix()}, kTraceTolerance);
  }

  static Channel from_kraus(int n, std::vector<CMatrix> ops, double tol = kTraceTolerance) {
    return local_kraus(n, all_qubits(n), std::move(ops), tol);
  }

  static Channel pauli(int n, std::vector<double> probs) {
    return local_pauli(n, all_qubits(n), std::move(probs));
  }

  static Channel local_kraus(int n, std::vector<int> targets, std::vector<CMatrix> ops,
                             double tol = kTraceTolerance) {
    Channel c = identity(n);
    check_targets(targets, n);
    detail::check_trace_preserving(ops, static_cast<Eigen::Index>(dim_of(static_cast<int>(targets.size()))), tol);
    c.layers_.push_back(Layer{std::move(targets), KrausSet{std::move(ops)}});
    return c;
  }

  static Channel local_unitary(int n, std::vector<int> targets, const CMatrix& u) {
    return local_kraus(n, std::move(targets), {u});
  }

  static Channel local_pauli(int n, std::vector<int> targets, std::vector<double> probs) {
    Channel c = identity(n);
    check_targets(targets, n);
    detail::check_probabilities(probs, pow4(static_cast<int>(targets.size())));
    for (double& p : probs) p = std::max(p, 0.0);
    c.layers_.push_back(Layer{std::move(targets), PauliTable{std::move(probs)}});
    return c;
  }

  int qubits() const { return n_; }
  const std::vector<Layer>& layers() const { return layers_; }
  bool is_identity() const { return layers_.empty(); }

  ChannelTag tag() const {
    bool all_unitary = true;
    bool all_pauli = true;
    for (const auto& l : layers_) {
      if (l.is_pauli()) {
        all_unitary = false;
      } else {
        all_pauli = false;
        if (l.kraus().ops.size() != 1) all_unitary = false;
      }
    }
    if (all_unitary) return ChannelTag::unitary;
    if (all_pauli) return ChannelTag::pauli_diagonal;
    return ChannelTag::general;
  }

  // Upper bound on the flattened Kraus count (product of branch counts).
  std::size_t branch_product() const {
    std::size_t p = 1;
    for (const auto& l : layers_) {
      const std::size_t b = l.branch_count();
      if (b != 0 && p > std::numeric_limits<std::size_t>::max() / b) return std::numeric_limits<std::size_t>::max();
      p *= b;
    }
    return p;
  }

  // Appends `next` so that it acts after this channel.
  Channel then(const Channel& next) const {
    require(n_ == next.n_, "compose: qubit count mismatch");
    Channel c = *this;
    c.layers_.insert(c.layers_.end(), next.layers_.begin(), next.layers_.end());
    return c;
  }

  // This channel with qubit i relabelled to mapping[i] inside n qubits.
  Channel relabelled(const std::vector<int>& mapping, int n) const {
    require(static_cast<int>(mapping.size()) == n_, "embed: target list must match channel width");
    check_targets(mapping, n);
    Channel c = identity(n);
    for (const auto& l : layers_) {
      Layer m = l;
      for (int& t : m.targets) t = mapping[static_cast<std::size_t>(t)];
      c.layers_.push_back(std::move(m));
    }
    return c;
  }

  // Flattened n-qubit operator-sum form. Compresses through the Choi rank
  // whenever the running count exceeds `cap`.
  std::vector<CMatrix> kraus_operators(std::size_t cap = kDefaultKrausCap) const {
    const auto d = static_cast<Eigen::Index>(dim_of(n_));
    std::vector<CMatrix> ops{CMatrix::Identity(d, d)};
    for (const auto& l : layers_) {
      const auto branches = l.branch_ops();
      if (ops.size() * branches.size() > cap) ops = detail::compress_kraus(ops);
      const LocalPattern pat(l.targets, n_);
      std::vector<CMatrix> next;
      next.reserve(ops.size() * branches.size());
      for (const auto& op : ops) {
        for (const auto& e : branches) {
          CMatrix m = op;
          apply_left(e, pat, m);
          next.push_back(std::move(m));
        }
      }
      if (next.size() > cap) next = detail::compress_kraus(next);
      if (next.size() > cap) {
        throw std::length_error("Kraus rank " + std::to_string(next.size()) + " exceeds the cap of " +
                                std::to_string(cap));
      }
      ops = std::move(next);
    }
    return ops;
  }

 private:
  static std::vector<int> all_qubits(int n) {
    std::vector<int> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = i;
    return t;
  }

  int n_ = 0;
  std::vector<Layer> layers_;
};

/// Sequential composition: chs.front() is applied first.
inline Channel compose(const std::vector<Channel>& chs) {
  require(!chs.empty(), "compose needs at least one channel");
  Channel c = chs.front();
  for (std::size_t i = 1; i < chs.size(); ++i) c = c.then(chs[i]);
  return c;
}

inline Channel embed(const Channel& ch, const std::vector<int>& targets, int n) { return ch.relabelled(targets, n); }

namespace detail {

// Per-qubit commutation-sign transform of a local Pauli table:
// lambda_w = sum_u p_u s(w, u), s = -1 when K_w and K_u anticommute.
inline std::vector<double> pauli_eigenvalues(const std::vector<double>& p, int k) {
  std::vector<double> a = p;
  for (int b = 0; b < k; ++b) {
    const std::size_t stride = std::size_t{1} << (2 * b);
    for (std::size_t base = 0; base < a.size(); base += 4 * stride) {
      for (std::size_t o = 0; o < stride; ++o) {
        double* x = &a[base + o];
        const double i = x[0], X = x[stride], Y = x[2 * stride], Z = x[3 * stride];
        x[0] = i + X + Y + Z;
        x[stride] = i + X - Y - Z;
        x[2 * stride] = i - X + Y - Z;
        x[3 * stride] = i - X - Y + Z;
      }
    }
  }
  return a;
}

// Local digits of an n-qubit Pauli index restricted to targets.
inline std::size_t restrict_index(std::size_t v, int n, const std::vector<int>& targets) {
  std::size_t r = 0;
  for (int t : targets) r = (r << 2) | ((v >> (2 * (n - 1 - t))) & 3U);
  return r;
}

inline std::size_t embed_index(std::size_t u, int k, const std::vector<int>& targets, int n) {
  std::size_t r = 0;
  for (int i = 0; i < k; ++i) {
    const std::size_t digit = (u >> (2 * (k - 1 - i))) & 3U;
    r |= digit << (2 * (n - 1 - targets[static_cast<std::size_t>(i)]));
  }
  return r;
}

}  // namespace detail

inline CMatrix apply_matrix(const Channel& ch, const CMatrix& rho_in) {
  const int n = ch.qubits();
  require(rho_in.rows() == static_cast<Eigen::Index>(dim_of(n)) && rho_in.cols() == rho_in.rows(),
          "apply: size mismatch");
  CMatrix rho = rho_in;
  for (const auto& l : ch.layers()) {
    if (l.is_pauli()) {
      const auto lam = detail::pauli_eigenvalues(l.table().probs, l.width());
      PauliCoefficients c = pauli_expand(rho, 30);
      for (std::size_t w = 0; w < c.size(); ++w) c[w] *= lam[detail::restrict_index(w, n, l.targets)];
      rho = pauli_resum(c, n);
    } else {
      const LocalPattern pat(l.targets, n);
      CMatrix acc = CMatrix::Zero(rho.rows(), rho.cols());
      for (const auto& e : l.kraus().ops) {
        CMatrix t = rho;
        apply_left(e, pat, t);
        apply_right_adjoint(e, pat, t);
        acc += t;
      }
      rho = std::move(acc);
    }
  }
  return rho;
}

inline DensityMatrix apply(const Channel& ch, const DensityMatrix& rho) {
  require(ch.qubits() == rho.qubits(), "apply: size mismatch");
  CMatrix out = apply_matrix(ch, rho.matrix());
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), 1e-9);
}

// Smallest eigenvalue of the Choi operator sum_j vec(E_j) vec(E_j)^dagger,
// computed through the Gram matrix when the Kraus count is below d^2.
inline double choi_min_eigenvalue(const std::vector<CMatrix>& ops) {
  if (ops.empty()) return 0.0;
  const Eigen::Index d = ops.front().rows();
  const auto r = static_cast<Eigen::Index>(ops.size());
  if (r < d * d) {
    CMatrix gram(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        gram(i, j) = (ops[static_cast<std::size_t>(i)].conjugate().cwiseProduct(ops[static_cast<std::size_t>(j)])).sum();
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    return std::min(0.0, es.eigenvalues().minCoeff());
  }
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  for (const auto& e : ops) {
    const Eigen::Map<const CVector> v(e.data(), d * d);
    choi.noalias() += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(choi, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// max |sum_j E_j^dagger E_j - I|
inline double trace_preservation_defect(const std::vector<CMatrix>& ops) {
  if (ops.empty()) return 1.0;
  const Eigen::Index d = ops.front().rows();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& e : ops) s.noalias() += e.adjoint() * e;
  return max_abs_deviation(s, CMatrix::Identity(d, d));
}

}  // namespace noiselab
