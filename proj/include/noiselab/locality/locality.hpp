#pragma once

// Height truncation, the N_eps damping filter, and product-operator fitting.
// Norms are normalized Hilbert-Schmidt: ||A||^2 = tr(A^dag A) / 2^n, which is
// the sum of squared Pauli coefficients.

#include "noiselab/core/csv.hpp"
#include "noiselab/core/random.hpp"
#include "noiselab/pauli/channel.hpp"
#include "noiselab/pauli/expand.hpp"
#include "noiselab/pauli/operator.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace noiselab {

struct Truncation {
  DenseOperator op;
  double residual = 0.0;
};

// Orthogonal projection onto span{K_v : |v| <= k}.
inline Truncation truncate_M(const DenseOperator& a, int k) {
  const int n = a.qubits();
  require(k >= 0 && k <= n, "truncate_M: k must be in [0, n]");
  PauliCoefficients c = pauli_expand(a.matrix());
  double res2 = 0.0;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (height_of_index(v) > k) {
      res2 += std::norm(c[v]);
      c[v] = 0.0;
    }
  }
  return {DenseOperator(pauli_resum(c, n)), std::sqrt(res2)};
}

// N_eps(A) = sum_k eps^k Pi_k(A), Pi_k the exact-height-k part.
inline DenseOperator n_eps_filter(const DenseOperator& a, double eps) {
  require(eps >= 0.0 && eps <= 1.0, "N_eps: eps must be in [0, 1]");
  const int n = a.qubits();
  PauliCoefficients c = pauli_expand(a.matrix());
  std::vector<double> scale(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) scale[static_cast<std::size_t>(k)] = std::pow(eps, k);
  for (std::size_t v = 0; v < c.size(); ++v) c[v] *= scale[static_cast<std::size_t>(height_of_index(v))];
  return DenseOperator(pauli_resum(c, n));
}

struct FilteredChannel {
  std::vector<CMatrix> ops;  // N_eps applied to each Kraus operator
  double choi_min_eigenvalue = 0.0;
  double trace_defect = 0.0;
};

// Kraus-wise filtering keeps complete positivity but generally breaks trace
// preservation; both diagnostics are reported.
inline FilteredChannel filter_channel(const Channel& ch, double eps, std::size_t kraus_cap = kDefaultKrausCap) {
  FilteredChannel f;
  for (const auto& e : ch.kraus_operators(kraus_cap)) f.ops.push_back(n_eps_filter(DenseOperator(e), eps).matrix());
  f.choi_min_eigenvalue = choi_min_eigenvalue(f.ops);
  f.trace_defect = trace_preservation_defect(f.ops);
  return f;
}

using Partition = std::vector<std::vector<int>>;

inline std::string partition_id(Partition p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '|';
    for (std::size_t j = 0; j < p[i].size(); ++j) {
      if (j) s += ' ';
      s += std::to_string(p[i][j]);
    }
  }
  return s;
}

inline void check_partition(const Partition& p, int n) {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& b : p) {
    require(!b.empty(), "partition has an empty block");
    for (int q : b) {
      require(q >= 0 && q < n, "partition qubit out of range");
      require(!seen[static_cast<std::size_t>(q)]++, "partition blocks overlap");
    }
  }
  for (int s : seen) require(s == 1, "partition does not cover every qubit");
}

struct TensorFitOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
  int restarts = 8;
  std::uint64_t seed = 0;
};

struct TensorFit {
  std::vector<CMatrix> factors;  // one per block, same order as the partition
  CMatrix product;               // (x) factors, embedded on the full register
  double delta = 0.0;            // ||A - product|| / ||A||
  bool converged = true;
  int iterations = 0;
};

namespace detail {

// Flattens A into an r-mode tensor; mode m runs over (row, col) pairs of block m.
struct ModeLayout {
  std::vector<std::size_t> mode_dim;     // d_m^2
  std::vector<std::size_t> stride;       // row-major over modes
  std::vector<std::size_t> index_of_ij;  // flat index for (i, j), i * D + j
  std::size_t size = 1;

  ModeLayout(const Partition& p, int n) {
    const std::size_t r = p.size();
    mode_dim.resize(r);
    stride.resize(r);
    for (std::size_t m = 0; m < r; ++m) mode_dim[m] = pow4(static_cast<int>(p[m].size()));
    for (std::size_t m = r; m-- > 0;) {
      stride[m] = size;
      size *= mode_dim[m];
    }
    const std::size_t d = dim_of(n);
    index_of_ij.resize(d * d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        std::size_t flat = 0;
        for (std::size_t m = 0; m < r; ++m) {
          std::size_t im = 0, jm = 0;
          for (int q : p[m]) {
            const int b = bit_of_qubit(n, q);
            im = (im << 1) | ((i >> b) & 1U);
            jm = (jm << 1) | ((j >> b) & 1U);
          }
          const std::size_t dm = dim_of(static_cast<int>(p[m].size()));
          flat += (im * dm + jm) * stride[m];
        }
        index_of_ij[i * d + j] = flat;
      }
    }
  }

  std::size_t coord(std::size_t flat, std::size_t m) const { return (flat / stride[m]) % mode_dim[m]; }
};

inline CMatrix vec_to_block(const CVector& v) {
  const auto dm = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  CMatrix b(dm, dm);
  for (Eigen::Index i = 0; i < dm; ++i)
    for (Eigen::Index j = 0; j < dm; ++j) b(i, j) = v(i * dm + j);
  return b;
}

inline CMatrix assemble(const std::vector<CVector>& b, const ModeLayout& lay, int n, cplx scale) {
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  CMatrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const std::size_t f = lay.index_of_ij[static_cast<std::size_t>(i * d + j)];
      cplx x = scale;
      for (std::size_t m = 0; m < b.size(); ++m) x *= b[m](static_cast<Eigen::Index>(lay.coord(f, m)));
      out(i, j) = x;
    }
  }
  return out;
}

}  // namespace detail

// Alternating least squares (higher-order power iteration) for the best
// rank-one tensor, with one HOSVD-seeded start and random restarts.
inline TensorFit tensor_fit_als(const DenseOperator& a, const Partition& p, const TensorFitOptions& opt = {}) {
  const int n = a.qubits();
  check_partition(p, n);
  const detail::ModeLayout lay(p, n);
  const std::size_t r = p.size();
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  std::vector<cplx> t(lay.size);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) t[lay.index_of_ij[static_cast<std::size_t>(i * d + j)]] = a.matrix()(i, j);
  double t2 = 0;
  for (const auto& x : t) t2 += std::norm(x);
  TensorFit best;
  best.delta = std::numeric_limits<double>::infinity();
  if (t2 == 0.0) {
    for (const auto& b : p) best.factors.push_back(CMatrix::Zero(static_cast<Eigen::Index>(dim_of(static_cast<int>(b.size()))), static_cast<Eigen::Index>(dim_of(static_cast<int>(b.size())))));
    best.product = CMatrix::Zero(d, d);
    best.delta = 0.0;
    return best;
  }
  Rng rng = derive_rng(opt.seed, "tensor_fit");
  for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
    std::vector<CVector> b(r);
    for (std::size_t m = 0; m < r; ++m) {
      const auto dm = static_cast<Eigen::Index>(lay.mode_dim[m]);
      if (restart == 0) {
        // Leading left singular vector of the mode-m unfolding.
        CMatrix g = CMatrix::Zero(dm, dm);
        std::map<std::size_t, CVector> fibers;
        for (std::size_t f = 0; f < lay.size; ++f) {
          const std::size_t rest = f - lay.coord(f, m) * lay.stride[m];
          auto [it, fresh] = fibers.try_emplace(rest, CVector::Zero(dm));
          it->second(static_cast<Eigen::Index>(lay.coord(f, m))) = t[f];
        }
        for (const auto& [_, v] : fibers) g += v * v.adjoint();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
        b[m] = es.eigenvectors().col(dm - 1);
      } else {
        b[m] = complex_gaussian(dm, 1, rng);
        b[m].normalize();
      }
    }
    double lambda2 = 0, prev = -1;
    cplx lambda = 0;
    bool converged = false;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
      for (std::size_t m = 0; m < r; ++m) {
        CVector nb = CVector::Zero(static_cast<Eigen::Index>(lay.mode_dim[m]));
        for (std::size_t f = 0; f < lay.size; ++f) {
          cplx w = t[f];
          for (std::size_t l = 0; l < r; ++l)
            if (l != m) w *= std::conj(b[l](static_cast<Eigen::Index>(lay.coord(f, l))));
          nb(static_cast<Eigen::Index>(lay.coord(f, m))) += w;
        }
        const double nrm = nb.norm();
        lambda = nrm;
        if (nrm == 0.0) break;
        b[m] = nb / nrm;
      }
      lambda2 = std::norm(lambda);
      const double delta = std::sqrt(std::max(0.0, t2 - lambda2) / t2);
      if (prev >= 0 && std::abs(delta - prev) < opt.tolerance) {
        converged = true;
        ++it;
        break;
      }
      prev = delta;
    }
    const CMatrix prod = detail::assemble(b, lay, n, lambda);
    const double delta = (a.matrix() - prod).norm() / std::sqrt(t2);
    if (delta < best.delta) {
      best.delta = delta;
      best.product = prod;
      best.converged = converged;
      best.iterations = it;
      best.factors.clear();
      for (std::size_t m = 0; m < r; ++m) best.factors.push_back(detail::vec_to_block(m == 0 ? CVector(lambda * b[m]) : b[m]));
    }
  }
  return best;
}

// Best product approximation; exact (realignment SVD) for bipartitions.
inline TensorFit tensor_fit(const DenseOperator& a, const Partition& p, const TensorFitOptions& opt = {}) {
  const int n = a.qubits();
  check_partition(p, n);
  if (p.size() == 1) return {{a.matrix()}, a.matrix(), 0.0, true, 0};
  if (p.size() > 2) return tensor_fit_als(a, p, opt);
  const detail::ModeLayout lay(p, n);
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  const auto d0 = static_cast<Eigen::Index>(lay.mode_dim[0]), d1 = static_cast<Eigen::Index>(lay.mode_dim[1]);
  CMatrix re(d0, d1);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const std::size_t f = lay.index_of_ij[static_cast<std::size_t>(i * d + j)];
      re(static_cast<Eigen::Index>(lay.coord(f, 0)), static_cast<Eigen::Index>(lay.coord(f, 1))) = a.matrix()(i, j);
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(re, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double total = s.squaredNorm();
  TensorFit fit;
  if (total == 0.0) {
    fit.product = CMatrix::Zero(d, d);
    fit.factors = {CMatrix::Zero(1, 1), CMatrix::Zero(1, 1)};
    return fit;
  }
  const CVector u = s(0) * svd.matrixU().col(0);
  const CVector v = svd.matrixV().col(0).conjugate();
  fit.product = detail::assemble({u, v}, lay, n, 1.0);
  fit.factors = {detail::vec_to_block(u), detail::vec_to_block(v)};
  fit.delta = std::sqrt(std::max(0.0, total - s(0) * s(0)) / total);
  return fit;
}

struct LocalityProfile {
  std::vector<int> k;
  std::vector<double> delta;
  std::vector<std::string> partition;

  void write_csv(std::ostream& os) const {
    CsvWriter w(os, {"k", "delta", "partition"});
    for (std::size_t i = 0; i < k.size(); ++i) w.write(CsvRow().add(k[i]).add(delta[i]).add(partition[i]));
  }
};

struct ProfileOptions {
  int random_partitions = 4;  // sampled chop-partitions per k
  TensorFitOptions fit;
  std::uint64_t seed = 0;
};

// Best delta(k) over sampled partitions with blocks <= k. Candidates at k also
// contain the best partition at k - 1 and its pairwise merges, so delta(k)
// never increases.
inline LocalityProfile approx_local_profile(const DenseOperator& a, int max_k, const ProfileOptions& opt = {}) {
  const int n = a.qubits();
  require(max_k >= 1 && max_k <= n, "max_k must be in [1, n]");
  Rng rng = derive_rng(opt.seed, "profile");
  LocalityProfile prof;
  Partition best;
  double best_delta = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_k; ++k) {
    std::vector<Partition> cand;
    if (!best.empty()) {
      for (std::size_t i = 0; i < best.size(); ++i) {
        for (std::size_t j = i + 1; j < best.size(); ++j) {
          if (static_cast<int>(best[i].size() + best[j].size()) > k) continue;
          Partition m;
          for (std::size_t l = 0; l < best.size(); ++l)
            if (l != i && l != j) m.push_back(best[l]);
          m.push_back(best[i]);
          m.back().insert(m.back().end(), best[j].begin(), best[j].end());
          cand.push_back(std::move(m));
        }
      }
    }
    for (int s = 0; s < opt.random_partitions; ++s) {
      const auto perm = random_permutation(n, rng);
      Partition p;
      for (int i = 0; i < n; i += k) p.emplace_back(perm.begin() + i, perm.begin() + std::min(n, i + k));
      cand.push_back(std::move(p));
    }
    for (const auto& p : cand) {
      const double dl = tensor_fit(a, p, opt.fit).delta;
      if (dl < best_delta) {
        best_delta = dl;
        best = p;
      }
    }
    prof.k.push_back(k);
    prof.delta.push_back(best_delta);
    prof.partition.push_back(partition_id(best));
  }
  return prof;
}

}  // namespace noiselab
