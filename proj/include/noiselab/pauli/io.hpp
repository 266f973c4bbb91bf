#pragma once

// JSON schema for operators and channels:
//   {"n": 2, "kind": "unitary", "data": [[[re, im], ...], ...]}
//   {"n": 2, "kind": "kraus",   "data": [<matrix>, <matrix>, ...]}
//   {"n": 2, "kind": "pauli",   "data": [p_0, ..., p_{4^n - 1}]}
// Matrices are row-major nested arrays of [re, im] pairs. Pauli tables are
// indexed by the base-4 symbol code (I=0, X=1, Y=2, Z=3; qubit 0 leftmost).
//
// Weight spectra serialize to CSV with columns n,k,w_k,e_total,hs_noise: one
// row per height, then a row with k = "total" carrying the summary values.

#include "noiselab/core/csv.hpp"
#include "noiselab/pauli/spectrum.hpp"

#include <json.hpp>

namespace noiselab {

using json = nlohmann::json;

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  CMatrix m(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == r, "matrix must be square");
    for (Eigen::Index k = 0; k < r; ++k) {
      const json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = cplx(e.get<double>(), 0.0);
      } else {
        require(e.is_array() && e.size() == 2, "matrix entries are [re, im] pairs");
        m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    }
  }
  return m;
}

inline json operator_to_json(const DenseOperator& u) {
  return json{{"n", u.qubits()}, {"kind", "unitary"}, {"data", matrix_to_json(u.matrix())}};
}

inline json channel_to_json(const Channel& ch, std::size_t kraus_cap = kDefaultKrausCap) {
  const int n = ch.qubits();
  switch (ch.tag()) {
    case ChannelTag::pauli_diagonal:
      return json{{"n", n}, {"kind", "pauli"}, {"data", chi_diagonal(ch)}};
    case ChannelTag::unitary: {
      const auto ops = ch.kraus_operators(1);
      return json{{"n", n}, {"kind", "unitary"}, {"data", matrix_to_json(ops.front())}};
    }
    default: {
      json data = json::array();
      for (const auto& e : ch.kraus_operators(kraus_cap)) data.push_back(matrix_to_json(e));
      return json{{"n", n}, {"kind", "kraus"}, {"data", std::move(data)}};
    }
  }
}

inline Channel channel_from_json(const json& j) {
  require(j.is_object(), "channel JSON must be an object");
  for (const auto& [key, _] : j.items()) {
    require(key == "n" || key == "kind" || key == "data", "unknown channel field: " + key);
  }
  require(j.contains("n") && j.contains("kind") && j.contains("data"), "channel JSON needs n, kind, data");
  const int n = j.at("n").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  if (kind == "unitary") {
    CMatrix u = matrix_from_json(j.at("data"));
    require(u.rows() == d, "unitary dimension does not match n");
    return Channel::unitary(DenseOperator(std::move(u)));
  }
  if (kind == "kraus") {
    std::vector<CMatrix> ops;
    for (const auto& m : j.at("data")) {
      ops.push_back(matrix_from_json(m));
      require(ops.back().rows() == d, "Kraus dimension does not match n");
    }
    return Channel::from_kraus(n, std::move(ops));
  }
  if (kind == "pauli") return Channel::pauli(n, j.at("data").get<std::vector<double>>());
  throw std::invalid_argument("unknown channel kind: " + kind);
}

inline void write_spectrum_csv(std::ostream& os, const WeightSpectrum& s) {
  CsvWriter w(os, {"n", "k", "w_k", "e_total", "hs_noise"});
  for (int k = 0; k <= s.n; ++k) {
    w.write(CsvRow().add(s.n).add(k).add(s.w[static_cast<std::size_t>(k)]).empty().empty());
  }
  w.write(CsvRow().add(s.n).add("total").add(s.total_weight()).add(s.e_total).add(s.hs_noise));
}

}  // namespace noiselab
