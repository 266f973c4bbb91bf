#pragma once

// Stabilizer codes with one logical qubit and a minimum-weight lookup decoder.
// Syndrome bit i is 1 when the error anticommutes with generator i.

#include "noiselab/pauli/pauli_string.hpp"

#include <string>
#include <vector>

namespace noiselab {

inline bool anticommute_masks(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2) {
  return ((__builtin_popcountll(x1 & z2) + __builtin_popcountll(z1 & x2)) & 1) != 0;
}

class StabilizerCode {
 public:
  StabilizerCode(std::string name, std::vector<PauliString> generators, PauliString logical_x, PauliString logical_z)
      : name_(std::move(name)), gens_(std::move(generators)), lx_(std::move(logical_x)), lz_(std::move(logical_z)) {
    require(!gens_.empty(), "code needs generators");
    n_ = gens_.front().qubits();
    require(n_ <= 12, "code too large for a lookup decoder");
    for (const auto& g : gens_) require(g.qubits() == n_, "generator size mismatch");
    require(lx_.qubits() == n_ && lz_.qubits() == n_, "logical size mismatch");
    require(static_cast<int>(gens_.size()) == n_ - 1, "expected n - 1 generators for one logical qubit");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      for (std::size_t j = i + 1; j < gens_.size(); ++j)
        require(gens_[i].commutes_with(gens_[j]), "generators must commute");
      require(gens_[i].commutes_with(lx_) && gens_[i].commutes_with(lz_), "logicals must commute with generators");
    }
    require(!lx_.commutes_with(lz_), "logical X and Z must anticommute");
    build_table();
  }

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int k() const { return 1; }
  const std::vector<PauliString>& generators() const { return gens_; }
  const PauliString& logical_x() const { return lx_; }
  const PauliString& logical_z() const { return lz_; }
  std::size_t syndrome_count() const { return table_.size(); }
  const PauliString& correction(std::size_t syndrome) const { return table_.at(syndrome); }

  std::size_t syndrome(std::uint64_t x, std::uint64_t z) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (anticommute_masks(x, z, gens_[i].x_mask(), gens_[i].z_mask())) s |= std::size_t{1} << i;
    return s;
  }
  std::size_t syndrome(const PauliString& e) const {
    require(e.qubits() == n_, "error size mismatch");
    return syndrome(e.x_mask(), e.z_mask());
  }

  // Logical class of an operator that commutes with every generator.
  Pauli logical_class(std::uint64_t x, std::uint64_t z) const {
    const bool has_x = anticommute_masks(x, z, lz_.x_mask(), lz_.z_mask());
    const bool has_z = anticommute_masks(x, z, lx_.x_mask(), lx_.z_mask());
    if (has_x && has_z) return Pauli::Y;
    if (has_x) return Pauli::X;
    if (has_z) return Pauli::Z;
    return Pauli::I;
  }

  std::vector<std::string> stabilizer_strings() const {
    std::vector<std::string> out;
    for (const auto& g : gens_) out.push_back(g.symbols());
    return out;
  }

  // Smallest weight of an undetectable logical error (exhaustive).
  int distance() const {
    int best = n_ + 1;
    for (std::size_t v = 1; v < pow4(n_); ++v) {
      const auto p = PauliString::from_index(n_, v);
      if (p.height() >= best || syndrome(p) != 0) continue;
      if (logical_class(p.x_mask(), p.z_mask()) != Pauli::I) best = p.height();
    }
    return best;
  }

 private:
  // Index order is lexicographic in the symbol string (I < X < Y < Z), so the
  // first minimum-weight hit per syndrome is the lexicographically smallest.
  void build_table() {
    const std::size_t ns = std::size_t{1} << gens_.size();
    table_.assign(ns, PauliString(n_));
    std::vector<int> weight(ns, n_ + 1);
    for (std::size_t v = 0; v < pow4(n_); ++v) {
      const int h = height_of_index(v);
      const auto p = PauliString::from_index(n_, v);
      const std::size_t s = syndrome(p);
      if (h < weight[s]) {
        weight[s] = h;
        table_[s] = p;
      }
    }
    for (int w : weight) require(w <= n_, "generators are not independent: some syndromes are unreachable");
  }

  std::string name_;
  int n_ = 0;
  std::vector<PauliString> gens_;
  PauliString lx_{1}, lz_{1};
  std::vector<PauliString> table_;
};

inline StabilizerCode builtin_code(const std::string& name) {
  auto p = [](const char* s) { return PauliString::parse(s); };
  if (name == "rep3") return {"rep3", {p("ZZI"), p("IZZ")}, p("XXX"), p("ZII")};
  if (name == "steane7") {
    // Hamming [7,4,3] parity checks in both X and Z.
    return {"steane7",
            {p("IIIXXXX"), p("IXXIIXX"), p("XIXIXIX"), p("IIIZZZZ"), p("IZZIIZZ"), p("ZIZIZIZ")},
            p("XXXXXXX"),
            p("ZZZZZZZ")};
  }
  if (name == "shor9") {
    return {"shor9",
            {p("ZZIIIIIII"), p("IZZIIIIII"), p("IIIZZIIII"), p("IIIIZZIII"), p("IIIIIIZZI"), p("IIIIIIIZZ"),
             p("XXXXXXIII"), p("IIIXXXXXX")},
            p("ZZZZZZZZZ"),
            p("XXXXXXXXX")};
  }
  throw std::invalid_argument("unknown code: " + name);
}

struct CorrectionResult {
  bool corrected = false;
  Pauli residual = Pauli::I;
};

inline CorrectionResult syndrome_correct(const StabilizerCode& code, const PauliString& error) {
  const PauliString& c = code.correction(code.syndrome(error));
  const std::uint64_t x = c.x_mask() ^ error.x_mask(), z = c.z_mask() ^ error.z_mask();
  const Pauli r = code.logical_class(x, z);
  return {r == Pauli::I, r};
}

}  // namespace noiselab
