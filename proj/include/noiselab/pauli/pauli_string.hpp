#pragma once

// Signed multi-Pauli operators in binary symplectic form.
//
// Symbols are coded I=0, X=1, Y=2, Z=3, which makes the base-4 index of a
// string (qubit 0 most significant) the same index used by pauli_expand, and
// makes XOR of indices the group product up to phase. Y = i X Z.

#include "noiselab/core/linalg.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace noiselab {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case '_': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("not a Pauli symbol: ") + c);
  }
}

namespace detail {
// (x, z) bits of a symbol code.
inline constexpr std::array<std::uint8_t, 4> kXBit{0, 1, 1, 0};
inline constexpr std::array<std::uint8_t, 4> kZBit{0, 0, 1, 1};
inline constexpr Pauli from_bits(unsigned x, unsigned z) {
  return x ? (z ? Pauli::Y : Pauli::X) : (z ? Pauli::Z : Pauli::I);
}
// Power of i picked up by the single-qubit product a*b.
inline constexpr std::array<std::array<std::uint8_t, 4>, 4> kMulPhase{{
    {0, 0, 0, 0},  // I*{I,X,Y,Z}
    {0, 0, 1, 3},  // X*Y = iZ, X*Z = -iY
    {0, 3, 0, 1},  // Y*X = -iZ, Y*Z = iX
    {0, 1, 3, 0},  // Z*X = iY, Z*Y = -iX
}};
}  // namespace detail

class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(int n) : n_(n) {
    require(n >= 0 && n <= 64, "PauliString supports 0..64 qubits");
  }

  // Parses "XZI", optionally prefixed by a sign: "+", "-", "i", "-i", "+i".
  static PauliString parse(std::string_view text) {
    int phase = 0;
    if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
      if (text[0] == '-') phase = 2;
      text.remove_prefix(1);
    }
    if (!text.empty() && text[0] == 'i') {
      phase = (phase + 1) % 4;
      text.remove_prefix(1);
    }
    PauliString p(static_cast<int>(text.size()));
    for (int q = 0; q < p.n_; ++q) p.set(q, pauli_from_char(text[static_cast<std::size_t>(q)]));
    p.phase_ = phase;
    return p;
  }

  // Basis element K_v for base-4 index v (phase +1).
  static PauliString from_index(int n, std::size_t v) {
    PauliString p(n);
    for (int q = 0; q < n; ++q) {
      p.set(q, static_cast<Pauli>((v >> (2 * (n - 1 - q))) & 3U));
    }
    return p;
  }

  int qubits() const { return n_; }

  Pauli at(int q) const {
    return detail::from_bits(static_cast<unsigned>((x_ >> q) & 1U), static_cast<unsigned>((z_ >> q) & 1U));
  }

  void set(int q, Pauli p) {
    const std::uint64_t b = std::uint64_t{1} << q;
    x_ = detail::kXBit[static_cast<int>(p)] ? (x_ | b) : (x_ & ~b);
    z_ = detail::kZBit[static_cast<int>(p)] ? (z_ | b) : (z_ & ~b);
  }

  // Power of i in {0,1,2,3}: phase = i^phase_power().
  int phase_power() const { return phase_; }
  cplx phase() const {
    static constexpr std::array<double, 4> re{1, 0, -1, 0};
    static constexpr std::array<double, 4> im{0, 1, 0, -1};
    return {re[static_cast<std::size_t>(phase_)], im[static_cast<std::size_t>(phase_)]};
  }
  PauliString with_phase(int power) const {
    PauliString p = *this;
    p.phase_ = ((power % 4) + 4) % 4;
    return p;
  }

  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  int height() const { return __builtin_popcountll(x_ | z_); }

  std::size_t index() const {
    std::size_t v = 0;
    for (int q = 0; q < n_; ++q) v = (v << 2) | static_cast<std::size_t>(at(q));
    return v;
  }

  bool commutes_with(const PauliString& o) const {
    require(n_ == o.n_, "Pauli size mismatch");
    return ((__builtin_popcountll(x_ & o.z_) + __builtin_popcountll(z_ & o.x_)) & 1) == 0;
  }

  // Symbols only, no sign: "XZI".
  std::string symbols() const {
    std::string s(static_cast<std::size_t>(n_), 'I');
    for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = pauli_char(at(q));
    return s;
  }

  std::string to_string() const {
    static constexpr std::array<const char*, 4> prefix{"+", "+i", "-", "-i"};
    return prefix[static_cast<std::size_t>(phase_)] + symbols();
  }

  bool same_symbols(const PauliString& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.same_symbols(b) && a.phase_ == b.phase_;
  }

  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("pauli_mul: size mismatch");
    PauliString r(a.n_);
    int ph = a.phase_ + b.phase_;
    for (int q = 0; q < a.n_; ++q) {
      ph += detail::kMulPhase[static_cast<std::size_t>(a.at(q))][static_cast<std::size_t>(b.at(q))];
    }
    r.x_ = a.x_ ^ b.x_;
    r.z_ = a.z_ ^ b.z_;
    r.phase_ = ph % 4;
    return r;
  }

  // Matrix-index masks: bit (n-1-q) of the basis index for qubit q.
  std::size_t index_x_bits() const { return to_index_bits(x_); }
  std::size_t index_z_bits() const { return to_index_bits(z_); }

  // K|j> = amplitude(j) |j ^ index_x_bits()>.
  cplx amplitude(std::size_t j) const {
    int power = phase_ + __builtin_popcountll(x_ & z_);  // Y = i X Z per qubit
    if (__builtin_popcountll(j & index_z_bits()) & 1) power += 2;
    static constexpr std::array<double, 4> re{1, 0, -1, 0};
    static constexpr std::array<double, 4> im{0, 1, 0, -1};
    return {re[static_cast<std::size_t>(power % 4)], im[static_cast<std::size_t>(power % 4)]};
  }

  CMatrix to_matrix() const {
    const auto d = static_cast<Eigen::Index>(dim_of(n_));
    CMatrix m = CMatrix::Zero(d, d);
    const std::size_t xb = index_x_bits();
    for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
      m(static_cast<Eigen::Index>(j ^ xb), static_cast<Eigen::Index>(j)) = amplitude(j);
    }
    return m;
  }

  // v <- K v
  void apply(CVector& v) const {
    const std::size_t xb = index_x_bits();
    CVector out(v.size());
    for (std::size_t j = 0; j < static_cast<std::size_t>(v.size()); ++j) {
      out(static_cast<Eigen::Index>(j ^ xb)) = amplitude(j) * v(static_cast<Eigen::Index>(j));
    }
    v.swap(out);
  }

 private:
  std::size_t to_index_bits(std::uint64_t m) const {
    std::size_t r = 0;
    for (int q = 0; q < n_; ++q) {
      if ((m >> q) & 1U) r |= std::size_t{1} << bit_of_qubit(n_, q);
    }
    return r;
  }

  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

inline PauliString pauli_mul(const PauliString& p, const PauliString& q) { return p * q; }

// Height of a base-4 Pauli index: number of non-identity symbols.
inline int height_of_index(std::size_t v) {
  // OR the two bits of every base-4 digit into the low bit.
  const std::size_t lo = v & 0x5555555555555555ULL;
  const std::size_t hi = (v >> 1) & 0x5555555555555555ULL;
  return __builtin_popcountll(lo | hi);
}

inline bool index_touches(std::size_t v, int n, int q) {
  return ((v >> (2 * (n - 1 - q))) & 3U) != 0;
}

}  // namespace noiselab
