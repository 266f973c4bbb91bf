#pragma once

// Codes for the g-decoding rule: a received word y is decoded to the codeword
// x when g(x xor y) = +1. Two codewords conflict when some y decodes to both,
// i.e. when x xor x' lies in D = A xor A with A = {z : g(z) = +1}. A valid code
// is an independent set of the Cayley graph on D \ {0}.

#include "noiselab/boolean/function.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

namespace noiselab {

enum class GCodeMode { exact, greedy };

struct GCodeResult {
  std::vector<std::uint32_t> codewords;  // increasing
  bool optimal = false;                  // exact search finished
  bool timed_out = false;
  std::size_t nodes = 0;
};

// conflict[d] is true when d = a xor a' for some a, a' in A.
inline std::vector<bool> conflict_differences(const BooleanFunction& g) {
  std::vector<std::int64_t> ind(g.size());
  for (std::uint32_t z = 0; z < g.size(); ++z) ind[z] = g(z) > 0 ? 1 : 0;
  // Autocorrelation through the integer transform: WHT(WHT(ind)^2) = 2^n * corr.
  walsh_hadamard(ind);
  for (auto& v : ind) v *= v;
  walsh_hadamard(ind);
  std::vector<bool> d(g.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = ind[i] != 0;
  return d;
}

inline std::vector<std::uint32_t> greedy_gcode(const std::vector<bool>& conflict) {
  std::vector<std::uint32_t> diffs;
  for (std::uint32_t d = 1; d < conflict.size(); ++d)
    if (conflict[d]) diffs.push_back(d);
  std::vector<bool> blocked(conflict.size());
  std::vector<std::uint32_t> x;
  for (std::uint32_t c = 0; c < conflict.size(); ++c) {
    if (blocked[c]) continue;
    x.push_back(c);
    for (auto d : diffs) blocked[c ^ d] = true;
  }
  return x;
}

namespace detail {

struct MisSearch {
  const std::vector<bool>& conflict;
  std::chrono::steady_clock::time_point deadline;
  std::vector<std::uint32_t> current, best;
  std::size_t nodes = 0;
  bool timed_out = false;

  void run(const std::vector<std::uint32_t>& cand) {
    if (timed_out) return;
    if ((++nodes & 1023U) == 0 && std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    if (cand.empty()) {
      if (current.size() > best.size()) best = current;
      return;
    }
    if (current.size() + cand.size() <= best.size()) return;
    const std::uint32_t v = cand.front();
    std::vector<std::uint32_t> with;
    for (std::size_t i = 1; i < cand.size(); ++i)
      if (!conflict[cand[i] ^ v]) with.push_back(cand[i]);
    current.push_back(v);
    run(with);
    current.pop_back();
    run(std::vector<std::uint32_t>(cand.begin() + 1, cand.end()));
  }
};

}  // namespace detail

inline GCodeResult g_code_search(const BooleanFunction& g, GCodeMode mode, double timeout_seconds = 10.0) {
  require(mode != GCodeMode::exact || g.n() <= 14, "exact g-code search needs n <= 14");
  const auto conflict = conflict_differences(g);
  GCodeResult r;
  r.codewords = greedy_gcode(conflict);
  if (mode == GCodeMode::greedy) return r;
  // Translation invariance: some maximum code contains 0.
  detail::MisSearch s{conflict,
                      std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                             std::chrono::duration<double>(timeout_seconds)),
                      {0U},
                      r.codewords};
  std::vector<std::uint32_t> cand;
  for (std::uint32_t c = 1; c < conflict.size(); ++c)
    if (!conflict[c]) cand.push_back(c);
  s.run(cand);
  std::sort(s.best.begin(), s.best.end());
  r.codewords = s.best;
  r.timed_out = s.timed_out;
  r.optimal = !s.timed_out;
  r.nodes = s.nodes;
  return r;
}

// Direct check: every y is decoded to at most one codeword.
inline bool verify_gcode(const BooleanFunction& g, const std::vector<std::uint32_t>& x) {
  std::vector<std::uint32_t> accept;
  for (std::uint32_t z = 0; z < g.size(); ++z)
    if (g(z) > 0) accept.push_back(z);
  std::vector<bool> hit(g.size());
  for (auto c : x) {
    if (c >= g.size()) return false;
    for (auto a : accept) {
      if (hit[c ^ a]) return false;
      hit[c ^ a] = true;
    }
  }
  return true;
}

}  // namespace noiselab
