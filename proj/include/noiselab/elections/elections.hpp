#pragma once

// Community elections G[a; b; q]: n = a*b voters in a communities of b. A
// community whose signal lead is decisive (one-sided uniform tail <= q) votes
// as a bloc for the leading side; everyone else votes their own signal.

#include "noiselab/core/random.hpp"
#include "noiselab/core/stats.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace noiselab {

// Smallest achievable lead L (L = b mod 2, +2, ..., b; L >= 1) with
// P(#ones - #zeros >= L) <= q for b fair bits, compared exactly. Returns
// b + 1 when no lead is decisive.
inline int decisive_threshold(int b, double q) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  require(b >= 1, "community size must be >= 1");
  require(q > 0.0 && q < 0.5, "q must be in (0, 1/2)");
  std::vector<cpp_int> binom(static_cast<std::size_t>(b) + 1);
  binom[0] = 1;
  for (int k = 1; k <= b; ++k) binom[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k - 1)] * (b - k + 1) / k;
  const cpp_rational qr(q);
  const cpp_int total = cpp_int(1) << b;
  for (int lead = (b % 2 == 0 ? 2 : 1); lead <= b; lead += 2) {
    cpp_int tail = 0;
    for (int k = (b + lead) / 2; k <= b; ++k) tail += binom[static_cast<std::size_t>(k)];
    if (cpp_rational(tail, total) <= qr) return lead;
  }
  return b + 1;
}

struct ElectionSpec {
  int a = 1;
  int b = 1;
  double q = 0.1;
  double influence_fraction = 1.0;  // chance a member of a decisive community follows the bloc
  std::uint64_t seed = 0;

  int n() const { return a * b; }
  void validate() const {
    require(a >= 1 && b >= 1, "a and b must be >= 1");
    require(q > 0.0 && q < 0.5, "q must be in (0, 1/2)");
    require(influence_fraction >= 0.0 && influence_fraction <= 1.0, "influence_fraction must be in [0, 1]");
  }
};

struct ElectionOutcome {
  std::vector<int8_t> signals;
  std::vector<int8_t> votes;
  int winner = 1;
  int gap = 0;
};

// Winner by vote sum; a zero sum goes to voter 0's vote.
inline int election_winner(const std::vector<int8_t>& votes, int* gap = nullptr) {
  long s = 0;
  for (auto v : votes) s += v;
  if (gap) *gap = static_cast<int>(std::labs(s));
  if (s != 0) return s > 0 ? 1 : -1;
  return votes.front();
}

class ElectionModel {
 public:
  explicit ElectionModel(const ElectionSpec& s) : spec_(s) {
    s.validate();
    threshold_ = decisive_threshold(s.b, s.q);
  }

  const ElectionSpec& spec() const { return spec_; }
  int threshold() const { return threshold_; }

  std::vector<int8_t> draw_signals(Rng& rng) const {
    std::vector<int8_t> s(static_cast<std::size_t>(spec_.n()));
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i % 64 == 0) word = rng();
      s[i] = ((word >> (i % 64)) & 1U) ? 1 : -1;
    }
    return s;
  }

  // rng is only consumed when influence_fraction < 1.
  ElectionOutcome vote(std::vector<int8_t> signals, Rng& rng) const {
    require(static_cast<int>(signals.size()) == spec_.n(), "signal vector has the wrong length");
    ElectionOutcome o;
    o.votes = signals;
    for (int c = 0; c < spec_.a; ++c) {
      const auto first = static_cast<std::size_t>(c) * static_cast<std::size_t>(spec_.b);
      int lead = 0;
      for (int i = 0; i < spec_.b; ++i) lead += signals[first + static_cast<std::size_t>(i)];
      if (std::abs(lead) < threshold_) continue;
      const int8_t side = lead > 0 ? 1 : -1;
      for (int i = 0; i < spec_.b; ++i) {
        if (spec_.influence_fraction >= 1.0 || uniform01(rng) < spec_.influence_fraction)
          o.votes[first + static_cast<std::size_t>(i)] = side;
      }
    }
    o.signals = std::move(signals);
    o.winner = election_winner(o.votes, &o.gap);
    return o;
  }

  ElectionOutcome simulate(Rng& rng) const { return vote(draw_signals(rng), rng); }

 private:
  ElectionSpec spec_;
  int threshold_ = 0;
};

inline ElectionOutcome simulate(const ElectionSpec& spec, Rng& rng) { return ElectionModel(spec).simulate(rng); }

inline std::vector<int8_t> flip_each(std::vector<int8_t> v, double p, Rng& rng) {
  for (auto& x : v)
    if (uniform01(rng) < p) x = static_cast<int8_t>(-x);
  return v;
}

// E[winner(s) * winner(s^delta)]; winners are symmetric so this is the correlation.
inline Estimate signal_sensitivity(const ElectionSpec& spec, double delta, std::size_t trials, std::uint64_t seed) {
  require(delta >= 0.0 && delta <= 0.5, "delta must be in [0, 1/2]");
  require(trials > 0, "need at least one trial");
  const ElectionModel m(spec);
  std::vector<double> xs(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = derive_rng(seed, "sensitivity", static_cast<std::uint64_t>(t));
    auto s = m.draw_signals(rng);
    auto flipped = flip_each(s, delta, rng);
    const int w1 = m.vote(std::move(s), rng).winner;
    const int w2 = m.vote(std::move(flipped), rng).winner;
    xs[t] = w1 * w2;
  }
  return sample_mean(xs);
}

// Probability that flipping each recorded vote w.p. miscount changes the winner.
inline Estimate count_stability(const ElectionSpec& spec, double miscount, std::size_t trials, std::uint64_t seed) {
  require(miscount >= 0.0 && miscount <= 0.5, "miscount fraction must be in [0, 1/2]");
  require(trials > 0, "need at least one trial");
  const ElectionModel m(spec);
  std::size_t reversals = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = derive_rng(seed, "miscount", static_cast<std::uint64_t>(t));
    const auto o = m.simulate(rng);
    if (election_winner(flip_each(o.votes, miscount, rng)) != o.winner) ++reversals;
  }
  return proportion(reversals, trials);
}

inline Estimate mean_gap(const ElectionSpec& spec, std::size_t runs, std::uint64_t seed) {
  require(runs > 0, "need at least one run");
  const ElectionModel m(spec);
  std::vector<double> g(runs);
  for (std::size_t t = 0; t < runs; ++t) {
    Rng rng = derive_rng(seed, "gap", static_cast<std::uint64_t>(t));
    g[t] = m.simulate(rng).gap;
  }
  return sample_mean(g);
}

struct GapScaling {
  std::vector<double> predictor;  // b * sqrt(q a)
  std::vector<double> gap;        // mean gap per cell
  LinearFit fit;                  // log gap against log predictor
};

inline GapScaling gap_scaling(const std::vector<std::pair<int, int>>& cells, double q, std::size_t runs,
                              std::uint64_t seed) {
  require(cells.size() >= 2, "need at least two grid cells");
  GapScaling r;
  std::vector<double> lx, ly;
  for (const auto& [a, b] : cells) {
    const double g = mean_gap({a, b, q, 1.0, seed}, runs, derive_seed(seed, "cell", static_cast<std::uint64_t>(a),
                                                                     static_cast<std::uint64_t>(b))).value;
    r.predictor.push_back(b * std::sqrt(q * a));
    r.gap.push_back(g);
    lx.push_back(std::log(r.predictor.back()));
    ly.push_back(std::log(g));
  }
  r.fit = linear_fit(lx, ly);
  return r;
}

}  // namespace noiselab
