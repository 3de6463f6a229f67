#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace twqkd {

// 64-bit finalizer with full avalanche; bijective on the input word.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// splitmix64 stream. Small and portable; the sequence produced for a given
// seed is part of the reproducibility contract and must not change between
// releases.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// One stochastic decision point. The simulation core draws every random
// choice through this interface, so the same code path can be driven either
// by a sampling RNG or by an exhaustive branch enumerator.
class ChoiceSource {
 public:
  virtual ~ChoiceSource() = default;

  // weights are nonnegative and sum to 1; returns the chosen index.
  virtual std::size_t choose(std::span<const double> weights) = 0;

  std::size_t choose(std::initializer_list<double> weights) {
    return choose(std::span<const double>(weights.begin(), weights.size()));
  }

  // True with probability p. Degenerate probabilities short-circuit without
  // touching the source, so e.g. attack_rate 0 consumes no randomness.
  bool bernoulli(double p_true) {
    if (p_true <= 0.0) return false;
    if (p_true >= 1.0) return true;
    return choose({p_true, 1.0 - p_true}) == 0;
  }

  // Two-outcome measurement branch: 0 with probability p0, else 1.
  int binary(double p0) {
    if (p0 <= 0.0) return 1;
    if (p0 >= 1.0) return 0;
    return static_cast<int>(choose({p0, 1.0 - p0}));
  }
};

// Samples decisions from a SplitMix64 stream. Index 0 of a weight vector
// owns [0, w0), index 1 the next subinterval, and so on, which gives the
// documented "bit 0 first" threshold ordering for measurements.
class SampledSource final : public ChoiceSource {
 public:
  explicit SampledSource(SplitMix64& rng) : rng_(rng) {}

  using ChoiceSource::choose;
  std::size_t choose(std::span<const double> weights) override {
    const double r = rng_.uniform();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      cum += weights[i];
      last_positive = i;
      if (r < cum) return i;
    }
    // r landed past the cumulative sum (rounding); fall back to the last
    // positive-weight option.
    return last_positive;
  }

 private:
  SplitMix64& rng_;
};

}  // namespace twqkd
