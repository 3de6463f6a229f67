#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twqkd/adversary.hpp"
#include "twqkd/config.hpp"
#include "twqkd/protocol.hpp"

namespace twqkd {

// Per-round seed derivation: mix64 over the master seed offset by a
// distinct odd multiple per index. Bijective in the index, so a fixed
// master seed can never produce colliding round seeds. The mapping is a
// compatibility guarantee and must not change between releases.
inline std::uint64_t derive_round_seed(std::uint64_t master_seed,
                                       std::uint64_t round_index) {
  return mix64(master_seed + (round_index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Runs cfg.rounds independent rounds. The output is identical for any
/// thread count; shards only fill disjoint slices of the same vector.
std::vector<RoundRecord> simulate_rounds(const SimConfig& cfg,
                                         unsigned threads = 1);

// Aggregated outcome of a simulation run.
struct Report {
  std::optional<double> qber_check;
  std::optional<double> qber_key;
  double detection_rate = 0.0;
  double loss_rate = 0.0;
  double eve_information_bits = 0.0;
  std::uint64_t sifted_key_length = 0;
  std::uint64_t usable_key_length = 0;
  // Probability that Eve survives every check-station test she was exposed
  // to, computed as (1 - p_flag)^n over the n attacked rounds that hit an
  // active check station; 1.0 when there were none.
  double p_undetected = 1.0;

  std::uint64_t n_check_compared = 0;
  std::uint64_t n_key_sampled = 0;
  std::optional<double> eve_guess_accuracy;
  std::uint64_t eve_guess_rounds = 0;
  bool eve_information_low_confidence = true;
  std::uint64_t n_attacked_checked = 0;
  std::uint64_t n_attacked_checked_flagged = 0;

  SimConfig config;
};

/// Validates cfg, runs the rounds (optionally sharded over `threads`),
/// sifts, estimates error rates and assembles the report. Deterministic:
/// identical cfg yields an identical Report for any thread count.
Report run_simulation(const SimConfig& cfg, unsigned threads = 1);

// Mergeable tally over a contiguous range of rounds. Counts add; the key
// stream is kept in round order so merged shards reproduce the serial
// reduction bit for bit.
struct StatsSegment {
  std::uint64_t begin = 0;  // round index range [begin, end)
  std::uint64_t end = 0;
  std::uint64_t n_rounds = 0;
  std::uint64_t n_check = 0;
  std::uint64_t n_flagged = 0;
  std::uint64_t n_coding = 0;
  std::uint64_t n_coding_lost = 0;
  std::uint64_t n_check_compared = 0;
  std::uint64_t n_check_errors = 0;
  std::uint64_t n_attacked_checked = 0;
  std::uint64_t n_attacked_checked_flagged = 0;
  std::uint64_t eve_joint[2][2] = {{0, 0}, {0, 0}};
  std::vector<std::uint8_t> key_alice;
  std::vector<std::uint8_t> key_bob;

  friend bool operator==(const StatsSegment&, const StatsSegment&) = default;
};

// Partial statistics over one or more disjoint round ranges. Adjacent
// ranges coalesce on merge, so merging all shards of a run yields a single
// segment equal to the serial tally.
struct PartialStats {
  std::vector<StatsSegment> segments;  // sorted by begin, pairwise disjoint

  friend bool operator==(const PartialStats&, const PartialStats&) = default;
};

/// Tallies a slice of records whose first element has round index `begin`.
PartialStats tally_rounds(std::span<const RoundRecord> records,
                          std::uint64_t begin, const SimConfig& cfg);

/// Commutative, associative merge. Throws std::invalid_argument if the
/// operands cover overlapping round ranges.
PartialStats merge_stats(const PartialStats& a, const PartialStats& b);

// Single-round scenario for the exact enumeration oracle. rounds,
// master_seed and sample_fraction in `config` are ignored.
struct ExactScenario {
  SimConfig config;
  std::uint64_t max_leaves = 1000000;
};

// Walks the complete discrete branch tree of one round (preparation, mode,
// Eve's coins, filter coins, arm routconfigurations, measurement branches),
// weighting each leaf by its exact probability. Uses the same pipeline as
// the Monte Carlo path, probability-weighted instead of sampled.
//
// Returned keys (conditional entries are omitted when the conditioning
// event has zero probability):
//   leaves                          number of enumerated leaves
//   p_total                         sum over all leaves (== 1)
//   p_check_mode                    P(checking mode)
//   p_coding                        P(coding mode)
//   p_detection                     P(multiphoton flag or Bob anomaly)
//   p_flag_given_check              P(multiphoton flag | checking round)
//   p_flag_given_check_prep_<s>     same, conditioned on preparation s
//                                   (s in plus_z, minus_z, plus_x, minus_x)
//   p_check_compared                P(check sample in matching basis)
//   p_check_error_given_compared    expected qber_check
//   p_key_round                     P(coding round with an outcome)
//   p_key_error_given_key           expected qber_key
//   p_loss_given_coding             expected loss_rate
//   p_eve_pair                      P(attacked coding round with a guess)
//   p_eve_correct_given_pair        expected Eve guess accuracy
//   p_eve_joint_<a><e>              P(op bit a, guess e | pair)
//   eve_information_bits            mutual information of that joint
//   p_attacked_checked              P(attacked check round, splitter on)
//   p_flag_given_attacked_checked   per-round detection probability
//
// Throws std::invalid_argument if the scenario is invalid or the branch
// space exceeds max_leaves (the message reports the count).
std::map<std::string, double> exact_enumerate(const ExactScenario& sc);

}  // namespace twqkd
