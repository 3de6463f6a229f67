#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "twqkd/adversary.hpp"
#include "twqkd/config.hpp"
#include "twqkd/photonics.hpp"
#include "twqkd/qstate.hpp"
#include "twqkd/random.hpp"
#include "twqkd/round_record.hpp"

namespace twqkd {

inline constexpr double kSourceWavelengthNm = 1550.0;

struct Preparation {
  StateLabel label = StateLabel::PlusZ;
};

struct PrepResult {
  Preparation prep;
  Pulse pulse;
};

/// Bob's source: a uniformly random label, one photon at the source
/// wavelength with zero delay in the corresponding state.
PrepResult bob_prepare(ChoiceSource& src);

// Alice's per-round action. In checking mode the pulse is consumed by the
// measurement station; in coding mode the (filtered) pulse is re-emitted
// with the chosen unitary applied to every photon.
struct AliceAction {
  Mode mode = Mode::Check;
  std::optional<OpLabel> op;  // coding only
  Pulse outgoing;             // coding only
  CheckResult check;          // checking only
  int blocked_count = 0;      // photons removed by the filter
};

// Mode coin (Check with probability check_fraction), then the filter if
// enabled, then either the check station (two-arm when the splitter defense
// is on, single random basis on the earliest in-window photon otherwise) or
// a uniform op applied to the whole pulse.
AliceAction alice_stage(const Pulse& incoming, const SimConfig& cfg,
                        ChoiceSource& src);

/// Bob measures the returning pulse in the basis he prepared in.
DetectOutcome bob_final_measure(const Pulse& returning, const Preparation& prep,
                                const DetectorSpec& det, ChoiceSource& src);

// One full round Bob -> Eve -> Alice -> Eve -> Bob, with every decision
// drawn from `src`. This single code path serves both the Monte Carlo
// sampler and the exhaustive enumeration oracle.
RoundRecord run_round_with_source(const SimConfig& cfg, std::uint64_t index,
                                  ChoiceSource& src);

/// Monte Carlo round: deterministic given the round seed.
RoundRecord run_round(const SimConfig& cfg, std::uint64_t index,
                      std::uint64_t round_seed);

struct CheckSample {
  int expected;  // bit of Bob's preparation
  int measured;
};

struct SiftResult {
  std::vector<std::uint8_t> alice_bits;
  std::vector<std::uint8_t> bob_bits;
  std::vector<CheckSample> check_samples;  // basis-matched check rounds only
};

// Key extraction: coding rounds with an outcome contribute Alice's op bit
// and Bob's decoded bit (0 iff the outcome equals the preparation bit;
// U flips the state in Bob's basis, so a flip signals op U). Check rounds
// contribute samples only where the measured basis matches the preparation.
SiftResult sift(std::span<const RoundRecord> records);

struct QberReport {
  std::optional<double> qber_check;  // absent when nothing was compared
  std::optional<double> qber_key;    // absent when nothing was sampled
  std::uint64_t n_check_compared = 0;
  std::uint64_t n_check_errors = 0;
  std::uint64_t n_key_sampled = 0;
  std::uint64_t n_key_errors = 0;
  double detection_rate = 0.0;  // flagged rounds / all rounds
  double loss_rate = 0.0;       // lost coding rounds / coding rounds
  std::uint64_t n_rounds = 0;
  std::uint64_t n_flagged = 0;
  std::uint64_t n_coding = 0;
  std::uint64_t n_coding_lost = 0;
};

// Error estimation: the checking-mode error rate over basis-matched
// samples, plus the error rate over a uniformly drawn sample_fraction of
// the sifted key. The sampled key positions are consumed; with
// sample_fraction 1 the whole key is spent.
QberReport estimate_qber(std::span<const RoundRecord> records,
                         double sample_fraction, SplitMix64& rng);

// Per-round contribution to the aggregate statistics; shared between the
// Monte Carlo tallies and the enumeration oracle so the two cannot diverge.
struct RoundClass {
  bool check_mode = false;
  bool flagged = false;  // multiphoton or Bob's anomaly
  bool coding = false;
  bool coding_lost = false;
  bool compared = false;
  bool check_error = false;
  bool has_key_pair = false;
  std::uint8_t alice_bit = 0;
  std::uint8_t bob_bit = 0;
  bool key_error = false;
  bool eve_pair = false;  // attacked coding round with a guess
  std::uint8_t eve_op_bit = 0;
  std::uint8_t eve_guess = 0;
  bool attacked_checked = false;  // attacked check round with splitter on
  bool attacked_checked_flagged = false;
};

RoundClass classify_round(const RoundRecord& rec, const SimConfig& cfg);

}  // namespace twqkd
