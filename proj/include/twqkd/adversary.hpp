#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "twqkd/photonics.hpp"
#include "twqkd/qstate.hpp"
#include "twqkd/random.hpp"
#include "twqkd/round_record.hpp"

namespace twqkd {

enum class AttackKind : std::uint8_t {
  None,
  InterceptResend,
  BrightPulse,
  DelayPhoton,
  InvisiblePhoton,
};

const char* to_string(AttackKind k);

// Pluggable eavesdropping behavior. The three Trojan variants are purely
// additive: they insert probe photons on the forward channel and separate
// them again on the way back, leaving the legitimate photon untouched.
struct EveStrategy {
  AttackKind kind = AttackKind::None;
  double attack_rate = 1.0;  // fraction of rounds attacked

  StateLabel probe_state = StateLabel::PlusZ;
  double probe_delay_ns = 5.0;         // DelayPhoton, BrightPulse
  double probe_wavelength_nm = 1310.0; // InvisiblePhoton
  int pulse_m = 3;                     // BrightPulse probe count

  friend bool operator==(const EveStrategy&, const EveStrategy&) = default;
};

// Eve's private memory between the two channel passes: whether she attacked
// this round and the (wavelength, delay) signature identifying her probes.
struct EveMemo {
  bool attacked = false;
  int n_probes = 0;
  double probe_wavelength_nm = 0.0;
  double probe_delay_ns = 0.0;
  StateLabel probe_state = StateLabel::PlusZ;
};

struct ForwardResult {
  Pulse pulse;
  EveMemo memo;
};

// Forward-channel intervention (Bob -> Alice). The attack coin is drawn per
// round with probability attack_rate; unattacked rounds pass through
// untouched and draw nothing when the rate is degenerate.
ForwardResult eve_forward(const Pulse& p, const EveStrategy& s,
                          ChoiceSource& src);

struct BackwardResult {
  Pulse to_bob;
  std::optional<int> guess;  // Eve's guess at Alice's key bit
  bool informed = false;     // probe recovered and measured
};

// Backward-channel intervention (Alice -> Bob). Eve separates her probes by
// signature and measures the first one in the basis of probe_state: seeing
// bit_of(probe_state) means Alice applied I, the orthogonal outcome means U
// (U maps every state to an orthogonal one, so this is deterministic). A
// missing probe -- filtered out, or a check round returning nothing --
// degrades her to a fair coin. Intercept-resend does nothing here.
BackwardResult eve_backward(const Pulse& p, const EveMemo& memo,
                            const EveStrategy& s, ChoiceSource& src);

struct EveInfo {
  double bits = 0.0;  // plug-in mutual information, 0 when no data
  std::uint64_t n_pairs = 0;
  bool low_confidence = true;  // fewer than 100 (op, guess) pairs
  std::optional<double> accuracy;
};

// Plug-in mutual information between Alice's op bit and Eve's guess over
// the empirical joint distribution, restricted to attacked coding rounds
// that produced a guess. Range [0, 1] bits.
EveInfo eve_information(std::span<const RoundRecord> records);

/// Same estimate from precomputed joint counts joint[op_bit][guess].
EveInfo eve_information_from_joint(const std::uint64_t joint[2][2]);

}  // namespace twqkd
