#pragma once

#include <cstdint>
#include <optional>

#include "twqkd/photonics.hpp"
#include "twqkd/qstate.hpp"

namespace twqkd {

enum class Mode : std::uint8_t { Check, Code };

// Full transcript of one protocol round. Byte-identical record streams for
// identical seed + configuration are a hard guarantee.
struct RoundRecord {
  std::uint64_t index = 0;
  StateLabel prep = StateLabel::PlusZ;
  Mode mode = Mode::Check;
  std::optional<OpLabel> alice_op;      // coding rounds only
  std::optional<Sample> check_sample;   // checking rounds, if one resolved
  bool multiphoton_flag = false;        // check-station flag
  std::optional<int> bob_outcome;       // coding rounds with a click
  bool bob_anomaly_flag = false;
  int blocked_count = 0;                // photons removed by Alice's filter
  std::optional<int> eve_guess;         // Eve's guess at Alice's key bit
  bool eve_attacked = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

}  // namespace twqkd
