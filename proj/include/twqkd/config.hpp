#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "twqkd/adversary.hpp"
#include "twqkd/photonics.hpp"

namespace twqkd {

// Thrown when a configuration value is out of range or inconsistent. The
// offending field name is preserved so callers can report it precisely.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Every knob of one simulation run. A single master seed reproduces the
// whole experiment, including Alice's mode/op choices, all measurement
// outcomes and Eve's coins.
struct SimConfig {
  std::uint64_t rounds = 100000;
  std::uint64_t master_seed = 1;
  double check_fraction = 0.5;
  double sample_fraction = 0.1;
  EveStrategy eve;
  bool filter_on = false;
  bool splitter_on = false;
  FilterSpec filter;
  DetectorSpec detector;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Throws ConfigError naming the first invalid field.
void validate_config(const SimConfig& cfg);

// Name <-> value helpers shared by the CLI and the config-file reader.
bool parse_attack_kind(const std::string& name, AttackKind& out);
bool parse_state_label(const std::string& name, StateLabel& out);

}  // namespace twqkd
