#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "twqkd/config.hpp"
#include "twqkd/engine.hpp"

namespace twqkd {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for --help / --version; carries the text to print on stdout.
class CliHelp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat : std::uint8_t { Json, Csv };

struct Invocation {
  SimConfig config;
  OutputFormat format = OutputFormat::Json;
  std::string out_path;  // empty = stdout
  bool run_exact = false;
  unsigned threads = 1;
};

// Scenario presets: "<attack>" or "<attack>-<defense>" with attack in
// {honest, intercept-resend, bright-pulse, delay-photon, invisible-photon}
// and defense in {none, filter, splitter, both}. A bare attack name means
// defense "none".
struct PresetSpec {
  AttackKind attack = AttackKind::None;
  bool filter_on = false;
  bool splitter_on = false;
};

/// Throws ConfigError("preset", ...) for unknown names.
PresetSpec expand_preset(const std::string& name);

/// Applies a preset on top of cfg: attack kind, defenses and the attack's
/// default probe parameters.
void apply_preset(SimConfig& cfg, const PresetSpec& preset);

// Builds the run configuration from command-line flags and the optional
// JSON config file. Precedence: explicit flags override file values, which
// override preset defaults. Throws ConfigError for anything invalid
// (unknown flag, out-of-range value, contradictory attack/preset, unknown
// config-file key) and CliHelp for --help.
Invocation parse_invocation(int argc, const char* const* argv);

/// Flat JSON object with the full configuration; also the config-file
/// format accepted by --config.
std::string emit_config_json(const SimConfig& cfg, int indent = 2);

/// Applies the keys of a config-echo JSON object onto cfg. Unknown keys or
/// wrong types raise ConfigError naming the key.
void apply_config_json(SimConfig& cfg, const std::string& json_text);

// Report serialization. Field names and their order are stable; float
// values are printed in scientific notation with 17 significant digits so
// emitted reports are byte-reproducible and round-trip exactly.
std::string emit_report(const Report& rep, OutputFormat format,
                        const std::map<std::string, double>* exact = nullptr);

/// Writes text to path ("" or "-" = stdout). Throws IoError on failure.
void write_output(const std::string& text, const std::string& path);

}  // namespace twqkd
