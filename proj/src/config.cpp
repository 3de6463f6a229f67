#include "twqkd/config.hpp"

#include <cmath>

namespace twqkd {

namespace {
void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool finite(double x) { return std::isfinite(x); }
}  // namespace

void validate_config(const SimConfig& cfg) {
  require(cfg.rounds >= 1, "rounds", "must be at least 1");
  require(finite(cfg.check_fraction) && cfg.check_fraction >= 0.0 &&
              cfg.check_fraction <= 1.0,
          "check_fraction", "must be within [0, 1]");
  require(finite(cfg.sample_fraction) && cfg.sample_fraction > 0.0 &&
              cfg.sample_fraction <= 1.0,
          "sample_fraction", "must be within (0, 1]");
  require(finite(cfg.eve.attack_rate) && cfg.eve.attack_rate >= 0.0 &&
              cfg.eve.attack_rate <= 1.0,
          "attack_rate", "must be within [0, 1]");
  require(finite(cfg.eve.probe_delay_ns) && cfg.eve.probe_delay_ns >= 0.0,
          "probe_delay_ns", "must be finite and >= 0");
  require(finite(cfg.eve.probe_wavelength_nm) &&
              cfg.eve.probe_wavelength_nm > 0.0,
          "probe_wavelength_nm", "must be finite and > 0");
  if (cfg.eve.kind == AttackKind::BrightPulse) {
    require(cfg.eve.pulse_m >= 1, "pulse_m", "must be at least 1");
  }
  require(finite(cfg.filter.pass_min_nm) && finite(cfg.filter.pass_max_nm) &&
              cfg.filter.pass_min_nm < cfg.filter.pass_max_nm,
          "filter_pass_min_nm", "passband must satisfy min < max");
  require(finite(cfg.filter.in_band_transmission) &&
              cfg.filter.in_band_transmission >= 0.0 &&
              cfg.filter.in_band_transmission <= 1.0,
          "filter_in_band_transmission", "must be within [0, 1]");
  require(finite(cfg.detector.time_window_ns) &&
              cfg.detector.time_window_ns > 0.0,
          "detector_time_window_ns", "must be finite and > 0");
  require(finite(cfg.detector.dead_time_ns) &&
              cfg.detector.dead_time_ns >= 0.0,
          "detector_dead_time_ns", "must be finite and >= 0");
  require(finite(cfg.detector.efficiency) && cfg.detector.efficiency >= 0.0 &&
              cfg.detector.efficiency <= 1.0,
          "detector_efficiency", "must be within [0, 1]");
}

bool parse_attack_kind(const std::string& name, AttackKind& out) {
  if (name == "honest") {
    out = AttackKind::None;
  } else if (name == "intercept-resend") {
    out = AttackKind::InterceptResend;
  } else if (name == "bright-pulse") {
    out = AttackKind::BrightPulse;
  } else if (name == "delay-photon") {
    out = AttackKind::DelayPhoton;
  } else if (name == "invisible-photon") {
    out = AttackKind::InvisiblePhoton;
  } else {
    return false;
  }
  return true;
}

bool parse_state_label(const std::string& name, StateLabel& out) {
  if (name == "+z") {
    out = StateLabel::PlusZ;
  } else if (name == "-z") {
    out = StateLabel::MinusZ;
  } else if (name == "+x") {
    out = StateLabel::PlusX;
  } else if (name == "-x") {
    out = StateLabel::MinusX;
  } else {
    return false;
  }
  return true;
}

}  // namespace twqkd
