#include "twqkd/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace twqkd {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) {
  return v ? fmt_double(*v) : "null";
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct AttackDefaults {
  StateLabel probe_state = StateLabel::PlusZ;
  double probe_delay_ns = 0.0;
  double probe_wavelength_nm = 1310.0;
  int pulse_m = 3;
};

AttackDefaults defaults_for(AttackKind kind) {
  AttackDefaults d;
  switch (kind) {
    case AttackKind::DelayPhoton:
      d.probe_delay_ns = 5.0;
      break;
    case AttackKind::BrightPulse:
      d.probe_delay_ns = 0.0;  // rides in the legitimate slot, same as Bob
      break;
    default:
      break;
  }
  return d;
}

}  // namespace

PresetSpec expand_preset(const std::string& name) {
  static const char* kAttacks[] = {"honest", "intercept-resend", "bright-pulse",
                                   "delay-photon", "invisible-photon"};
  for (const char* attack : kAttacks) {
    const std::string a(attack);
    std::string defense;
    if (name == a) {
      defense = "none";
    } else if (name.rfind(a + "-", 0) == 0) {
      defense = name.substr(a.size() + 1);
    } else {
      continue;
    }

    PresetSpec spec;
    parse_attack_kind(a, spec.attack);
    if (defense == "none") {
      // no defenses
    } else if (defense == "filter") {
      spec.filter_on = true;
    } else if (defense == "splitter") {
      spec.splitter_on = true;
    } else if (defense == "both") {
      spec.filter_on = true;
      spec.splitter_on = true;
    } else {
      break;
    }
    return spec;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

void apply_preset(SimConfig& cfg, const PresetSpec& preset) {
  cfg.eve.kind = preset.attack;
  const AttackDefaults d = defaults_for(preset.attack);
  cfg.eve.probe_state = d.probe_state;
  cfg.eve.probe_delay_ns = d.probe_delay_ns;
  cfg.eve.probe_wavelength_nm = d.probe_wavelength_nm;
  cfg.eve.pulse_m = d.pulse_m;
  cfg.filter_on = preset.filter_on;
  cfg.splitter_on = preset.splitter_on;
}

std::string emit_config_json(const SimConfig& cfg, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::ostringstream os;
  os << "{\n";
  auto field = [&](const char* key, const std::string& value, bool last = false) {
    os << pad << "\"" << key << "\": " << value << (last ? "\n" : ",\n");
  };
  field("rounds", std::to_string(cfg.rounds));
  field("master_seed", std::to_string(cfg.master_seed));
  field("check_fraction", fmt_double(cfg.check_fraction));
  field("sample_fraction", fmt_double(cfg.sample_fraction));
  field("attack", std::string("\"") + to_string(cfg.eve.kind) + "\"");
  field("attack_rate", fmt_double(cfg.eve.attack_rate));
  field("probe_state", std::string("\"") + to_string(cfg.eve.probe_state) + "\"");
  field("probe_delay_ns", fmt_double(cfg.eve.probe_delay_ns));
  field("probe_wavelength_nm", fmt_double(cfg.eve.probe_wavelength_nm));
  field("pulse_m", std::to_string(cfg.eve.pulse_m));
  field("filter_on", fmt_bool(cfg.filter_on));
  field("splitter_on", fmt_bool(cfg.splitter_on));
  field("filter_pass_min_nm", fmt_double(cfg.filter.pass_min_nm));
  field("filter_pass_max_nm", fmt_double(cfg.filter.pass_max_nm));
  field("filter_in_band_transmission", fmt_double(cfg.filter.in_band_transmission));
  field("detector_time_window_ns", fmt_double(cfg.detector.time_window_ns));
  field("detector_dead_time_ns", fmt_double(cfg.detector.dead_time_ns));
  field("detector_efficiency", fmt_double(cfg.detector.efficiency), true);
  os << std::string(static_cast<std::size_t>(indent > 2 ? indent - 2 : 0), ' ')
     << "}";
  return os.str();
}

void apply_config_json(SimConfig& cfg, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");

  auto number = [&](const nlohmann::json& v, const std::string& key) -> double {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
  };
  auto unsigned_int = [&](const nlohmann::json& v,
                          const std::string& key) -> std::uint64_t {
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      throw ConfigError(key, "expected a nonnegative integer");
    }
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
      throw ConfigError(key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  };
  auto boolean = [&](const nlohmann::json& v, const std::string& key) -> bool {
    if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
    return v.get<bool>();
  };
  auto text = [&](const nlohmann::json& v, const std::string& key) -> std::string {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "rounds") {
      cfg.rounds = unsigned_int(value, key);
    } else if (key == "master_seed") {
      cfg.master_seed = unsigned_int(value, key);
    } else if (key == "check_fraction") {
      cfg.check_fraction = number(value, key);
    } else if (key == "sample_fraction") {
      cfg.sample_fraction = number(value, key);
    } else if (key == "attack") {
      if (!parse_attack_kind(text(value, key), cfg.eve.kind)) {
        throw ConfigError(key, "unknown attack '" + text(value, key) + "'");
      }
    } else if (key == "attack_rate") {
      cfg.eve.attack_rate = number(value, key);
    } else if (key == "probe_state") {
      if (!parse_state_label(text(value, key), cfg.eve.probe_state)) {
        throw ConfigError(key, "unknown state '" + text(value, key) + "'");
      }
    } else if (key == "probe_delay_ns") {
      cfg.eve.probe_delay_ns = number(value, key);
    } else if (key == "probe_wavelength_nm") {
      cfg.eve.probe_wavelength_nm = number(value, key);
    } else if (key == "pulse_m") {
      cfg.eve.pulse_m = static_cast<int>(unsigned_int(value, key));
    } else if (key == "filter_on") {
      cfg.filter_on = boolean(value, key);
    } else if (key == "splitter_on") {
      cfg.splitter_on = boolean(value, key);
    } else if (key == "filter_pass_min_nm") {
      cfg.filter.pass_min_nm = number(value, key);
    } else if (key == "filter_pass_max_nm") {
      cfg.filter.pass_max_nm = number(value, key);
    } else if (key == "filter_in_band_transmission") {
      cfg.filter.in_band_transmission = number(value, key);
    } else if (key == "detector_time_window_ns") {
      cfg.detector.time_window_ns = number(value, key);
    } else if (key == "detector_dead_time_ns") {
      cfg.detector.dead_time_ns = number(value, key);
    } else if (key == "detector_efficiency") {
      cfg.detector.efficiency = number(value, key);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
}

Invocation parse_invocation(int argc, const char* const* argv) {
  CLI::App app{"Monte Carlo simulator of a two-way quantum key distribution "
               "protocol under Trojan-horse eavesdropping"};
  app.get_formatter()->column_width(34);

  std::optional<std::string> preset_name;
  std::optional<std::string> attack_name;
  std::optional<std::string> defense_name;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> seed;
  std::optional<double> check_fraction;
  std::optional<double> sample_fraction;
  std::optional<std::string> probe_state;
  std::optional<double> probe_delay_ns;
  std::optional<int> pulse_m;
  std::string output_format = "json";
  std::string out_path;
  std::string config_path;
  bool run_exact = false;
  unsigned threads = 1;

  app.add_option("--preset", preset_name,
                 "Scenario preset <attack>[-<defense>], e.g. delay-photon-both");
  app.add_option("--attack", attack_name,
                 "Attack: honest, intercept-resend, bright-pulse, "
                 "delay-photon, invisible-photon")
      ->check(CLI::IsMember({"honest", "intercept-resend", "bright-pulse",
                             "delay-photon", "invisible-photon"}));
  app.add_option("--defense", defense_name,
                 "Defense: none, filter, splitter, both")
      ->check(CLI::IsMember({"none", "filter", "splitter", "both"}));
  app.add_option("--rounds", rounds, "Number of protocol rounds")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "64-bit master seed");
  app.add_option("--check-fraction", check_fraction,
                 "Probability of choosing checking mode")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--sample-fraction", sample_fraction,
                 "Fraction of the sifted key spent on error estimation");
  app.add_option("--probe-state", probe_state, "Eve's probe state")
      ->check(CLI::IsMember({"+z", "-z", "+x", "-x"}));
  app.add_option("--probe-delay-ns", probe_delay_ns,
                 "Delay of Eve's probe photons")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--pulse-m", pulse_m, "Photons per bright-pulse probe")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", output_format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--exact", run_exact,
               "Also run the enumeration oracle and embed its values");
  app.add_option("--out", out_path, "Write the report to this path");
  app.add_option("--config", config_path, "JSON config file (config-echo format)");
  app.add_option("--threads", threads,
                 "Worker threads (0 = hardware); output is thread-invariant");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    throw CliHelp(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError("argv", e.what());
  }

  Invocation inv;

  // Preset first, then file, then explicit flags.
  if (preset_name) apply_preset(inv.config, expand_preset(*preset_name));

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config", "cannot read '" + config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_json(inv.config, buf.str());
  }

  if (attack_name) {
    AttackKind kind = AttackKind::None;
    parse_attack_kind(*attack_name, kind);
    if (preset_name && expand_preset(*preset_name).attack != kind) {
      throw ConfigError("attack", "contradicts --preset '" + *preset_name + "'");
    }
    if (!preset_name && config_path.empty()) {
      // Bare --attack: start from that attack's defaults.
      PresetSpec spec;
      spec.attack = kind;
      spec.filter_on = inv.config.filter_on;
      spec.splitter_on = inv.config.splitter_on;
      apply_preset(inv.config, spec);
    }
    inv.config.eve.kind = kind;
  }
  if (defense_name) {
    const bool filter_on = *defense_name == "filter" || *defense_name == "both";
    const bool splitter_on =
        *defense_name == "splitter" || *defense_name == "both";
    if (preset_name) {
      const PresetSpec spec = expand_preset(*preset_name);
      if (spec.filter_on != filter_on || spec.splitter_on != splitter_on) {
        throw ConfigError("defense",
                          "contradicts --preset '" + *preset_name + "'");
      }
    }
    inv.config.filter_on = filter_on;
    inv.config.splitter_on = splitter_on;
  }

  if (rounds) inv.config.rounds = *rounds;
  if (seed) inv.config.master_seed = *seed;
  if (check_fraction) inv.config.check_fraction = *check_fraction;
  if (sample_fraction) inv.config.sample_fraction = *sample_fraction;
  if (probe_state) parse_state_label(*probe_state, inv.config.eve.probe_state);
  if (probe_delay_ns) inv.config.eve.probe_delay_ns = *probe_delay_ns;
  if (pulse_m) inv.config.eve.pulse_m = *pulse_m;

  inv.format = output_format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  inv.out_path = out_path;
  inv.run_exact = run_exact;
  inv.threads = threads;

  validate_config(inv.config);
  return inv;
}

namespace {

// Report fields in emission order; shared by the JSON and CSV writers.
std::vector<std::pair<std::string, std::string>> report_fields(
    const Report& rep) {
  return {
      {"qber_check", fmt_optional(rep.qber_check)},
      {"qber_key", fmt_optional(rep.qber_key)},
      {"detection_rate", fmt_double(rep.detection_rate)},
      {"loss_rate", fmt_double(rep.loss_rate)},
      {"eve_information_bits", fmt_double(rep.eve_information_bits)},
      {"sifted_key_length", std::to_string(rep.sifted_key_length)},
      {"usable_key_length", std::to_string(rep.usable_key_length)},
      {"p_undetected", fmt_double(rep.p_undetected)},
      {"n_check_compared", std::to_string(rep.n_check_compared)},
      {"n_key_sampled", std::to_string(rep.n_key_sampled)},
      {"eve_guess_accuracy", fmt_optional(rep.eve_guess_accuracy)},
      {"eve_guess_rounds", std::to_string(rep.eve_guess_rounds)},
      {"eve_information_low_confidence",
       fmt_bool(rep.eve_information_low_confidence)},
      {"n_attacked_checked", std::to_string(rep.n_attacked_checked)},
      {"n_attacked_checked_flagged",
       std::to_string(rep.n_attacked_checked_flagged)},
  };
}

std::vector<std::pair<std::string, std::string>> config_fields(
    const SimConfig& cfg) {
  return {
      {"rounds", std::to_string(cfg.rounds)},
      {"master_seed", std::to_string(cfg.master_seed)},
      {"check_fraction", fmt_double(cfg.check_fraction)},
      {"sample_fraction", fmt_double(cfg.sample_fraction)},
      {"attack", to_string(cfg.eve.kind)},
      {"attack_rate", fmt_double(cfg.eve.attack_rate)},
      {"probe_state", to_string(cfg.eve.probe_state)},
      {"probe_delay_ns", fmt_double(cfg.eve.probe_delay_ns)},
      {"probe_wavelength_nm", fmt_double(cfg.eve.probe_wavelength_nm)},
      {"pulse_m", std::to_string(cfg.eve.pulse_m)},
      {"filter_on", fmt_bool(cfg.filter_on)},
      {"splitter_on", fmt_bool(cfg.splitter_on)},
      {"filter_pass_min_nm", fmt_double(cfg.filter.pass_min_nm)},
      {"filter_pass_max_nm", fmt_double(cfg.filter.pass_max_nm)},
      {"filter_in_band_transmission",
       fmt_double(cfg.filter.in_band_transmission)},
      {"detector_time_window_ns", fmt_double(cfg.detector.time_window_ns)},
      {"detector_dead_time_ns", fmt_double(cfg.detector.dead_time_ns)},
      {"detector_efficiency", fmt_double(cfg.detector.efficiency)},
  };
}

bool is_string_config_key(const std::string& key) {
  return key == "attack" || key == "probe_state";
}

std::string emit_json(const Report& rep,
                      const std::map<std::string, double>* exact) {
  std::ostringstream os;
  os << "{\n";
  for (const auto& [key, value] : report_fields(rep)) {
    os << "  \"" << key << "\": " << value << ",\n";
  }
  if (exact) {
    os << "  \"exact\": {\n";
    std::size_t i = 0;
    for (const auto& [key, value] : *exact) {
      os << "    \"" << key << "\": " << fmt_double(value)
         << (++i == exact->size() ? "\n" : ",\n");
    }
    os << "  },\n";
  }
  os << "  \"config\": {\n";
  const auto cfg_fields = config_fields(rep.config);
  for (std::size_t i = 0; i < cfg_fields.size(); ++i) {
    const auto& [key, value] = cfg_fields[i];
    os << "    \"" << key << "\": ";
    if (is_string_config_key(key)) {
      os << "\"" << value << "\"";
    } else {
      os << value;
    }
    os << (i + 1 == cfg_fields.size() ? "\n" : ",\n");
  }
  os << "  }\n}\n";
  return os.str();
}

std::string emit_csv(const Report& rep) {
  std::ostringstream header;
  std::ostringstream row;
  bool first = true;
  auto cell = [&](const std::string& key, const std::string& value) {
    if (!first) {
      header << ",";
      row << ",";
    }
    first = false;
    header << key;
    row << (value == "null" ? "" : value);
  };
  for (const auto& [key, value] : report_fields(rep)) cell(key, value);
  for (const auto& [key, value] : config_fields(rep.config)) {
    cell("config_" + key, value);
  }
  return header.str() + "\n" + row.str() + "\n";
}

}  // namespace

std::string emit_report(const Report& rep, OutputFormat format,
                        const std::map<std::string, double>* exact) {
  return format == OutputFormat::Json ? emit_json(rep, exact) : emit_csv(rep);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace twqkd
