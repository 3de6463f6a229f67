#pragma once

#include <optional>
#include <vector>

#include "twqkd/qstate.hpp"
#include "twqkd/random.hpp"

namespace twqkd {

struct Photon {
  double wavelength_nm = 1550.0;
  double delay_ns = 0.0;  // arrival offset relative to the legitimate slot
  Qubit state;
};

// Ordered multiset of photons travelling in one time slot. An empty pulse
// is vacuum (a lost or blocked signal). The ordering carries no physics; it
// only makes tie-breaking reproducible.
struct Pulse {
  std::vector<Photon> photons;

  bool empty() const { return photons.empty(); }
  std::size_t size() const { return photons.size(); }
};

// Band-pass wavelength filter placed in front of Alice's apparatus.
struct FilterSpec {
  double pass_min_nm = 1549.0;
  double pass_max_nm = 1551.0;
  double in_band_transmission = 1.0;

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

// Time-windowed, non-number-resolving single-photon detector pair. Two
// photons landing on the same detector within the dead time register as a
// single click.
struct DetectorSpec {
  double time_window_ns = 100.0;
  double dead_time_ns = 50.0;
  double efficiency = 1.0;

  friend bool operator==(const DetectorSpec&, const DetectorSpec&) = default;
};

struct Click {
  Basis arm;  // which measuring basis the photon was routed to
  int bit;
  double time_ns;
};

struct Sample {
  Basis basis;
  int bit;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Outcome of the 50/50 splitter check station. multiphoton_flag is raised
// iff the click pattern is resolvable as two or more photons: clicks on two
// distinct detectors, or clicks on one detector separated by more than the
// dead time. sample is present iff exactly one click resolves.
struct CheckResult {
  std::vector<Click> clicks;
  bool multiphoton_flag = false;
  std::optional<Sample> sample;
};

struct FilterOutcome {
  Pulse passed;
  int blocked_count = 0;
};

// Removes photons outside [pass_min_nm, pass_max_nm]; in-band photons
// survive independently with probability in_band_transmission. Order of the
// survivors is preserved.
FilterOutcome filter_pulse(const Pulse& p, const FilterSpec& f,
                           ChoiceSource& src);

/// 50/50 routing decision: Z-arm with probability 1/2, else X-arm.
Basis split_route(ChoiceSource& src);

// Splits the pulse over the two measuring bases. Every photon inside the
// time window that survives the efficiency coin is routed to an arm and
// measured there; clicks are then resolved per detector.
CheckResult check_station(const Pulse& p, const DetectorSpec& d,
                          ChoiceSource& src);

struct DetectOutcome {
  std::optional<int> outcome;  // bit of the earliest resolved click
  bool anomaly_flag = false;   // >= 2 resolved clicks
};

// Single-basis receiving station (Bob's side): measures every in-window
// surviving photon in basis b and applies the same multiphoton resolution
// rule as the check station.
DetectOutcome detect_single(const Pulse& p, Basis b, const DetectorSpec& d,
                            ChoiceSource& src);

// Dead-time resolution shared by both stations: clicks sorted by arrival;
// on each detector the first click registers, later ones only if they trail
// the previously registered click by more than dead_time_ns. Returns the
// registered clicks in arrival order.
std::vector<Click> resolve_clicks(std::vector<Click> clicks,
                                  double dead_time_ns);

}  // namespace twqkd
