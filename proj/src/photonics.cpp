#include "twqkd/photonics.hpp"

#include <algorithm>

namespace twqkd {

namespace {
int detector_index(Basis arm, int bit) {
  return (arm == Basis::Z ? 0 : 2) + bit;
}
}  // namespace

FilterOutcome filter_pulse(const Pulse& p, const FilterSpec& f,
                           ChoiceSource& src) {
  FilterOutcome out;
  for (const Photon& ph : p.photons) {
    const bool in_band =
        ph.wavelength_nm >= f.pass_min_nm && ph.wavelength_nm <= f.pass_max_nm;
    if (in_band && src.bernoulli(f.in_band_transmission)) {
      out.passed.photons.push_back(ph);
    } else {
      ++out.blocked_count;
    }
  }
  return out;
}

Basis split_route(ChoiceSource& src) {
  return src.choose({0.5, 0.5}) == 0 ? Basis::Z : Basis::X;
}

std::vector<Click> resolve_clicks(std::vector<Click> clicks,
                                  double dead_time_ns) {
  std::stable_sort(clicks.begin(), clicks.end(),
                   [](const Click& a, const Click& b) {
                     return a.time_ns < b.time_ns;
                   });
  std::vector<Click> registered;
  bool fired[4] = {false, false, false, false};
  double last_time[4] = {0.0, 0.0, 0.0, 0.0};
  for (const Click& c : clicks) {
    const int d = detector_index(c.arm, c.bit);
    if (!fired[d] || c.time_ns - last_time[d] > dead_time_ns) {
      registered.push_back(c);
      fired[d] = true;
      last_time[d] = c.time_ns;
    }
  }
  return registered;
}

CheckResult check_station(const Pulse& p, const DetectorSpec& d,
                          ChoiceSource& src) {
  CheckResult res;
  for (const Photon& ph : p.photons) {
    if (ph.delay_ns > d.time_window_ns) continue;
    if (!src.bernoulli(d.efficiency)) continue;
    const Basis arm = split_route(src);
    const int bit = src.binary(measure_prob(ph.state, arm, 0));
    res.clicks.push_back({arm, bit, ph.delay_ns});
  }
  const std::vector<Click> registered = resolve_clicks(res.clicks, d.dead_time_ns);
  res.multiphoton_flag = registered.size() >= 2;
  if (registered.size() == 1) {
    res.sample = Sample{registered.front().arm, registered.front().bit};
  }
  return res;
}

DetectOutcome detect_single(const Pulse& p, Basis b, const DetectorSpec& d,
                            ChoiceSource& src) {
  std::vector<Click> clicks;
  for (const Photon& ph : p.photons) {
    if (ph.delay_ns > d.time_window_ns) continue;
    if (!src.bernoulli(d.efficiency)) continue;
    const int bit = src.binary(measure_prob(ph.state, b, 0));
    clicks.push_back({b, bit, ph.delay_ns});
  }
  const std::vector<Click> registered =
      resolve_clicks(std::move(clicks), d.dead_time_ns);
  DetectOutcome out;
  if (!registered.empty()) out.outcome = registered.front().bit;
  out.anomaly_flag = registered.size() >= 2;
  return out;
}

}  // namespace twqkd
