#include <doctest.h>

#include <cmath>

#include "twqkd/photonics.hpp"

using namespace twqkd;

namespace {

Photon photon(double wavelength_nm, double delay_ns, StateLabel s) {
  return Photon{wavelength_nm, delay_ns, ket(s)};
}

// Independent oracle for a two-photon pulse: each photon lands on detector
// (arm, bit) with probability 0.5 * P(bit | arm basis); the flag is raised
// unless both photons coincide on one detector within the dead time.
double two_photon_flag_prob(const Qubit& a, const Qubit& b) {
  double coincide = 0.0;
  for (Basis arm : {Basis::Z, Basis::X}) {
    for (int bit : {0, 1}) {
      coincide += 0.5 * measure_prob(a, arm, bit) * 0.5 * measure_prob(b, arm, bit);
    }
  }
  return 1.0 - coincide;
}

}  // namespace

TEST_CASE("filter passes in-band photons and blocks the rest") {
  SplitMix64 rng(11);
  SampledSource src(rng);
  const FilterSpec f;  // [1549, 1551], ideal transmission

  Pulse legit;
  legit.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
  FilterOutcome out = filter_pulse(legit, f, src);
  CHECK(out.passed.size() == 1);
  CHECK(out.blocked_count == 0);

  Pulse mixed;
  mixed.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
  mixed.photons.push_back(photon(1310.0, 0.0, StateLabel::PlusZ));
  out = filter_pulse(mixed, f, src);
  CHECK(out.passed.size() == 1);
  CHECK(out.passed.photons.front().wavelength_nm == 1550.0);
  CHECK(out.blocked_count == 1);

  out = filter_pulse(Pulse{}, f, src);
  CHECK(out.passed.empty());
  CHECK(out.blocked_count == 0);
}

TEST_CASE("filter transmission thins in-band photons at the given rate") {
  SplitMix64 rng(12);
  SampledSource src(rng);
  FilterSpec f;
  f.in_band_transmission = 0.25;

  const int n = 100000;
  int survived = 0;
  Pulse one;
  one.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
  for (int i = 0; i < n; ++i) {
    survived += static_cast<int>(filter_pulse(one, f, src).passed.size());
  }
  const double rate = static_cast<double>(survived) / n;
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(rate - 0.25) <= 3.0 * sigma);
}

TEST_CASE("filter never increases photon count and is idempotent when ideal") {
  SplitMix64 rng(13);
  SampledSource src(rng);
  const FilterSpec f;
  Pulse p;
  p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusX));
  p.photons.push_back(photon(1310.0, 2.0, StateLabel::PlusZ));
  p.photons.push_back(photon(1550.5, 7.0, StateLabel::MinusX));

  const FilterOutcome once = filter_pulse(p, f, src);
  CHECK(once.passed.size() + static_cast<std::size_t>(once.blocked_count) ==
        p.size());
  const FilterOutcome twice = filter_pulse(once.passed, f, src);
  CHECK(twice.blocked_count == 0);
  CHECK(twice.passed.size() == once.passed.size());
}

namespace {
// Deterministic source driven by one fixed draw.
class FixedSource final : public ChoiceSource {
 public:
  explicit FixedSource(double r) : r_(r) {}
  using ChoiceSource::choose;
  std::size_t choose(std::span<const double> weights) override {
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (r_ < cum) return i;
    }
    return weights.size() - 1;
  }

 private:
  double r_;
};
}  // namespace

TEST_CASE("split_route threshold convention: low draws go to the Z arm") {
  FixedSource low(0.3);
  FixedSource high(0.7);
  CHECK(split_route(low) == Basis::Z);
  CHECK(split_route(high) == Basis::X);
}

TEST_CASE("split_route is an unbiased coin") {
  SplitMix64 rng(21);
  SampledSource src(rng);
  const int n = 100000;
  int z_arm = 0;
  for (int i = 0; i < n; ++i) {
    if (split_route(src) == Basis::Z) ++z_arm;
  }
  const double frac = static_cast<double>(z_arm) / n;
  CHECK(std::abs(frac - 0.5) <= 0.01);
}

TEST_CASE("check station: single photon gives one sample and no flag") {
  SplitMix64 rng(31);
  SampledSource src(rng);
  const DetectorSpec d;
  for (int i = 0; i < 2000; ++i) {
    Pulse p;
    p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
    const CheckResult res = check_station(p, d, src);
    CHECK_FALSE(res.multiphoton_flag);
    REQUIRE(res.sample.has_value());
    CHECK(res.clicks.size() == 1);
    if (res.sample->basis == Basis::Z) CHECK(res.sample->bit == 0);
  }
}

TEST_CASE("check station: two-photon flag probability matches enumeration") {
  // Both photons |+z>, delays 0 and 5 ns, dead time 50 ns: coincidence mass
  // (1/2)^2 + (1/4)^2 + (1/4)^2 = 3/8, so the flag fires with 5/8.
  const double oracle =
      two_photon_flag_prob(ket(StateLabel::PlusZ), ket(StateLabel::PlusZ));
  CHECK(oracle == doctest::Approx(5.0 / 8.0).epsilon(1e-12));

  SplitMix64 rng(32);
  SampledSource src(rng);
  const DetectorSpec d;  // window 100, dead time 50
  const int n = 100000;
  int flagged = 0;
  for (int i = 0; i < n; ++i) {
    Pulse p;
    p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
    p.photons.push_back(photon(1550.0, 5.0, StateLabel::PlusZ));
    if (check_station(p, d, src).multiphoton_flag) ++flagged;
  }
  const double rate = static_cast<double>(flagged) / n;
  const double sigma = std::sqrt(oracle * (1.0 - oracle) / n);
  CHECK(std::abs(rate - oracle) <= 3.0 * sigma);
}

TEST_CASE("check station: mean flag probability over preparations is 3/4") {
  // Legit state uniform over the four preparations, probe |+z>, delay
  // within the dead time.
  const StateLabel preps[4] = {StateLabel::PlusZ, StateLabel::MinusZ,
                               StateLabel::PlusX, StateLabel::MinusX};
  const double expected[4] = {5.0 / 8.0, 7.0 / 8.0, 3.0 / 4.0, 3.0 / 4.0};
  double mean = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double p =
        two_photon_flag_prob(ket(preps[i]), ket(StateLabel::PlusZ));
    CHECK(p == doctest::Approx(expected[i]).epsilon(1e-12));
    mean += 0.25 * p;
  }
  CHECK(mean == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("check station: time-resolved double clicks always flag") {
  // Delay separation above the dead time: even same-detector hits resolve
  // as two clicks, so two in-window photons are always caught.
  SplitMix64 rng(33);
  SampledSource src(rng);
  DetectorSpec d;
  d.dead_time_ns = 2.0;
  for (int i = 0; i < 2000; ++i) {
    Pulse p;
    p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusX));
    p.photons.push_back(photon(1550.0, 5.0, StateLabel::PlusZ));
    CHECK(check_station(p, d, src).multiphoton_flag);
  }
}

TEST_CASE("check station: photons outside the window never click") {
  SplitMix64 rng(34);
  SampledSource src(rng);
  const DetectorSpec d;  // window 100
  for (int i = 0; i < 1000; ++i) {
    Pulse p;
    p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
    p.photons.push_back(photon(1550.0, 200.0, StateLabel::PlusZ));
    const CheckResult res = check_station(p, d, src);
    CHECK_FALSE(res.multiphoton_flag);
    CHECK(res.clicks.size() == 1);
    REQUIRE(res.sample.has_value());
  }
}

TEST_CASE("check station: vacuum gives no clicks, no sample") {
  SplitMix64 rng(35);
  SampledSource src(rng);
  const CheckResult res = check_station(Pulse{}, DetectorSpec{}, src);
  CHECK(res.clicks.empty());
  CHECK_FALSE(res.multiphoton_flag);
  CHECK_FALSE(res.sample.has_value());
}

TEST_CASE("detect_single basics") {
  SplitMix64 rng(41);
  SampledSource src(rng);
  const DetectorSpec d;

  Pulse minus_z;
  minus_z.photons.push_back(photon(1550.0, 0.0, StateLabel::MinusZ));
  DetectOutcome out = detect_single(minus_z, Basis::Z, d, src);
  REQUIRE(out.outcome.has_value());
  CHECK(*out.outcome == 1);
  CHECK_FALSE(out.anomaly_flag);

  out = detect_single(Pulse{}, Basis::Z, d, src);
  CHECK_FALSE(out.outcome.has_value());
  CHECK_FALSE(out.anomaly_flag);
}

TEST_CASE("detect_single flags orthogonal double clicks and keeps the earliest") {
  SplitMix64 rng(42);
  SampledSource src(rng);
  const DetectorSpec d;  // dead time 50
  Pulse p;
  p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
  p.photons.push_back(photon(1550.0, 5.0, StateLabel::MinusZ));
  const DetectOutcome out = detect_single(p, Basis::Z, d, src);
  REQUIRE(out.outcome.has_value());
  CHECK(*out.outcome == 0);
  CHECK(out.anomaly_flag);
}

TEST_CASE("detect_single merges same-detector clicks inside the dead time") {
  SplitMix64 rng(43);
  SampledSource src(rng);
  const DetectorSpec d;
  Pulse p;
  p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
  p.photons.push_back(photon(1550.0, 5.0, StateLabel::PlusZ));
  const DetectOutcome out = detect_single(p, Basis::Z, d, src);
  REQUIRE(out.outcome.has_value());
  CHECK(*out.outcome == 0);
  CHECK_FALSE(out.anomaly_flag);
}

TEST_CASE("detector efficiency thins clicks") {
  SplitMix64 rng(44);
  SampledSource src(rng);
  DetectorSpec d;
  d.efficiency = 0.5;
  const int n = 100000;
  int clicked = 0;
  for (int i = 0; i < n; ++i) {
    Pulse p;
    p.photons.push_back(photon(1550.0, 0.0, StateLabel::PlusZ));
    if (detect_single(p, Basis::Z, d, src).outcome) ++clicked;
  }
  const double rate = static_cast<double>(clicked) / n;
  CHECK(std::abs(rate - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("resolve_clicks dead-time rule is strict") {
  // Separation exactly equal to the dead time still merges.
  std::vector<Click> clicks = {{Basis::Z, 0, 0.0}, {Basis::Z, 0, 50.0}};
  CHECK(resolve_clicks(clicks, 50.0).size() == 1);
  clicks = {{Basis::Z, 0, 0.0}, {Basis::Z, 0, 50.1}};
  CHECK(resolve_clicks(clicks, 50.0).size() == 2);
  // Non-paralyzable: 0 registers, 30 is absorbed, 60 registers again.
  clicks = {{Basis::Z, 0, 0.0}, {Basis::Z, 0, 30.0}, {Basis::Z, 0, 60.0}};
  CHECK(resolve_clicks(clicks, 50.0).size() == 2);
}
