#include "twqkd/adversary.hpp"

#include <cmath>
#include <vector>

namespace twqkd {

namespace {
constexpr double kLegitWavelengthNm = 1550.0;

Photon make_probe(double wavelength_nm, double delay_ns, StateLabel state) {
  return Photon{wavelength_nm, delay_ns, ket(state)};
}
}  // namespace

const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::None:
      return "honest";
    case AttackKind::InterceptResend:
      return "intercept-resend";
    case AttackKind::BrightPulse:
      return "bright-pulse";
    case AttackKind::DelayPhoton:
      return "delay-photon";
    case AttackKind::InvisiblePhoton:
      return "invisible-photon";
  }
  return "?";
}

ForwardResult eve_forward(const Pulse& p, const EveStrategy& s,
                          ChoiceSource& src) {
  ForwardResult res;
  res.pulse = p;
  if (s.kind == AttackKind::None) return res;
  if (!src.bernoulli(s.attack_rate)) return res;

  res.memo.attacked = true;
  res.memo.probe_state = s.probe_state;
  switch (s.kind) {
    case AttackKind::InterceptResend: {
      if (!res.pulse.empty()) {
        Photon& ph = res.pulse.photons.front();
        const Basis eve_basis = src.choose({0.5, 0.5}) == 0 ? Basis::Z : Basis::X;
        const int bit = src.binary(measure_prob(ph.state, eve_basis, 0));
        ph.state = ket(label_for(eve_basis, bit));
      }
      break;
    }
    case AttackKind::DelayPhoton:
      res.memo.n_probes = 1;
      res.memo.probe_wavelength_nm = kLegitWavelengthNm;
      res.memo.probe_delay_ns = s.probe_delay_ns;
      res.pulse.photons.push_back(
          make_probe(kLegitWavelengthNm, s.probe_delay_ns, s.probe_state));
      break;
    case AttackKind::InvisiblePhoton:
      res.memo.n_probes = 1;
      res.memo.probe_wavelength_nm = s.probe_wavelength_nm;
      res.memo.probe_delay_ns = 0.0;
      res.pulse.photons.push_back(
          make_probe(s.probe_wavelength_nm, 0.0, s.probe_state));
      break;
    case AttackKind::BrightPulse:
      res.memo.n_probes = s.pulse_m;
      res.memo.probe_wavelength_nm = kLegitWavelengthNm;
      res.memo.probe_delay_ns = s.probe_delay_ns;
      for (int i = 0; i < s.pulse_m; ++i) {
        res.pulse.photons.push_back(
            make_probe(kLegitWavelengthNm, s.probe_delay_ns, s.probe_state));
      }
      break;
    case AttackKind::None:
      break;
  }
  return res;
}

BackwardResult eve_backward(const Pulse& p, const EveMemo& memo,
                            const EveStrategy& s, ChoiceSource& src) {
  BackwardResult res;
  res.to_bob = p;
  if (!memo.attacked || s.kind == AttackKind::None ||
      s.kind == AttackKind::InterceptResend) {
    return res;
  }

  // Separate the probes: photons matching the signature, taking at most
  // n_probes and preferring the latest matches (Eve appended her photons
  // after the legitimate one, and ordering survives the round trip).
  std::vector<std::size_t> matches;
  for (std::size_t i = 0; i < res.to_bob.photons.size(); ++i) {
    const Photon& ph = res.to_bob.photons[i];
    if (ph.wavelength_nm == memo.probe_wavelength_nm &&
        ph.delay_ns == memo.probe_delay_ns) {
      matches.push_back(i);
    }
  }
  const std::size_t take =
      std::min<std::size_t>(matches.size(), static_cast<std::size_t>(memo.n_probes));

  if (take == 0) {
    // Probe gone -- blocked by the filter or consumed in a check round.
    res.guess = static_cast<int>(src.choose({0.5, 0.5}));
    return res;
  }

  std::vector<Photon> probes;
  const std::size_t first_taken = matches.size() - take;
  for (std::size_t k = matches.size(); k-- > 0;) {
    if (k < first_taken) break;
    probes.push_back(res.to_bob.photons[matches[k]]);
    res.to_bob.photons.erase(res.to_bob.photons.begin() +
                             static_cast<std::ptrdiff_t>(matches[k]));
  }

  const Basis probe_basis = basis_of(memo.probe_state);
  const int bit = src.binary(measure_prob(probes.front().state, probe_basis, 0));
  res.guess = bit == bit_of(memo.probe_state) ? 0 : 1;
  res.informed = true;
  return res;
}

EveInfo eve_information_from_joint(const std::uint64_t joint[2][2]) {
  EveInfo info;
  const std::uint64_t n =
      joint[0][0] + joint[0][1] + joint[1][0] + joint[1][1];
  info.n_pairs = n;
  info.low_confidence = n < 100;
  if (n == 0) return info;

  const double total = static_cast<double>(n);
  const double pa[2] = {static_cast<double>(joint[0][0] + joint[0][1]) / total,
                        static_cast<double>(joint[1][0] + joint[1][1]) / total};
  const double pe[2] = {static_cast<double>(joint[0][0] + joint[1][0]) / total,
                        static_cast<double>(joint[0][1] + joint[1][1]) / total};
  double mi = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int e = 0; e < 2; ++e) {
      if (joint[a][e] == 0) continue;
      const double pae = static_cast<double>(joint[a][e]) / total;
      mi += pae * std::log2(pae / (pa[a] * pe[e]));
    }
  }
  info.bits = mi < 0.0 ? 0.0 : mi;
  info.accuracy =
      static_cast<double>(joint[0][0] + joint[1][1]) / total;
  return info;
}

EveInfo eve_information(std::span<const RoundRecord> records) {
  std::uint64_t joint[2][2] = {{0, 0}, {0, 0}};
  for (const RoundRecord& rec : records) {
    if (!rec.eve_attacked || rec.mode != Mode::Code) continue;
    if (!rec.alice_op || !rec.eve_guess) continue;
    joint[key_bit(*rec.alice_op)][*rec.eve_guess] += 1;
  }
  return eve_information_from_joint(joint);
}

}  // namespace twqkd
