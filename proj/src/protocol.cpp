#include "twqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twqkd {

namespace {

// Pre-defense checking mode: one random basis, and a gated detector that
// only sees the earliest in-window photon. No multiphoton resolution here;
// that blindness is exactly what the Trojan attacks exploit.
CheckResult single_basis_check(const Pulse& p, const DetectorSpec& d,
                               ChoiceSource& src) {
  const Basis basis = src.choose({0.5, 0.5}) == 0 ? Basis::Z : Basis::X;
  CheckResult res;

  std::vector<std::size_t> order(p.photons.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return p.photons[a].delay_ns < p.photons[b].delay_ns;
                   });
  for (std::size_t i : order) {
    const Photon& ph = p.photons[i];
    if (ph.delay_ns > d.time_window_ns) continue;
    if (!src.bernoulli(d.efficiency)) continue;
    const int bit = src.binary(measure_prob(ph.state, basis, 0));
    res.clicks.push_back({basis, bit, ph.delay_ns});
    res.sample = Sample{basis, bit};
    break;
  }
  return res;
}

}  // namespace

PrepResult bob_prepare(ChoiceSource& src) {
  const std::size_t pick = src.choose({0.25, 0.25, 0.25, 0.25});
  const StateLabel label = static_cast<StateLabel>(pick);
  PrepResult res;
  res.prep.label = label;
  res.pulse.photons.push_back(Photon{kSourceWavelengthNm, 0.0, ket(label)});
  return res;
}

AliceAction alice_stage(const Pulse& incoming, const SimConfig& cfg,
                        ChoiceSource& src) {
  AliceAction act;
  const bool check = src.bernoulli(cfg.check_fraction);

  Pulse work = incoming;
  if (cfg.filter_on) {
    FilterOutcome f = filter_pulse(work, cfg.filter, src);
    work = std::move(f.passed);
    act.blocked_count = f.blocked_count;
  }

  if (check) {
    act.mode = Mode::Check;
    act.check = cfg.splitter_on ? check_station(work, cfg.detector, src)
                                : single_basis_check(work, cfg.detector, src);
  } else {
    act.mode = Mode::Code;
    const OpLabel op =
        src.choose({0.5, 0.5}) == 0 ? OpLabel::I : OpLabel::U;
    act.op = op;
    for (Photon& ph : work.photons) ph.state = apply(op, ph.state);
    act.outgoing = std::move(work);
  }
  return act;
}

DetectOutcome bob_final_measure(const Pulse& returning, const Preparation& prep,
                                const DetectorSpec& det, ChoiceSource& src) {
  return detect_single(returning, basis_of(prep.label), det, src);
}

RoundRecord run_round_with_source(const SimConfig& cfg, std::uint64_t index,
                                  ChoiceSource& src) {
  RoundRecord rec;
  rec.index = index;

  PrepResult prep = bob_prepare(src);
  rec.prep = prep.prep.label;

  ForwardResult fwd = eve_forward(prep.pulse, cfg.eve, src);
  rec.eve_attacked = fwd.memo.attacked;

  AliceAction act = alice_stage(fwd.pulse, cfg, src);
  rec.mode = act.mode;
  rec.blocked_count = act.blocked_count;

  if (act.mode == Mode::Check) {
    rec.multiphoton_flag = act.check.multiphoton_flag;
    rec.check_sample = act.check.sample;
    // Nothing travels back; Eve finds her probe gone and guesses blind.
    BackwardResult back = eve_backward(Pulse{}, fwd.memo, cfg.eve, src);
    rec.eve_guess = back.guess;
  } else {
    rec.alice_op = act.op;
    BackwardResult back = eve_backward(act.outgoing, fwd.memo, cfg.eve, src);
    rec.eve_guess = back.guess;
    const DetectOutcome det =
        bob_final_measure(back.to_bob, prep.prep, cfg.detector, src);
    rec.bob_outcome = det.outcome;
    rec.bob_anomaly_flag = det.anomaly_flag;
  }
  return rec;
}

RoundRecord run_round(const SimConfig& cfg, std::uint64_t index,
                      std::uint64_t round_seed) {
  SplitMix64 rng(round_seed);
  SampledSource src(rng);
  return run_round_with_source(cfg, index, src);
}

RoundClass classify_round(const RoundRecord& rec, const SimConfig& cfg) {
  RoundClass c;
  c.check_mode = rec.mode == Mode::Check;
  c.flagged = rec.multiphoton_flag || rec.bob_anomaly_flag;
  c.coding = rec.mode == Mode::Code;
  c.coding_lost = c.coding && !rec.bob_outcome;

  if (c.check_mode && rec.check_sample &&
      rec.check_sample->basis == basis_of(rec.prep)) {
    c.compared = true;
    c.check_error = rec.check_sample->bit != bit_of(rec.prep);
  }

  if (c.coding && rec.bob_outcome && rec.alice_op) {
    c.has_key_pair = true;
    c.alice_bit = static_cast<std::uint8_t>(key_bit(*rec.alice_op));
    c.bob_bit = *rec.bob_outcome == bit_of(rec.prep) ? 0 : 1;
    c.key_error = c.alice_bit != c.bob_bit;
  }

  if (rec.eve_attacked && c.coding && rec.alice_op && rec.eve_guess) {
    c.eve_pair = true;
    c.eve_op_bit = static_cast<std::uint8_t>(key_bit(*rec.alice_op));
    c.eve_guess = static_cast<std::uint8_t>(*rec.eve_guess);
  }

  c.attacked_checked = rec.eve_attacked && c.check_mode && cfg.splitter_on;
  c.attacked_checked_flagged = c.attacked_checked && rec.multiphoton_flag;
  return c;
}

SiftResult sift(std::span<const RoundRecord> records) {
  SiftResult out;
  for (const RoundRecord& rec : records) {
    if (rec.mode == Mode::Code) {
      if (rec.bob_outcome && rec.alice_op) {
        out.alice_bits.push_back(
            static_cast<std::uint8_t>(key_bit(*rec.alice_op)));
        out.bob_bits.push_back(*rec.bob_outcome == bit_of(rec.prep) ? 0 : 1);
      }
    } else if (rec.check_sample &&
               rec.check_sample->basis == basis_of(rec.prep)) {
      out.check_samples.push_back(
          CheckSample{bit_of(rec.prep), rec.check_sample->bit});
    }
  }
  return out;
}

QberReport estimate_qber(std::span<const RoundRecord> records,
                         double sample_fraction, SplitMix64& rng) {
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw ConfigError("sample_fraction", "must be within (0, 1]");
  }

  QberReport rep;
  // Placeholder config: only splitter_on matters to classify_round and only
  // for the attacked-checked tallies, which this report does not carry.
  SimConfig dummy;
  for (const RoundRecord& rec : records) {
    const RoundClass c = classify_round(rec, dummy);
    ++rep.n_rounds;
    if (c.flagged) ++rep.n_flagged;
    if (c.coding) ++rep.n_coding;
    if (c.coding_lost) ++rep.n_coding_lost;
    if (c.compared) {
      ++rep.n_check_compared;
      if (c.check_error) ++rep.n_check_errors;
    }
  }

  const SiftResult sifted = sift(records);
  const std::uint64_t key_len = sifted.alice_bits.size();
  const std::uint64_t n_sample = static_cast<std::uint64_t>(
      std::llround(sample_fraction * static_cast<double>(key_len)));
  const std::uint64_t k = std::min(n_sample, key_len);

  // Partial Fisher-Yates draw of k distinct positions.
  std::vector<std::uint64_t> idx(key_len);
  std::iota(idx.begin(), idx.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + rng.below(key_len - i);
    std::swap(idx[i], idx[j]);
  }
  rep.n_key_sampled = k;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (sifted.alice_bits[idx[i]] != sifted.bob_bits[idx[i]]) {
      ++rep.n_key_errors;
    }
  }

  if (rep.n_check_compared > 0) {
    rep.qber_check = static_cast<double>(rep.n_check_errors) /
                     static_cast<double>(rep.n_check_compared);
  }
  if (rep.n_key_sampled > 0) {
    rep.qber_key = static_cast<double>(rep.n_key_errors) /
                   static_cast<double>(rep.n_key_sampled);
  }
  rep.detection_rate = rep.n_rounds == 0
                           ? 0.0
                           : static_cast<double>(rep.n_flagged) /
                                 static_cast<double>(rep.n_rounds);
  rep.loss_rate = rep.n_coding == 0
                      ? 0.0
                      : static_cast<double>(rep.n_coding_lost) /
                            static_cast<double>(rep.n_coding);
  return rep;
}

}  // namespace twqkd
