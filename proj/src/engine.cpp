#include "twqkd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace twqkd {

std::vector<RoundRecord> simulate_rounds(const SimConfig& cfg,
                                         unsigned threads) {
  validate_config(cfg);
  std::vector<RoundRecord> records(cfg.rounds);

  const auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      records[i] = run_round(cfg, i, derive_round_seed(cfg.master_seed, i));
    }
  };

  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || cfg.rounds < 2 * threads) {
    worker(0, cfg.rounds);
    return records;
  }

  std::vector<std::thread> pool;
  const std::uint64_t chunk = (cfg.rounds + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
    if (begin >= cfg.rounds) break;
    const std::uint64_t end = std::min(begin + chunk, cfg.rounds);
    pool.emplace_back(worker, begin, end);
  }
  for (std::thread& th : pool) th.join();
  return records;
}

PartialStats tally_rounds(std::span<const RoundRecord> records,
                          std::uint64_t begin, const SimConfig& cfg) {
  StatsSegment seg;
  seg.begin = begin;
  seg.end = begin + records.size();
  for (const RoundRecord& rec : records) {
    const RoundClass c = classify_round(rec, cfg);
    ++seg.n_rounds;
    if (c.check_mode) ++seg.n_check;
    if (c.flagged) ++seg.n_flagged;
    if (c.coding) ++seg.n_coding;
    if (c.coding_lost) ++seg.n_coding_lost;
    if (c.compared) {
      ++seg.n_check_compared;
      if (c.check_error) ++seg.n_check_errors;
    }
    if (c.attacked_checked) ++seg.n_attacked_checked;
    if (c.attacked_checked_flagged) ++seg.n_attacked_checked_flagged;
    if (c.eve_pair) ++seg.eve_joint[c.eve_op_bit][c.eve_guess];
    if (c.has_key_pair) {
      seg.key_alice.push_back(c.alice_bit);
      seg.key_bob.push_back(c.bob_bit);
    }
  }
  PartialStats out;
  if (seg.n_rounds > 0) out.segments.push_back(std::move(seg));
  return out;
}

namespace {
void add_counts(StatsSegment& into, const StatsSegment& from) {
  into.n_rounds += from.n_rounds;
  into.n_check += from.n_check;
  into.n_flagged += from.n_flagged;
  into.n_coding += from.n_coding;
  into.n_coding_lost += from.n_coding_lost;
  into.n_check_compared += from.n_check_compared;
  into.n_check_errors += from.n_check_errors;
  into.n_attacked_checked += from.n_attacked_checked;
  into.n_attacked_checked_flagged += from.n_attacked_checked_flagged;
  for (int a = 0; a < 2; ++a)
    for (int e = 0; e < 2; ++e) into.eve_joint[a][e] += from.eve_joint[a][e];
  into.key_alice.insert(into.key_alice.end(), from.key_alice.begin(),
                        from.key_alice.end());
  into.key_bob.insert(into.key_bob.end(), from.key_bob.begin(),
                      from.key_bob.end());
}
}  // namespace

PartialStats merge_stats(const PartialStats& a, const PartialStats& b) {
  std::vector<StatsSegment> all;
  all.reserve(a.segments.size() + b.segments.size());
  all.insert(all.end(), a.segments.begin(), a.segments.end());
  all.insert(all.end(), b.segments.begin(), b.segments.end());
  std::sort(all.begin(), all.end(),
            [](const StatsSegment& x, const StatsSegment& y) {
              return x.begin < y.begin;
            });

  PartialStats out;
  for (StatsSegment& seg : all) {
    if (!out.segments.empty()) {
      StatsSegment& prev = out.segments.back();
      if (seg.begin < prev.end) {
        throw std::invalid_argument(
            "merge_stats: overlapping round ranges [" +
            std::to_string(prev.begin) + ", " + std::to_string(prev.end) +
            ") and [" + std::to_string(seg.begin) + ", " +
            std::to_string(seg.end) + ")");
      }
      if (seg.begin == prev.end) {  // adjacent ranges coalesce
        prev.end = seg.end;
        add_counts(prev, seg);
        continue;
      }
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

Report run_simulation(const SimConfig& cfg, unsigned threads) {
  const std::vector<RoundRecord> records = simulate_rounds(cfg, threads);

  // All reductions below are serial and order-deterministic, so the report
  // does not depend on how the rounds were executed.
  SplitMix64 sample_rng(derive_round_seed(cfg.master_seed, cfg.rounds));
  const QberReport qber = estimate_qber(records, cfg.sample_fraction, sample_rng);
  const SiftResult sifted = sift(records);
  const EveInfo eve = eve_information(records);

  std::uint64_t attacked_checked = 0;
  std::uint64_t attacked_checked_flagged = 0;
  for (const RoundRecord& rec : records) {
    const RoundClass c = classify_round(rec, cfg);
    if (c.attacked_checked) ++attacked_checked;
    if (c.attacked_checked_flagged) ++attacked_checked_flagged;
  }

  Report rep;
  rep.qber_check = qber.qber_check;
  rep.qber_key = qber.qber_key;
  rep.detection_rate = qber.detection_rate;
  rep.loss_rate = qber.loss_rate;
  rep.n_check_compared = qber.n_check_compared;
  rep.n_key_sampled = qber.n_key_sampled;
  rep.sifted_key_length = sifted.alice_bits.size();
  rep.usable_key_length = rep.sifted_key_length - qber.n_key_sampled;
  rep.eve_information_bits = eve.bits;
  rep.eve_information_low_confidence = eve.low_confidence;
  rep.eve_guess_accuracy = eve.accuracy;
  rep.eve_guess_rounds = eve.n_pairs;
  rep.n_attacked_checked = attacked_checked;
  rep.n_attacked_checked_flagged = attacked_checked_flagged;
  if (attacked_checked > 0) {
    const double p_flag = static_cast<double>(attacked_checked_flagged) /
                          static_cast<double>(attacked_checked);
    rep.p_undetected =
        std::pow(1.0 - p_flag, static_cast<double>(attacked_checked));
  }
  rep.config = cfg;
  return rep;
}

}  // namespace twqkd
