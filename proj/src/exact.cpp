#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "twqkd/engine.hpp"

namespace twqkd {

namespace {

// Replays the round pipeline along a prescribed branch path, recording the
// weight vector of every decision it passes. When the path runs out, the
// first positive-weight option is taken and appended, which makes the outer
// loop a depth-first walk of the whole branch tree.
class ScriptedSource final : public ChoiceSource {
 public:
  explicit ScriptedSource(std::vector<std::size_t>& path) : path_(path) {}

  using ChoiceSource::choose;
  std::size_t choose(std::span<const double> weights) override {
    std::size_t pick;
    if (cursor_ < path_.size()) {
      pick = path_[cursor_];
    } else {
      pick = 0;
      while (pick < weights.size() && weights[pick] <= 0.0) ++pick;
      path_.push_back(pick);
    }
    trace_.emplace_back(weights.begin(), weights.end());
    ++cursor_;
    return pick;
  }

  const std::vector<std::vector<double>>& trace() const { return trace_; }

 private:
  std::vector<std::size_t>& path_;
  std::size_t cursor_ = 0;
  std::vector<std::vector<double>> trace_;
};

struct Accumulator {
  double total = 0.0;
  double check_mode = 0.0;
  double coding = 0.0;
  double detection = 0.0;
  double check_and_flag = 0.0;
  double check_by_prep[4] = {0.0, 0.0, 0.0, 0.0};
  double check_flag_by_prep[4] = {0.0, 0.0, 0.0, 0.0};
  double compared = 0.0;
  double compared_error = 0.0;
  double key_round = 0.0;
  double key_error = 0.0;
  double coding_lost = 0.0;
  double eve_pair = 0.0;
  double eve_correct = 0.0;
  double eve_joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double attacked_checked = 0.0;
  double attacked_checked_flagged = 0.0;

  void add(const RoundRecord& rec, const RoundClass& c, double w) {
    total += w;
    if (c.check_mode) {
      check_mode += w;
      const int prep = static_cast<int>(rec.prep);
      check_by_prep[prep] += w;
      if (rec.multiphoton_flag) {
        check_and_flag += w;
        check_flag_by_prep[prep] += w;
      }
    }
    if (c.coding) coding += w;
    if (c.flagged) detection += w;
    if (c.compared) {
      compared += w;
      if (c.check_error) compared_error += w;
    }
    if (c.has_key_pair) {
      key_round += w;
      if (c.key_error) key_error += w;
    }
    if (c.coding_lost) coding_lost += w;
    if (c.eve_pair) {
      eve_pair += w;
      eve_joint[c.eve_op_bit][c.eve_guess] += w;
      if (c.eve_op_bit == c.eve_guess) eve_correct += w;
    }
    if (c.attacked_checked) attacked_checked += w;
    if (c.attacked_checked_flagged) attacked_checked_flagged += w;
  }
};

const char* prep_key_suffix(int prep) {
  switch (static_cast<StateLabel>(prep)) {
    case StateLabel::PlusZ:
      return "plus_z";
    case StateLabel::MinusZ:
      return "minus_z";
    case StateLabel::PlusX:
      return "plus_x";
    case StateLabel::MinusX:
      return "minus_x";
  }
  return "?";
}

double exact_mutual_information(const double joint[2][2], double mass) {
  if (mass <= 0.0) return 0.0;
  double p[2][2];
  for (int a = 0; a < 2; ++a)
    for (int e = 0; e < 2; ++e) p[a][e] = joint[a][e] / mass;
  const double pa[2] = {p[0][0] + p[0][1], p[1][0] + p[1][1]};
  const double pe[2] = {p[0][0] + p[1][0], p[0][1] + p[1][1]};
  double mi = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int e = 0; e < 2; ++e) {
      if (p[a][e] <= 0.0) continue;
      mi += p[a][e] * std::log2(p[a][e] / (pa[a] * pe[e]));
    }
  }
  return mi < 0.0 ? 0.0 : mi;
}

}  // namespace

std::map<std::string, double> exact_enumerate(const ExactScenario& sc) {
  SimConfig cfg = sc.config;
  cfg.rounds = 1;
  validate_config(cfg);

  Accumulator acc;
  std::vector<std::size_t> path;
  std::uint64_t leaves = 0;

  while (true) {
    ScriptedSource src(path);
    const RoundRecord rec = run_round_with_source(cfg, 0, src);
    const auto& trace = src.trace();

    double weight = 1.0;
    for (std::size_t k = 0; k < trace.size(); ++k) weight *= trace[k][path[k]];
    acc.add(rec, classify_round(rec, cfg), weight);

    if (++leaves > sc.max_leaves) {
      throw std::invalid_argument(
          "exact_enumerate: branch space exceeds max_leaves=" +
          std::to_string(sc.max_leaves));
    }

    // Advance depth-first: bump the deepest decision that still has an
    // untaken positive-weight option.
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(trace.size()) - 1;
    for (; k >= 0; --k) {
      std::size_t j = path[static_cast<std::size_t>(k)] + 1;
      const std::vector<double>& w = trace[static_cast<std::size_t>(k)];
      while (j < w.size() && w[j] <= 0.0) ++j;
      if (j < w.size()) {
        path.resize(static_cast<std::size_t>(k) + 1);
        path[static_cast<std::size_t>(k)] = j;
        break;
      }
    }
    if (k < 0) break;
  }

  std::map<std::string, double> out;
  out["leaves"] = static_cast<double>(leaves);
  out["p_total"] = acc.total;
  out["p_check_mode"] = acc.check_mode;
  out["p_coding"] = acc.coding;
  out["p_detection"] = acc.detection;
  out["p_check_compared"] = acc.compared;
  out["p_key_round"] = acc.key_round;
  out["p_eve_pair"] = acc.eve_pair;
  out["p_attacked_checked"] = acc.attacked_checked;

  if (acc.check_mode > 0.0) {
    out["p_flag_given_check"] = acc.check_and_flag / acc.check_mode;
    for (int prep = 0; prep < 4; ++prep) {
      if (acc.check_by_prep[prep] > 0.0) {
        out[std::string("p_flag_given_check_prep_") + prep_key_suffix(prep)] =
            acc.check_flag_by_prep[prep] / acc.check_by_prep[prep];
      }
    }
  }
  if (acc.compared > 0.0) {
    out["p_check_error_given_compared"] = acc.compared_error / acc.compared;
  }
  if (acc.key_round > 0.0) {
    out["p_key_error_given_key"] = acc.key_error / acc.key_round;
  }
  if (acc.coding > 0.0) {
    out["p_loss_given_coding"] = acc.coding_lost / acc.coding;
  }
  if (acc.eve_pair > 0.0) {
    out["p_eve_correct_given_pair"] = acc.eve_correct / acc.eve_pair;
    for (int a = 0; a < 2; ++a) {
      for (int e = 0; e < 2; ++e) {
        out["p_eve_joint_" + std::to_string(a) + std::to_string(e)] =
            acc.eve_joint[a][e] / acc.eve_pair;
      }
    }
    out["eve_information_bits"] =
        exact_mutual_information(acc.eve_joint, acc.eve_pair);
  }
  if (acc.attacked_checked > 0.0) {
    out["p_flag_given_attacked_checked"] =
        acc.attacked_checked_flagged / acc.attacked_checked;
  }
  return out;
}

}  // namespace twqkd
