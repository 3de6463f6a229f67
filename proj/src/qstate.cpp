#include "twqkd/qstate.hpp"

#include <cmath>
#include <numbers>

namespace twqkd {

namespace {
// Correctly rounded 1/sqrt(2); deriving it as 1.0/sqrt2 would be off by
// two ulps and smear the protocol's {0, 1/2, 1} probabilities.
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

std::complex<double> eigen_overlap(const Qubit& q, Basis b, int bit) {
  if (b == Basis::Z) return bit == 0 ? q.amp0 : q.amp1;
  // <+x| = (<0| + <1|)/sqrt(2), <-x| = (<0| - <1|)/sqrt(2)
  return bit == 0 ? (q.amp0 + q.amp1) * kInvSqrt2
                  : (q.amp0 - q.amp1) * kInvSqrt2;
}
}  // namespace

const char* to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

const char* to_string(StateLabel s) {
  switch (s) {
    case StateLabel::PlusZ:
      return "+z";
    case StateLabel::MinusZ:
      return "-z";
    case StateLabel::PlusX:
      return "+x";
    case StateLabel::MinusX:
      return "-x";
  }
  return "?";
}

const char* to_string(OpLabel op) { return op == OpLabel::I ? "I" : "U"; }

bool is_normalized(const Qubit& q, double tol) {
  return std::abs(std::norm(q.amp0) + std::norm(q.amp1) - 1.0) <= tol;
}

Qubit ket(StateLabel label) {
  switch (label) {
    case StateLabel::PlusZ:
      return {{1.0, 0.0}, {0.0, 0.0}};
    case StateLabel::MinusZ:
      return {{0.0, 0.0}, {1.0, 0.0}};
    case StateLabel::PlusX:
      return {{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}};
    case StateLabel::MinusX:
      return {{kInvSqrt2, 0.0}, {-kInvSqrt2, 0.0}};
  }
  return {};
}

Qubit apply(OpLabel op, const Qubit& q) {
  if (op == OpLabel::I) return q;
  return {q.amp1, -q.amp0};
}

double measure_prob(const Qubit& q, Basis b, int bit) {
  const double p = std::norm(eigen_overlap(q, b, bit));
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

MeasureOutcome measure(const Qubit& q, Basis b, double r) {
  const int bit = r < measure_prob(q, b, 0) ? 0 : 1;
  return {bit, ket(label_for(b, bit))};
}

bool equal_up_to_global_phase(const Qubit& a, const Qubit& b) {
  const std::complex<double> inner =
      std::conj(a.amp0) * b.amp0 + std::conj(a.amp1) * b.amp1;
  return std::abs(std::abs(inner) - 1.0) <= 1e-9;
}

}  // namespace twqkd
