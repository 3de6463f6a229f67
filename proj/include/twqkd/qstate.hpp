#pragma once

#include <complex>
#include <cstdint>

namespace twqkd {

enum class Basis : std::uint8_t { Z, X };
enum class StateLabel : std::uint8_t { PlusZ, MinusZ, PlusX, MinusX };
enum class OpLabel : std::uint8_t { I, U };

constexpr Basis basis_of(StateLabel s) {
  return (s == StateLabel::PlusZ || s == StateLabel::MinusZ) ? Basis::Z
                                                             : Basis::X;
}

// Plus states encode bit 0, Minus states bit 1.
constexpr int bit_of(StateLabel s) {
  return (s == StateLabel::PlusZ || s == StateLabel::PlusX) ? 0 : 1;
}

constexpr StateLabel label_for(Basis b, int bit) {
  if (b == Basis::Z) return bit == 0 ? StateLabel::PlusZ : StateLabel::MinusZ;
  return bit == 0 ? StateLabel::PlusX : StateLabel::MinusX;
}

/// Plus <-> Minus within the same basis.
constexpr StateLabel flip(StateLabel s) {
  return label_for(basis_of(s), 1 - bit_of(s));
}

// Key-bit convention for the coding operations: I encodes 0, U encodes 1.
constexpr int key_bit(OpLabel op) { return op == OpLabel::I ? 0 : 1; }

const char* to_string(Basis b);
const char* to_string(StateLabel s);
const char* to_string(OpLabel op);

// Pure single-photon polarization state amp0|0> + amp1|1>, normalized.
// Physically meaningful only up to a global phase.
struct Qubit {
  std::complex<double> amp0{1.0, 0.0};
  std::complex<double> amp1{0.0, 0.0};
};

bool is_normalized(const Qubit& q, double tol = 1e-12);

/// The four preparation states; |+x> and |-x> carry coefficient 1/sqrt(2).
Qubit ket(StateLabel label);

// I leaves the state alone. U = |0><1| - |1><0| swaps Plus and Minus in
// both bases, up to an unobservable sign.
Qubit apply(OpLabel op, const Qubit& q);

/// Born probability of reading `bit` when measuring q in basis b.
double measure_prob(const Qubit& q, Basis b, int bit);

struct MeasureOutcome {
  int bit;
  Qubit collapsed;
};

// Projective measurement driven by a single uniform draw r in [0,1):
// bit 0 wins iff r < measure_prob(q, b, 0). Deterministic given r; the
// collapsed state is the corresponding eigenstate of b.
MeasureOutcome measure(const Qubit& q, Basis b, double r);

/// True iff |<a|b>| = 1 within 1e-9. Both inputs must be normalized.
bool equal_up_to_global_phase(const Qubit& a, const Qubit& b);

}  // namespace twqkd
