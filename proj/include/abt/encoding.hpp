#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abt/dispersive.hpp"

namespace abt {

// Fluxes below this angle (radians) count as "no AB phase" for the bit map.
inline constexpr double kPhaseThreshold = 1e-9;

using PhaseEntry = std::optional<ABPhase>;

struct PhaseSequence {
  std::vector<PhaseEntry> phases;

  std::size_t size() const { return phases.size(); }
};

int bit_of_phase(const PhaseEntry& entry);

PhaseSequence encode_string(std::string_view bits, const ABPhase& default_phase);
std::string decode_sequence(const PhaseSequence& seq);

enum class RegisterBasis { Abstract, Cat };

// Product of per-slot qubits (|0_L> + e^{i phi_k}|1_L>)/sqrt(2); the logical pair is
// {|0>,|1>} (abstract) or {|-alpha>,|alpha>} (cat).
struct EncodedRegister {
  std::vector<double> slot_phases;
  RegisterBasis basis = RegisterBasis::Abstract;
  Complex alpha = 0.0;

  int slots() const { return static_cast<int>(slot_phases.size()); }
};

EncodedRegister build_register(const PhaseSequence& seq, RegisterBasis basis,
                               Complex alpha = 0.0);

// Every slot phase advances by omega*t; the identity map at t = 2*m*pi/omega.
EncodedRegister storage_evolve(const EncodedRegister& reg, double omega, double t);

// Product over slots of |<slot_a|slot_b>| in the orthonormal logical convention.
double register_fidelity(const EncodedRegister& a, const EncodedRegister& b);

// Fock embedding of slot k in the cat basis: (|-alpha> + e^{i phi_k}|alpha>)/sqrt(2).
// Unnormalized; its norm carries the coherent-overlap correction.
FieldVector embed_slot(const EncodedRegister& reg, int k, const FockSpace& space);

struct QuditState {
  std::vector<Complex> coefficients;
  std::vector<EncodedRegister> registers;
};

QuditState qudit_superpose(std::vector<Complex> coefficients,
                           std::vector<EncodedRegister> registers);

// Storage evolution descriptor applied branch-wise by qudit_apply.
struct StorageUnitary {
  double omega;
  double t;
};

QuditState qudit_apply(const StorageUnitary& op, const QuditState& q);

// Branch labels are treated as formally orthogonal; within a branch pair the
// register overlap is the product of per-slot logical overlaps.
double qudit_fidelity(const QuditState& a, const QuditState& b);

}  // namespace abt
