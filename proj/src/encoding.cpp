#include "abt/encoding.hpp"

#include <cmath>
#include <utility>

namespace abt {

int bit_of_phase(const PhaseEntry& entry) {
  if (!entry.has_value()) return 0;
  const double r = entry->reduced();
  if (r <= kPhaseThreshold || r >= 2.0 * kPi - kPhaseThreshold) return 0;
  return 1;
}

PhaseSequence encode_string(std::string_view bits, const ABPhase& default_phase) {
  if (bit_of_phase(default_phase) != 1) {
    throw DomainError("default phase encodes bit 0 and cannot mark a 1");
  }
  PhaseSequence seq;
  seq.phases.reserve(bits.size());
  for (char c : bits) {
    switch (c) {
      case '0':
        seq.phases.emplace_back(std::nullopt);
        break;
      case '1':
        seq.phases.emplace_back(default_phase);
        break;
      default:
        throw DomainError("bit string may contain only '0' and '1'");
    }
  }
  return seq;
}

std::string decode_sequence(const PhaseSequence& seq) {
  std::string bits;
  bits.reserve(seq.phases.size());
  for (const auto& entry : seq.phases) {
    bits.push_back(bit_of_phase(entry) ? '1' : '0');
  }
  return bits;
}

EncodedRegister build_register(const PhaseSequence& seq, RegisterBasis basis,
                               Complex alpha) {
  if (basis == RegisterBasis::Cat && alpha == Complex(0.0)) {
    throw DomainError(
        "degenerate logical basis: alpha = 0 collapses |-alpha> and |alpha>");
  }
  EncodedRegister reg;
  reg.basis = basis;
  reg.alpha = alpha;
  reg.slot_phases.reserve(seq.phases.size());
  for (const auto& entry : seq.phases) {
    reg.slot_phases.push_back(entry.has_value() ? entry->reduced() : 0.0);
  }
  return reg;
}

EncodedRegister storage_evolve(const EncodedRegister& reg, double omega, double t) {
  if (omega == 0.0 && t != 0.0) {
    throw DomainError("degenerate period: omega = 0 defines no storage cycle");
  }
  EncodedRegister out = reg;
  for (double& phi : out.slot_phases) {
    phi = ABPhase{phi + omega * t}.reduced();
  }
  return out;
}

namespace {

// <slot_a|slot_b> for (|0_L> + e^{i phi}|1_L>)/sqrt(2) states in an orthonormal
// logical pair.
Complex slot_overlap(double phi_a, double phi_b) {
  return 0.5 * (1.0 + std::exp(Complex(0.0, phi_b - phi_a)));
}

}  // namespace

double register_fidelity(const EncodedRegister& a, const EncodedRegister& b) {
  if (a.slots() != b.slots()) {
    throw DimensionMismatch("registers hold different slot counts");
  }
  double f = 1.0;
  for (int k = 0; k < a.slots(); ++k) {
    f *= std::abs(slot_overlap(a.slot_phases[k], b.slot_phases[k]));
  }
  return f;
}

FieldVector embed_slot(const EncodedRegister& reg, int k, const FockSpace& space) {
  if (reg.basis != RegisterBasis::Cat) {
    throw DomainError("register is not in the cat basis");
  }
  if (k < 0 || k >= reg.slots()) {
    throw DimensionMismatch("slot index out of range");
  }
  const FieldVector minus = coherent_state(-reg.alpha, space);
  const FieldVector plus = coherent_state(reg.alpha, space);
  const Complex unit = std::exp(Complex(0.0, reg.slot_phases[k]));
  return FieldVector{(minus.amplitudes + unit * plus.amplitudes) / std::sqrt(2.0)};
}

QuditState qudit_superpose(std::vector<Complex> coefficients,
                           std::vector<EncodedRegister> registers) {
  if (coefficients.size() != registers.size()) {
    throw DimensionMismatch("one coefficient per register branch is required");
  }
  if (coefficients.empty()) {
    throw DomainError("qudit state needs at least one branch");
  }
  for (std::size_t k = 1; k < registers.size(); ++k) {
    if (registers[k].slots() != registers[0].slots() ||
        registers[k].basis != registers[0].basis) {
      throw DimensionMismatch("qudit branches need matching register shapes");
    }
  }
  double norm2 = 0.0;
  for (const Complex& c : coefficients) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-6) {
    throw DomainError("qudit coefficients must arrive normalized (within 1e-6)");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (Complex& c : coefficients) c *= scale;
  return QuditState{std::move(coefficients), std::move(registers)};
}

QuditState qudit_apply(const StorageUnitary& op, const QuditState& q) {
  QuditState out = q;
  for (EncodedRegister& reg : out.registers) {
    reg = storage_evolve(reg, op.omega, op.t);
  }
  return out;
}

double qudit_fidelity(const QuditState& a, const QuditState& b) {
  if (a.coefficients.size() != b.coefficients.size()) {
    throw DimensionMismatch("qudit states hold different branch counts");
  }
  Complex acc = 0.0;
  for (std::size_t k = 0; k < a.coefficients.size(); ++k) {
    const EncodedRegister& ra = a.registers[k];
    const EncodedRegister& rb = b.registers[k];
    if (ra.slots() != rb.slots()) {
      throw DimensionMismatch("registers hold different slot counts");
    }
    Complex branch = 1.0;
    for (int s = 0; s < ra.slots(); ++s) {
      branch *= slot_overlap(ra.slot_phases[s], rb.slot_phases[s]);
    }
    acc += std::conj(a.coefficients[k]) * b.coefficients[k] * branch;
  }
  return std::abs(acc);
}

}  // namespace abt
