#pragma once

#include "abt/dispersive.hpp"

namespace abt {

struct ProjectionResult {
  Spin outcome;
  double probability;
  FieldVector post_field;  // renormalized block
};

ProjectionResult project_spin(const SpinFieldVector& state, Spin outcome);

// (1/sqrt2)(|-a><-a| - |a><a| + |a><-a| + |-a><a|) on the truncated space.
// Hadamard-type on span{|a>,|-a>}, zero on the complement. Not exactly unitary at
// finite overlap; see gate_unitarity_deviation.
struct HadamardCatGate {
  Mat matrix;
  double overlap;         // <a|-a> = e^{-2|alpha|^2}
  bool quasi_orthogonal;  // overlap <= 1e-3
};

HadamardCatGate hadamard_cat_gate(Complex alpha, const FockSpace& space);

// Operator-norm distance of U^dagger U from the projector onto span{|a>,|-a>}.
double gate_unitarity_deviation(const HadamardCatGate& gate, Complex alpha,
                                const FockSpace& space);

// Normalized |-a> + e^{i phi}|a> (measured down) or e^{i phi}|-a> + |a> (measured up).
FieldVector transferred_cat(const ABPhase& phase, Spin measured, Complex alpha,
                            const FockSpace& space);

// Interaction-time defaults: beta*t = pi/2 for transfer, beta*t = pi for the pattern.
double transfer_time(const DispersiveModel& model);
double pattern_time(const DispersiveModel& model);

// sin^2(phi/2)/(1 + sin phi), taken verbatim; diverges at phi = 3*pi/2 (mod 2*pi).
double closed_form_projection_pattern(const ABPhase& phase);

// Independent oracle: run the pipeline, project, return |<alpha|post_field>|^2.
double numeric_projection_probability(const ABPhase& phase, Complex alpha,
                                      const DispersiveModel& model, double t, Spin outcome);

}  // namespace abt
