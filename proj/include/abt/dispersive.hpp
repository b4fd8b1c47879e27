#pragma once

#include <utility>

#include "abt/hilbert.hpp"

namespace abt {

// phi_AB = 2*pi*(flux / flux quantum). Stored unreduced; reduce only at comparison sites.
class ABPhase {
 public:
  explicit ABPhase(double radians) : radians_(radians) {}
  static ABPhase from_flux_ratio(double ratio) { return ABPhase(2.0 * kPi * ratio); }

  double radians() const { return radians_; }
  double reduced() const;  // representative in [0, 2*pi)
  Complex unit() const;    // e^{i phi}

 private:
  double radians_;
};

enum class Spin { Down = 0, Up = 1 };

// H = beta * (n ⊗ xi) with xi the all-ones 2x2 spin matrix (eigenvalues 0 and 2).
struct DispersiveModel {
  double beta;
  FockSpace space;

  DispersiveModel(double beta_, FockSpace space_);
};

// Composite vector ordered as (spin-down block, spin-up block).
struct SpinFieldVector {
  Vec amplitudes;

  int field_dim() const { return static_cast<int>(amplitudes.size()) / 2; }
  Vec block(Spin s) const;
  double norm() const { return amplitudes.norm(); }
  SpinFieldVector normalized() const;
};

SpinFieldVector spin_field(Spin s, const FieldVector& field);
SpinFieldVector spin_field(Complex down_amp, Complex up_amp, const FieldVector& field);

// (down, up) amplitudes (1, e^{i phi})/sqrt(2) of the injected spin state.
std::pair<Complex, Complex> ingoing_spin_state(const ABPhase& phase);

Mat interaction_hamiltonian(const DispersiveModel& model);

// e^{-iHt} via spectral decomposition of the (Hermitian) Hamiltonian.
SpinFieldVector evolve_numeric(const SpinFieldVector& state, const DispersiveModel& model,
                               double t);

// Closed form: e^{-iHt}|s alpha> = (|a'> ± |a>)/2 per spin block, a' = e^{-2i beta t} alpha.
SpinFieldVector evolve_analytic(Spin spin, Complex alpha, const DispersiveModel& model, double t);

// Evolved ingoing_spin_state ⊗ |alpha>, exactly normalized.
SpinFieldVector joint_state(const ABPhase& phase, Complex alpha, const DispersiveModel& model,
                            double t);

// Quarter-weight coefficient structure of the evolved joint state before normalization:
// per spin block, the weight on the rotated branch |a'> and on the residual |a> branch.
// The down block carries +(1-e^{i phi})/4 on |a>, the up block -(1-e^{i phi})/4.
struct JointCoefficients {
  Complex down_aprime, down_a;
  Complex up_aprime, up_a;
};
JointCoefficients joint_coefficients(const ABPhase& phase);

// <a'|a> = exp[(e^{2i beta t} - 1)|alpha|^2] with a' = e^{-2i beta t} alpha.
Complex analytic_overlap(Complex alpha, const DispersiveModel& model, double t);

double fidelity(const SpinFieldVector& u, const SpinFieldVector& v);

}  // namespace abt
