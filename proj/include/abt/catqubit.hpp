#pragma once

#include <utility>

#include "abt/dispersive.hpp"

namespace abt {

// Mixing-angle form of the measured cat qubit. theta_pm solves
// tan(theta) = ±(1 - e^{i phi})/(1 + e^{i phi}) and is genuinely complex for
// generic phi; it is reported as evaluated, with no realness assumption.
struct CatCoefficients {
  Complex theta_plus;
  Complex theta_minus;
  Complex c_alpha_prime;  // cos(phi/2), shared by both branches
  Complex c_alpha;        // +i sin(phi/2) on the + branch; the - branch negates it

  // Residual of the half-angle factorizations
  //   1 + e^{i phi} = 2 e^{i phi/2} cos(phi/2)
  //   1 - e^{i phi} = 2 e^{i phi/2} (-i) sin(phi/2)
  // evaluated at the construction phase (max of the two branch residuals).
  double factorization_residual;
};

CatCoefficients one_qubit_coefficients(const ABPhase& phase);

// Coefficients on the ordered logical basis (|-a>|dn>, |a>|dn>, |-a>|up>, |a>|up>).
// The logical pair is treated as orthonormal; the Gram matrix is carried for
// embedding-level corrections.
struct TwoQubitState {
  Complex a, b, c, d;
  Complex alpha;
  Eigen::Matrix2cd gram;

  double coeff_norm2() const;
  Eigen::Vector4cd coeffs() const;
};

TwoQubitState two_qubit_state(const ABPhase& phase, Complex alpha);

// Logical action |-a> -> -a|-a>, |a> -> a|a>; unnormalized output of radius |alpha|.
TwoQubitState apply_annihilation(const TwoQubitState& s);

// Spin bit-flip: swaps the down/up blocks, (a,b,c,d) -> (c,d,a,b). Involution.
TwoQubitState apply_bitflip(const TwoQubitState& s);

enum class ParityPrefactor {
  Inverse,   // 1/alpha: eigenvalue -1 on two_qubit_state outputs
  Conjugate, // |alpha|^2/alpha = conj(alpha): eigenvalue -|alpha|^2
};

// bitflip ∘ annihilation ∘ prefactor; returns the image and the scalar ratio
// image/input. Throws if the input is not an eigenvector of the composite map.
std::pair<TwoQubitState, Complex> parity_apply(
    const TwoQubitState& s, ParityPrefactor prefactor = ParityPrefactor::Inverse);

// Lift to the truncated composite space for matrix-level cross-checks.
SpinFieldVector embed(const TwoQubitState& s, const FockSpace& space);

}  // namespace abt
