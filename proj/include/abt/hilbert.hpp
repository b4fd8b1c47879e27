#pragma once

#include "abt/types.hpp"

namespace abt {

// Photon-number basis truncated to indices 0..cutoff-1.
class FockSpace {
 public:
  explicit FockSpace(int cutoff);

  int cutoff() const { return cutoff_; }

  // ceil(|alpha|^2 + 10|alpha| + 10): keeps the Poisson tail below 1e-12 for |alpha| <= 3.
  static int default_cutoff(Complex alpha);
  static FockSpace for_amplitude(Complex alpha);

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int cutoff_;
};

struct FieldVector {
  Vec amplitudes;

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  FieldVector normalized() const;
};

struct FieldOperator {
  Mat matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  FieldOperator adjoint() const { return {matrix.adjoint()}; }
};

// Poisson weight of the discarded levels n >= cutoff.
double coherent_tail_mass(Complex alpha, int cutoff);

// Smallest cutoff whose discarded tail mass is <= tail_tol.
int required_cutoff(Complex alpha, double tail_tol = 1e-12);

FieldVector coherent_state(Complex alpha, const FockSpace& space);
FieldVector fock_state(int n, const FockSpace& space);

// Conjugate-linear in the first argument.
Complex inner_product(const FieldVector& u, const FieldVector& v);

// |<u|v>| with both arguments normalized first; global phase drops out.
double fidelity(const FieldVector& u, const FieldVector& v);

FieldOperator number_operator(const FockSpace& space);
FieldOperator annihilation(const FockSpace& space);
FieldOperator creation(const FockSpace& space);

FieldVector operator*(const FieldOperator& op, const FieldVector& v);
FieldVector operator+(const FieldVector& u, const FieldVector& v);
FieldVector operator-(const FieldVector& u, const FieldVector& v);
FieldVector operator*(Complex scale, const FieldVector& v);

}  // namespace abt
