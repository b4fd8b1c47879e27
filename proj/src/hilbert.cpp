#include "abt/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace abt {

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 2) {
    throw Error("FockSpace cutoff must be >= 2, got " + std::to_string(cutoff));
  }
}

int FockSpace::default_cutoff(Complex alpha) {
  const double a = std::abs(alpha);
  return static_cast<int>(std::ceil(a * a + 10.0 * a + 10.0));
}

FockSpace FockSpace::for_amplitude(Complex alpha) {
  return FockSpace(default_cutoff(alpha));
}

FieldVector FieldVector::normalized() const {
  const double n = norm();
  if (n <= 0.0) throw Error("cannot normalize a zero field vector");
  return {amplitudes / n};
}

double coherent_tail_mass(Complex alpha, int cutoff) {
  // Head of the Poisson(|alpha|^2) distribution, accumulated in extended precision.
  const long double mu = static_cast<long double>(std::norm(alpha));
  long double term = std::exp(-mu);
  long double head = term;
  for (int n = 1; n < cutoff; ++n) {
    term *= mu / n;
    head += term;
  }
  const long double tail = 1.0L - head;
  return tail < 0.0L ? 0.0 : static_cast<double>(tail);
}

int required_cutoff(Complex alpha, double tail_tol) {
  const long double mu = static_cast<long double>(std::norm(alpha));
  long double term = std::exp(-mu);
  long double head = term;
  int n = 1;
  while (1.0L - head > static_cast<long double>(tail_tol) && n < 1000000) {
    term *= mu / n;
    head += term;
    ++n;
  }
  return std::max(n, 2);
}

FieldVector coherent_state(Complex alpha, const FockSpace& space) {
  const int dim = space.cutoff();
  const double tail = coherent_tail_mass(alpha, dim);
  if (tail > 1e-12) {
    const int needed = required_cutoff(alpha);
    throw TruncationError("truncation insufficient: cutoff " + std::to_string(dim) +
                              " leaves tail mass " + std::to_string(tail) +
                              "; required cutoff >= " + std::to_string(needed),
                          needed);
  }
  Vec c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) {
    c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  // The norm deficit is the tail mass, <= 1e-12 by the guard above.
  return FieldVector{c}.normalized();
}

FieldVector fock_state(int n, const FockSpace& space) {
  if (n < 0 || n >= space.cutoff()) {
    throw DimensionMismatch("fock_state index " + std::to_string(n) +
                            " outside cutoff " + std::to_string(space.cutoff()));
  }
  Vec c = Vec::Zero(space.cutoff());
  c(n) = 1.0;
  return {c};
}

Complex inner_product(const FieldVector& u, const FieldVector& v) {
  if (u.dim() != v.dim()) {
    throw DimensionMismatch("inner_product dimension mismatch: " + std::to_string(u.dim()) +
                            " vs " + std::to_string(v.dim()));
  }
  return u.amplitudes.dot(v.amplitudes);
}

double fidelity(const FieldVector& u, const FieldVector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu <= 0.0 || nv <= 0.0) throw Error("fidelity of a zero vector");
  return std::abs(inner_product(u, v)) / (nu * nv);
}

FieldOperator number_operator(const FockSpace& space) {
  const int dim = space.cutoff();
  Mat m = Mat::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return {m};
}

FieldOperator annihilation(const FockSpace& space) {
  const int dim = space.cutoff();
  Mat m = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {m};
}

FieldOperator creation(const FockSpace& space) {
  return annihilation(space).adjoint();
}

FieldVector operator*(const FieldOperator& op, const FieldVector& v) {
  if (op.dim() != v.dim()) {
    throw DimensionMismatch("operator/vector dimension mismatch");
  }
  return {op.matrix * v.amplitudes};
}

FieldVector operator+(const FieldVector& u, const FieldVector& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("field vector sum dimension mismatch");
  return {u.amplitudes + v.amplitudes};
}

FieldVector operator-(const FieldVector& u, const FieldVector& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch("field vector difference dimension mismatch");
  return {u.amplitudes - v.amplitudes};
}

FieldVector operator*(Complex scale, const FieldVector& v) {
  return {scale * v.amplitudes};
}

}  // namespace abt
