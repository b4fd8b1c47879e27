#include "abt/dispersive.hpp"

#include <cmath>

namespace abt {

namespace {
const Complex kI(0.0, 1.0);
}

double ABPhase::reduced() const {
  double r = std::fmod(radians_, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

Complex ABPhase::unit() const { return std::exp(kI * radians_); }

DispersiveModel::DispersiveModel(double beta_, FockSpace space_)
    : beta(beta_), space(space_) {
  if (!(beta_ > 0.0)) {
    throw DomainError("dispersive coupling beta must be > 0, got " + std::to_string(beta_));
  }
}

Vec SpinFieldVector::block(Spin s) const {
  const int n = field_dim();
  return amplitudes.segment(s == Spin::Down ? 0 : n, n);
}

SpinFieldVector SpinFieldVector::normalized() const {
  const double n = norm();
  if (n <= 0.0) throw Error("cannot normalize a zero spin-field vector");
  return {amplitudes / n};
}

SpinFieldVector spin_field(Spin s, const FieldVector& field) {
  return spin_field(s == Spin::Down ? 1.0 : 0.0, s == Spin::Up ? 1.0 : 0.0, field);
}

SpinFieldVector spin_field(Complex down_amp, Complex up_amp, const FieldVector& field) {
  const int n = field.dim();
  Vec v(2 * n);
  v.segment(0, n) = down_amp * field.amplitudes;
  v.segment(n, n) = up_amp * field.amplitudes;
  return {v};
}

std::pair<Complex, Complex> ingoing_spin_state(const ABPhase& phase) {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s * phase.unit()};
}

Mat interaction_hamiltonian(const DispersiveModel& model) {
  const int n = model.space.cutoff();
  Mat h = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double e = model.beta * k;
    h(k, k) = e;
    h(k, n + k) = e;
    h(n + k, k) = e;
    h(n + k, n + k) = e;
  }
  return h;
}

SpinFieldVector evolve_numeric(const SpinFieldVector& state, const DispersiveModel& model,
                               double t) {
  if (!std::isfinite(t)) throw DomainError("evolve_numeric: non-finite time");
  if (state.field_dim() != model.space.cutoff()) {
    throw DimensionMismatch("evolve_numeric: state/model dimension mismatch");
  }
  const Mat h = interaction_hamiltonian(model);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw Error("evolve_numeric: eigendecomposition failed");
  const Vec phases =
      (-kI * t * es.eigenvalues().cast<Complex>().array()).exp().matrix();
  const Mat& u = es.eigenvectors();
  return {u * (phases.asDiagonal() * (u.adjoint() * state.amplitudes))};
}

SpinFieldVector evolve_analytic(Spin spin, Complex alpha, const DispersiveModel& model,
                                double t) {
  if (!std::isfinite(t)) throw DomainError("evolve_analytic: non-finite time");
  const Complex aprime = std::exp(-2.0 * kI * model.beta * t) * alpha;
  const FieldVector va = coherent_state(alpha, model.space);
  const FieldVector vp = coherent_state(aprime, model.space);
  const Vec sum = 0.5 * (vp.amplitudes + va.amplitudes);
  const Vec diff = 0.5 * (vp.amplitudes - va.amplitudes);
  const int n = model.space.cutoff();
  Vec out(2 * n);
  if (spin == Spin::Up) {
    out.segment(0, n) = diff;
    out.segment(n, n) = sum;
  } else {
    out.segment(0, n) = sum;
    out.segment(n, n) = diff;
  }
  return {out};
}

SpinFieldVector joint_state(const ABPhase& phase, Complex alpha, const DispersiveModel& model,
                            double t) {
  const auto [down_amp, up_amp] = ingoing_spin_state(phase);
  const SpinFieldVector down = evolve_analytic(Spin::Down, alpha, model, t);
  const SpinFieldVector up = evolve_analytic(Spin::Up, alpha, model, t);
  return SpinFieldVector{down_amp * down.amplitudes + up_amp * up.amplitudes}.normalized();
}

JointCoefficients joint_coefficients(const ABPhase& phase) {
  const Complex e = phase.unit();
  const Complex plus = 0.25 * (1.0 + e);
  const Complex minus = 0.25 * (1.0 - e);
  return {plus, minus, plus, -minus};
}

Complex analytic_overlap(Complex alpha, const DispersiveModel& model, double t) {
  return std::exp((std::exp(2.0 * kI * model.beta * t) - 1.0) * std::norm(alpha));
}

double fidelity(const SpinFieldVector& u, const SpinFieldVector& v) {
  if (u.amplitudes.size() != v.amplitudes.size()) {
    throw DimensionMismatch("spin-field fidelity dimension mismatch");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu <= 0.0 || nv <= 0.0) throw Error("fidelity of a zero vector");
  return std::abs(u.amplitudes.dot(v.amplitudes)) / (nu * nv);
}

}  // namespace abt
