#include "abt/catqubit.hpp"

#include <cmath>

namespace abt {

namespace {
const Complex kI(0.0, 1.0);
}

CatCoefficients one_qubit_coefficients(const ABPhase& phase) {
  const double phi = phase.radians();
  const Complex e = phase.unit();
  const Complex denom = 1.0 + e;
  if (std::abs(denom) < 1e-9) {
    throw DomainError("mixing angle singular at phi_AB = pi (mod 2*pi)");
  }
  const Complex ratio = (1.0 - e) / denom;
  const Complex half = std::exp(kI * (0.5 * phi));
  const Complex cos_half = std::cos(0.5 * phi);
  const Complex sin_half = std::sin(0.5 * phi);
  const double res_plus = std::abs((1.0 + e) - 2.0 * half * cos_half);
  const double res_minus = std::abs((1.0 - e) - 2.0 * half * (-kI) * sin_half);
  return {std::atan(ratio), std::atan(-ratio), cos_half, kI * sin_half,
          std::max(res_plus, res_minus)};
}

double TwoQubitState::coeff_norm2() const {
  return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
}

Eigen::Vector4cd TwoQubitState::coeffs() const {
  Eigen::Vector4cd v;
  v << a, b, c, d;
  return v;
}

TwoQubitState two_qubit_state(const ABPhase& phase, Complex alpha) {
  const double half = 0.5 * phase.radians();
  const Complex scale = 2.0 * (1.0 / (2.0 * std::sqrt(2.0))) * std::exp(-kI * half);
  const Complex a = scale * std::cos(half);
  const Complex b = scale * kI * std::sin(half);
  Eigen::Matrix2cd gram;
  const double overlap = std::exp(-2.0 * std::norm(alpha));
  gram << 1.0, overlap, overlap, 1.0;
  return {a, b, a, -b, alpha, gram};
}

TwoQubitState apply_annihilation(const TwoQubitState& s) {
  if (s.alpha == 0.0) {
    throw DomainError("degenerate logical basis: annihilation requires alpha != 0");
  }
  return {-s.alpha * s.a, s.alpha * s.b, -s.alpha * s.c, s.alpha * s.d, s.alpha, s.gram};
}

TwoQubitState apply_bitflip(const TwoQubitState& s) {
  return {s.c, s.d, s.a, s.b, s.alpha, s.gram};
}

std::pair<TwoQubitState, Complex> parity_apply(const TwoQubitState& s,
                                               ParityPrefactor prefactor) {
  const Complex scale = prefactor == ParityPrefactor::Inverse
                            ? 1.0 / s.alpha
                            : std::norm(s.alpha) / s.alpha;
  TwoQubitState image = apply_bitflip(apply_annihilation(s));
  image.a *= scale;
  image.b *= scale;
  image.c *= scale;
  image.d *= scale;

  const Eigen::Vector4cd in = s.coeffs();
  const Eigen::Vector4cd out = image.coeffs();
  const double floor = 1e-12 * in.cwiseAbs().maxCoeff();
  Complex ratio = 0.0;
  bool have_ratio = false;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(in(k)) <= floor) {
      if (std::abs(out(k)) > 1e-10 * (1.0 + out.cwiseAbs().maxCoeff())) {
        throw DomainError("not in parity eigenspace");
      }
      continue;
    }
    const Complex r = out(k) / in(k);
    if (!have_ratio) {
      ratio = r;
      have_ratio = true;
    } else if (std::abs(r - ratio) > 1e-10 * (1.0 + std::abs(ratio))) {
      throw DomainError("not in parity eigenspace");
    }
  }
  if (!have_ratio) throw DomainError("not in parity eigenspace: zero state");
  return {image, ratio};
}

SpinFieldVector embed(const TwoQubitState& s, const FockSpace& space) {
  const Vec m = coherent_state(-s.alpha, space).amplitudes;
  const Vec p = coherent_state(s.alpha, space).amplitudes;
  const int n = space.cutoff();
  Vec v(2 * n);
  v.segment(0, n) = s.a * m + s.b * p;
  v.segment(n, n) = s.c * m + s.d * p;
  return {v};
}

}  // namespace abt
