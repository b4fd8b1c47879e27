#include "abt/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abt {

double LindbladParams::kappa1() const { return std::sqrt(2.0 * kappa * (n_bar + 1.0)); }

double LindbladParams::kappa2() const { return std::sqrt(2.0 * kappa * n_bar); }

bool LindbladParams::low_temperature() const { return n_bar <= 1e-3; }

bool LindbladParams::number_state_regime() const {
  return n_alpha >= 1 && std::abs(alpha) > static_cast<double>(n_alpha);
}

double LindbladParams::g_decay_rate() const {
  const double k2 = kappa2();
  const double na = static_cast<double>(n_alpha);
  return 0.25 * k2 * k2 * (std::norm(alpha) - na * na);
}

void LindbladParams::validate() const {
  const bool finite = std::isfinite(kappa) && std::isfinite(n_bar) &&
                      std::isfinite(gamma) && std::isfinite(lambda0_init) &&
                      std::isfinite(omega_T) && std::isfinite(alpha.real()) &&
                      std::isfinite(alpha.imag());
  if (!finite) throw DomainError("bath parameters must be finite");
  if (kappa < 0.0) throw DomainError("bath coupling kappa must be >= 0");
  if (n_bar < 0.0) throw DomainError("mean occupation n_bar must be >= 0");
  if (gamma < 0.0) throw DomainError("dissipation coefficient gamma must be >= 0");
  if (lambda0_init <= 0.0) throw DomainError("initial scalar amplitude must be > 0");
  if (n_alpha < 0) throw DomainError("target number state must be >= 0");
}

double DensityOperator::hermiticity_residual() const {
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator density_from(const SpinFieldVector& psi) {
  return DensityOperator{psi.amplitudes * psi.amplitudes.adjoint()};
}

namespace {

void check_composite_dims(const DensityOperator& rho) {
  const auto rows = rho.matrix.rows();
  if (rows != rho.matrix.cols() || rows < 4 || rows % 2 != 0) {
    throw DimensionMismatch("composite operator must be 2n x 2n with n >= 2");
  }
}

void check_hermitian(const DensityOperator& rho) {
  const double scale = rho.matrix.cwiseAbs().maxCoeff();
  if (rho.hermiticity_residual() > 1e-8 * (1.0 + scale)) {
    throw DomainError("density operator is not Hermitian");
  }
}

struct RhsContext {
  int n;
  double k1sq;
  double k2sq;
  double omega;
  double alpha2;
  DissipatorVariant variant;
};

RhsContext make_context(int n, const LindbladParams& params, DissipatorVariant variant) {
  const double k1 = params.kappa1();
  const double k2 = params.kappa2();
  return RhsContext{n, k1 * k1, k2 * k2, params.omega_T, std::norm(params.alpha), variant};
}

// Channel terms written out per entry: the jump sandwiches a M a^+ and a^+ M a
// are index shifts weighted by sqrt factors, and both a^+a and the truncated
// a a^+ are diagonal, so no dense products are needed.
Mat rhs_matrix(const Mat& m, const RhsContext& c) {
  const int n = c.n;
  Mat out(2 * n, 2 * n);
  for (int br = 0; br < 2; ++br) {
    for (int bc = 0; bc < 2; ++bc) {
      const int r0 = br * n;
      const int c0 = bc * n;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          Complex acc = 0.0;
          if (i + 1 < n && j + 1 < n) {
            acc += c.k1sq * std::sqrt(double(i + 1) * double(j + 1)) *
                   m(r0 + i + 1, c0 + j + 1);
          }
          if (i >= 1 && j >= 1) {
            acc += c.k2sq * std::sqrt(double(i) * double(j)) * m(r0 + i - 1, c0 + j - 1);
          }
          double sub;
          if (c.variant == DissipatorVariant::Standard) {
            const double up_i = (i + 1 < n) ? i + 1.0 : 0.0;  // truncated a a^+ diagonal
            const double up_j = (j + 1 < n) ? j + 1.0 : 0.0;
            sub = 0.5 * c.k1sq * (double(i) + double(j)) + 0.5 * c.k2sq * (up_i + up_j);
          } else {
            sub = (c.k1sq + c.k2sq) * c.alpha2;
          }
          const Complex diag = m(r0 + i, c0 + j);
          acc -= sub * diag;
          acc += Complex(0.0, -c.omega * double(i - j)) * diag;
          out(r0 + i, c0 + j) = acc;
        }
      }
    }
  }
  return out;
}

Mat rk4_matrix_step(const Mat& y, double h, const RhsContext& c) {
  const Mat k1 = rhs_matrix(y, c);
  const Mat k2 = rhs_matrix(y + (0.5 * h) * k1, c);
  const Mat k3 = rhs_matrix(y + (0.5 * h) * k2, c);
  const Mat k4 = rhs_matrix(y + h * k3, c);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Mat spin_block(const DensityOperator& rho, Spin row, Spin col) {
  check_composite_dims(rho);
  const int n = rho.field_dim();
  const int r0 = row == Spin::Up ? n : 0;
  const int c0 = col == Spin::Up ? n : 0;
  return rho.matrix.block(r0, c0, n, n);
}

double expected_number(const DensityOperator& rho) {
  check_composite_dims(rho);
  const int n = rho.field_dim();
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-300) {
    throw DomainError("zero-trace operator has no normalized expectation");
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += double(i) * (rho.matrix(i, i).real() + rho.matrix(n + i, n + i).real());
  }
  return acc / tr;
}

double ab_block_phase(const DensityOperator& rho) {
  check_composite_dims(rho);
  const int n = rho.field_dim();
  const Complex t_ud = rho.matrix.block(n, 0, n, n).trace();
  const Complex t_du = rho.matrix.block(0, n, n, n).trace();
  const double scale = rho.matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0 || std::abs(t_ud) <= 1e-12 * scale || std::abs(t_du) <= 1e-12 * scale) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return ABPhase{std::arg(t_ud) - std::arg(t_du)}.reduced();
}

DensityOperator lindblad_rhs(const DensityOperator& rho, const LindbladParams& params,
                             DissipatorVariant variant) {
  params.validate();
  check_composite_dims(rho);
  check_hermitian(rho);
  const RhsContext ctx = make_context(rho.field_dim(), params, variant);
  return DensityOperator{rhs_matrix(rho.matrix, ctx)};
}

double ansatz_scalar(const LindbladParams& params, double t) {
  params.validate();
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  return 2.0 * params.lambda0_init * std::exp(-0.5 * params.g_decay_rate() * t);
}

std::pair<Mat, Mat> ansatz_operators(double t, const ABPhase& phase,
                                     const LindbladParams& params,
                                     const DispersiveModel& model) {
  const int n = model.space.cutoff();
  const Complex e = phase.unit();
  const Complex plus = 0.25 * (1.0 + e);
  const Complex minus = 0.25 * (1.0 - e);
  const double weight = ansatz_scalar(params, t) * std::norm(params.alpha);

  Mat l1 = Mat::Zero(2 * n, 2 * n);
  Mat l2 = Mat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const Complex rot = std::exp(Complex(0.0, -2.0 * double(k) * model.beta * t));
    l1(n + k, k) = weight * (plus * rot - minus);  // |up><down| block
    l2(k, n + k) = weight * (plus * rot + minus);  // |down><up| block
  }
  return {std::move(l1), std::move(l2)};
}

DensityOperator ansatz_density(double t, const ABPhase& phase,
                               const LindbladParams& params,
                               const DispersiveModel& model) {
  const auto [l1, l2] = ansatz_operators(t, phase, params, model);
  const FieldVector field = coherent_state(params.alpha, model.space);
  const Vec down = spin_field(Spin::Down, field).amplitudes;
  const Vec up = spin_field(Spin::Up, field).amplitudes;
  const Vec v1 = l1 * down;
  const Vec v2 = l2 * up;
  Mat rho = v1 * v1.adjoint() + v2 * v2.adjoint() + v1 * v2.adjoint() + v2 * v1.adjoint();
  return DensityOperator{std::move(rho)};
}

DensityOperator ansatz_density_number_state(double t, const ABPhase& phase,
                                            const LindbladParams& params,
                                            const FockSpace& space) {
  const double s = ansatz_scalar(params, t);
  const double weight = 0.25 * s * s * std::norm(params.alpha) * std::norm(params.alpha);
  const Vec number = fock_state(params.n_alpha, space).amplitudes;
  const Mat projector = number * number.adjoint();
  const Complex e = phase.unit();

  const int n = space.cutoff();
  Mat rho = Mat::Zero(2 * n, 2 * n);
  rho.block(0, 0, n, n) = weight * projector;
  rho.block(n, n, n, n) = weight * projector;
  rho.block(n, 0, n, n) = weight * e * projector;
  rho.block(0, n, n, n) = weight * std::conj(e) * projector;
  return DensityOperator{std::move(rho)};
}

std::vector<double> lambda0_ode_solve(const LindbladParams& params,
                                      const std::vector<double>& t_grid) {
  params.validate();
  if (t_grid.empty()) throw DomainError("time grid is empty");
  if (t_grid.front() != 0.0) throw DomainError("time grid must start at 0");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!std::isfinite(t_grid[k])) throw DomainError("time grid must be finite");
    if (k > 0 && t_grid[k] <= t_grid[k - 1]) {
      throw DomainError("time grid must increase strictly");
    }
  }

  const double r = params.g_decay_rate();
  const auto f = [r](double g) { return -r * g; };
  const auto rk4 = [&f](double g, double h) {
    const double k1 = f(g);
    const double k2 = f(g + 0.5 * h * k1);
    const double k3 = f(g + 0.5 * h * k2);
    const double k4 = f(g + h * k3);
    return g + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  const auto recover = [&params](double g, double t) {
    return std::sqrt(g) / (1.0 + std::exp(-params.gamma * t));
  };

  double g = 4.0 * params.lambda0_init * params.lambda0_init;
  std::vector<double> out;
  out.reserve(t_grid.size());
  out.push_back(recover(g, t_grid.front()));

  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    double time = 0.0;
    double h = span;
    const double h_min = span * 1e-13;
    long steps = 0;
    while (time < span) {
      h = std::min(h, span - time);
      const double full = rk4(g, h);
      const double half = rk4(rk4(g, 0.5 * h), 0.5 * h);
      const double err = std::abs(full - half) / (1e-14 + 1e-10 * std::abs(half));
      if (err <= 1.0) {
        g = half;
        time += h;
      }
      const double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
      h *= std::clamp(factor, 0.2, 2.0);
      if (h < h_min) throw Error("scalar integrator step size underflow");
      if (++steps > 1000000) throw Error("scalar integrator exceeded its refinement cap");
    }
    out.push_back(recover(g, t_grid[k]));
  }
  return out;
}

double lambda0_closed_form(const LindbladParams& params, double t) {
  params.validate();
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  const double k2 = params.kappa2();
  const double na = static_cast<double>(params.n_alpha);
  const double delta = std::norm(params.alpha) - na * na;
  return 2.0 * params.lambda0_init / (1.0 + std::exp(-params.gamma * t)) *
         std::exp(-0.5 * k2 * k2 * delta * t);
}

double closed_form_ode_residual(const LindbladParams& params, double t) {
  const double lam = lambda0_closed_form(params, t);
  const double pre = 1.0 + std::exp(-params.gamma * t);
  const double g_closed = lam * lam * pre * pre;  // = 4 lambda0(0)^2 e^{-4rt}
  const double rate_closed = 4.0 * params.g_decay_rate();  // kappa2^2 (|alpha|^2 - n_alpha^2)
  return (-rate_closed + params.g_decay_rate()) * g_closed;
}

DensityOperator evolve_density_numeric(const DensityOperator& rho0,
                                       const LindbladParams& params, double t,
                                       DissipatorVariant variant) {
  params.validate();
  check_composite_dims(rho0);
  check_hermitian(rho0);
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("evolution time must be finite and >= 0");
  }
  if (t == 0.0) return rho0;

  const RhsContext ctx = make_context(rho0.field_dim(), params, variant);
  Mat y = rho0.matrix;
  double time = 0.0;
  double h = t / 64.0;
  const double h_min = t * 1e-12;
  long steps = 0;
  while (time < t) {
    h = std::min(h, t - time);
    const Mat full = rk4_matrix_step(y, h, ctx);
    const Mat half = rk4_matrix_step(rk4_matrix_step(y, 0.5 * h, ctx), 0.5 * h, ctx);
    const double scale = 1e-12 + 1e-9 * half.cwiseAbs().maxCoeff();
    const double err = (full - half).cwiseAbs().maxCoeff() / scale;
    if (err <= 1.0) {
      y = half;
      time += h;
    }
    const double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    h *= std::clamp(factor, 0.2, 2.0);
    if (h < h_min) throw Error("density integrator step size underflow");
    if (++steps > 1000000) throw Error("density integrator exceeded its refinement cap");
  }
  return DensityOperator{std::move(y)};
}

}  // namespace abt
