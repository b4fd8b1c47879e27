#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "abt/dissipation.hpp"
#include "helpers.hpp"

using namespace abt;
using abt::testing::uniform;

namespace {

const Complex kI(0.0, 1.0);

LindbladParams thermal_params() {
  LindbladParams p;
  p.kappa = 1.0;
  p.n_bar = 0.5;
  p.gamma = 0.5;
  p.lambda0_init = 1.0;
  p.n_alpha = 1;
  p.omega_T = 0.0;
  p.alpha = 2.0;
  return p;
}

DensityOperator random_density(std::mt19937_64& gen, int field_dim) {
  Mat a(2 * field_dim, 2 * field_dim);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      a(r, c) = Complex(uniform(gen, -1, 1), uniform(gen, -1, 1));
    }
  }
  Mat rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityOperator{rho};
}

}  // namespace

TEST_CASE("bath parameters expose the derived jump rates and regime flags") {
  LindbladParams p = thermal_params();
  p.kappa = 2.0;
  CHECK(p.kappa1() == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(p.kappa2() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_FALSE(p.low_temperature());
  p.n_bar = 1e-3;
  CHECK(p.low_temperature());

  p = thermal_params();
  CHECK(p.number_state_regime());  // n_alpha = 1 < |alpha| = 2
  p.n_alpha = 3;
  CHECK_FALSE(p.number_state_regime());
  CHECK(p.growth_regime());  // |alpha|^2 = 4 < n_alpha^2 = 9
  p.n_alpha = 0;
  CHECK_FALSE(p.number_state_regime());

  p = thermal_params();  // kappa2^2 = 1, |alpha|^2 - n_alpha^2 = 3
  CHECK(p.g_decay_rate() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("bath parameter validation flags each out-of-range field") {
  LindbladParams p = thermal_params();
  CHECK_NOTHROW(p.validate());
  p.kappa = -0.1;
  CHECK_THROWS_WITH_AS(p.validate(), "bath coupling kappa must be >= 0", DomainError);
  p = thermal_params();
  p.n_bar = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), "mean occupation n_bar must be >= 0", DomainError);
  p = thermal_params();
  p.gamma = -2.0;
  CHECK_THROWS_WITH_AS(p.validate(), "dissipation coefficient gamma must be >= 0", DomainError);
  p = thermal_params();
  p.lambda0_init = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), "initial scalar amplitude must be > 0", DomainError);
  p = thermal_params();
  p.n_alpha = -1;
  CHECK_THROWS_WITH_AS(p.validate(), "target number state must be >= 0", DomainError);
  p = thermal_params();
  p.omega_T = std::nan("");
  CHECK_THROWS_WITH_AS(p.validate(), "bath parameters must be finite", DomainError);
}

TEST_CASE("density helpers: construction, blocks, expectations, relative phase") {
  const FockSpace space(20);
  const SpinFieldVector psi =
      spin_field(1.0 / std::sqrt(2.0), kI / std::sqrt(2.0), coherent_state(1.5, space));
  const DensityOperator rho = density_from(psi);
  CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
  CHECK(rho.hermiticity_residual() < 1e-15);
  CHECK(expected_number(rho) == doctest::Approx(2.25).epsilon(1e-8));

  // block views tile the composite matrix
  const int n = rho.field_dim();
  CHECK(n == 20);
  CHECK((spin_block(rho, Spin::Down, Spin::Down) - rho.matrix.block(0, 0, n, n)).norm() == 0.0);
  CHECK((spin_block(rho, Spin::Up, Spin::Down) - rho.matrix.block(n, 0, n, n)).norm() == 0.0);

  // (1, i)/sqrt2 spin state: <up|rho|down> trace carries e^{i pi/2}, so the
  // block phase difference is 2 * (pi/2) = pi
  CHECK(ab_block_phase(rho) == doctest::Approx(kPi).epsilon(1e-10));

  const DensityOperator down_only = density_from(spin_field(Spin::Down, coherent_state(1.0, space)));
  CHECK(std::isnan(ab_block_phase(down_only)));
  CHECK(expected_number(down_only) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("composite-shape and hermiticity guards reject malformed operators") {
  CHECK_THROWS_AS(spin_block(DensityOperator{Mat::Identity(5, 5)}, Spin::Down, Spin::Down),
                  DimensionMismatch);
  CHECK_THROWS_AS(spin_block(DensityOperator{Mat::Identity(2, 2)}, Spin::Down, Spin::Down),
                  DimensionMismatch);
  const LindbladParams p = thermal_params();
  CHECK_THROWS_AS(lindblad_rhs(DensityOperator{Mat::Identity(6, 4)}, p,
                               DissipatorVariant::Standard),
                  DimensionMismatch);
  Mat skew = Mat::Zero(8, 8);
  skew(0, 1) = 1.0;  // missing the conjugate partner
  CHECK_THROWS_AS(lindblad_rhs(DensityOperator{skew}, p, DissipatorVariant::Standard),
                  DomainError);
}

TEST_CASE("standard dissipator is trace-free and hermiticity-preserving") {
  std::mt19937_64 gen(606);
  LindbladParams p = thermal_params();
  p.omega_T = 1.3;
  for (int trial = 0; trial < 6; ++trial) {
    const DensityOperator rho = random_density(gen, 9);
    const DensityOperator rhs = lindblad_rhs(rho, p, DissipatorVariant::Standard);
    CHECK(std::abs(rhs.trace()) <= 1e-10);
    CHECK(rhs.hermiticity_residual() <= 1e-10);
    const DensityOperator reduced = lindblad_rhs(rho, p, DissipatorVariant::Reduced);
    CHECK(reduced.hermiticity_residual() <= 1e-10);
  }
}

TEST_CASE("reduced dissipator nearly annihilates a matching coherent state") {
  // With n_bar = 0 only the photon-loss channel acts; on |alpha><alpha| the
  // sandwich gives a rho a^+ ~ |alpha|^2 rho, which the reduced subtraction
  // removes identically.
  LindbladParams p;
  p.kappa = 1.0;
  p.n_bar = 0.0;
  p.lambda0_init = 1.0;
  p.alpha = 1.0;
  const FockSpace space(31);
  const DensityOperator rho =
      density_from(spin_field(Spin::Down, coherent_state(p.alpha, space)));
  const DensityOperator rhs = lindblad_rhs(rho, p, DissipatorVariant::Reduced);
  CHECK(rhs.matrix.cwiseAbs().maxCoeff() < 1e-6);
  // the standard variant does not vanish there
  const DensityOperator std_rhs = lindblad_rhs(rho, p, DissipatorVariant::Standard);
  CHECK(std_rhs.matrix.cwiseAbs().maxCoeff() > 1e-2);
}

TEST_CASE("ansatz scalar starts at twice the initial amplitude and decays at r/2") {
  const LindbladParams p = thermal_params();
  CHECK(ansatz_scalar(p, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  const double r = p.g_decay_rate();
  for (double t : {0.3, 1.0, 2.5}) {
    CHECK(ansatz_scalar(p, t) ==
          doctest::Approx(2.0 * std::exp(-0.5 * r * t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ansatz_scalar(p, std::nan("")), DomainError);
}

TEST_CASE("environment-action operators map the spin while rotating the field") {
  const LindbladParams p = thermal_params();
  const FockSpace space(34);
  const DispersiveModel model(1.0, space);

  SUBCASE("zero flux sends |down, alpha> onto the rotated coherent branch") {
    const double t = 0.3;
    const auto [l1, l2] = ansatz_operators(t, ABPhase(0.0), p, model);
    const Vec in = spin_field(Spin::Down, coherent_state(p.alpha, space)).amplitudes;
    const Vec out = l1 * in;
    const int n = space.cutoff();
    CHECK(out.segment(0, n).norm() == 0.0);  // lands purely in the up block
    const Complex aprime = std::exp(-2.0 * kI * model.beta * t) * p.alpha;
    const FieldVector up_part{out.segment(n, n)};
    CHECK(fidelity(up_part, coherent_state(aprime, space)) >= 1.0 - 1e-10);
    // weight: s(t) |alpha|^2 * (1/2) on a unit coherent vector
    CHECK(up_part.norm() ==
          doctest::Approx(0.5 * ansatz_scalar(p, t) * std::norm(p.alpha)).epsilon(1e-10));
    CHECK((l2 * in).norm() == 0.0);  // l2 consumes the up block only
  }

  SUBCASE("explicit branch weights at phi = pi/2") {
    const double t = kPi / 4;
    const ABPhase phase(kPi / 2);
    const auto [l1, l2] = ansatz_operators(t, phase, p, model);
    const Complex e = phase.unit();
    const double w = ansatz_scalar(p, t) * std::norm(p.alpha);
    const Complex aprime = std::exp(-2.0 * kI * model.beta * t) * p.alpha;
    const Vec va = coherent_state(p.alpha, space).amplitudes;
    const Vec vp = coherent_state(aprime, space).amplitudes;
    const int n = space.cutoff();

    const Vec got1 = (l1 * spin_field(Spin::Down, coherent_state(p.alpha, space)).amplitudes)
                         .segment(n, n);
    const Vec want1 = w * (0.25 * (1.0 + e) * vp - 0.25 * (1.0 - e) * va);
    CHECK((got1 - want1).norm() < 1e-10);

    const Vec got2 = (l2 * spin_field(Spin::Up, coherent_state(p.alpha, space)).amplitudes)
                         .segment(0, n);
    const Vec want2 = w * (0.25 * (1.0 + e) * vp + 0.25 * (1.0 - e) * va);
    CHECK((got2 - want2).norm() < 1e-10);
  }
}

TEST_CASE("four-term ansatz density is the rank-one square of the summed branches") {
  const LindbladParams p = thermal_params();
  const FockSpace space(34);
  const DispersiveModel model(1.0, space);
  for (double t : {0.0, 0.4}) {
    for (double phi : {0.0, 2.0}) {
      const DensityOperator rho = ansatz_density(t, ABPhase(phi), p, model);
      CHECK(rho.hermiticity_residual() < 1e-12);

      const auto [l1, l2] = ansatz_operators(t, ABPhase(phi), p, model);
      const Vec v1 = l1 * spin_field(Spin::Down, coherent_state(p.alpha, space)).amplitudes;
      const Vec v2 = l2 * spin_field(Spin::Up, coherent_state(p.alpha, space)).amplitudes;
      const Vec w = v1 + v2;
      const Mat outer = w * w.adjoint();
      CHECK((rho.matrix - outer).cwiseAbs().maxCoeff() <
            1e-13 * (1.0 + outer.cwiseAbs().maxCoeff()));
      CHECK(rho.trace().real() > 0.0);
    }
  }
}

TEST_CASE("number-state density carries weight (s|alpha|^2/2)^2 and phase 2 phi") {
  const LindbladParams p = thermal_params();
  const FockSpace space(12);
  for (double phi : {kPi / 3, 5.0 * kPi / 4}) {
    for (double t : {0.0, 0.3}) {
      const DensityOperator rho = ansatz_density_number_state(t, ABPhase(phi), p, space);
      const double s = ansatz_scalar(p, t);
      const double w = 0.25 * s * s * std::norm(p.alpha) * std::norm(p.alpha);
      const int n = space.cutoff();
      const int na = p.n_alpha;
      CHECK(std::abs(rho.matrix(na, na) - Complex(w)) < 1e-12 * w);
      CHECK(std::abs(rho.matrix(n + na, n + na) - Complex(w)) < 1e-12 * w);
      CHECK(std::abs(rho.matrix(n + na, na) - w * std::exp(kI * phi)) < 1e-12 * w);
      CHECK(rho.hermiticity_residual() < 1e-12 * w);
      // everything else is empty
      CHECK(std::abs(rho.trace() - Complex(2.0 * w)) < 1e-12 * w);
      CHECK(expected_number(rho) == doctest::Approx(double(na)).epsilon(1e-12));

      const double expected_phase = ABPhase(2.0 * phi).reduced();
      CHECK(ab_block_phase(rho) == doctest::Approx(expected_phase).epsilon(1e-8));
    }
  }
}

TEST_CASE("scalar integrator reproduces the separable exact decay on every grid point") {
  LindbladParams p = thermal_params();
  const double r = p.g_decay_rate();
  const double g0 = 4.0 * p.lambda0_init * p.lambda0_init;
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(k * (5.0 / r) / 40.0);
  const std::vector<double> lam = lambda0_ode_solve(p, grid);
  REQUIRE(lam.size() == grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double exact = std::sqrt(g0 * std::exp(-r * grid[k])) /
                         (1.0 + std::exp(-p.gamma * grid[k]));
    CHECK(std::abs(lam[k] - exact) <= 1e-8 * exact);
  }
  // the underlying g is monotone under decay: lambda*(1+e^{-gamma t}) decreases
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double ga = lam[k - 1] * (1.0 + std::exp(-p.gamma * grid[k - 1]));
    const double gb = lam[k] * (1.0 + std::exp(-p.gamma * grid[k]));
    CHECK(gb <= ga + 1e-12);
  }
}

TEST_CASE("scalar integrator handles edge regimes") {
  SUBCASE("zero thermal occupation freezes g") {
    LindbladParams p = thermal_params();
    p.n_bar = 0.0;  // kappa2 = 0, r = 0
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
    const std::vector<double> lam = lambda0_ode_solve(p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double expected = 2.0 * p.lambda0_init / (1.0 + std::exp(-p.gamma * grid[k]));
      CHECK(std::abs(lam[k] - expected) <= 1e-10 * expected);
    }
  }
  SUBCASE("growth regime integrates a rising g") {
    LindbladParams p = thermal_params();
    p.n_alpha = 3;  // r < 0
    REQUIRE(p.growth_regime());
    const double r = p.g_decay_rate();
    const std::vector<double> grid{0.0, 0.4, 0.8};
    const std::vector<double> lam = lambda0_ode_solve(p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double exact = 2.0 * p.lambda0_init * std::exp(-0.5 * r * grid[k]) /
                           (1.0 + std::exp(-p.gamma * grid[k]));
      CHECK(std::abs(lam[k] - exact) <= 1e-8 * exact);
    }
  }
  SUBCASE("grid validation") {
    const LindbladParams p = thermal_params();
    CHECK_THROWS_WITH_AS(lambda0_ode_solve(p, {}), "time grid is empty", DomainError);
    CHECK_THROWS_WITH_AS(lambda0_ode_solve(p, {0.5, 1.0}), "time grid must start at 0",
                         DomainError);
    CHECK_THROWS_WITH_AS(lambda0_ode_solve(p, {0.0, 1.0, 1.0}),
                         "time grid must increase strictly", DomainError);
    CHECK_THROWS_AS(lambda0_ode_solve(p, {0.0, std::nan("")}), DomainError);
  }
}

TEST_CASE("the quoted closed form does not satisfy the scalar equation it accompanies") {
  const LindbladParams p = thermal_params();
  const double r = p.g_decay_rate();
  CHECK(lambda0_closed_form(p, 0.0) == doctest::Approx(p.lambda0_init).epsilon(1e-15));

  for (double t : {0.0, 0.7, 2.0}) {
    const double lam = lambda0_closed_form(p, t);
    const double pre = 1.0 + std::exp(-p.gamma * t);
    const double g_closed = lam * lam * pre * pre;
    const double residual = closed_form_ode_residual(p, t);

    // identically -3 r g_closed(t)
    CHECK(residual == doctest::Approx(-3.0 * r * g_closed).epsilon(1e-12));

    // independent check: central difference of g_closed plus r g_closed
    const double h = 1e-6;
    const auto g_of = [&](double tt) {
      const double l = lambda0_closed_form(p, tt);
      const double q = 1.0 + std::exp(-p.gamma * tt);
      return l * l * q * q;
    };
    const double numeric = (g_of(t + h) - g_of(t - h)) / (2.0 * h) + r * g_of(t);
    CHECK(std::abs(numeric - residual) < 1e-4 * std::abs(residual));
    CHECK(std::abs(residual) > 0.1 * r * g_closed);  // genuinely nonzero
  }
}

TEST_CASE("density evolution: identity at t = 0 and argument guards") {
  const LindbladParams p = thermal_params();
  std::mt19937_64 gen(9);
  const DensityOperator rho = random_density(gen, 6);
  const DensityOperator same = evolve_density_numeric(rho, p, 0.0, DissipatorVariant::Standard);
  CHECK((same.matrix - rho.matrix).norm() == 0.0);
  CHECK_THROWS_AS(evolve_density_numeric(rho, p, -1.0, DissipatorVariant::Standard), DomainError);
  CHECK_THROWS_AS(evolve_density_numeric(rho, p, std::nan(""), DissipatorVariant::Standard),
                  DomainError);
}

TEST_CASE("pure cavity rotation leaves populations frozen and spins the coherences") {
  LindbladParams p;
  p.kappa = 0.0;
  p.lambda0_init = 1.0;
  p.omega_T = 1.7;
  std::mt19937_64 gen(40);
  const DensityOperator rho0 = random_density(gen, 6);
  const double t = 0.9;
  const DensityOperator rho = evolve_density_numeric(rho0, p, t, DissipatorVariant::Standard);
  const int n = 6;
  for (int br = 0; br < 2; ++br) {
    for (int bc = 0; bc < 2; ++bc) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const Complex expected = std::exp(-kI * p.omega_T * double(i - j) * t) *
                                   rho0.matrix(br * n + i, bc * n + j);
          CHECK(std::abs(rho.matrix(br * n + i, bc * n + j) - expected) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("photon loss at zero temperature drains the mean occupation exponentially") {
  LindbladParams p;
  p.kappa = 1.0;
  p.n_bar = 0.0;
  p.lambda0_init = 1.0;
  p.alpha = 1.5;
  const FockSpace space(24);
  const DensityOperator rho0 =
      density_from(spin_field(Spin::Down, coherent_state(p.alpha, space)));

  for (double t : {0.25, 0.5}) {
    const DensityOperator rho = evolve_density_numeric(rho0, p, t, DissipatorVariant::Standard);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-9);
    CHECK(rho.hermiticity_residual() < 1e-9);
    const double expected = std::norm(p.alpha) * std::exp(-2.0 * p.kappa * t);
    CHECK(std::abs(expected_number(rho) - expected) < 0.01 * expected);
    // the state stays pure: a decaying coherent state
    CHECK(std::abs((rho.matrix * rho.matrix).trace().real() - 1.0) < 1e-6);
    // all populations stay physical
    for (int k = 0; k < 2 * space.cutoff(); ++k) {
      CHECK(rho.matrix(k, k).real() > -1e-9);
    }
  }
}

TEST_CASE("the reduced variant leaks trace where the standard one conserves it") {
  LindbladParams p;
  p.kappa = 1.0;
  p.n_bar = 0.0;
  p.lambda0_init = 1.0;
  p.alpha = 1.0;
  const FockSpace space(10);
  // vacuum: a rho a^+ = 0 but the reduced subtraction still removes |alpha|^2 rho
  const DensityOperator vac = density_from(spin_field(Spin::Down, fock_state(0, space)));
  const DensityOperator rhs = lindblad_rhs(vac, p, DissipatorVariant::Reduced);
  CHECK(rhs.trace().real() < -0.1);  // strictly trace-decreasing here
  const DensityOperator std_rhs = lindblad_rhs(vac, p, DissipatorVariant::Standard);
  CHECK(std::abs(std_rhs.trace()) < 1e-12);
}
