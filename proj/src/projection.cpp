#include "abt/projection.hpp"

#include <cmath>

namespace abt {

namespace {
const Complex kI(0.0, 1.0);
}

ProjectionResult project_spin(const SpinFieldVector& state, Spin outcome) {
  if (std::abs(state.norm() - 1.0) > 1e-6) {
    throw DomainError("project_spin expects a normalized state");
  }
  const Vec block = state.block(outcome);
  const double probability = block.squaredNorm();
  if (probability < 1e-12) {
    throw DomainError("impossible outcome: selected spin block has zero weight");
  }
  return {outcome, probability, FieldVector{block / std::sqrt(probability)}};
}

HadamardCatGate hadamard_cat_gate(Complex alpha, const FockSpace& space) {
  const Vec m = coherent_state(-alpha, space).amplitudes;
  const Vec p = coherent_state(alpha, space).amplitudes;
  const double s = 1.0 / std::sqrt(2.0);
  Mat gate = s * (m * m.adjoint() - p * p.adjoint() + p * m.adjoint() + m * p.adjoint());
  const double overlap = std::exp(-2.0 * std::norm(alpha));
  return {std::move(gate), overlap, overlap <= 1e-3};
}

double gate_unitarity_deviation(const HadamardCatGate& gate, Complex alpha,
                                const FockSpace& space) {
  const int dim = space.cutoff();
  Mat basis(dim, 2);
  basis.col(0) = coherent_state(-alpha, space).amplitudes;
  basis.col(1) = coherent_state(alpha, space).amplitudes;
  // Rank-revealing span projector, stable down to the degenerate alpha = 0 case.
  Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Mat projector = Mat::Zero(dim, dim);
  for (int k = 0; k < sv.size(); ++k) {
    if (sv(k) > 1e-9 * sv(0)) {
      projector += svd.matrixU().col(k) * svd.matrixU().col(k).adjoint();
    }
  }
  const Mat dev = gate.matrix.adjoint() * gate.matrix - projector;
  Eigen::SelfAdjointEigenSolver<Mat> es(dev);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

FieldVector transferred_cat(const ABPhase& phase, Spin measured, Complex alpha,
                            const FockSpace& space) {
  const FieldVector m = coherent_state(-alpha, space);
  const FieldVector p = coherent_state(alpha, space);
  const Complex e = phase.unit();
  Vec v;
  if (measured == Spin::Down) {
    v = m.amplitudes + e * p.amplitudes;
  } else {
    v = e * m.amplitudes + p.amplitudes;
  }
  return FieldVector{v}.normalized();
}

double transfer_time(const DispersiveModel& model) { return 0.5 * kPi / model.beta; }

double pattern_time(const DispersiveModel& model) { return kPi / model.beta; }

double closed_form_projection_pattern(const ABPhase& phase) {
  const double phi = phase.reduced();
  const double denom = 1.0 + std::sin(phi);
  if (std::abs(denom) < 1e-12) {
    throw DomainError("pattern divergence at phi_AB = 3*pi/2 (mod 2*pi)");
  }
  const double s = std::sin(0.5 * phi);
  return s * s / denom;
}

double numeric_projection_probability(const ABPhase& phase, Complex alpha,
                                      const DispersiveModel& model, double t, Spin outcome) {
  const SpinFieldVector joint = joint_state(phase, alpha, model, t);
  const ProjectionResult projected = project_spin(joint, outcome);
  const Complex amp = inner_product(coherent_state(alpha, model.space), projected.post_field);
  return std::norm(amp);
}

}  // namespace abt
