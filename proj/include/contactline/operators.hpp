#pragma once

#include <array>
#include <vector>

#include "contactline/geometry.hpp"

namespace contactline {

enum class OpKind { GradA, DivA, LapA, SymGradA, StressA };

/// Scalar (rank 0) or vector (rank 1) field given by second-order jets at a
/// point; `pressure` is used by StressA only.
struct FieldJets {
  int rank = 0;
  std::array<Jet2, 2> c{};
  Jet2 pressure{};

  static FieldJets scalar(const Jet2& f) { return {0, {f, Jet2()}, Jet2()}; }
  static FieldJets vector(const Jet2& a, const Jet2& b) { return {1, {a, b}, Jet2()}; }
};

/// Result of a transformed operator: scalar, vector or 2x2 tensor.
struct OpValue {
  int rank = 0;
  double scalar = 0.0;
  Eigen::Vector2d vec = Eigen::Vector2d::Zero();
  Mat2 tensor = Mat2::Zero();
};

/// calA as a matrix of first-order jets (entry derivatives used by LapA).
std::array<std::array<Jet2, 2>, 2> calA_jets(const GeometryPoint& g);

/// grad_A f, div_A X, Lap_A (scalar or componentwise), D_A u, S_A(p, u) = pI - mu D_A u.
/// Throws RankMismatch when the field rank does not fit the operator.
OpValue apply_transformed(OpKind op, const FieldJets& f, const GeometryPoint& g, double mu = 1.0);

/// div_A of the stress S_A(p, u) from jets of u (order 2) and p (order 1).
Eigen::Vector2d div_stress(const FieldJets& f, const GeometryPoint& g, double mu);

/// Apply an operator to FE fields at every volume quadrature point; `u_full`
/// is the nodal velocity (2 per node), `p` the P1 pressure (may be empty).
std::vector<OpValue> apply_transformed_field(OpKind op, const FESpace& V, const GeometryMaps& maps,
                                             const Eigen::VectorXd& u_full, const Eigen::VectorXd& p, double mu = 1.0,
                                             bool scalar_field = false);

} // namespace contactline
