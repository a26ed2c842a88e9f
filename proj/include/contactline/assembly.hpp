#pragma once

#include <array>
#include <vector>

#include "contactline/config.hpp"
#include "contactline/geometry.hpp"
#include "contactline/surface_forms.hpp"

namespace contactline {

/// ((v, w)) on the free velocity dofs with v = M z, and its time derivative
/// along the geometry (zero when not requested).
struct VelocityMatrices {
  SpMat A;
  SpMat Adot;
};

/// Volume kernel uses OpenMP over cells; local matrices are scattered in cell
/// order so the result does not depend on the thread count.
VelocityMatrices assemble_velocity(const FESpace& V, const GeometryMaps& maps, const PhysicalConfig& cfg,
                                   bool with_dot, bool parallel = true);
VelocityMatrices assemble_velocity_serial(const FESpace& V, const GeometryMaps& maps, const PhysicalConfig& cfg,
                                          bool with_dot);

/// B0(q, z) = int q div z (rows: P1 pressure vertices, columns: free velocity dofs).
SpMat assemble_divergence(const FESpace& V);

/// Pointwise data of the right-hand side functional
///   int F1 . v J - int (sigma F3 (Tv)' + F4 . v) dx1 - int_walls J F5 (v . tau) - [Tv, What].
struct ForcingData {
  std::vector<Eigen::Vector2d> F1; ///< volume points (empty = 0)
  Vec load;                        ///< F1 term already integrated, on all velocity dofs (empty = 0)
  std::vector<double> F3;          ///< surface points
  std::vector<Eigen::Vector2d> F4; ///< surface points
  std::vector<double> F5;          ///< wall and bottom points
  std::array<double, 2> corner{0.0, 0.0}; ///< What at (-ell, ell)
};

Vec assemble_forcing(const FESpace& V, const GeometryMaps& maps, const SurfaceOps& ops, const ForcingData& data);

/// Unit tangent used by the slip term: e2 on the side walls, e1 on the bottom.
Eigen::Vector2d wall_tangent(BoundaryTag tag);

} // namespace contactline
