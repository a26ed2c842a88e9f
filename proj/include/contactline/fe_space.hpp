#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "contactline/jet.hpp"
#include "contactline/mesh.hpp"

namespace contactline {

/// Volume quadrature point with P2 and P1 shape functions as second-order jets
/// in physical coordinates.
struct VolumePoint {
  std::array<double, 2> x{};
  double w = 0.0;
  int cell = 0;
  std::array<Jet2, 6> N;
  std::array<Jet2, 3> L;
};

/// Boundary quadrature point with the 1-D P2 trace basis of its edge.
struct BoundaryPoint {
  BoundaryTag tag = BoundaryTag::Surface;
  std::array<double, 2> x{};
  double w = 0.0;       ///< dx1 on the surface and bottom, physical arclength on walls
  std::array<int, 3> nodes{}; ///< P2 nodes: end, midpoint, end
  std::array<double, 3> N{};
  std::array<double, 3> dN{}; ///< derivative along the edge parameter (x1, or x2 on walls)
  int edge = 0;               ///< surface element index for surface points
  int cell = -1;              ///< owning cell
  std::array<Jet2, 6> Nc;     ///< owning-cell P2 basis as jets at the point
  std::array<Jet2, 3> Lc;     ///< owning-cell P1 basis
};

/// Taylor-Hood spaces on a Mesh. Velocity dofs are 2*node + component; wall
/// nodes drop the x1 component, bottom nodes drop the x2 component.
struct FESpace {
  Mesh mesh;
  int n_vel = 0;   ///< 2 * nodes
  int n_free = 0;
  int n_p = 0;
  int n_s = 0;     ///< surface nodes
  std::vector<int> free_index;  ///< global dof -> free dof or -1
  std::vector<int> free_dofs;   ///< free dof -> global dof
  std::vector<VolumePoint> vq;
  std::vector<int> cell_begin;  ///< first volume point of each cell (size cells+1)
  std::vector<BoundaryPoint> sq; ///< surface points, ordered by x1
  std::vector<BoundaryPoint> wq; ///< wall and bottom points
  std::vector<double> surface_x; ///< x1 of the surface nodes

  int dof(int node, int comp) const { return 2 * node + comp; }
  int free_dof(int node, int comp) const { return free_index[dof(node, comp)]; }

  /// Embed free coefficients into the full nodal velocity vector (constrained entries zero).
  Eigen::VectorXd expand(const Eigen::VectorXd& free) const;
  Eigen::VectorXd restrict_free(const Eigen::VectorXd& full) const;

  /// w (free coefficients) and its jets at volume point q.
  std::array<Jet2, 2> velocity_jets(const Eigen::VectorXd& full, int q) const;
  Jet2 pressure_jet(const Eigen::VectorXd& p, int q) const;
  /// Velocity jets at a boundary point from its owning cell.
  std::array<Jet2, 2> boundary_velocity_jets(const Eigen::VectorXd& full, const BoundaryPoint& b) const;
  double boundary_pressure(const Eigen::VectorXd& p, const BoundaryPoint& b) const;

  /// P2 and P1 basis of cell c as jets at reference coordinates (xr, s).
  void basis_jets(int c, double xr, double s, std::array<Jet2, 6>& N, std::array<Jet2, 3>& L) const;
};

FESpace build_fe_space(const Mesh& mesh);

/// Degree-5 seven-point rule on the unit triangle: barycentric coordinates and weights (sum 1).
const std::array<std::array<double, 4>, 7>& triangle_rule();
/// Gauss-Legendre points and weights on [0, 1].
const std::array<std::array<double, 2>, 4>& line_rule();

} // namespace contactline
