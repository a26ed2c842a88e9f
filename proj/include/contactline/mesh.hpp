#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "contactline/equilibrium.hpp"

namespace contactline {

enum class BoundaryTag { Surface, WallLeft, WallRight, Bottom };

/// Graded structured P2 triangulation of the equilibrium domain
/// {-ell < x1 < ell, -H_bot < x2 < zeta0(x1)}.
///
/// Reference coordinates (xr, s) in [-ell, ell] x [0, 1] map exactly to
/// x2 = -H_bot + s (zeta0(xr) + H_bot). P2 nodes form the tensor grid of
/// vertices and reference midpoints, so the surface row interpolates zeta0.
struct Mesh {
  EquilibriumState eq;
  double H = 0.5;
  double h = 0.2;
  double grading = 1.0;
  int nx = 0, ny = 0;          ///< cells per direction
  std::vector<double> xr, sr;  ///< fine reference grids, sizes 2nx+1, 2ny+1
  std::vector<std::array<double, 2>> nodes;  ///< physical P2 node positions
  std::vector<std::array<int, 6>> cells;     ///< v0 v1 v2 m01 m12 m20
  std::vector<std::array<int, 3>> p1cells;   ///< vertex numbering of the P1 grid

  int fine_nx() const { return 2 * nx + 1; }
  int fine_ny() const { return 2 * ny + 1; }
  int node(int i, int j) const { return j * fine_nx() + i; }
  int vertex(int i, int j) const { return j * (nx + 1) + i; }
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_vertices() const { return (nx + 1) * (ny + 1); }
  /// Surface node k (k = 0..2nx) as a P2 node index.
  int surface_node(int k) const { return node(k, 2 * ny); }

  std::array<double, 2> map(double x, double s) const;
  /// Reference coordinates of the P2 node.
  std::array<double, 2> reference(int node_index) const;

  /// Largest and smallest cell diameter, and the smallest diameter among cells touching a contact point.
  double max_cell_diameter() const;
  double min_corner_cell_diameter() const;
};

/// Node grid graded toward x1 = +-ell and the surface with exponent `grading` (1 = uniform).
Mesh build_mesh(const EquilibriumState& eq, double h, double grading);

/// Generic text mesh: vertices, P2 cells and tagged boundary edges (end, end, midpoint).
struct MeshData {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 6>> cells;
  std::vector<std::pair<BoundaryTag, std::array<int, 3>>> boundary;
};

MeshData export_mesh(const Mesh& mesh);
void write_mesh(std::ostream& out, const MeshData& data);
MeshData read_mesh(std::istream& in);

std::string to_string(BoundaryTag tag);

} // namespace contactline
