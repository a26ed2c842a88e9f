#pragma once

#include <Eigen/Dense>

#include "contactline/geometry.hpp"
#include "contactline/surface_forms.hpp"

namespace contactline {

/// Discretely divergence-free coefficient fields w^j (columns of W, Euclidean
/// orthonormal), ordered by increasing ((.,.))-energy on the reference
/// geometry. The physical fields are v^j(t) = M(t) w^j.
struct DivFreeBasis {
  Eigen::MatrixXd W;
  Eigen::VectorXd energy; ///< Rayleigh quotients of the kept columns
  int nullspace_dim = 0;
  int rank_B0 = 0;
  int m() const { return static_cast<int>(W.cols()); }
};

/// Nullspace of B0 from a sparse QR of B0'; `A0` orders the columns. m <= 0
/// keeps the whole nullspace. Throws RankDeficient if B0 has dependent rows
/// or m exceeds the nullspace dimension.
DivFreeBasis build_divfree_basis(const SpMat& B0, const SpMat& A0, int m = 0);

/// max over pressure basis functions q of |int q div_A(M w) J|, evaluated
/// pointwise from the jets of v = M w.
double divergence_pairing(const FESpace& V, const GeometryMaps& maps, const Eigen::VectorXd& w_free);

} // namespace contactline
