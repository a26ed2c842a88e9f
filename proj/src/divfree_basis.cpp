#include "contactline/divfree_basis.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>

#include "contactline/error.hpp"
#include "contactline/norms.hpp"

namespace contactline {

DivFreeBasis build_divfree_basis(const SpMat& B0, const SpMat& A0, int m)
{
  const int nf = static_cast<int>(B0.cols()), np = static_cast<int>(B0.rows());
  SpMat Bt = B0.transpose();
  Bt.makeCompressed();
  Eigen::SparseQR<SpMat, Eigen::COLAMDOrdering<int>> qr;
  qr.compute(Bt);
  if (qr.info() != Eigen::Success) throw Error(ErrorKind::RankDeficient, "sparse QR of the divergence failed");
  DivFreeBasis basis;
  basis.rank_B0 = static_cast<int>(qr.rank());
  basis.nullspace_dim = nf - basis.rank_B0;
  if (basis.rank_B0 < np)
    throw Error(ErrorKind::RankDeficient, "discrete divergence has dependent rows",
                {{"rank", basis.rank_B0}, {"pressure_dofs", np}});
  if (m <= 0) m = basis.nullspace_dim;
  if (m > basis.nullspace_dim)
    throw Error(ErrorKind::RankDeficient, "requested more basis fields than the nullspace holds",
                {{"requested", m}, {"nullspace_dim", basis.nullspace_dim}});

  // trailing columns of Q span the orthogonal complement of range(B0')
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(nf, basis.nullspace_dim);
  for (int k = 0; k < basis.nullspace_dim; ++k) E(basis.rank_B0 + k, k) = 1.0;
  const Eigen::MatrixXd Z = qr.matrixQ() * E;

  const Eigen::MatrixXd G = Z.transpose() * (A0 * Z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
  basis.W = Z * es.eigenvectors().leftCols(m);
  basis.energy = es.eigenvalues().head(m);
  return basis;
}

double divergence_pairing(const FESpace& V, const GeometryMaps& maps, const Eigen::VectorXd& w_free)
{
  const Eigen::VectorXd full = V.expand(w_free);
  Eigen::VectorXd pair = Eigen::VectorXd::Zero(V.n_p);
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    const auto& vp = V.vq[q];
    const GeometryPoint g = maps.vol.empty() ? GeometryPoint{} : maps.vol[q];
    const auto u = physical_velocity(V, maps, full, static_cast<int>(q));
    const Mat2 a = g.calA();
    double div = 0.0;
    for (int i = 0; i < 2; ++i) div += a(i, 0) * u[i].d1() + a(i, 1) * u[i].d2();
    const auto& pc = V.mesh.p1cells[vp.cell];
    for (int k = 0; k < 3; ++k) pair(pc[k]) += vp.w * vp.L[k].value() * div * g.J.value();
  }
  return pair.cwiseAbs().maxCoeff();
}

} // namespace contactline
