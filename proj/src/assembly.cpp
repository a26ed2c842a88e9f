#include "contactline/assembly.hpp"

namespace contactline {

Eigen::Vector2d wall_tangent(BoundaryTag tag)
{
  return tag == BoundaryTag::Bottom ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
}

namespace {

const GeometryPoint kIdentity{};

const GeometryPoint& point(const std::vector<GeometryPoint>& v, std::size_t q) { return v.empty() ? kIdentity : v[q]; }

struct LocalMatrices {
  std::array<double, 144> K{};
  std::array<double, 144> Kd{};
};

double ddot(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

void cell_kernel(const FESpace& V, const GeometryMaps& maps, double mu, bool with_dot, int c, LocalMatrices& out)
{
  std::array<Mat2, 12> D, Dd;
  for (int q = V.cell_begin[c]; q < V.cell_begin[c + 1]; ++q) {
    const auto& vp = V.vq[q];
    const GeometryPoint& g = point(maps.vol, q);
    const Mat2 a = g.calA(), M = g.M();
    const auto gM = g.grad_M();
    Mat2 at, Mt;
    std::array<Mat2, 2> gMt;
    if (with_dot) {
      at = g.dt_calA();
      Mt = g.dt_M();
      gMt = g.grad_dt_M();
    }
    for (int n = 0; n < 6; ++n) {
      const double Nv = vp.N[n].value(), d[2] = {vp.N[n].d1(), vp.N[n].d2()};
      for (int comp = 0; comp < 2; ++comp) {
        Mat2 G; // G(j,k) = d_k (N M e_comp)_j
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) G(j, k) = d[k] * M(j, comp) + Nv * gM[k](j, comp);
        D[2 * n + comp] = a * G.transpose() + G * a.transpose();
        if (with_dot) {
          Mat2 Gd;
          for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) Gd(j, k) = d[k] * Mt(j, comp) + Nv * gMt[k](j, comp);
          Dd[2 * n + comp] = at * G.transpose() + G * at.transpose() + a * Gd.transpose() + Gd * a.transpose();
        }
      }
    }
    const double J = g.J.value(), Jt = g.Jt.value();
    const double s = 0.5 * mu * vp.w;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        const double dd = ddot(D[i], D[j]);
        out.K[12 * i + j] += s * J * dd;
        if (with_dot) out.Kd[12 * i + j] += s * (J * (ddot(Dd[i], D[j]) + ddot(D[i], Dd[j])) + Jt * dd);
      }
  }
}

VelocityMatrices assemble(const FESpace& V, const GeometryMaps& maps, const PhysicalConfig& cfg, bool with_dot,
                          bool parallel)
{
  const int nc = static_cast<int>(V.mesh.cells.size());
  std::vector<LocalMatrices> local(nc);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < nc; ++c) cell_kernel(V, maps, cfg.mu, with_dot, c, local[c]);
  } else {
    for (int c = 0; c < nc; ++c) cell_kernel(V, maps, cfg.mu, with_dot, c, local[c]);
  }
  std::vector<Eigen::Triplet<double>> tk, td;
  tk.reserve(static_cast<std::size_t>(nc) * 144);
  if (with_dot) td.reserve(static_cast<std::size_t>(nc) * 144);
  for (int c = 0; c < nc; ++c) {
    const auto& cell = V.mesh.cells[c];
    std::array<int, 12> f;
    for (int n = 0; n < 6; ++n)
      for (int comp = 0; comp < 2; ++comp) f[2 * n + comp] = V.free_dof(cell[n], comp);
    for (int i = 0; i < 12; ++i) {
      if (f[i] < 0) continue;
      for (int j = 0; j < 12; ++j) {
        if (f[j] < 0) continue;
        tk.emplace_back(f[i], f[j], local[c].K[12 * i + j]);
        if (with_dot) td.emplace_back(f[i], f[j], local[c].Kd[12 * i + j]);
      }
    }
  }
  // Navier slip on the walls and the bottom
  for (std::size_t q = 0; q < V.wq.size(); ++q) {
    const auto& b = V.wq[q];
    const GeometryPoint& g = point(maps.wall, q);
    const Eigen::Vector2d tau = wall_tangent(b.tag);
    const Eigen::RowVector2d tM = tau.transpose() * g.M();
    const Eigen::RowVector2d tMt = with_dot ? Eigen::RowVector2d(tau.transpose() * g.dt_M()) : Eigen::RowVector2d::Zero();
    const double J = g.J.value(), Jt = g.Jt.value();
    for (int i = 0; i < 6; ++i) {
      const int fi = V.free_dof(b.nodes[i / 2], i % 2);
      if (fi < 0) continue;
      const double vi = b.N[i / 2] * tM(i % 2), vti = b.N[i / 2] * tMt(i % 2);
      for (int j = 0; j < 6; ++j) {
        const int fj = V.free_dof(b.nodes[j / 2], j % 2);
        if (fj < 0) continue;
        const double vj = b.N[j / 2] * tM(j % 2), vtj = b.N[j / 2] * tMt(j % 2);
        tk.emplace_back(fi, fj, cfg.beta * b.w * J * vi * vj);
        if (with_dot) td.emplace_back(fi, fj, cfg.beta * b.w * (Jt * vi * vj + J * (vti * vj + vi * vtj)));
      }
    }
  }
  VelocityMatrices out;
  out.A.resize(V.n_free, V.n_free);
  out.A.setFromTriplets(tk.begin(), tk.end());
  out.Adot.resize(V.n_free, V.n_free);
  if (with_dot) out.Adot.setFromTriplets(td.begin(), td.end());
  return out;
}

} // namespace

VelocityMatrices assemble_velocity(const FESpace& V, const GeometryMaps& maps, const PhysicalConfig& cfg, bool with_dot,
                                   bool parallel)
{
  return assemble(V, maps, cfg, with_dot, parallel);
}

VelocityMatrices assemble_velocity_serial(const FESpace& V, const GeometryMaps& maps, const PhysicalConfig& cfg,
                                          bool with_dot)
{
  return assemble(V, maps, cfg, with_dot, false);
}

SpMat assemble_divergence(const FESpace& V)
{
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    const auto& vp = V.vq[q];
    const auto& cell = V.mesh.cells[vp.cell];
    const auto& pc = V.mesh.p1cells[vp.cell];
    for (int n = 0; n < 6; ++n)
      for (int comp = 0; comp < 2; ++comp) {
        const int f = V.free_dof(cell[n], comp);
        if (f < 0) continue;
        const double div = comp == 0 ? vp.N[n].d1() : vp.N[n].d2();
        for (int k = 0; k < 3; ++k) t.emplace_back(pc[k], f, vp.w * vp.L[k].value() * div);
      }
  }
  SpMat B(V.n_p, V.n_free);
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

Vec assemble_forcing(const FESpace& V, const GeometryMaps& maps, const SurfaceOps& ops, const ForcingData& data)
{
  Vec full = data.load.size() ? data.load : Vec::Zero(V.n_vel);
  if (!data.F1.empty())
    for (std::size_t q = 0; q < V.vq.size(); ++q) {
      const auto& vp = V.vq[q];
      const GeometryPoint& g = point(maps.vol, q);
      const Eigen::RowVector2d FM = data.F1[q].transpose() * g.M();
      const auto& cell = V.mesh.cells[vp.cell];
      for (int n = 0; n < 6; ++n)
        for (int comp = 0; comp < 2; ++comp) full(2 * cell[n] + comp) += vp.w * g.J.value() * vp.N[n].value() * FM(comp);
    }
  Vec surf = Vec::Zero(V.n_s);
  for (std::size_t q = 0; q < V.sq.size(); ++q) {
    const auto& b = V.sq[q];
    if (!data.F3.empty())
      for (int i = 0; i < 3; ++i) surf(2 * b.edge + i) -= b.w * ops.sigma * data.F3[q] * b.dN[i];
    if (!data.F4.empty()) {
      const GeometryPoint& g = point(maps.surf, q);
      const Eigen::RowVector2d FM = data.F4[q].transpose() * g.M();
      for (int i = 0; i < 3; ++i)
        for (int comp = 0; comp < 2; ++comp) full(2 * b.nodes[i] + comp) -= b.w * b.N[i] * FM(comp);
    }
  }
  if (!data.F5.empty())
    for (std::size_t q = 0; q < V.wq.size(); ++q) {
      const auto& b = V.wq[q];
      const GeometryPoint& g = point(maps.wall, q);
      const Eigen::RowVector2d tM = wall_tangent(b.tag).transpose() * g.M();
      for (int i = 0; i < 3; ++i)
        for (int comp = 0; comp < 2; ++comp)
          full(2 * b.nodes[i] + comp) -= b.w * g.J.value() * data.F5[q] * b.N[i] * tM(comp);
    }
  surf(0) -= ops.kappa * data.corner[0];
  surf(V.n_s - 1) -= ops.kappa * data.corner[1];
  return V.restrict_free(full) + ops.T.transpose() * surf;
}

} // namespace contactline
