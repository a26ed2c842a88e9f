#include "contactline/fe_space.hpp"

#include <cmath>
#include <map>

#include "contactline/error.hpp"

namespace contactline {

const std::array<std::array<double, 4>, 7>& triangle_rule()
{
  static const std::array<std::array<double, 4>, 7> rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    return std::array<std::array<double, 4>, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
                                                 {a1, b1, b1, w1},
                                                 {b1, a1, b1, w1},
                                                 {b1, b1, a1, w1},
                                                 {a2, b2, b2, w2},
                                                 {b2, a2, b2, w2},
                                                 {b2, b2, a2, w2}}};
  }();
  return rule;
}

const std::array<std::array<double, 2>, 4>& line_rule()
{
  static const std::array<std::array<double, 2>, 4> rule = [] {
    const double p1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double p2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double w1 = (18.0 + std::sqrt(30.0)) / 36.0, w2 = (18.0 - std::sqrt(30.0)) / 36.0;
    return std::array<std::array<double, 2>, 4>{
        {{0.5 * (1 - p2), 0.5 * w2}, {0.5 * (1 - p1), 0.5 * w1}, {0.5 * (1 + p1), 0.5 * w1}, {0.5 * (1 + p2), 0.5 * w2}}};
  }();
  return rule;
}

namespace {

// 1-D P2 basis on [0,1] with nodes (0, 1/2, 1) ordered end, mid, end
void p2_line(double t, std::array<double, 3>& N, std::array<double, 3>& dN)
{
  N = {(1 - t) * (1 - 2 * t), 4 * t * (1 - t), t * (2 * t - 1)};
  dN = {4 * t - 3, 4 - 8 * t, 4 * t - 1};
}

} // namespace

FESpace build_fe_space(const Mesh& mesh)
{
  FESpace V;
  V.mesh = mesh;
  const Mesh& m = V.mesh;
  const int fx = m.fine_nx(), fy = m.fine_ny();
  V.n_vel = 2 * m.n_nodes();
  V.n_p = m.n_vertices();
  V.n_s = fx;
  V.free_index.assign(V.n_vel, -1);
  for (int j = 0; j < fy; ++j)
    for (int i = 0; i < fx; ++i) {
      const int n = m.node(i, j);
      const bool wall = (i == 0 || i == fx - 1);
      const bool bottom = (j == 0);
      if (!wall) {
        V.free_index[2 * n] = V.n_free++;
        V.free_dofs.push_back(2 * n);
      }
      if (!bottom) {
        V.free_index[2 * n + 1] = V.n_free++;
        V.free_dofs.push_back(2 * n + 1);
      }
    }

  const double H = m.H;
  const auto& rule = triangle_rule();
  V.cell_begin.push_back(0);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cell = m.cells[c];
    std::array<std::array<double, 2>, 3> p;
    for (int k = 0; k < 3; ++k) p[k] = m.reference(cell[k]);
    const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    if (!(det > 0.0)) throw Error(ErrorKind::MeshFailure, "inverted reference cell");
    for (const auto& qr : rule) {
      const double xr = qr[0] * p[0][0] + qr[1] * p[1][0] + qr[2] * p[2][0];
      const double s = qr[0] * p[0][1] + qr[1] * p[1][1] + qr[2] * p[2][1];
      VolumePoint vp;
      V.basis_jets(static_cast<int>(c), xr, s, vp.N, vp.L);
      vp.x = m.map(xr, s);
      vp.w = qr[3] * 0.5 * det * (m.eq.zeta0(xr) + H);
      vp.cell = static_cast<int>(c);
      V.vq.push_back(vp);
    }
    V.cell_begin.push_back(static_cast<int>(V.vq.size()));
  }

  const auto& lr = line_rule();
  for (int k = 0; k < fx; ++k) V.surface_x.push_back(m.xr[k]);
  for (int i = 0; i + 2 < fx; i += 2) {
    const double xa = m.xr[i], xb = m.xr[i + 2], dx = xb - xa;
    for (const auto& g : lr) {
      const double x = xa + g[0] * dx;
      BoundaryPoint b;
      b.tag = BoundaryTag::Surface;
      b.x = {x, m.eq.zeta0(x)};
      b.w = g[1] * dx;
      b.nodes = {m.node(i, fy - 1), m.node(i + 1, fy - 1), m.node(i + 2, fy - 1)};
      p2_line(g[0], b.N, b.dN);
      for (auto& d : b.dN) d /= dx;
      b.edge = i / 2;
      V.sq.push_back(b);
      BoundaryPoint bb = b;
      bb.tag = BoundaryTag::Bottom;
      bb.x = {x, -H};
      bb.nodes = {m.node(i, 0), m.node(i + 1, 0), m.node(i + 2, 0)};
      V.wq.push_back(bb);
    }
  }
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : fx - 1;
    const double x1 = side == 0 ? -m.eq.cfg.ell : m.eq.cfg.ell;
    const double D = m.eq.zeta0(x1) + H;
    for (int j = 0; j + 2 < fy; j += 2) {
      const double sa = m.sr[j], sb = m.sr[j + 2], ds = sb - sa;
      for (const auto& g : lr) {
        const double s = sa + g[0] * ds;
        BoundaryPoint b;
        b.tag = side == 0 ? BoundaryTag::WallLeft : BoundaryTag::WallRight;
        b.x = {x1, -H + s * D};
        b.w = g[1] * ds * D;
        b.nodes = {m.node(i, j), m.node(i, j + 1), m.node(i, j + 2)};
        p2_line(g[0], b.N, b.dN);
        for (auto& d : b.dN) d /= ds * D;
        V.wq.push_back(b);
      }
    }
  }
  // owning cell of every boundary edge, for full gradients at boundary points
  std::map<std::array<int, 3>, int> edge_cell;
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cl = m.cells[c];
    const int ends[3][3] = {{0, 3, 1}, {1, 4, 2}, {2, 5, 0}};
    for (const auto& e : ends) {
      std::array<int, 3> key{cl[e[0]], cl[e[1]], cl[e[2]]};
      if (key[0] > key[2]) std::swap(key[0], key[2]);
      edge_cell[key] = static_cast<int>(c);
    }
  }
  auto attach = [&](BoundaryPoint& b) {
    std::array<int, 3> key = b.nodes;
    if (key[0] > key[2]) std::swap(key[0], key[2]);
    const auto it = edge_cell.find(key);
    if (it == edge_cell.end()) throw Error(ErrorKind::MeshFailure, "boundary edge without a cell");
    b.cell = it->second;
    const bool wall = b.tag == BoundaryTag::WallLeft || b.tag == BoundaryTag::WallRight;
    const double ry = wall ? (b.x[1] + H) / (m.eq.zeta0(b.x[0]) + H) : (b.tag == BoundaryTag::Surface ? 1.0 : 0.0);
    V.basis_jets(b.cell, b.x[0], ry, b.Nc, b.Lc);
  };
  for (auto& b : V.sq) attach(b);
  for (auto& b : V.wq) attach(b);
  return V;
}

void FESpace::basis_jets(int c, double xr, double s, std::array<Jet2, 6>& N, std::array<Jet2, 3>& L) const
{
  const auto& cell = mesh.cells[c];
  std::array<std::array<double, 2>, 3> p;
  for (int k = 0; k < 3; ++k) p[k] = mesh.reference(cell[k]);
  const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
  // barycentric coordinates as affine functions of (xr, s)
  std::array<std::array<double, 2>, 3> grad;
  grad[1] = {(p[2][1] - p[0][1]) / det, -(p[2][0] - p[0][0]) / det};
  grad[2] = {-(p[1][1] - p[0][1]) / det, (p[1][0] - p[0][0]) / det};
  grad[0] = {-grad[1][0] - grad[2][0], -grad[1][1] - grad[2][1]};
  std::array<double, 3> lam0;
  lam0[1] = grad[1][0] * (xr - p[0][0]) + grad[1][1] * (s - p[0][1]);
  lam0[2] = grad[2][0] * (xr - p[0][0]) + grad[2][1] * (s - p[0][1]);
  lam0[0] = 1.0 - lam0[1] - lam0[2];
  const auto z = mesh.eq.zeta_derivs(xr);
  const double D = z[0] + mesh.H;
  // s(x) = (x2 + H) / (zeta0(x1) + H) as a jet
  Jet2 S(s);
  S.coef(1, 0) = -s * z[1] / D;
  S.coef(0, 1) = 1.0 / D;
  S.coef(2, 0) = 0.5 * (-s * (z[2] / D - 2.0 * z[1] * z[1] / (D * D)));
  S.coef(1, 1) = -z[1] / (D * D);
  const Jet2 X = Jet2::variable(0, xr);
  std::array<Jet2, 3> lam;
  for (int k = 0; k < 3; ++k) lam[k] = lam0[k] + grad[k][0] * (X - xr) + grad[k][1] * (S - s);
  for (int k = 0; k < 3; ++k) {
    N[k] = lam[k] * (2.0 * lam[k] - 1.0);
    L[k] = lam[k];
  }
  N[3] = 4.0 * lam[0] * lam[1];
  N[4] = 4.0 * lam[1] * lam[2];
  N[5] = 4.0 * lam[2] * lam[0];
}

std::array<Jet2, 2> FESpace::boundary_velocity_jets(const Eigen::VectorXd& full, const BoundaryPoint& b) const
{
  const auto& cell = mesh.cells[b.cell];
  std::array<Jet2, 2> u{};
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 2; ++c) u[c] += full(2 * cell[a] + c) * b.Nc[a];
  return u;
}

Eigen::VectorXd FESpace::expand(const Eigen::VectorXd& free) const
{
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_vel);
  for (int k = 0; k < n_free; ++k) full(free_dofs[k]) = free(k);
  return full;
}

Eigen::VectorXd FESpace::restrict_free(const Eigen::VectorXd& full) const
{
  Eigen::VectorXd r(n_free);
  for (int k = 0; k < n_free; ++k) r(k) = full(free_dofs[k]);
  return r;
}

std::array<Jet2, 2> FESpace::velocity_jets(const Eigen::VectorXd& full, int q) const
{
  const auto& vp = vq[q];
  const auto& cell = mesh.cells[vp.cell];
  std::array<Jet2, 2> u;
  for (int a = 0; a < 6; ++a) {
    const double u0 = full(2 * cell[a]), u1 = full(2 * cell[a] + 1);
    if (u0 != 0.0) u[0] += u0 * vp.N[a];
    if (u1 != 0.0) u[1] += u1 * vp.N[a];
  }
  return u;
}

Jet2 FESpace::pressure_jet(const Eigen::VectorXd& p, int q) const
{
  const auto& vp = vq[q];
  const auto& c = mesh.p1cells[vp.cell];
  Jet2 r;
  for (int a = 0; a < 3; ++a) r += p(c[a]) * vp.L[a];
  return r;
}

double FESpace::boundary_pressure(const Eigen::VectorXd& p, const BoundaryPoint& b) const
{
  const auto& pc = mesh.p1cells[b.cell];
  double v = 0.0;
  for (int k = 0; k < 3; ++k) v += p(pc[k]) * b.Lc[k].value();
  return v;
}

} // namespace contactline
