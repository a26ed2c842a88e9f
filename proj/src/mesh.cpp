#include "contactline/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "contactline/error.hpp"

namespace contactline {

namespace {

// nodes of [0, R] graded toward 0 (r_k = R (k/n)^{1/gamma})
std::vector<double> graded(double R, int n, double gamma)
{
  std::vector<double> r(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) r[k] = R * std::pow(static_cast<double>(k) / n, 1.0 / gamma);
  r[n] = R;
  return r;
}

std::vector<double> refine(const std::vector<double>& c)
{
  std::vector<double> f(2 * c.size() - 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    f[2 * i] = c[i];
    if (i + 1 < c.size()) f[2 * i + 1] = 0.5 * (c[i] + c[i + 1]);
  }
  return f;
}

double diam(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c)
{
  return std::max({std::hypot(a[0] - b[0], a[1] - b[1]), std::hypot(b[0] - c[0], b[1] - c[1]),
                   std::hypot(c[0] - a[0], c[1] - a[1])});
}

} // namespace

std::array<double, 2> Mesh::map(double x, double s) const
{
  return {x, -H + s * (eq.zeta0(x) + H)};
}

std::array<double, 2> Mesh::reference(int n) const
{
  const int i = n % fine_nx(), j = n / fine_nx();
  return {xr[i], sr[j]};
}

double Mesh::max_cell_diameter() const
{
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, diam(nodes[c[0]], nodes[c[1]], nodes[c[2]]));
  return m;
}

double Mesh::min_corner_cell_diameter() const
{
  double m = std::numeric_limits<double>::infinity();
  const int a = surface_node(0), b = surface_node(2 * nx);
  for (const auto& c : cells)
    for (int k = 0; k < 3; ++k)
      if (c[k] == a || c[k] == b) m = std::min(m, diam(nodes[c[0]], nodes[c[1]], nodes[c[2]]));
  return m;
}

Mesh build_mesh(const EquilibriumState& eq, double h, double grading)
{
  if (!(h > 0.0)) throw Error(ErrorKind::MeshFailure, "mesh size must be positive", {{"h", h}});
  if (!(grading > 0.0 && grading <= 1.0))
    throw Error(ErrorKind::MeshFailure, "grading exponent must lie in (0, 1]", {{"grading", grading}});
  Mesh m;
  m.eq = eq;
  m.H = eq.cfg.H_bot;
  m.h = h;
  m.grading = grading;
  const double ell = eq.cfg.ell;
  const int nhalf = std::max(1, static_cast<int>(std::ceil(ell / (grading * h) - 1e-9)));
  const auto rx = graded(ell, nhalf, grading);
  std::vector<double> xc(2 * nhalf + 1);
  for (int k = 0; k <= nhalf; ++k) {
    xc[k] = -ell + rx[k];
    xc[2 * nhalf - k] = ell - rx[k];
  }
  xc[nhalf] = 0.0;
  double height = 0.0;
  for (double z : eq.zeta.values()) height = std::max(height, z);
  height += m.H;
  const int ns = std::max(1, static_cast<int>(std::ceil(height / (grading * h) - 1e-9)));
  const auto rs = graded(1.0, ns, grading);
  std::vector<double> sc(ns + 1);
  for (int k = 0; k <= ns; ++k) sc[ns - k] = 1.0 - rs[k];
  sc[0] = 0.0;
  sc[ns] = 1.0;

  m.nx = 2 * nhalf;
  m.ny = ns;
  m.xr = refine(xc);
  m.sr = refine(sc);
  for (int j = 0; j < m.fine_ny(); ++j)
    for (int i = 0; i < m.fine_nx(); ++i) m.nodes.push_back(m.map(m.xr[i], m.sr[j]));

  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i) {
      const int I = 2 * i, J = 2 * j;
      const int a = m.node(I, J), b = m.node(I + 2, J), c = m.node(I + 2, J + 2), d = m.node(I, J + 2);
      const int mab = m.node(I + 1, J), mbc = m.node(I + 2, J + 1), mcd = m.node(I + 1, J + 2), mda = m.node(I, J + 1);
      const int ctr = m.node(I + 1, J + 1);
      const int va = m.vertex(i, j), vb = m.vertex(i + 1, j), vc = m.vertex(i + 1, j + 1), vd = m.vertex(i, j + 1);
      if (i < nhalf) {
        // diagonal a-c (mirror image of the right half)
        m.cells.push_back({a, b, c, mab, mbc, ctr});
        m.p1cells.push_back({va, vb, vc});
        m.cells.push_back({a, c, d, ctr, mcd, mda});
        m.p1cells.push_back({va, vc, vd});
      } else {
        // diagonal b-d
        m.cells.push_back({a, b, d, mab, ctr, mda});
        m.p1cells.push_back({va, vb, vd});
        m.cells.push_back({b, c, d, mbc, mcd, ctr});
        m.p1cells.push_back({vb, vc, vd});
      }
    }
  for (const auto& c : m.cells) {
    const auto &p = m.nodes[c[0]], &q = m.nodes[c[1]], &r = m.nodes[c[2]];
    const double area = 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
    if (!(area > 0.0)) throw Error(ErrorKind::MeshFailure, "degenerate or inverted cell", {{"area", area}});
  }
  return m;
}

MeshData export_mesh(const Mesh& mesh)
{
  MeshData d;
  d.vertices = mesh.nodes;
  d.cells = mesh.cells;
  const int fx = mesh.fine_nx(), fy = mesh.fine_ny();
  for (int i = 0; i + 2 < fx; i += 2) {
    d.boundary.push_back({BoundaryTag::Surface, {mesh.node(i, fy - 1), mesh.node(i + 2, fy - 1), mesh.node(i + 1, fy - 1)}});
    d.boundary.push_back({BoundaryTag::Bottom, {mesh.node(i, 0), mesh.node(i + 2, 0), mesh.node(i + 1, 0)}});
  }
  for (int j = 0; j + 2 < fy; j += 2) {
    d.boundary.push_back({BoundaryTag::WallLeft, {mesh.node(0, j), mesh.node(0, j + 2), mesh.node(0, j + 1)}});
    d.boundary.push_back({BoundaryTag::WallRight, {mesh.node(fx - 1, j), mesh.node(fx - 1, j + 2), mesh.node(fx - 1, j + 1)}});
  }
  return d;
}

std::string to_string(BoundaryTag tag)
{
  switch (tag) {
  case BoundaryTag::Surface: return "surface";
  case BoundaryTag::WallLeft: return "wall_left";
  case BoundaryTag::WallRight: return "wall_right";
  case BoundaryTag::Bottom: return "bottom";
  }
  return "unknown";
}

void write_mesh(std::ostream& out, const MeshData& d)
{
  out.precision(17);
  out << "# contactline mesh, P2 triangles\n";
  out << "vertices " << d.vertices.size() << "\n";
  for (const auto& v : d.vertices) out << v[0] << " " << v[1] << "\n";
  out << "cells " << d.cells.size() << "\n";
  for (const auto& c : d.cells) out << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << " " << c[4] << " " << c[5] << "\n";
  out << "boundary " << d.boundary.size() << "\n";
  for (const auto& [tag, e] : d.boundary) out << to_string(tag) << " " << e[0] << " " << e[1] << " " << e[2] << "\n";
}

MeshData read_mesh(std::istream& in)
{
  MeshData d;
  std::string line, word;
  auto next = [&]() {
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') return true;
    return false;
  };
  auto fail = [](const std::string& what) { return Error(ErrorKind::MeshFailure, "malformed mesh file: " + what); };
  std::size_t n = 0;
  if (!next()) throw fail("missing vertices");
  std::istringstream(line) >> word >> n;
  if (word != "vertices") throw fail("expected vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (!next()) throw fail("truncated vertices");
    std::array<double, 2> v{};
    std::istringstream(line) >> v[0] >> v[1];
    d.vertices.push_back(v);
  }
  if (!next()) throw fail("missing cells");
  std::istringstream(line) >> word >> n;
  if (word != "cells") throw fail("expected cells");
  for (std::size_t i = 0; i < n; ++i) {
    if (!next()) throw fail("truncated cells");
    std::array<int, 6> c{};
    std::istringstream ss(line);
    for (auto& k : c) ss >> k;
    d.cells.push_back(c);
  }
  if (!next()) throw fail("missing boundary");
  std::istringstream(line) >> word >> n;
  if (word != "boundary") throw fail("expected boundary");
  for (std::size_t i = 0; i < n; ++i) {
    if (!next()) throw fail("truncated boundary");
    std::istringstream ss(line);
    std::string t;
    std::array<int, 3> e{};
    ss >> t >> e[0] >> e[1] >> e[2];
    BoundaryTag tag = BoundaryTag::Surface;
    if (t == "wall_left") tag = BoundaryTag::WallLeft;
    else if (t == "wall_right") tag = BoundaryTag::WallRight;
    else if (t == "bottom") tag = BoundaryTag::Bottom;
    else if (t != "surface") throw fail("unknown tag " + t);
    d.boundary.push_back({tag, e});
  }
  return d;
}

} // namespace contactline
