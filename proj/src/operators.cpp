#include "contactline/operators.hpp"

#include "contactline/error.hpp"

namespace contactline {

std::array<std::array<Jet2, 2>, 2> calA_jets(const GeometryPoint& g)
{
  const Jet2 K = reciprocal(g.J);
  return {{{Jet2(1.0), -1.0 * (g.A * K)}, {Jet2(0.0), K}}};
}

namespace {

void require_rank(OpKind op, const FieldJets& f, int rank)
{
  if (f.rank != rank)
    throw Error(ErrorKind::RankMismatch, "operator applied to a field of the wrong rank",
                {{"operator", static_cast<int>(op)}, {"expected", rank}, {"got", f.rank}});
}

// (grad_A f)_i = calA_ij d_j f
Eigen::Vector2d grad_A(const Mat2& a, const Jet2& f)
{
  return {a(0, 0) * f.d1() + a(0, 1) * f.d2(), a(1, 0) * f.d1() + a(1, 1) * f.d2()};
}

Mat2 symgrad(const Mat2& a, const std::array<Jet2, 2>& u)
{
  Mat2 G; // G(j,k) = d_k u_j
  G << u[0].d1(), u[0].d2(), u[1].d1(), u[1].d2();
  return a * G.transpose() + G * a.transpose();
}

// Lap_A f = calA_ij d_j (calA_ik d_k f)
double lap_A(const std::array<std::array<Jet2, 2>, 2>& a, const Jet2& f)
{
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const double daik = j == 0 ? a[i][k].d1() : a[i][k].d2();
        const double dkf = k == 0 ? f.d1() : f.d2();
        const double djkf = j != k ? f.d12() : (j == 0 ? f.d11() : f.d22());
        r += a[i][j].value() * (daik * dkf + a[i][k].value() * djkf);
      }
  return r;
}

} // namespace

OpValue apply_transformed(OpKind op, const FieldJets& f, const GeometryPoint& g, double mu)
{
  const Mat2 a = g.calA();
  OpValue r;
  switch (op) {
  case OpKind::GradA:
    require_rank(op, f, 0);
    r.rank = 1;
    r.vec = grad_A(a, f.c[0]);
    break;
  case OpKind::DivA:
    require_rank(op, f, 1);
    r.rank = 0;
    for (int i = 0; i < 2; ++i) r.scalar += grad_A(a, f.c[i])(i);
    break;
  case OpKind::LapA: {
    const auto aj = calA_jets(g);
    if (f.rank == 0) {
      r.rank = 0;
      r.scalar = lap_A(aj, f.c[0]);
    } else if (f.rank == 1) {
      r.rank = 1;
      r.vec = {lap_A(aj, f.c[0]), lap_A(aj, f.c[1])};
    } else {
      require_rank(op, f, 0);
    }
    break;
  }
  case OpKind::SymGradA:
    require_rank(op, f, 1);
    r.rank = 2;
    r.tensor = symgrad(a, f.c);
    break;
  case OpKind::StressA:
    require_rank(op, f, 1);
    r.rank = 2;
    r.tensor = f.pressure.value() * Mat2::Identity() - mu * symgrad(a, f.c);
    break;
  }
  return r;
}

Eigen::Vector2d div_stress(const FieldJets& f, const GeometryPoint& g, double mu)
{
  require_rank(OpKind::StressA, f, 1);
  const auto a = calA_jets(g);
  // S_ij as first-order jets, then (div_A S)_i = calA_jk d_k S_ij
  std::array<std::array<Jet1, 2>, 2> S;
  std::array<std::array<Jet1, 2>, 2> du; // du[j][k] = d_k u_j
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) du[j][k] = f.c[j].diff(k);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet1 d;
      for (int k = 0; k < 2; ++k)
        d += a[i][k].truncate<1>() * du[j][k] + a[j][k].truncate<1>() * du[i][k];
      S[i][j] = (i == j ? f.pressure.truncate<1>() : Jet1()) - mu * d;
    }
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r(i) += a[j][k].value() * (k == 0 ? S[i][j].d1() : S[i][j].d2());
  return r;
}

std::vector<OpValue> apply_transformed_field(OpKind op, const FESpace& V, const GeometryMaps& maps,
                                             const Eigen::VectorXd& u_full, const Eigen::VectorXd& p, double mu,
                                             bool scalar_field)
{
  std::vector<OpValue> out(V.vq.size());
  for (std::size_t q = 0; q < V.vq.size(); ++q) {
    FieldJets f;
    if (scalar_field) {
      // scalar P2 field stored in the first component slot of u_full
      const auto& vp = V.vq[q];
      const auto& cell = V.mesh.cells[vp.cell];
      Jet2 s;
      for (int a = 0; a < 6; ++a) s += u_full(2 * cell[a]) * vp.N[a];
      f = FieldJets::scalar(s);
    } else {
      const auto u = V.velocity_jets(u_full, static_cast<int>(q));
      f = FieldJets::vector(u[0], u[1]);
      if (p.size() > 0) f.pressure = V.pressure_jet(p, static_cast<int>(q));
    }
    const GeometryPoint& g = maps.vol.empty() ? GeometryPoint{} : maps.vol[q];
    out[q] = apply_transformed(op, f, g, mu);
  }
  return out;
}

} // namespace contactline
