#include "contactline/norms.hpp"

#include <algorithm>
#include <cmath>

namespace contactline {

WeightedNormEvaluator::WeightedNormEvaluator(const FESpace& V, double delta) : V_(&V), delta_(delta)
{
  const auto& eq = V.mesh.eq;
  wv_.reserve(V.vq.size());
  for (const auto& q : V.vq) wv_.push_back(std::pow(corner_distance(q.x[0], q.x[1], eq), 2.0 * delta));
  // surface line: Gauss points of the surface elements
  for (const auto& b : V.sq) {
    lx_.push_back(b.x[0]);
    lw_.push_back(b.w);
    ld_.push_back(std::pow(corner_distance(b.x[0], b.x[1], eq), delta));
  }
}

double WeightedNormEvaluator::volume(const std::vector<std::array<Jet2, 2>>& f, int k, bool weighted) const
{
  double s = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q) {
    double local = 0.0;
    for (int c = 0; c < 2; ++c)
      for (int order = 0; order <= k; ++order)
        for (int b = 0; b <= order; ++b) {
          const double d = f[q][c].derivative(order - b, b);
          // mixed partials counted once per multi-index
          local += d * d;
        }
    s += V_->vq[q].w * (weighted ? wv_[q] : 1.0) * local;
  }
  return std::sqrt(s);
}

double WeightedNormEvaluator::volume_scalar(const std::vector<Jet2>& f, int k, bool weighted) const
{
  std::vector<std::array<Jet2, 2>> v(f.size());
  for (std::size_t q = 0; q < f.size(); ++q) v[q] = {f[q], Jet2()};
  return volume(v, k, weighted);
}

double WeightedNormEvaluator::boundary(const Sampler& f, double s, bool weighted) const
{
  const int k = static_cast<int>(std::floor(s + 1e-12));
  const bool half = s - k > 0.25;
  const std::size_t n = lx_.size();
  std::vector<std::array<double, 4>> val(n);
  for (std::size_t i = 0; i < n; ++i) val[i] = f(lx_[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = lw_[i] * (weighted ? ld_[i] * ld_[i] : 1.0);
    for (int j = 0; j <= std::min(k, 3); ++j) sum += w * val[i][j] * val[i][j];
  }
  if (half && k <= 3) {
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double dx = lx_[i] - lx_[j];
        const double diff = val[i][k] - val[j][k];
        const double wt = weighted ? ld_[i] * ld_[j] : 1.0;
        g += lw_[i] * lw_[j] * wt * diff * diff / (dx * dx);
      }
    sum += g;
  }
  return std::sqrt(sum);
}

WeightedNormEvaluator::Sampler field_sampler(const SurfaceField& f)
{
  return [&f](double x) { return f.eval(x); };
}

WeightedNormEvaluator::Sampler p2_sampler(const FESpace& V, const Eigen::VectorXd& phi)
{
  const std::vector<double>& x = V.surface_x;
  return [&x, phi](double t) {
    const int ne = static_cast<int>(x.size() - 1) / 2;
    int e = static_cast<int>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
    e = std::clamp(e / 2, 0, ne - 1);
    const double a = x[2 * e], b = x[2 * e + 2], h = b - a, s = (t - a) / h;
    const double f0 = phi(2 * e), f1 = phi(2 * e + 1), f2 = phi(2 * e + 2);
    const double v = f0 * (1 - s) * (1 - 2 * s) + f1 * 4 * s * (1 - s) + f2 * s * (2 * s - 1);
    const double d = (f0 * (4 * s - 3) + f1 * (4 - 8 * s) + f2 * (4 * s - 1)) / h;
    const double dd = (4 * f0 - 8 * f1 + 4 * f2) / (h * h);
    return std::array<double, 4>{v, d, dd, 0.0};
  };
}

std::array<Jet2, 2> physical_velocity(const FESpace& V, const GeometryMaps& maps, const Eigen::VectorXd& w_full, int q)
{
  const auto w = V.velocity_jets(w_full, q);
  if (maps.vol.empty()) return w;
  const auto& g = maps.vol[q];
  const Jet2 K = reciprocal(g.J);
  return {K * w[0], g.A * K * w[0] + w[1]};
}

} // namespace contactline
