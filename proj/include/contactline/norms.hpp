#pragma once

#include <array>
#include <functional>
#include <vector>

#include "contactline/fe_space.hpp"
#include "contactline/geometry.hpp"

namespace contactline {

/// Weighted Sobolev norms with weight d^{2 delta}, d the distance to the contact points.
class WeightedNormEvaluator {
public:
  using Sampler = std::function<std::array<double, 4>(double)>;

  WeightedNormEvaluator(const FESpace& V, double delta);

  double delta() const { return delta_; }

  /// (sum_{|a| <= k} int d^{2 delta} |d^a f|^2)^{1/2} for fields given as jets at
  /// the volume points (k <= 2). `weighted = false` gives the plain Sobolev norm.
  double volume(const std::vector<std::array<Jet2, 2>>& f, int k, bool weighted = true) const;
  double volume_scalar(const std::vector<Jet2>& f, int k, bool weighted = true) const;

  /// Norm of order s on the surface line (-ell, ell): integer s gives
  /// sum_{j <= s} int d^{2 delta} |f^(j)|^2; half-integer s = k + 1/2 adds the
  /// weighted Gagliardo seminorm of f^(k),
  ///   int int d(x)^delta d(y)^delta |g(x) - g(y)|^2 / |x - y|^2.
  double boundary(const Sampler& f, double s, bool weighted = true) const;

  /// Values of d^{2 delta} at volume points.
  const std::vector<double>& volume_weights() const { return wv_; }

  /// Quadrature nodes on the surface line used by boundary().
  const std::vector<double>& line_nodes() const { return lx_; }

private:
  const FESpace* V_;
  double delta_;
  std::vector<double> wv_;       ///< d^{2 delta} at volume points
  std::vector<double> lx_, lw_;  ///< surface-line quadrature nodes and weights
  std::vector<double> ld_;       ///< d^{delta} at those nodes
};

/// Sampler of a surface field (holds a reference: `f` must outlive it).
WeightedNormEvaluator::Sampler field_sampler(const SurfaceField& f);

/// Sampler of a P2 surface vector (value and first two derivatives, third set to zero).
WeightedNormEvaluator::Sampler p2_sampler(const FESpace& V, const Eigen::VectorXd& phi);

/// Jets of the physical velocity u = M w at volume point q (w given on all nodes).
std::array<Jet2, 2> physical_velocity(const FESpace& V, const GeometryMaps& maps, const Eigen::VectorXd& w_full, int q);

} // namespace contactline
