#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frachelm/vec3.hpp"

namespace frachelm {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points. Rules are cached and the returned
/// reference stays valid for the lifetime of the program.
const GaussRule& gauss_legendre(int n);

/// Integrates f over consecutive panels [breaks[i], breaks[i+1]].
template <class F>
auto integrate_panels(std::span<const double> breaks, int nodes, F&& f) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  const GaussRule& rule = gauss_legendre(nodes);
  R total{};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    R panel{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += half * panel;
  }
  return total;
}

/// Inserts the midpoint of every panel.
std::vector<double> bisect_panels(std::span<const double> breaks);

/// Pairwise (tree) summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

/// Product rule on the unit sphere: Gauss-Legendre in cos(polar angle) times
/// a uniform azimuthal rule. Exact for spherical harmonics of degree <= order.
struct SphereQuadrature {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return nodes.size(); }
};

SphereQuadrature make_sphere_quadrature(int order);

}  // namespace frachelm
