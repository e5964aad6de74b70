#pragma once

#include <span>
#include <vector>

#include "frachelm/grid.hpp"
#include "frachelm/quadrature.hpp"

namespace frachelm {

/// Product rule of the given order; throws ValidationError for order < 2.
SphereQuadrature sphere_quadrature(int order = 16);

/// Discrete density on the sphere: u^in(x) = sum_j w_j g_j e^{ik x.theta_j}.
struct HerglotzDensity {
  std::vector<Vec3> directions;
  std::vector<double> weights;
  std::vector<cplx> g;

  /// (sum w |g|^2)^{1/2}
  double l2_norm() const;
  /// Admission test for the small-data solver.
  bool is_small(double eps_small) const { return l2_norm() <= eps_small; }
  HerglotzDensity scaled(cplx c) const;

  static HerglotzDensity zero(const SphereQuadrature& quad);
  static HerglotzDensity constant(const SphereQuadrature& quad, cplx value);
  /// One direction with unit weight, i.e. the plane wave amplitude * e^{ik x.theta}.
  static HerglotzDensity point_mass(const Vec3& theta, cplx amplitude = 1.0);
  /// g(theta) = amplitude * exp(-(1 - theta.center) / width^2).
  static HerglotzDensity bump(const SphereQuadrature& quad, const Vec3& center, double width,
                              cplx amplitude = 1.0);
};

std::vector<cplx> herglotz_field(const HerglotzDensity& g, double k, std::span<const Vec3> points);
/// Same values on every grid node, using separable per-axis phases.
ComplexField herglotz_on_grid(const HerglotzDensity& g, double k, const BoxGrid& grid);

/// a e^{ik x.theta}; throws NonUnitDirection unless |theta| = 1.
std::vector<cplx> plane_wave(cplx a, double k, const Vec3& theta, std::span<const Vec3> points);
ComplexField plane_wave_on_grid(cplx a, double k, const Vec3& theta, const BoxGrid& grid);

struct SteinTomasRow {
  double L = 0.0;
  int n = 0;
  double ratio = 0.0;  // ||u^in||_{L4(box)} / ||g||_{L2(S^2)}
};

/// L4-to-L2 ratios on the boxes [-L, L]^3. Grid spacing is min(0.25, 1/k).
/// Plane waves are not in L4, so this is only meaningful for smooth g.
std::vector<SteinTomasRow> stein_tomas_diagnostic(const HerglotzDensity& g, double k,
                                                  std::span<const double> box_half_widths);

}  // namespace frachelm
