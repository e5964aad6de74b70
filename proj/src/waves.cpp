#include "frachelm/waves.hpp"

#include <cmath>

#include "frachelm/errors.hpp"
#include "frachelm/fieldgrid.hpp"

namespace frachelm {

namespace {

void require_unit(const Vec3& theta) {
  if (std::abs(norm(theta) - 1.0) > 1e-12) {
    throw Error(ErrorKind::NonUnitDirection, "direction must have unit length");
  }
}

}  // namespace

SphereQuadrature sphere_quadrature(int order) {
  if (order < 2) throw Error(ErrorKind::ValidationError, "sphere quadrature order must be >= 2");
  return make_sphere_quadrature(order);
}

double HerglotzDensity::l2_norm() const {
  std::vector<double> terms(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) terms[j] = weights[j] * std::norm(g[j]);
  return std::sqrt(pairwise_sum(terms));
}

HerglotzDensity HerglotzDensity::scaled(cplx c) const {
  HerglotzDensity out = *this;
  for (cplx& v : out.g) v *= c;
  return out;
}

HerglotzDensity HerglotzDensity::zero(const SphereQuadrature& quad) { return constant(quad, 0.0); }

HerglotzDensity HerglotzDensity::constant(const SphereQuadrature& quad, cplx value) {
  return {quad.nodes, quad.weights, std::vector<cplx>(quad.size(), value)};
}

HerglotzDensity HerglotzDensity::point_mass(const Vec3& theta, cplx amplitude) {
  require_unit(theta);
  return {{theta}, {1.0}, {amplitude}};
}

HerglotzDensity HerglotzDensity::bump(const SphereQuadrature& quad, const Vec3& center,
                                      double width, cplx amplitude) {
  require_unit(center);
  if (!(width > 0.0)) throw Error(ErrorKind::ValidationError, "bump width must be positive");
  HerglotzDensity out = constant(quad, 0.0);
  for (std::size_t j = 0; j < quad.size(); ++j) {
    out.g[j] = amplitude * std::exp(-(1.0 - dot(quad.nodes[j], center)) / (width * width));
  }
  return out;
}

std::vector<cplx> herglotz_field(const HerglotzDensity& g, double k, std::span<const Vec3> points) {
  std::vector<cplx> out(points.size());
  const std::size_t m = g.g.size();
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < points.size(); ++p) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      sum += g.weights[j] * g.g[j] * std::polar(1.0, k * dot(points[p], g.directions[j]));
    }
    out[p] = sum;
  }
  return out;
}

ComplexField herglotz_on_grid(const HerglotzDensity& g, double k, const BoxGrid& grid) {
  grid.validate();
  const int n = grid.n;
  const std::size_t m = g.g.size();
  // phase[axis][node][i] = e^{ik theta_axis x_i}
  std::vector<cplx> px(m * n), py(m * n), pz(m * n);
  for (std::size_t j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = grid.coord(i);
      px[j * n + i] = g.weights[j] * g.g[j] * std::polar(1.0, k * g.directions[j].x * x);
      py[j * n + i] = std::polar(1.0, k * g.directions[j].y * x);
      pz[j * n + i] = std::polar(1.0, k * g.directions[j].z * x);
    }
  }
  ComplexField out(grid);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    std::vector<cplx> row(m);
    for (int jj = 0; jj < n; ++jj) {
      for (std::size_t d = 0; d < m; ++d) row[d] = px[d * n + i] * py[d * n + jj];
      for (int kk = 0; kk < n; ++kk) {
        cplx sum = 0.0;
        for (std::size_t d = 0; d < m; ++d) sum += row[d] * pz[d * n + kk];
        out[grid.index(i, jj, kk)] = sum;
      }
    }
  }
  return out;
}

std::vector<cplx> plane_wave(cplx a, double k, const Vec3& theta, std::span<const Vec3> points) {
  require_unit(theta);
  std::vector<cplx> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) out[p] = a * std::polar(1.0, k * dot(points[p], theta));
  return out;
}

ComplexField plane_wave_on_grid(cplx a, double k, const Vec3& theta, const BoxGrid& grid) {
  require_unit(theta);
  ComplexField out(grid);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int l = 0; l < grid.n; ++l) {
        out[grid.index(i, j, l)] = a * std::polar(1.0, k * dot(grid.node(i, j, l), theta));
      }
    }
  }
  return out;
}

std::vector<SteinTomasRow> stein_tomas_diagnostic(const HerglotzDensity& g, double k,
                                                  std::span<const double> box_half_widths) {
  const double gnorm = g.l2_norm();
  if (!(gnorm > 0.0)) throw Error(ErrorKind::ValidationError, "Stein-Tomas diagnostic needs g != 0");
  const double h_target = std::min(0.25, 1.0 / k);
  std::vector<SteinTomasRow> rows;
  for (double L : box_half_widths) {
    const int n = std::max(8, 2 * static_cast<int>(std::ceil(L / h_target)));
    const BoxGrid grid{L, n};
    rows.push_back({L, n, lp_norm(herglotz_on_grid(g, k, grid), 4.0) / gnorm});
  }
  return rows;
}

}  // namespace frachelm
