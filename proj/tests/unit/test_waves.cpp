#include <cmath>
#include <numbers>

#include "doctest.h"
#include "frachelm/errors.hpp"
#include "frachelm/fieldgrid.hpp"
#include "frachelm/waves.hpp"

using namespace frachelm;

namespace {

template <class F>
double sphere_sum(const SphereQuadrature& q, F&& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) total += q.weights[i] * f(q.nodes[i]);
  return total;
}

}  // namespace

TEST_CASE("sphere quadrature") {
  const SphereQuadrature q = sphere_quadrature(16);
  const double pi = std::numbers::pi;
  CHECK(sphere_sum(q, [](const Vec3&) { return 1.0; }) == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(sphere_sum(q, [](const Vec3& v) { return v.z * v.z; }) == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  CHECK(sphere_sum(q, [](const Vec3& v) { return v.x * v.x * v.y * v.y; }) == doctest::Approx(4 * pi / 15).epsilon(1e-13));
  CHECK(sphere_sum(q, [](const Vec3& v) { return std::pow(v.x, 4); }) == doctest::Approx(4 * pi / 5).epsilon(1e-13));
  CHECK(std::abs(sphere_sum(q, [](const Vec3& v) { return v.x * v.y * v.z * v.z; })) < 1e-14);
  for (const Vec3& v : q.nodes) CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-14));

  const double k = 5.0;
  const SphereQuadrature fine = sphere_quadrature(32);
  CHECK(sphere_sum(fine, [&](const Vec3& v) { return std::cos(k * v.z); }) ==
        doctest::Approx(4 * pi * std::sin(k) / k).epsilon(1e-12));
  CHECK_THROWS_AS(sphere_quadrature(1), Error);
}

TEST_CASE("Herglotz densities and fields") {
  const SphereQuadrature q = sphere_quadrature(24);
  const double k = 3.0;
  const std::vector<Vec3> pts{{0.0, 0.0, 0.0}, {0.3, -0.4, 1.2}, {2.0, 1.0, -1.0}};

  for (const cplx& v : herglotz_field(HerglotzDensity::zero(q), k, pts)) CHECK(v == cplx(0.0));

  // g = 1 gives 4 pi sin(k|x|)/(k|x|)
  const std::vector<cplx> c = herglotz_field(HerglotzDensity::constant(q, 1.0), k, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = norm(pts[i]);
    const double ref = r == 0.0 ? 4 * std::numbers::pi : 4 * std::numbers::pi * std::sin(k * r) / (k * r);
    CHECK(std::abs(c[i] - ref) < 1e-10);
  }
  CHECK(HerglotzDensity::constant(q, 2.0).l2_norm() == doctest::Approx(2.0 * std::sqrt(4 * std::numbers::pi)));
  CHECK(HerglotzDensity::constant(q, 2.0).is_small(10.0));
  CHECK(!HerglotzDensity::constant(q, 2.0).is_small(1.0));

  // plane wave is a point-mass density
  const Vec3 theta = normalized(Vec3{1.0, 2.0, -2.0});
  const cplx amp(0.2, -0.1);
  const auto pw = plane_wave(amp, k, theta, pts);
  const auto pm = herglotz_field(HerglotzDensity::point_mass(theta, amp), k, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(pw[i] - pm[i]) < 1e-15);
  CHECK_THROWS_AS(plane_wave(1.0, k, {1.0, 0.0, 1e-3}, pts), Error);

  // separable grid evaluation
  const BoxGrid g{1.0, 8};
  const HerglotzDensity b = HerglotzDensity::bump(q, theta, 0.5, cplx(1.0, 1.0));
  const ComplexField on_grid = herglotz_on_grid(b, k, g);
  std::vector<Vec3> nodes;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int l = 0; l < 8; ++l) nodes.push_back(g.node(i, j, l));
  const auto direct = herglotz_field(b, k, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(std::abs(on_grid[i] - direct[i]) < 1e-12);
  const ComplexField pwg = plane_wave_on_grid(amp, k, theta, g);
  const auto pwd = plane_wave(amp, k, theta, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(std::abs(pwg[i] - pwd[i]) < 1e-14);
}

TEST_CASE("lattice plane waves solve the homogeneous equation") {
  // k theta on the lattice pi/L Z^3 makes the wave periodic on the box
  const BoxGrid g{1.0, 16};
  const double pi = std::numbers::pi;
  for (const Vec3& kv : {Vec3{2 * pi, 0, 0}, Vec3{0, 3 * pi, 4 * pi}}) {
    const double k = norm(kv);
    const ComplexField u = plane_wave_on_grid(1.0, k, kv / k, g);
    for (double s : {0.85, 1.0, 1.2}) {
      const ComplexField res = frac_laplacian_apply(u, s) - std::pow(k, 2 * s) * u;
      CHECK(lp_norm(res, 2.0) <= 1e-10 * std::pow(k, 2 * s) * lp_norm(u, 2.0));
    }
  }
}

TEST_CASE("Stein-Tomas diagnostic") {
  const SphereQuadrature q = sphere_quadrature(16);
  const HerglotzDensity g = HerglotzDensity::bump(q, {0, 0, 1}, 0.7);
  const std::vector<double> Ls{1.0, 2.0, 4.0, 8.0};
  const auto rows = stein_tomas_diagnostic(g, 2.0, Ls);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].ratio > rows[i - 1].ratio);
  // a smooth density is in L4: the L4 tail beyond L is O(1/L), so increments
  // approach a halving per doubling of the box
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(rows[i - 1].ratio - rows[i - 2].ratio >= 1.5 * (rows[i].ratio - rows[i - 1].ratio));
  }
  const auto scaled = stein_tomas_diagnostic(g.scaled(cplx(0.0, 3.0)), 2.0, Ls);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(scaled[i].ratio == doctest::Approx(rows[i].ratio).epsilon(1e-13));
  CHECK_THROWS_AS(stein_tomas_diagnostic(HerglotzDensity::zero(q), 2.0, Ls), Error);
}
