#include <cmath>

#include "doctest.h"
#include "frachelm/errors.hpp"
#include "frachelm/farfield.hpp"
#include "frachelm/fieldgrid.hpp"
#include "frachelm/waves.hpp"

using namespace frachelm;

namespace {

const BoxGrid kGrid{1.0, 16};
const ScatteringParams kParams{0.9, 4.0, 1, 1.0};
const Vec3 kX{1.0, 0.0, 0.0};
const Vec3 kDiag = normalized(Vec3{1.0, 1.0, 1.0});

const Potential& q16() {
  static const Potential Q = stock_potential().sample(kGrid);
  return Q;
}

const GreenOperator& g16() {
  static const GreenOperator G(kGrid, kParams);
  return G;
}

cplx amplitude(double a, const Vec3& theta, const Vec3& x_hat, const ScatteringParams& p = kParams) {
  const ComplexField u_in = plane_wave_on_grid(a, p.k, theta, kGrid);
  const SolveReport r = p.branch == 1 ? picard_solve(q16(), u_in, g16()) : picard_solve(q16(), u_in, p);
  return scattering_amplitude(q16(), r.u, p, x_hat);
}

cplx born(double a, const Vec3& theta, const Vec3& x_hat) {
  return a * a * a * fourier_at(q16(), kParams.k * (x_hat - theta));
}

}  // namespace

TEST_CASE("scattering amplitude basics") {
  const Potential zero(kGrid, std::vector<double>(kGrid.size(), 0.0));
  const ComplexField u_in = plane_wave_on_grid(0.1, kParams.k, kX, kGrid);
  CHECK(scattering_amplitude(zero, u_in, kParams, kDiag) == cplx(0.0));

  const cplx f = amplitude(0.1, kX, kDiag);
  const cplx b = born(0.1, kX, kDiag);
  CHECK(std::abs(f - b) <= 0.05 * std::abs(b));

  // Born error is O(a^5) against an O(a^3) signal
  const double e1 = std::abs(amplitude(0.2, kX, kDiag) - born(0.2, kX, kDiag)) / std::abs(born(0.2, kX, kDiag));
  const double e2 = std::abs(amplitude(0.1, kX, kDiag) - born(0.1, kX, kDiag)) / std::abs(born(0.1, kX, kDiag));
  CHECK(e1 / e2 >= 3.0);

  ScatteringParams hi = kParams;
  hi.k = 40.0;
  try {
    scattering_amplitude(q16(), u_in, hi, kX);
    FAIL("expected UnderResolvedPhase");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnderResolvedPhase);
  }
}

TEST_CASE("incoming branch is the complex conjugate problem") {
  ScatteringParams in = kParams;
  in.branch = -1;
  const cplx out = amplitude(0.3, kX, kDiag);
  const cplx back = amplitude(0.3, -kX, -kDiag, in);
  CHECK(std::abs(back - std::conj(out)) <= 1e-10 * std::abs(out));
}

TEST_CASE("far-field amplitude converges under refinement") {
  const Vec3 x = kDiag;
  std::vector<cplx> vals;
  for (int n : {16, 32}) {
    const BoxGrid g{1.0, n};
    const Potential Q = stock_potential().sample(g);
    const SolveReport r = picard_solve(Q, plane_wave_on_grid(0.3, kParams.k, kX, g), kParams);
    vals.push_back(scattering_amplitude(Q, r.u, kParams, x));
  }
  CHECK(std::abs(vals[0] - vals[1]) <= 0.02 * std::abs(vals[1]));
}

TEST_CASE("near field approaches the far-field pattern") {
  const SolveReport r = picard_solve(q16(), plane_wave_on_grid(0.3, kParams.k, kX, kGrid), g16());
  const std::vector<double> Rs{10.0, 20.0, 40.0, 80.0};
  const auto gaps = near_far_consistency(q16(), r.u, kParams, kDiag, Rs);
  REQUIRE(gaps.size() == 4);
  for (const auto& g : gaps) CHECK(g.relative);
  CHECK(gaps.back().gap < gaps.front().gap);
  CHECK(gaps.back().gap <= 0.05);

  const Potential zero(kGrid, std::vector<double>(kGrid.size(), 0.0));
  const auto z = near_far_consistency(zero, r.u, kParams, kDiag, Rs);
  for (const auto& g : z) {
    CHECK(!g.relative);
    CHECK(g.gap == 0.0);
  }
}

TEST_CASE("Herglotz superposition") {
  PlaneWaveSolveCache cache(q16(), kParams);
  const std::vector<Vec3> dirs{kDiag, -kX};

  const auto zero = herglotz_superposition_report(cache, HerglotzDensity::point_mass(kX, 0.0), dirs);
  for (const auto& row : zero) {
    CHECK(row.lhs == cplx(0.0));
    CHECK(row.rhs == cplx(0.0));
  }

  // one direction: both sides are the same solve
  const auto single = herglotz_superposition_report(cache, HerglotzDensity::point_mass(kX, 0.2), dirs);
  for (const auto& row : single) CHECK(row.discrepancy <= 1e-12);
  const std::size_t after = cache.solves();
  cache.amplitude(kDiag, kX, 0.2);
  CHECK(cache.solves() == after);

  // two directions differ only by cross terms of the cubic; doubling g scales the far field by about 8
  HerglotzDensity two;
  two.directions = {kX, normalized(Vec3{0.0, 1.0, 1.0})};
  two.weights = {1.0, 1.0};
  two.g = {0.1, 0.1};
  const auto a = herglotz_superposition_report(cache, two, dirs);
  const auto b = herglotz_superposition_report(cache, two.scaled(2.0), dirs);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(b[i].lhs) / std::abs(a[i].lhs) == doctest::Approx(8.0).epsilon(0.1));
    CHECK(a[i].discrepancy > 0.0);
  }
}
