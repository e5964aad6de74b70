#include <cmath>
#include <numbers>

#include "doctest.h"
#include "frachelm/errors.hpp"
#include "frachelm/fieldgrid.hpp"
#include "frachelm/forward.hpp"
#include "frachelm/waves.hpp"

using namespace frachelm;

namespace {

const BoxGrid kSmall{1.0, 16};
const ScatteringParams kParams{0.9, 4.0, 1, 1.0};
const Vec3 kX{1.0, 0.0, 0.0};

const GreenOperator& small_green() {
  static const GreenOperator G(kSmall, kParams);
  return G;
}

const Potential& small_q() {
  static const Potential Q = stock_potential().sample(kSmall);
  return Q;
}

Potential zero_q(const BoxGrid& g) { return Potential(g, std::vector<double>(g.size(), 0.0)); }

}  // namespace

TEST_CASE("cubic nonlinearity") {
  const BoxGrid g{1.0, 8};
  ComplexField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = cplx(1.0, 2.0);
  std::vector<double> q(g.size(), 0.0);
  q[g.index(4, 4, 4)] = 2.0;
  const ComplexField f = cubic_rhs(Potential(g, q), u);
  CHECK(f[g.index(4, 4, 4)] == 2.0 * 5.0 * cplx(1.0, 2.0));
  CHECK(f[g.index(3, 4, 4)] == cplx(0.0));
  CHECK(lp_norm(cubic_rhs(zero_q(g), u), 2.0) == 0.0);
  CHECK_THROWS_AS(cubic_rhs(zero_q(kSmall), u), Error);
}

TEST_CASE("Picard with no potential returns the incident wave") {
  const ComplexField u_in = plane_wave_on_grid(0.1, kParams.k, kX, kSmall);
  const SolveReport r = picard_solve(zero_q(kSmall), u_in, small_green());
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  CHECK(lp_norm(r.u_sc, INFINITY) == 0.0);
  CHECK(lp_norm(r.u - u_in, INFINITY) == 0.0);
}

TEST_CASE("Picard solve properties") {
  const double a = 0.1;
  const ComplexField u_in = plane_wave_on_grid(a, kParams.k, kX, kSmall);
  const SolveReport r = picard_solve(small_q(), u_in, small_green());
  CHECK(r.converged);
  CHECK(r.contraction_factor < 0.1);
  CHECK(r.residual_history.back() <= 1e-10);

  // fixed-point residual
  const ComplexField fp = r.u - u_in - small_green().apply(cubic_rhs(small_q(), r.u));
  CHECK(lp_norm(fp, 4.0) <= 1e-9 * lp_norm(r.u, 4.0));

  // cubic amplitude scaling
  const SolveReport r2 = picard_solve(small_q(), plane_wave_on_grid(2 * a, kParams.k, kX, kSmall), small_green());
  const double ratio = lp_norm(r2.u_sc, 4.0) / lp_norm(r.u_sc, 4.0);
  CHECK(ratio >= 7.2);
  CHECK(ratio <= 8.8);

  // both initial guesses reach the same fixed point
  SolverOptions zero_start;
  zero_start.initial = InitialGuess::zero;
  const SolveReport rz = picard_solve(small_q(), u_in, small_green(), zero_start);
  CHECK(lp_norm(rz.u - r.u, 4.0) <= 1e-9 * lp_norm(r.u, 4.0));

  // gauge covariance u -> e^{i phi} u
  const cplx phase = std::polar(1.0, 0.7);
  const SolveReport rg = picard_solve(small_q(), phase * u_in, small_green());
  CHECK(lp_norm(rg.u - phase * r.u, 4.0) <= 1e-9 * lp_norm(r.u, 4.0));

  CHECK(r.l4_norm == doctest::Approx(lp_norm(r.u, 4.0)));
}

TEST_CASE("Picard failures") {
  const ComplexField big = plane_wave_on_grid(20.0, kParams.k, kX, kSmall);
  try {
    picard_solve(small_q(), big, small_green());
    FAIL("expected NotContracting");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotContracting);
  }
  SolverOptions one;
  one.max_iter = 1;
  one.tol = 1e-300;
  try {
    picard_solve(small_q(), plane_wave_on_grid(0.1, kParams.k, kX, kSmall), small_green(), one);
    FAIL("expected MaxIterExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MaxIterExceeded);
  }
}

TEST_CASE("exterior evaluation") {
  const ComplexField u_in = plane_wave_on_grid(0.3, kParams.k, kX, kSmall);
  const SolveReport r = picard_solve(small_q(), u_in, small_green());
  const std::vector<Vec3> inside{{1.1, 0.0, 0.0}};
  try {
    eval_scattered_at(small_q(), r.u, kParams, inside);
    FAIL("expected PointInsideSupport");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointInsideSupport);
  }

  // same sum as the convolution on a larger grid with equal spacing
  const BoxGrid big{3.0, 48};
  ComplexField f_big(big);
  const ComplexField f = cubic_rhs(small_q(), r.u);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) f_big[big.index(i + 16, j + 16, k + 16)] = f[kSmall.index(i, j, k)];
  const ComplexField g_big = GreenOperator(big, kParams).apply(f_big);
  std::vector<Vec3> pts;
  std::vector<cplx> ref;
  for (auto [i, j, k] : {std::array{40, 24, 24}, std::array{4, 30, 10}, std::array{24, 24, 47}}) {
    pts.push_back(big.node(i, j, k));
    ref.push_back(g_big[big.index(i, j, k)]);
  }
  const auto vals = eval_scattered_at(small_q(), r.u, kParams, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(vals[i] - ref[i]) <= 1e-6 * std::abs(ref[i]));

  CHECK(eval_scattered_at(zero_q(kSmall), r.u, kParams, pts)[0] == cplx(0.0));
}

TEST_CASE("decay fits") {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -2.5));
  const DecayFit fit = fit_decay(x, y);
  CHECK(fit.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_decay(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);

  CHECK(grid_points_for(8.0, 1.0) == 32);
  CHECK(grid_points_for(30.0, 1.0) == 64);
  CHECK(grid_points_for(2.0, 1.0, 16) == 16);
}

TEST_CASE("k-decay study is insensitive to small amplitudes") {
  const std::vector<double> ks{2.0, 3.0, 4.0, 5.0};
  const KDecayStudy a = k_decay_study(stock_potential(), 1.0, 0.9, ks, 0.05, kX, {}, 16);
  const KDecayStudy b = k_decay_study(stock_potential(), 1.0, 0.9, ks, 0.1, kX, {}, 16);
  REQUIRE(a.rows.size() == 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].n == 16);
    const double ra = a.rows[i].usc_l4 / a.rows[i].f_l43;
    const double rb = b.rows[i].usc_l4 / b.rows[i].f_l43;
    CHECK(std::abs(ra - rb) <= 1e-2 * ra);
  }
  CHECK(a.fit.slope == doctest::Approx(b.fit.slope).epsilon(1e-2));
}

TEST_CASE("annulus averages of the scattered field level off") {
  const SolveReport r = picard_solve(small_q(), plane_wave_on_grid(0.3, kParams.k, kX, kSmall), small_green());
  const std::vector<double> Rs{4.0, 8.0, 16.0, 32.0};
  const AnnulusStudy st = annulus_decay_study(small_q(), r.u, kParams, Rs, 16);
  REQUIRE(st.rows.size() == 4);
  CHECK(st.saturating);
  CHECK(st.max_value > 0.0);
  CHECK(st.fit.slope < 0.5);
}

TEST_CASE("periodic resolvent on a single mode") {
  const BoxGrid g{1.0, 16};
  const Vec3 kv{std::numbers::pi, 2 * std::numbers::pi, 0.0};
  const ComplexField f = plane_wave_on_grid(1.0, norm(kv), kv / norm(kv), g);
  const double s = 0.9, lambda = 30.0, eps = 0.5;
  const ComplexField r = lap_resolvent_apply(f, s, lambda, eps, 1);
  const cplx mult = 1.0 / (std::pow(dot(kv, kv), s) - cplx(lambda, eps));
  CHECK(lp_norm(r - mult * f, 2.0) <= 1e-12 * lp_norm(r, 2.0));
}

TEST_CASE("free and periodic resolvents agree under strong damping") {
  const BoxGrid g{1.0, 16};
  const Potential q = stock_potential().sample(g);
  ComplexField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = q[i];
  const double s = 0.9, k = 4.0, lambda = std::pow(k, 2 * s), eps = 4.0;
  const ComplexField a = free_resolvent_apply(f, s, lambda, eps);
  const ComplexField b = lap_resolvent_apply(f, s, lambda, eps, 4);
  CHECK(lp_norm(a - b, 2.0) <= 0.05 * lp_norm(a, 2.0));
  // shrinking eps increases the response
  const ComplexField c = free_resolvent_apply(f, s, lambda, 1.0);
  CHECK(lp_norm(c, 2.0) > lp_norm(a, 2.0));
}
