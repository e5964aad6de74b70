#include <cmath>
#include <filesystem>
#include <memory>
#include <random>

#include "doctest.h"
#include "frachelm/errors.hpp"
#include "frachelm/field_io.hpp"
#include "frachelm/fieldgrid.hpp"
#include "frachelm/inverse.hpp"

using namespace frachelm;

namespace {

const BoxGrid kGrid{1.0, 16};

const Potential& q16() {
  static const Potential Q = stock_potential().sample(kGrid);
  return Q;
}

FarFieldOracle zero_oracle() {
  return [](double, const Vec3&, const Vec3&, double) { return cplx(0.0); };
}

double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

ReconstructionPlan full_plan(int n) {
  ReconstructionPlan plan;
  plan.n = n;
  plan.xi_max = 3.1416 * std::sqrt(3.0) * n / 2.0 + 1.0;
  return plan;
}

}  // namespace

TEST_CASE("probe construction") {
  const FrequencyProbe p = make_probe({1.0, 0.0, 0.0}, 5.0);
  CHECK(dist(p.l, {0.0, -5.0, 0.0}) < 1e-14);
  CHECK(p.k == doctest::Approx(std::sqrt(26.0)));
  CHECK(dist(p.x_hat, Vec3{-1.0, 5.0, 0.0} / std::sqrt(26.0)) < 1e-14);
  CHECK(dist(p.theta, Vec3{1.0, 5.0, 0.0} / std::sqrt(26.0)) < 1e-14);
  CHECK(dist(p.target(), {-2.0, 0.0, 0.0}) < 1e-14);

  // m parallel to the fallback axis, and m = 0
  const FrequencyProbe z = make_probe({0.0, 0.0, 2.0}, 3.0);
  CHECK(std::abs(dot(z.l, z.m)) < 1e-14);
  CHECK(norm(z.l) == doctest::Approx(3.0));
  const FrequencyProbe o = make_probe({0.0, 0.0, 0.0}, 4.0);
  CHECK(o.k == doctest::Approx(4.0));
  CHECK(dist(o.theta, o.x_hat) < 1e-14);  // forward direction, target 0

  CHECK_THROWS_AS(make_probe({1.0, 0.0, 0.0}, 0.0), Error);
  CHECK_THROWS_AS(make_probe({0.0, 0.0, 0.0}, 0.5, 1.0), Error);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int t = 0; t < 200; ++t) {
    const Vec3 m{u(rng), u(rng), u(rng)};
    const double lm = 2.0 + std::abs(u(rng));
    const FrequencyProbe q = make_probe(m, lm);
    CHECK(std::abs(norm(q.theta) - 1.0) < 1e-12);
    CHECK(std::abs(norm(q.x_hat) - 1.0) < 1e-12);
    CHECK(std::abs(dot(q.l, q.m)) < 1e-12 * (1.0 + norm(m) * lm));
    CHECK(dist(q.k * (q.x_hat - q.theta), q.target()) < 1e-12 * q.k);
  }
}

TEST_CASE("single-frequency estimates") {
  FrequencyProbe p = make_probe({1.0, 1.0, 0.0}, 8.0);
  CHECK(qhat_from_farfield(zero_oracle(), p, 0.05) == cplx(0.0));

  const cplx truth = fourier_at(q16(), p.target());
  CHECK(std::abs(qhat_from_farfield(synthetic_born_oracle(q16()), p, 0.05) - truth) <= 1e-12 * std::abs(truth));
  CHECK(p.a == 0.05);
  CHECK(std::abs(p.qhat_estimate - truth) <= 1e-12 * std::abs(truth));

  // the nonlinear estimate improves with k
  const auto nl_ptr = std::make_shared<const NonlinearOracle>(
      [](const BoxGrid& g) { return stock_potential().sample(g); }, 1.0, 0.9);
  const FarFieldOracle oracle = as_oracle(nl_ptr);
  const Vec3 m{1.0, 0.0, 0.0};
  const Potential fine = stock_potential().sample(BoxGrid{1.0, 64});
  const cplx ref = fourier_at(fine, m * -2.0);
  double prev = INFINITY;
  for (double k : {8.0, 16.0, 32.0}) {
    FrequencyProbe q = make_probe(m, std::sqrt(k * k - 1.0));
    const double err = std::abs(qhat_from_farfield(oracle, q, 0.05) - ref);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(nl_ptr->grid_points(8.0) == 32);
  CHECK(nl_ptr->grid_points(32.0) == 64);
}

TEST_CASE("remainder study") {
  const Vec3 m{2.0, 0.0, 0.0};
  const std::vector<double> ks{8.0, 12.0, 16.0, 24.0};
  const RemainderStudy exact =
      remainder_rate_study(synthetic_born_oracle(q16()), fourier_at(q16(), m * -2.0), m, ks, 0.05);
  CHECK(exact.floor_limited);
  CHECK(!exact.slope_ok);

  CHECK_THROWS_AS(remainder_rate_study(zero_oracle(), 0.0, m, std::vector<double>{8, 16}, 0.05), Error);

  // nonlinear remainder: errors shrink with k at close to the 1/k rate
  const FarFieldOracle nl = as_oracle(std::make_shared<const NonlinearOracle>(
      [](const BoxGrid& g) { return stock_potential().sample(g); }, 1.0, 0.9));
  const cplx ref = fourier_at(stock_potential().sample(BoxGrid{1.0, 64}), m * -2.0);
  const RemainderStudy st = remainder_rate_study(nl, ref, m, ks, 0.05);
  for (std::size_t i = 1; i < st.rows.size(); ++i) CHECK(st.rows[i].error < st.rows[i - 1].error);
  CHECK(st.fit.slope <= -0.7);
  CHECK(st.fit.slope >= -1.5);

  // at fixed k the nonlinear part of the error scales like a^2
  const cplx grid_ref = fourier_at(stock_potential().sample(BoxGrid{1.0, 32}), m * -2.0);
  FrequencyProbe p1 = make_probe(m, std::sqrt(64.0 - 4.0));
  FrequencyProbe p2 = p1;
  const double e1 = std::abs(qhat_from_farfield(nl, p1, 0.1) - grid_ref);
  const double e2 = std::abs(qhat_from_farfield(nl, p2, 0.05) - grid_ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("lattice reconstruction") {
  const ReconstructionPlan plan = full_plan(16);
  const auto lattice = band_lattice(plan);
  CHECK(lattice.size() == 4096);
  const ReconstructionResult r = sweep_and_reconstruct(synthetic_born_oracle(q16()), plan, &q16());
  REQUIRE(r.rel_l2_error.has_value());
  CHECK(*r.rel_l2_error <= 1e-10);
  CHECK(r.imag_ratio <= 1e-10);
  for (std::size_t i = 1; i < r.probes.size(); ++i) CHECK(r.probes[i].k >= r.probes[i - 1].k);

  const ReconstructionResult z = sweep_and_reconstruct(zero_oracle(), plan);
  CHECK(!z.rel_l2_error.has_value());
  CHECK(lp_norm(z.q_rec, INFINITY) == 0.0);

  ReconstructionPlan band;
  band.n = 8;
  band.xi_max = 8.0;
  for (const auto& idx : band_lattice(band)) {
    const double xi = 3.14159265358979 * std::sqrt(double(idx[0] * idx[0] + idx[1] * idx[1] + idx[2] * idx[2]));
    CHECK(xi <= 8.0 + 1e-12);
  }
  auto probes = plan_probes(band);
  probes.erase(probes.begin() + probes.size() / 2);
  try {
    sweep_and_reconstruct(zero_oracle(), band, probes);
    FAIL("expected CoverageGap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CoverageGap);
  }
}

TEST_CASE("far-field tables") {
  ReconstructionPlan plan;
  plan.n = 8;
  plan.xi_max = 10.0;
  const FarFieldOracle born = synthetic_born_oracle(q16());
  std::vector<FarFieldSample> samples;
  for (const FrequencyProbe& p : plan_probes(plan)) {
    samples.push_back({p.k, p.x_hat, p.theta, plan.a, born(p.k, p.x_hat, p.theta, plan.a)});
  }
  const auto dir = std::filesystem::temp_directory_path() / "frachelm_table_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "ff.csv").string();
  write_text_atomic(path, farfield_csv(samples));
  const auto back = read_farfield_csv(path);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].value == samples[i].value);
    CHECK(back[i].k == samples[i].k);
  }
  const FarFieldOracle table = table_oracle(back);
  const ReconstructionResult a = sweep_and_reconstruct(born, plan);
  const ReconstructionResult b = sweep_and_reconstruct(table, plan);
  CHECK(lp_norm(a.q_rec - b.q_rec, INFINITY) == 0.0);
  try {
    table(99.0, {1, 0, 0}, {0, 1, 0}, plan.a);
    FAIL("expected CoverageGap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CoverageGap);
  }
  write_text_atomic(path, "k,re\n1,2\n");
  CHECK_THROWS_AS(read_farfield_csv(path), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("distinct potentials give distinct far fields") {
  ReconstructionPlan plan;
  plan.n = 8;
  plan.xi_max = 8.0;
  const auto probes = plan_probes(plan);
  const FarFieldOracle f = synthetic_born_oracle(q16());
  CHECK(uniqueness_gap(f, synthetic_born_oracle(q16()), probes, plan.a) == 0.0);
  const double two = uniqueness_gap(f, synthetic_born_oracle(q16().scaled(2.0)), probes, plan.a);
  CHECK(two > 0.0);
  PotentialSpec narrow = stock_potential();
  narrow.cutoff_inner = 0.4;
  narrow.cutoff_outer = 0.6;
  const Potential qn = narrow.sample(kGrid);
  CHECK(uniqueness_gap(synthetic_born_oracle(qn), synthetic_born_oracle(qn.translated(1, 0, 0)), probes, plan.a) > 0.0);
  // Born data are linear in Q
  double max_f = 0.0;
  for (const auto& p : probes) max_f = std::max(max_f, std::abs(f(p.k, p.x_hat, p.theta, plan.a)));
  CHECK(two == doctest::Approx(max_f).epsilon(1e-12));
}
