#include "frachelm/farfield.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <limits>
#include <numbers>

#include "frachelm/errors.hpp"
#include "frachelm/warnings.hpp"

namespace frachelm {

cplx scattering_amplitude(const Potential& Q, const ComplexField& u, const ScatteringParams& params,
                          const Vec3& x_hat) {
  if (std::abs(norm(x_hat) - 1.0) > 1e-12) throw Error(ErrorKind::NonUnitDirection, "x_hat must be a unit vector");
  const double kh = params.k * u.grid().h();
  if (kh > 2.0) {
    throw Error(ErrorKind::UnderResolvedPhase, "k h = " + std::to_string(kh) + " exceeds 2");
  }
  if (kh > 1.0) {
    std::ostringstream msg;
    msg << "far-field quadrature with k h = " << std::setprecision(4) << kh << " > 1";
    warn(msg.str());
  }
  return fourier_at(cubic_rhs(Q, u), x_hat * params.k);
}

std::vector<NearFarGap> near_far_consistency(const Potential& Q, const ComplexField& u,
                                             const ScatteringParams& params, const Vec3& x_hat,
                                             std::span<const double> Rs) {
  const cplx far = scattering_amplitude(Q, u, params, x_hat);
  std::vector<Vec3> points;
  for (double R : Rs) points.push_back(x_hat * R);
  const std::vector<cplx> near = eval_scattered_at(Q, u, params, points);
  const double scale = params.s / std::pow(params.k, 2.0 * (1.0 - params.s));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * lp_norm(cubic_rhs(Q, u), 1.0);
  std::vector<NearFarGap> out;
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    const double R = Rs[i];
    NearFarGap row;
    row.R = R;
    row.near = near[i] * 4.0 * std::numbers::pi * R * std::polar(1.0, -params.branch * params.k * R) * scale;
    row.relative = std::abs(far) > floor;
    row.gap = std::abs(row.near - far) / (row.relative ? std::abs(far) : 1.0);
    out.push_back(row);
  }
  return out;
}

PlaneWaveSolveCache::PlaneWaveSolveCache(const Potential& Q, const ScatteringParams& params,
                                         SolverOptions options)
    : Q_(Q), params_(params), options_(options), G_(Q.grid(), params) {}

std::shared_ptr<const SolveReport> PlaneWaveSolveCache::solve(const Vec3& theta, cplx amplitude) {
  const Key key{Q_.digest(), params_.k, theta.x, theta.y, theta.z, amplitude.real(), amplitude.imag()};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const ComplexField u_in = plane_wave_on_grid(amplitude, params_.k, theta, Q_.grid());
  auto report = std::make_shared<const SolveReport>(picard_solve(Q_, u_in, G_, options_));
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(report)).first->second;
}

cplx PlaneWaveSolveCache::amplitude(const Vec3& x_hat, const Vec3& theta, cplx incident_amplitude) {
  return scattering_amplitude(Q_, solve(theta, incident_amplitude)->u, params_, x_hat);
}

std::size_t PlaneWaveSolveCache::solves() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::vector<SuperpositionRow> herglotz_superposition_report(PlaneWaveSolveCache& cache,
                                                            const HerglotzDensity& g,
                                                            std::span<const Vec3> directions) {
  const ScatteringParams& params = cache.params();
  const Potential& Q = cache.potential();
  const ComplexField u_in = herglotz_on_grid(g, params.k, Q.grid());
  std::vector<SuperpositionRow> rows;
  ComplexField u_g = u_in;
  if (g.l2_norm() > 0.0) {
    u_g = picard_solve(Q, u_in, cache.green(), cache.options()).u;
  }
  for (const Vec3& x_hat : directions) {
    SuperpositionRow row;
    row.x_hat = x_hat;
    row.lhs = scattering_amplitude(Q, u_g, params, x_hat);
    row.rhs = 0.0;
    for (std::size_t j = 0; j < g.g.size(); ++j) {
      const cplx amp = g.weights[j] * g.g[j];
      if (amp != cplx(0.0)) row.rhs += cache.amplitude(x_hat, g.directions[j], amp);
    }
    row.discrepancy = std::abs(row.lhs - row.rhs);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace frachelm
