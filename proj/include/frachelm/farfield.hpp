#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "frachelm/forward.hpp"

namespace frachelm {

struct FarFieldSample {
  double k = 0.0;
  Vec3 x_hat;
  Vec3 theta;
  double a = 0.0;
  cplx value;
};

/// u^inf(x_hat) = int e^{-ik x_hat.y} Q|u|^2u dy by the midpoint rule.
/// Throws UnderResolvedPhase if k h > 2 and warns on stderr if k h > 1.
cplx scattering_amplitude(const Potential& Q, const ComplexField& u, const ScatteringParams& params,
                          const Vec3& x_hat);

struct NearFarGap {
  double R = 0.0;
  cplx near;        // u^sc(R x_hat) 4 pi R e^{-ikR} s / k^{2(1-s)}
  double gap = 0.0; // relative when `relative`, else absolute
  bool relative = true;
};

/// Compares the exterior field with the far-field pattern along x_hat. Falls
/// back to absolute gaps when |u^inf| is at rounding level.
std::vector<NearFarGap> near_far_consistency(const Potential& Q, const ComplexField& u,
                                             const ScatteringParams& params, const Vec3& x_hat,
                                             std::span<const double> Rs);

/// Memoized far-field solves for plane-wave incidence, keyed by
/// (potential digest, k, theta, complex amplitude). Safe for concurrent use.
class PlaneWaveSolveCache {
 public:
  PlaneWaveSolveCache(const Potential& Q, const ScatteringParams& params, SolverOptions options = {});

  /// Solved total field for incidence amplitude * e^{ik x.theta}.
  std::shared_ptr<const SolveReport> solve(const Vec3& theta, cplx amplitude);
  cplx amplitude(const Vec3& x_hat, const Vec3& theta, cplx incident_amplitude);

  const Potential& potential() const { return Q_; }
  const ScatteringParams& params() const { return params_; }
  const GreenOperator& green() const { return G_; }
  const SolverOptions& options() const { return options_; }
  std::size_t solves() const;

 private:
  using Key = std::tuple<std::uint64_t, double, double, double, double, double, double>;
  Potential Q_;
  ScatteringParams params_;
  SolverOptions options_;
  GreenOperator G_;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const SolveReport>> cache_;
};

struct SuperpositionRow {
  Vec3 x_hat;
  cplx lhs;          // far field of the Herglotz incidence
  cplx rhs;          // sum of single-direction far fields
  double discrepancy = 0.0;
};

/// Both sides from full nonlinear solves; direction j contributes the far
/// field of the plane wave with amplitude w_j g_j.
std::vector<SuperpositionRow> herglotz_superposition_report(PlaneWaveSolveCache& cache,
                                                            const HerglotzDensity& g,
                                                            std::span<const Vec3> directions);

}  // namespace frachelm
