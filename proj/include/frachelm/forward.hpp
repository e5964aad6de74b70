#pragma once

#include <span>
#include <string>
#include <vector>

#include "frachelm/fieldgrid.hpp"
#include "frachelm/greens.hpp"
#include "frachelm/grid.hpp"
#include "frachelm/waves.hpp"

namespace frachelm {

/// Pointwise Q |u|^2 u. Throws GridMismatch.
ComplexField cubic_rhs(const Potential& Q, const ComplexField& u);

enum class InitialGuess { incident, zero };

struct SolverOptions {
  double tol = 1e-10;  // absolute, on ||u_{n+1} - u_n||_{L4(grid)}
  int max_iter = 50;
  InitialGuess initial = InitialGuess::incident;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;
  ComplexField u;
  ComplexField u_sc;
  bool converged = false;
  /// Largest ratio of successive residuals (0 with fewer than two residuals).
  double contraction_factor = 0.0;
  /// ||u||_{L4(grid)}
  double l4_norm = 0.0;
};

/// u_{n+1} = u^in + G(Q |u_n|^2 u_n). Throws NotContracting after three
/// consecutive non-decreasing residuals and MaxIterExceeded.
SolveReport picard_solve(const Potential& Q, const ComplexField& u_in, const GreenOperator& G,
                         const SolverOptions& options = {});
SolveReport picard_solve(const Potential& Q, const ComplexField& u_in,
                         const ScatteringParams& params, const SolverOptions& options = {});

/// u^sc(x) = sum_j Phi_s(|x - y_j|) Q|u|^2u(y_j) h^3 for points at least one
/// cell outside the box (sup norm). Throws PointInsideSupport otherwise.
std::vector<cplx> eval_scattered_at(const Potential& Q, const ComplexField& u,
                                    const ScatteringParams& params, std::span<const Vec3> points,
                                    const QuadratureConfig& quad = {});

/// Ordinates fitted as y ~ C x^slope by least squares in log-log.
struct DecayFit {
  std::vector<double> abscissae;
  std::vector<double> ordinates;
  double slope = 0.0;
  double constant = 0.0;
};

DecayFit fit_decay(std::span<const double> x, std::span<const double> y);

/// Smallest power-of-two n >= n_min with k h <= kh_max on the box.
int grid_points_for(double k, double L, int n_min = 32, double kh_max = 1.25);

struct KDecayRow {
  double k = 0.0;
  int n = 0;
  double usc_l4 = 0.0;
  double f_l43 = 0.0;
  int iterations = 0;
};

/// Plane-wave incidence (amplitude a, direction theta) at each k. The
/// potential is resampled on a grid fine enough for that k.
struct KDecayStudy {
  std::vector<KDecayRow> rows;
  DecayFit fit;  // ||u^sc||_4 / ||f||_{4/3} against k
};

KDecayStudy k_decay_study(const PotentialSpec& Q, double L, double s, std::span<const double> ks,
                          double a, const Vec3& theta, const SolverOptions& options = {},
                          int n_min = 32);

struct AnnulusRow {
  double R = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct AnnulusStudy {
  std::vector<AnnulusRow> rows;
  DecayFit fit;
  double max_value = 0.0;
  /// Relative increments shrink along the R list and the last one is below
  /// 5%, i.e. the averages level off instead of growing with R.
  bool saturating = false;
};

/// Annulus averages of an exterior evaluator between r_inner and each R.
AnnulusStudy annulus_decay_study(const PointEvaluator& u_sc, double k, std::span<const double> Rs,
                                 double r_inner, int nodes = 32);
/// Convenience overload for a solved field; r_inner = sqrt(3) L + h keeps the
/// shells outside the box.
AnnulusStudy annulus_decay_study(const Potential& Q, const ComplexField& u,
                                 const ScatteringParams& params, std::span<const double> Rs,
                                 int nodes = 32);

/// Periodic spectral solve with multiplier 1/(|xi|^{2s} - (lambda + i eps)) on
/// a box `factor` times larger than f's grid; returns the restriction.
ComplexField lap_resolvent_apply(const ComplexField& f, double s, double lambda, double eps,
                                 int factor = 4);

/// Free-space resolvent ((-Delta)^s - (lambda + i eps))^{-1} f by convolution
/// with the absolutely convergent eps kernel.
ComplexField free_resolvent_apply(const ComplexField& f, double s, double lambda, double eps,
                                  const QuadratureConfig& quad = {});

}  // namespace frachelm
