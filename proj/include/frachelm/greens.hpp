#pragma once

#include <complex>
#include <functional>
#include <string_view>
#include <vector>

#include "frachelm/params.hpp"
#include "frachelm/vec3.hpp"

namespace frachelm {

using cplx = std::complex<double>;

enum class KernelMethod { automatic, subordination, principal_value, eps_fourier, asymptotic };

std::string_view to_string(KernelMethod method);
KernelMethod kernel_method_from_string(std::string_view name);

/// Subordination for s < 1, principal value otherwise.
KernelMethod default_method(double s);

struct KernelEval {
  double r = 0.0;
  cplx value;
  KernelMethod method = KernelMethod::automatic;
  double est_error = 0.0;
};

/// S_3(t) = sqrt(2/pi) sin(t)/t, continuous at t = 0.
double s3_kernel(double t);

/// Classical outgoing Helmholtz kernel e^{+-ikr}/(4 pi r).
cplx phi1(double r, const ScatteringParams& params);

/// Large-r form (k^{2(1-s)}/s) e^{+-ikr}/(4 pi r).
cplx phi_s_farfield(double r, const ScatteringParams& params);

/// Real, non-oscillatory remainder Phi_s - phi_s_farfield from the Laplace
/// (subordination) representation. Zero at s = 1.
KernelEval subordination_correction(double r, const ScatteringParams& params,
                                    const QuadratureConfig& quad = {});

/// Phi_s = (k^{2(1-s)}/s) Phi_1 + subordination_correction.
KernelEval phi_s_subordination(double r, const ScatteringParams& params,
                               const QuadratureConfig& quad = {});

/// Radial principal-value representation
///   Phi_s(r) = k^{2-2s}/(2 pi^2 r) [ P.V. int_0^inf t sin(krt)/(t^{2s}-1) dt
///                                    +- i pi/(2s) sin(kr) ].
KernelEval phi_s_pv(double r, const ScatteringParams& params, const QuadratureConfig& quad = {});

/// Kernel of ((-Delta)^s - z)^{-1} in R^3 for Im z != 0, by direct quadrature
/// of (2 pi^2 r)^{-1} int_0^inf rho sin(rho r)/(rho^{2s} - z) d rho.
KernelEval resolvent_kernel(double r, double s, cplx z, const QuadratureConfig& quad = {});

/// eps-regularized kernel with z = (k +- i eps)^{2s}; depends on |x| only.
cplx phi_s_eps_oracle(const Vec3& x, const ScatteringParams& params, double eps,
                      const QuadratureConfig& quad = {});

/// eps -> 0 limit of the oracle by Richardson extrapolation over
/// eps0, eps0/2, eps0/4 with eps0 = min(quad.eps, 0.2/r).
KernelEval phi_s_eps_extrapolated(double r, const ScatteringParams& params,
                                  const QuadratureConfig& quad = {});

/// Dispatches on method; `automatic` resolves to default_method(s).
KernelEval phi_s(double r, const ScatteringParams& params,
                 KernelMethod method = KernelMethod::automatic, const QuadratureConfig& quad = {});

/// Log-spaced table of the real correction Phi_s - phi_s_farfield, so that
/// Phi_s(r) costs one complex exponential plus a cubic interpolation.
/// Radii outside [r_min, r_max] fall back to direct evaluation.
class KernelTable {
 public:
  KernelTable(const ScatteringParams& params, double r_min, double r_max,
              KernelMethod method = KernelMethod::automatic, const QuadratureConfig& quad = {},
              int per_decade = 64);

  double correction(double r) const;
  cplx operator()(double r) const;

  const ScatteringParams& params() const { return params_; }
  KernelMethod method() const { return method_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

 private:
  double direct_correction(double r) const;

  ScatteringParams params_;
  KernelMethod method_;
  QuadratureConfig quad_;
  double r_min_;
  double r_max_;
  double far_pref_;
  double log_min_ = 0.0;
  double du_ = 1.0;
  bool zero_ = false;
  bool log_scale_ = true;
  double sign_ = 1.0;
  std::vector<double> samples_;
};

/// Integral of a radial kernel over the cube [-h/2, h/2]^3, using the
/// pyramid decomposition over the six faces. Handles integrable r^{2s-3}
/// singularities at the origin.
cplx cell_integral(const std::function<cplx(double)>& phi, double h);

}  // namespace frachelm
