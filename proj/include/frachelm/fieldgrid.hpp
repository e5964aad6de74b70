#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "frachelm/greens.hpp"
#include "frachelm/grid.hpp"
#include "frachelm/quadrature.hpp"

namespace frachelm {

/// Unitary DFT (scaled by n^{-3/2}); dft_inverse(dft_forward(f)) == f.
ComplexField dft_forward(const ComplexField& field);
ComplexField dft_inverse(const ComplexField& spectrum);

/// Physical angular frequency of FFT bin `idx` on the grid: pi * m / L with
/// m = idx for idx <= n/2 and idx - n otherwise.
double grid_frequency(const BoxGrid& grid, int idx);

enum class FracVariant { laplacian, half };

/// Spectral multiplier |xi|^{2s} ((-Delta)^s) or |xi|^{s} (D^s) on the
/// periodic box.
ComplexField frac_laplacian_apply(const ComplexField& field, double s,
                                  FracVariant variant = FracVariant::laplacian);

/// Continuous transform int e^{-i xi.x} f(x) dx by the midpoint rule.
cplx fourier_at(const ComplexField& field, const Vec3& xi);
cplx fourier_at(const Potential& potential, const Vec3& xi);

/// (sum |v|^p h^3)^{1/p}; p = infinity gives max |v|.
double lp_norm(const ComplexField& field, double p);
double lp_norm(const Potential& potential, double p);

/// Discrete linear convolution with a radial kernel on the cell-centered
/// grid:  (G f)_i = sum_j K(|x_i - x_j|) f_j h^3, with the self term replaced
/// by the exact cell integral of K. Computed by zero padding to (2n)^3.
class GreenOperator {
 public:
  /// Fractional Helmholtz kernel Phi_s (tabulated through KernelTable).
  GreenOperator(const BoxGrid& grid, const ScatteringParams& params,
                KernelMethod method = KernelMethod::automatic, const QuadratureConfig& quad = {});
  /// Arbitrary radial kernel, evaluated directly at every distinct distance.
  GreenOperator(const BoxGrid& grid, const std::function<cplx(double)>& kernel);

  ComplexField apply(const ComplexField& f) const;

  const BoxGrid& grid() const { return grid_; }
  cplx self_weight() const { return self_weight_; }

 private:
  void build(const std::function<cplx(double)>& kernel, cplx self_weight);

  BoxGrid grid_;
  cplx self_weight_;
  std::shared_ptr<const std::vector<cplx>> kernel_hat_;
};

/// Convenience wrapper building a GreenOperator for one application.
ComplexField convolve_green(const ComplexField& f, const ScatteringParams& params,
                            const QuadratureConfig& quad = {});

using PointEvaluator = std::function<std::vector<cplx>(std::span<const Vec3>)>;

struct AnnulusAverage {
  double value = 0.0;
  double std_error = 0.0;
};

/// (1/R int_{r_inner<|x|<R} |u|^2 dx)^{1/2} by Gauss-Legendre in r times a
/// sphere product rule. `nodes` is the radial node count; the angular order
/// grows with k. The error estimate compares against a half-resolution rule.
AnnulusAverage annulus_l2_average(const PointEvaluator& evaluator, double R, double k,
                                  int nodes = 32, double r_inner = 1.0);

}  // namespace frachelm
