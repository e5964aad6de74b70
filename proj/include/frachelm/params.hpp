#pragma once

namespace frachelm {

/// Physical parameters shared by every kernel and solver.
///
/// The nonlinearity is fixed to the cubic Q|u|^2 u. `branch` is +1 for the
/// outgoing (e^{+ikr}) fundamental solution and -1 for the incoming one.
struct ScatteringParams {
  double s = 0.9;
  double k = 8.0;
  int branch = 1;
  double k0 = 1.0;

  /// Throws ValidationError unless 3/4 < s < 3/2, k > 0 and branch is +-1.
  void validate() const;
  /// Additionally requires 4/5 < s < 3/2 and k > k0 > 0.
  void validate_for_inversion() const;
};

/// Knobs for the one-dimensional kernel quadratures.
struct QuadratureConfig {
  double pv_window = 0.5;  // half-width of the subtraction window around t = 1
  double tail_cut = 0.0;   // start of the asymptotic tail; 0 picks it from kr
  int panels = 16;         // Gauss-Legendre nodes per panel (oscillatory integrals)
  int laplace_nodes = 16;  // Gauss-Legendre nodes per panel (subordination integral)
  double eps = 0.1;        // starting regularization of the eps-Fourier oracle
  double tol = 1e-9;       // relative tolerance for the nested-refinement check

  void validate() const;
};

}  // namespace frachelm
