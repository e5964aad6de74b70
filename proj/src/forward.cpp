#include "frachelm/forward.hpp"

#include <algorithm>
#include <cmath>

#include "frachelm/errors.hpp"
#include "frachelm/fft.hpp"

namespace frachelm {

ComplexField cubic_rhs(const Potential& Q, const ComplexField& u) {
  if (!(Q.grid() == u.grid())) throw Error(ErrorKind::GridMismatch, "potential and field grids differ");
  ComplexField out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = Q[i] * std::norm(u[i]) * u[i];
  return out;
}

SolveReport picard_solve(const Potential& Q, const ComplexField& u_in, const GreenOperator& G,
                         const SolverOptions& options) {
  if (!(Q.grid() == u_in.grid()) || !(G.grid() == u_in.grid())) {
    throw Error(ErrorKind::GridMismatch, "solver inputs live on different grids");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error(ErrorKind::ValidationError, "solver needs tol > 0 and max_iter >= 1");
  }
  SolveReport report;
  ComplexField u = options.initial == InitialGuess::incident ? u_in : ComplexField(u_in.grid());
  int rising = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    ComplexField next = u_in + G.apply(cubic_rhs(Q, u));
    const double residual = lp_norm(next - u, 4.0);
    report.residual_history.push_back(residual);
    report.iterations = it;
    u = std::move(next);
    const auto& hist = report.residual_history;
    if (hist.size() >= 2 && hist[hist.size() - 2] > 0.0) {
      const double ratio = residual / hist[hist.size() - 2];
      report.contraction_factor = std::max(report.contraction_factor, ratio);
      rising = ratio >= 1.0 ? rising + 1 : 0;
    }
    if (residual <= options.tol) {
      report.converged = true;
      break;
    }
    if (rising >= 3) {
      throw Error(ErrorKind::NotContracting,
                  "residual did not decrease for 3 consecutive steps (data too large?)");
    }
  }
  if (!report.converged) {
    throw Error(ErrorKind::MaxIterExceeded,
                "no convergence after " + std::to_string(options.max_iter) + " iterations");
  }
  report.u_sc = u - u_in;
  report.l4_norm = lp_norm(u, 4.0);
  report.u = std::move(u);
  return report;
}

SolveReport picard_solve(const Potential& Q, const ComplexField& u_in,
                         const ScatteringParams& params, const SolverOptions& options) {
  const GreenOperator G(u_in.grid(), params);
  return picard_solve(Q, u_in, G, options);
}

std::vector<cplx> eval_scattered_at(const Potential& Q, const ComplexField& u,
                                    const ScatteringParams& params, std::span<const Vec3> points,
                                    const QuadratureConfig& quad) {
  const BoxGrid& grid = u.grid();
  const double h = grid.h();
  double r_far = 0.0;
  for (const Vec3& x : points) {
    const double sup = std::max({std::abs(x.x), std::abs(x.y), std::abs(x.z)});
    if (sup < grid.L + h) {
      throw Error(ErrorKind::PointInsideSupport, "evaluation point must lie one cell outside the box");
    }
    r_far = std::max(r_far, norm(x));
  }
  const ComplexField f = cubic_rhs(Q, u);
  std::vector<Vec3> ys;
  std::vector<cplx> fs;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int l = 0; l < grid.n; ++l) {
        const cplx v = f[grid.index(i, j, l)];
        if (v != cplx(0.0)) {
          ys.push_back(grid.node(i, j, l));
          fs.push_back(v * grid.cell_volume());
        }
      }
    }
  }
  std::vector<cplx> out(points.size(), 0.0);
  if (ys.empty()) return out;
  const KernelTable table(params, 0.5 * h, r_far + std::sqrt(3.0) * grid.L + h,
                          KernelMethod::automatic, quad);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t p = 0; p < points.size(); ++p) {
    cplx sum = 0.0;
    for (std::size_t q = 0; q < ys.size(); ++q) sum += table(norm(points[p] - ys[q])) * fs[q];
    out[p] = sum;
  }
  return out;
}

DecayFit fit_decay(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorKind::ValidationError, "decay fit needs >= 3 matching samples");
  }
  DecayFit fit{{x.begin(), x.end()}, {y.begin(), y.end()}, 0.0, 0.0};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::ValidationError, "decay fit needs positive samples");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.constant = std::exp((sy - fit.slope * sx) / m);
  return fit;
}

int grid_points_for(double k, double L, int n_min, double kh_max) {
  int n = n_min;
  while (k * 2.0 * L / n > kh_max) n *= 2;
  return n;
}

KDecayStudy k_decay_study(const PotentialSpec& Q, double L, double s, std::span<const double> ks,
                          double a, const Vec3& theta, const SolverOptions& options, int n_min) {
  if (ks.size() < 4) throw Error(ErrorKind::ValidationError, "k-decay study needs >= 4 wavenumbers");
  KDecayStudy study;
  std::vector<double> ratios;
  for (double k : ks) {
    const ScatteringParams params{s, k, 1, 1.0};
    params.validate();
    const BoxGrid grid{L, grid_points_for(k, L, n_min)};
    const Potential pot = Q.sample(grid);
    const ComplexField u_in = plane_wave_on_grid(a, k, theta, grid);
    const SolveReport rep = picard_solve(pot, u_in, params, options);
    KDecayRow row{k, grid.n, lp_norm(rep.u_sc, 4.0), lp_norm(cubic_rhs(pot, rep.u), 4.0 / 3.0),
                  rep.iterations};
    ratios.push_back(row.usc_l4 / row.f_l43);
    study.rows.push_back(row);
  }
  study.fit = fit_decay(ks, ratios);
  return study;
}

AnnulusStudy annulus_decay_study(const PointEvaluator& u_sc, double k, std::span<const double> Rs,
                                 double r_inner, int nodes) {
  AnnulusStudy study;
  std::vector<double> x, y;
  for (double R : Rs) {
    const AnnulusAverage avg = annulus_l2_average(u_sc, R, k, nodes, r_inner);
    study.rows.push_back({R, avg.value, avg.std_error});
    study.max_value = std::max(study.max_value, avg.value);
    if (avg.value > 0.0) {
      x.push_back(R);
      y.push_back(avg.value);
    }
  }
  if (x.size() >= 3) study.fit = fit_decay(x, y);
  std::vector<double> increments;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    const double prev = study.rows[i - 1].value;
    increments.push_back(prev > 0.0 ? std::abs(study.rows[i].value - prev) / prev : 0.0);
  }
  study.saturating = !increments.empty() && increments.back() < 0.05;
  for (std::size_t i = 1; i < increments.size(); ++i) {
    if (increments[i] > increments[i - 1] + 1e-12) study.saturating = false;
  }
  return study;
}

AnnulusStudy annulus_decay_study(const Potential& Q, const ComplexField& u,
                                 const ScatteringParams& params, std::span<const double> Rs,
                                 int nodes) {
  const BoxGrid& grid = u.grid();
  PointEvaluator eval = [&](std::span<const Vec3> pts) { return eval_scattered_at(Q, u, params, pts); };
  return annulus_decay_study(eval, params.k, Rs, std::sqrt(3.0) * grid.L + grid.h(), nodes);
}

ComplexField lap_resolvent_apply(const ComplexField& f, double s, double lambda, double eps,
                                 int factor) {
  if (!(eps > 0.0)) throw Error(ErrorKind::ValidationError, "resolvent needs eps > 0");
  if (factor < 1) throw Error(ErrorKind::ValidationError, "box factor must be >= 1");
  const BoxGrid& g = f.grid();
  const BoxGrid big{g.L * factor, g.n * factor};
  const int off = (big.n - g.n) / 2;
  std::vector<cplx> data(big.size(), 0.0);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      for (int l = 0; l < g.n; ++l) data[big.index(i + off, j + off, l + off)] = f[g.index(i, j, l)];
    }
  }
  Fft3 fft(big.n, big.n, big.n);
  fft.forward(data);
  const cplx z(lambda, eps);
  const double inv = 1.0 / static_cast<double>(big.size());
  for (int i = 0; i < big.n; ++i) {
    const double xi = grid_frequency(big, i);
    for (int j = 0; j < big.n; ++j) {
      const double xj = grid_frequency(big, j);
      for (int l = 0; l < big.n; ++l) {
        const double xl = grid_frequency(big, l);
        const double mag2 = xi * xi + xj * xj + xl * xl;
        data[big.index(i, j, l)] *= inv / (std::pow(mag2, s) - z);
      }
    }
  }
  fft.backward(data);
  ComplexField out(g);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      for (int l = 0; l < g.n; ++l) out[g.index(i, j, l)] = data[big.index(i + off, j + off, l + off)];
    }
  }
  return out;
}

ComplexField free_resolvent_apply(const ComplexField& f, double s, double lambda, double eps,
                                  const QuadratureConfig& quad) {
  if (!(eps > 0.0)) throw Error(ErrorKind::ValidationError, "resolvent needs eps > 0");
  const cplx z(lambda, eps);
  const GreenOperator G(f.grid(), [&](double r) { return resolvent_kernel(r, s, z, quad).value; });
  return G.apply(f);
}

}  // namespace frachelm
