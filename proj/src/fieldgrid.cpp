#include "frachelm/fieldgrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frachelm/errors.hpp"
#include "frachelm/fft.hpp"

namespace frachelm {

namespace {

std::vector<cplx> axis_phases(const BoxGrid& grid, double xi) {
  std::vector<cplx> p(grid.n);
  for (int i = 0; i < grid.n; ++i) p[i] = std::polar(1.0, -xi * grid.coord(i));
  return p;
}

template <class Values>
cplx separable_transform(const BoxGrid& grid, const Values& values, const Vec3& xi) {
  const std::vector<cplx> px = axis_phases(grid, xi.x);
  const std::vector<cplx> py = axis_phases(grid, xi.y);
  const std::vector<cplx> pz = axis_phases(grid, xi.z);
  const int n = grid.n;
  cplx total = 0.0;
  for (int i = 0; i < n; ++i) {
    cplx plane = 0.0;
    for (int j = 0; j < n; ++j) {
      cplx line = 0.0;
      const std::size_t base = grid.index(i, j, 0);
      for (int k = 0; k < n; ++k) line += pz[k] * values[base + k];
      plane += py[j] * line;
    }
    total += px[i] * plane;
  }
  return total * grid.cell_volume();
}

template <class Values>
double lp_norm_impl(const BoxGrid& grid, const Values& values, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p > 0.0)) throw Error(ErrorKind::ValidationError, "lp_norm needs p > 0");
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = std::pow(std::abs(values[i]), p);
  return std::pow(pairwise_sum(terms) * grid.cell_volume(), 1.0 / p);
}

}  // namespace

double grid_frequency(const BoxGrid& grid, int idx) {
  const int m = idx <= grid.n / 2 ? idx : idx - grid.n;
  return std::numbers::pi * m / grid.L;
}

ComplexField dft_forward(const ComplexField& field) {
  const BoxGrid& g = field.grid();
  std::vector<cplx> data(field.values().begin(), field.values().end());
  Fft3(g.n, g.n, g.n).forward(data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (cplx& v : data) v *= scale;
  return ComplexField(g, std::move(data));
}

ComplexField dft_inverse(const ComplexField& spectrum) {
  const BoxGrid& g = spectrum.grid();
  std::vector<cplx> data(spectrum.values().begin(), spectrum.values().end());
  Fft3(g.n, g.n, g.n).backward(data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (cplx& v : data) v *= scale;
  return ComplexField(g, std::move(data));
}

ComplexField frac_laplacian_apply(const ComplexField& field, double s, FracVariant variant) {
  if (!(s > 0.0 && s < 1.5)) throw Error(ErrorKind::ValidationError, "order s must lie in (0, 3/2)");
  const BoxGrid& g = field.grid();
  const int n = g.n;
  std::vector<cplx> data(field.values().begin(), field.values().end());
  Fft3 fft(n, n, n);
  fft.forward(data);
  const double exponent = variant == FracVariant::laplacian ? 2.0 * s : s;
  const double inv = 1.0 / static_cast<double>(g.size());
  std::vector<double> xi2(n);
  for (int i = 0; i < n; ++i) xi2[i] = std::pow(grid_frequency(g, i), 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double mag2 = xi2[i] + xi2[j] + xi2[k];
        data[g.index(i, j, k)] *= std::pow(mag2, 0.5 * exponent) * inv;
      }
    }
  }
  fft.backward(data);
  return ComplexField(g, std::move(data));
}

cplx fourier_at(const ComplexField& field, const Vec3& xi) {
  return separable_transform(field.grid(), field.values(), xi);
}

cplx fourier_at(const Potential& potential, const Vec3& xi) {
  return separable_transform(potential.grid(), potential.values(), xi);
}

double lp_norm(const ComplexField& field, double p) {
  return lp_norm_impl(field.grid(), field.values(), p);
}

double lp_norm(const Potential& potential, double p) {
  return lp_norm_impl(potential.grid(), potential.values(), p);
}

// ---------------------------------------------------------------------------

GreenOperator::GreenOperator(const BoxGrid& grid, const ScatteringParams& params,
                             KernelMethod method, const QuadratureConfig& quad)
    : grid_(grid) {
  grid.validate();
  params.validate();
  const double h = grid.h();
  const double r_max = 1.01 * std::sqrt(3.0) * grid.n * h;
  try {
    const KernelTable table(params, 0.25 * h, r_max, method, quad);
    auto kernel = [&table](double r) { return table(r); };
    build(kernel, cell_integral(kernel, h));
  } catch (const Error& e) {
    throw Error(ErrorKind::KernelTabulationFailed, e.what());
  }
}

GreenOperator::GreenOperator(const BoxGrid& grid, const std::function<cplx(double)>& kernel)
    : grid_(grid) {
  grid.validate();
  try {
    build(kernel, cell_integral(kernel, grid.h()));
  } catch (const Error& e) {
    throw Error(ErrorKind::KernelTabulationFailed, e.what());
  }
}

void GreenOperator::build(const std::function<cplx(double)>& kernel, cplx self_weight) {
  self_weight_ = self_weight;
  const int n = grid_.n;
  const int n2 = 2 * n;
  const double h = grid_.h();
  const double vol = grid_.cell_volume();

  // Kernel values depend on the squared integer offset only.
  const int max_m = 3 * n * n;
  std::vector<char> needed(max_m + 1, 0);
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      for (int c = 0; c <= n; ++c) needed[a * a + b * b + c * c] = 1;
    }
  }
  std::vector<int> distinct;
  for (int m = 1; m <= max_m; ++m) {
    if (needed[m]) distinct.push_back(m);
  }
  std::vector<cplx> by_m(max_m + 1, 0.0);
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t t = 0; t < distinct.size(); ++t) {
    const int m = distinct[t];
    try {
      const cplx v = kernel(h * std::sqrt(static_cast<double>(m)));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(ErrorKind::KernelTabulationFailed, "non-finite kernel sample");
      by_m[m] = v * vol;
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw Error(ErrorKind::KernelTabulationFailed, failure);
  by_m[0] = self_weight;

  auto data = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(n2) * n2 * n2);
  auto offset = [n, n2](int d) { return d < n ? d : d - n2; };
  for (int i = 0; i < n2; ++i) {
    const int oi = offset(i);
    for (int j = 0; j < n2; ++j) {
      const int oj = offset(j);
      for (int k = 0; k < n2; ++k) {
        const int ok = offset(k);
        (*data)[(static_cast<std::size_t>(i) * n2 + j) * n2 + k] = by_m[oi * oi + oj * oj + ok * ok];
      }
    }
  }
  Fft3(n2, n2, n2).forward(*data);
  kernel_hat_ = std::move(data);
}

ComplexField GreenOperator::apply(const ComplexField& f) const {
  if (!(f.grid() == grid_)) throw Error(ErrorKind::GridMismatch, "GreenOperator grid mismatch");
  const int n = grid_.n;
  const int n2 = 2 * n;
  const std::size_t total = static_cast<std::size_t>(n2) * n2 * n2;
  std::vector<cplx> work(total, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t src = grid_.index(i, j, 0);
      const std::size_t dst = (static_cast<std::size_t>(i) * n2 + j) * n2;
      std::copy_n(f.values().begin() + src, n, work.begin() + dst);
    }
  }
  Fft3 fft(n2, n2, n2);
  fft.forward(work);
  const std::vector<cplx>& kh = *kernel_hat_;
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) work[i] *= kh[i] * inv;
  fft.backward(work);
  std::vector<cplx> out(grid_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t src = (static_cast<std::size_t>(i) * n2 + j) * n2;
      std::copy_n(work.begin() + src, n, out.begin() + grid_.index(i, j, 0));
    }
  }
  return ComplexField(grid_, std::move(out));
}

ComplexField convolve_green(const ComplexField& f, const ScatteringParams& params,
                            const QuadratureConfig& quad) {
  return GreenOperator(f.grid(), params, KernelMethod::automatic, quad).apply(f);
}

// ---------------------------------------------------------------------------

namespace {

double annulus_integral(const PointEvaluator& evaluator, double r_in, double R, int nodes,
                        int order) {
  const GaussRule& radial = gauss_legendre(nodes);
  const SphereQuadrature sphere = make_sphere_quadrature(order);
  std::vector<Vec3> points;
  points.reserve(radial.nodes.size() * sphere.size());
  std::vector<double> weights;
  weights.reserve(points.capacity());
  const double half = 0.5 * (R - r_in);
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double r = r_in + half * (radial.nodes[i] + 1.0);
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      points.push_back(sphere.nodes[j] * r);
      weights.push_back(half * radial.weights[i] * r * r * sphere.weights[j]);
    }
  }
  const std::vector<cplx> values = evaluator(points);
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = weights[i] * std::norm(values[i]);
  return pairwise_sum(terms);
}

}  // namespace

AnnulusAverage annulus_l2_average(const PointEvaluator& evaluator, double R, double k, int nodes,
                                  double r_inner) {
  if (!(R > r_inner)) throw Error(ErrorKind::ValidationError, "annulus needs R > inner radius");
  if (nodes < 4) throw Error(ErrorKind::ValidationError, "annulus needs >= 4 radial nodes");
  const int order = std::clamp(static_cast<int>(std::ceil(2.0 * k)) + 8, 8, 48);
  const double full = annulus_integral(evaluator, r_inner, R, nodes, order);
  const double coarse = annulus_integral(evaluator, r_inner, R, nodes / 2, std::max(4, order / 2));
  const double value = std::sqrt(std::max(full, 0.0) / R);
  const double value_coarse = std::sqrt(std::max(coarse, 0.0) / R);
  return {value, std::abs(value - value_coarse)};
}

}  // namespace frachelm
