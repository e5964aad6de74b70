#include "frachelm/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frachelm/errors.hpp"
#include "frachelm/quadrature.hpp"

namespace frachelm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_positive_radius(double r) {
  if (!(r > 0.0)) {
    std::ostringstream os;
    os << "kernel evaluated at r = " << r;
    throw Error(ErrorKind::NonpositiveRadius, os.str());
  }
}

void check_converged(const KernelEval& e, const QuadratureConfig& quad, std::string_view what) {
  const double scale = std::max(std::abs(e.value), 1e-300);
  if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()) ||
      e.est_error > 10.0 * quad.tol * scale) {
    std::ostringstream os;
    os << what << " at r = " << e.r << ": estimated error " << e.est_error << " vs |value| "
       << std::abs(e.value);
    throw Error(ErrorKind::QuadratureNotConverged, os.str());
  }
}

// t^{2s} - 1 without cancellation near t = 1.
double pow2s_minus_one(double t, double s) { return std::expm1(2.0 * s * std::log1p(t - 1.0)); }

// Tail int_T^inf f(t) e^{i a t} dt for f(t) = t/(t^{2s} - c) = sum_j c^j t^{1-2s(j+1)},
// by repeated integration by parts:
//   -e^{iaT} sum_n (-1)^n f^{(n)}(T) / (ia)^{n+1}.
struct TailResult {
  cplx value;
  double error;
};

TailResult oscillatory_tail(double a, double T, double s, cplx c) {
  const double ratio = std::abs(c) / std::pow(T, 2.0 * s);
  const int terms = std::clamp(static_cast<int>(std::ceil(-40.0 / std::log(ratio))), 1, 400);
  std::vector<double> beta(terms);
  std::vector<cplx> coef(terms);
  cplx cj = 1.0;
  for (int j = 0; j < terms; ++j) {
    beta[j] = 1.0 - 2.0 * s * (j + 1);
    coef[j] = cj * std::pow(T, beta[j]);  // c^j T^{beta_j}, updated by (beta-n)/T below
    cj *= c;
  }
  const cplx ia = kI * a;
  cplx sum = 0.0;
  cplx denom = ia;
  double last = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 0; n < 80; ++n) {
    cplx deriv = 0.0;  // f^{(n)}(T)
    for (int j = 0; j < terms; ++j) deriv += coef[j];
    const cplx term = (n % 2 == 0 ? 1.0 : -1.0) * deriv / denom;
    const double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic series started to diverge
    sum += term;
    last = mag;
    prev = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
    for (int j = 0; j < terms; ++j) coef[j] *= (beta[j] - n) / T;
    denom *= ia;
  }
  return {-std::exp(ia * T) * sum, last};
}

// int_T^inf f(t) sin(a t) dt for complex f assembled from the two exponentials.
TailResult sine_tail(double a, double T, double s, cplx c) {
  const TailResult plus = oscillatory_tail(a, T, s, c);
  const TailResult minus = oscillatory_tail(-a, T, s, c);
  return {(plus.value - minus.value) / (2.0 * kI), 0.5 * (plus.error + minus.error)};
}

// Panel breaks on [lo, hi]: width limited by `cap` and by `growth * t`.
void append_breaks(std::vector<double>& breaks, double lo, double hi, double cap,
                   double growth = 0.0) {
  if (breaks.empty() || breaks.back() != lo) breaks.push_back(lo);
  double t = lo;
  while (t < hi) {
    double w = cap;
    if (growth > 0.0) w = std::min(w, std::max(growth * t, 1e-300));
    t = std::min(hi, t + w);
    if (hi - t < 1e-3 * w) t = hi;
    breaks.push_back(t);
  }
}

// Breaks refined geometrically towards `center` (width min_w there), growing by 2x
// until reaching `cap`, covering [lo, hi].
std::vector<double> graded_breaks(double lo, double hi, double center, double min_w, double cap) {
  std::vector<double> left;
  std::vector<double> right;
  double w = std::min(min_w, cap);
  double t = center;
  while (t > lo) {
    t = std::max(lo, t - w);
    left.push_back(t);
    w = std::min(2.0 * w, cap);
  }
  w = std::min(min_w, cap);
  t = center;
  while (t < hi) {
    t = std::min(hi, t + w);
    right.push_back(t);
    w = std::min(2.0 * w, cap);
  }
  std::vector<double> out(left.rbegin(), left.rend());
  out.push_back(center);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

// Rescaled subordination integral
//   int_0^inf sigma^{2s+1} e^{-a sigma} / (sigma^{4s} - 2 sigma^{2s} cos(s pi) + 1) d sigma.
struct LaplaceResult {
  double value;
  double error;
};

LaplaceResult laplace_integral(double a, double s, int nodes) {
  const double cos_spi = std::cos(s * kPi);
  auto f = [&](double sigma) {
    if (sigma <= 0.0) return 0.0;
    const double p = std::pow(sigma, 2.0 * s);
    return p * sigma * std::exp(-a * sigma) / (p * p - 2.0 * p * cos_spi + 1.0);
  };
  const double decay = 1.0 / a;
  const double sigma_end = 50.0 * decay;
  std::vector<double> breaks{0.0};
  double t = std::min(1e-7, 1e-7 * decay);
  breaks.push_back(t);
  while (t < sigma_end) {
    double w = std::min(t, decay);
    if (t >= 0.125 && t < 8.0) w = std::min(w, 0.125);
    t = std::min(sigma_end, t + w);
    breaks.push_back(t);
  }
  const double coarse = integrate_panels(std::span<const double>(breaks), nodes, f);
  const std::vector<double> fine_breaks = bisect_panels(breaks);
  const double fine = integrate_panels(std::span<const double>(fine_breaks), nodes, f);
  return {fine, std::abs(fine - coarse)};
}

// P.V. int_0^inf t sin(a t)/(t^{2s} - 1) dt.
struct PvResult {
  double value;
  double error;
};

PvResult pv_radial_integral(double a, double s, const QuadratureConfig& quad) {
  const double w = quad.pv_window;
  const double half_period = kPi / a;
  const double g1 = std::sin(a);
  auto plain = [&](double t) { return t * std::sin(a * t) / pow2s_minus_one(t, s); };
  // Smooth across t = 1: the subtracted simple pole integrates to zero on the
  // symmetric window.
  auto subtracted = [&](double t) {
    return t * std::sin(a * t) / pow2s_minus_one(t, s) - g1 / (2.0 * s * (t - 1.0));
  };

  const double T = std::max({quad.tail_cut, 3.0, 1.0 + w, 150.0 / a});

  std::vector<double> inner;
  append_breaks(inner, 0.0, 1.0 - w, std::min(0.25, half_period));
  std::vector<double> window;
  {
    // Even panel count keeps t = 1 a breakpoint, so no node sits on the pole.
    const double cap = std::min(0.125, half_period);
    const int per_side = std::max(1, static_cast<int>(std::ceil(w / cap)));
    for (int i = -per_side; i <= per_side; ++i) window.push_back(1.0 + w * i / per_side);
  }
  std::vector<double> outer;
  append_breaks(outer, 1.0 + w, T, half_period, 0.5);

  auto evaluate = [&](const std::vector<double>& b_in, const std::vector<double>& b_win,
                      const std::vector<double>& b_out) {
    return integrate_panels(std::span<const double>(b_in), quad.panels, plain) +
           integrate_panels(std::span<const double>(b_win), quad.panels, subtracted) +
           integrate_panels(std::span<const double>(b_out), quad.panels, plain);
  };
  const double coarse = evaluate(inner, window, outer);
  const double fine = evaluate(bisect_panels(inner), bisect_panels(window), bisect_panels(outer));
  const TailResult tail = sine_tail(a, T, s, 1.0);
  return {fine + tail.value.real(), std::abs(fine - coarse) + tail.error};
}

}  // namespace

std::string_view to_string(KernelMethod method) {
  switch (method) {
    case KernelMethod::automatic: return "auto";
    case KernelMethod::subordination: return "subordination";
    case KernelMethod::principal_value: return "principal-value";
    case KernelMethod::eps_fourier: return "eps-fourier";
    case KernelMethod::asymptotic: return "asymptotic";
  }
  return "unknown";
}

KernelMethod kernel_method_from_string(std::string_view name) {
  if (name == "auto" || name == "automatic") return KernelMethod::automatic;
  if (name == "subord" || name == "subordination") return KernelMethod::subordination;
  if (name == "pv" || name == "principal-value") return KernelMethod::principal_value;
  if (name == "eps" || name == "eps-fourier") return KernelMethod::eps_fourier;
  if (name == "asymptotic" || name == "farfield") return KernelMethod::asymptotic;
  throw Error(ErrorKind::ValidationError, "unknown kernel method '" + std::string(name) + "'");
}

KernelMethod default_method(double s) {
  return s < 1.0 ? KernelMethod::subordination : KernelMethod::principal_value;
}

double s3_kernel(double t) {
  static const double c = std::sqrt(2.0 / kPi);
  if (t < 1e-4) {
    const double t2 = t * t;
    return c * (1.0 - t2 / 6.0 + t2 * t2 / 120.0);
  }
  return c * std::sin(t) / t;
}

cplx phi1(double r, const ScatteringParams& params) {
  require_positive_radius(r);
  const double phase = params.branch * params.k * r;
  return cplx(std::cos(phase), std::sin(phase)) / (4.0 * kPi * r);
}

cplx phi_s_farfield(double r, const ScatteringParams& params) {
  const double pref = std::pow(params.k, 2.0 * (1.0 - params.s)) / params.s;
  return pref * phi1(r, params);
}

KernelEval subordination_correction(double r, const ScatteringParams& params,
                                    const QuadratureConfig& quad) {
  require_positive_radius(r);
  KernelEval out{r, 0.0, KernelMethod::subordination, 0.0};
  const double s = params.s;
  if (s == 1.0) return out;
  const double k = params.k;
  const LaplaceResult lap = laplace_integral(k * r, s, quad.laplace_nodes);
  const double pref = std::sin(s * kPi) / kPi * 2.0 * std::pow(k, 2.0 - 2.0 * s) / (4.0 * kPi * r);
  out.value = pref * lap.value;
  out.est_error = std::abs(pref) * lap.error;
  check_converged(out, quad, "subordination correction");
  return out;
}

KernelEval phi_s_subordination(double r, const ScatteringParams& params,
                               const QuadratureConfig& quad) {
  KernelEval corr = subordination_correction(r, params, quad);
  corr.value += phi_s_farfield(r, params);
  // tolerance is judged against the full kernel
  check_converged(corr, quad, "subordination kernel");
  return corr;
}

KernelEval phi_s_pv(double r, const ScatteringParams& params, const QuadratureConfig& quad) {
  require_positive_radius(r);
  const double s = params.s;
  const double k = params.k;
  const double a = k * r;
  const PvResult pv = pv_radial_integral(a, s, quad);
  const double pref = std::pow(k, 2.0 - 2.0 * s) / (2.0 * kPi * kPi * r);
  const double imag = params.branch * kPi / (2.0 * s) * std::sin(a);
  KernelEval out{r, pref * cplx(pv.value, imag), KernelMethod::principal_value,
                 std::abs(pref) * pv.error};
  check_converged(out, quad, "principal-value kernel");
  return out;
}

KernelEval resolvent_kernel(double r, double s, cplx z, const QuadratureConfig& quad) {
  require_positive_radius(r);
  if (z.imag() == 0.0) {
    throw Error(ErrorKind::ValidationError, "resolvent_kernel needs Im z != 0");
  }
  const double q = std::pow(std::abs(z), 1.0 / (2.0 * s));
  const cplx c = z / std::abs(z);
  const double a = q * r;
  const cplx pole = std::pow(c, 1.0 / (2.0 * s));
  const double center = pole.real();
  const double width = std::abs(pole.imag());
  const double half_period = kPi / a;
  const double T = std::max({quad.tail_cut, 3.0, 2.0 * center + 1.0, 150.0 / a});

  auto f = [&](double t) { return t * std::sin(a * t) / (std::pow(t, 2.0 * s) - c); };
  const double cap = std::min(0.125, half_period);
  const double near_hi = std::min(T, center + 1.0);
  std::vector<double> breaks = graded_breaks(0.0, near_hi, center, 0.5 * width, cap);
  append_breaks(breaks, near_hi, T, half_period, 0.5);

  const cplx coarse = integrate_panels(std::span<const double>(breaks), quad.panels, f);
  const std::vector<double> fine_breaks = bisect_panels(breaks);
  const cplx fine = integrate_panels(std::span<const double>(fine_breaks), quad.panels, f);
  const TailResult tail = sine_tail(a, T, s, c);
  const double pref = std::pow(q, 2.0 - 2.0 * s) / (2.0 * kPi * kPi * r);
  KernelEval out{r, pref * (fine + tail.value), KernelMethod::eps_fourier,
                 pref * (std::abs(fine - coarse) + tail.error)};
  check_converged(out, quad, "eps-Fourier kernel");
  return out;
}

cplx phi_s_eps_oracle(const Vec3& x, const ScatteringParams& params, double eps,
                      const QuadratureConfig& quad) {
  if (!(eps > 0.0)) throw Error(ErrorKind::ValidationError, "eps must be positive");
  const cplx kc(params.k, params.branch * eps);
  return resolvent_kernel(norm(x), params.s, std::pow(kc, 2.0 * params.s), quad).value;
}

KernelEval phi_s_eps_extrapolated(double r, const ScatteringParams& params,
                                  const QuadratureConfig& quad) {
  require_positive_radius(r);
  const double eps0 = std::min(quad.eps, 0.2 / r);
  cplx v[3];
  for (int j = 0; j < 3; ++j) {
    v[j] = phi_s_eps_oracle({r, 0.0, 0.0}, params, eps0 / std::ldexp(1.0, j), quad);
  }
  // The regularized kernel is analytic in eps, so the bias is a power series.
  const cplx r10 = 2.0 * v[1] - v[0];
  const cplx r11 = 2.0 * v[2] - v[1];
  const cplx r2 = (4.0 * r11 - r10) / 3.0;
  return {r, r2, KernelMethod::eps_fourier, std::abs(r2 - r11)};
}

KernelEval phi_s(double r, const ScatteringParams& params, KernelMethod method,
                 const QuadratureConfig& quad) {
  if (method == KernelMethod::automatic) method = default_method(params.s);
  switch (method) {
    case KernelMethod::subordination: return phi_s_subordination(r, params, quad);
    case KernelMethod::principal_value: return phi_s_pv(r, params, quad);
    case KernelMethod::eps_fourier: return phi_s_eps_extrapolated(r, params, quad);
    case KernelMethod::asymptotic:
      return {r, phi_s_farfield(r, params), KernelMethod::asymptotic, 0.0};
    case KernelMethod::automatic: break;
  }
  throw Error(ErrorKind::ValidationError, "unresolved kernel method");
}

// ---------------------------------------------------------------------------

KernelTable::KernelTable(const ScatteringParams& params, double r_min, double r_max,
                         KernelMethod method, const QuadratureConfig& quad, int per_decade)
    : params_(params),
      method_(method == KernelMethod::automatic ? default_method(params.s) : method),
      quad_(quad),
      r_min_(r_min),
      r_max_(r_max),
      far_pref_(std::pow(params.k, 2.0 * (1.0 - params.s)) / (4.0 * std::numbers::pi * params.s)) {
  if (!(r_min > 0.0 && r_max > r_min)) {
    throw Error(ErrorKind::ValidationError, "KernelTable needs 0 < r_min < r_max");
  }
  if (method_ == KernelMethod::asymptotic || params.s == 1.0) {
    zero_ = true;
    return;
  }
  du_ = std::log(10.0) / per_decade;
  // one guard node on each side for the 4-point stencil
  log_min_ = std::log(r_min) - du_;
  const int count = static_cast<int>(std::ceil((std::log(r_max) - log_min_) / du_)) + 3;
  std::vector<double> raw(count);
  for (int i = 0; i < count; ++i) raw[i] = direct_correction(std::exp(log_min_ + i * du_));
  sign_ = raw.front() < 0.0 ? -1.0 : 1.0;
  log_scale_ = std::all_of(raw.begin(), raw.end(), [&](double v) { return v * sign_ > 0.0; });
  samples_.resize(count);
  for (int i = 0; i < count; ++i) {
    samples_[i] = log_scale_ ? std::log(sign_ * raw[i]) : raw[i];
  }
}

double KernelTable::direct_correction(double r) const {
  if (method_ == KernelMethod::subordination) {
    return subordination_correction(r, params_, quad_).value.real();
  }
  return (phi_s(r, params_, method_, quad_).value - phi_s_farfield(r, params_)).real();
}

double KernelTable::correction(double r) const {
  if (zero_) return 0.0;
  if (r < r_min_ || r > r_max_) return direct_correction(r);
  const double u = (std::log(r) - log_min_) / du_;
  int i = static_cast<int>(std::floor(u)) - 1;
  i = std::clamp(i, 0, static_cast<int>(samples_.size()) - 4);
  const double x = u - i;  // in [1, 2) for interior points
  // 4-point Lagrange through nodes 0..3
  const double l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
  const double l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
  const double l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
  const double l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
  const double y = l0 * samples_[i] + l1 * samples_[i + 1] + l2 * samples_[i + 2] +
                   l3 * samples_[i + 3];
  return log_scale_ ? sign_ * std::exp(y) : y;
}

cplx KernelTable::operator()(double r) const {
  if (!(r > 0.0)) throw Error(ErrorKind::NonpositiveRadius, "kernel needs r > 0");
  return std::polar(far_pref_ / r, params_.branch * params_.k * r) + correction(r);
}

// ---------------------------------------------------------------------------

cplx cell_integral(const std::function<cplx(double)>& phi, double h) {
  const double c = 0.5 * h;
  // F(c) = int_0^c phi(r) r^2 dr with r = c v^3, which turns r^{2s-1} into v^{6s-1}.
  const GaussRule& radial = gauss_legendre(48);
  cplx core = 0.0;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double v = 0.5 * (radial.nodes[i] + 1.0);
    const double v2 = v * v;
    const double r = c * v2 * v;
    core += 0.5 * radial.weights[i] * phi(r) * (v2 * v2 * v2 * v2);
  }
  core *= 3.0 * c * c * c;

  // Six pyramids over the faces. With the face x = c parametrized by (y, z),
  // the solid-angle element is c/rho^3 dy dz and rho = sqrt(c^2 + y^2 + z^2).
  const GaussRule& face = gauss_legendre(16);
  const GaussRule& shell = gauss_legendre(12);
  cplx outer = 0.0;
  for (std::size_t i = 0; i < face.nodes.size(); ++i) {
    const double y = 0.5 * c * (face.nodes[i] + 1.0);
    for (std::size_t j = 0; j < face.nodes.size(); ++j) {
      const double z = 0.5 * c * (face.nodes[j] + 1.0);
      const double rho = std::sqrt(c * c + y * y + z * z);
      cplx g = 0.0;
      for (std::size_t q = 0; q < shell.nodes.size(); ++q) {
        const double r = c + 0.5 * (rho - c) * (shell.nodes[q] + 1.0);
        g += shell.weights[q] * phi(r) * r * r;
      }
      g *= 0.5 * (rho - c);
      outer += face.weights[i] * face.weights[j] * (c / (rho * rho * rho)) * g;
    }
  }
  // (c/2)^2 from the face map, 4 quadrants, 6 faces
  outer *= 0.25 * c * c * 4.0 * 6.0;
  return 4.0 * kPi * core + outer;
}

}  // namespace frachelm
