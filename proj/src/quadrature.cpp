#include "frachelm/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "frachelm/errors.hpp"

namespace frachelm {

namespace {

GaussRule build_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::ValidationError, "Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_gauss_legendre(n));
  return *slot;
}

std::vector<double> bisect_panels(std::span<const double> breaks) {
  std::vector<double> out;
  if (breaks.empty()) return out;
  out.reserve(2 * breaks.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    out.push_back(breaks[i]);
    out.push_back(0.5 * (breaks[i] + breaks[i + 1]));
  }
  out.push_back(breaks.back());
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SphereQuadrature make_sphere_quadrature(int order) {
  if (order < 2) throw Error(ErrorKind::ValidationError, "sphere quadrature order must be >= 2");
  SphereQuadrature q;
  q.order = order;
  const int n_polar = order + 1;
  const int n_azimuth = order + 1;
  const GaussRule& rule = gauss_legendre(n_polar);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  q.nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  for (int i = 0; i < n_polar; ++i) {
    const double ct = rule.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = (j + 0.5) * dphi;
      q.nodes.push_back({st * std::cos(phi), st * std::sin(phi), ct});
      q.weights.push_back(rule.weights[i] * dphi);
    }
  }
  return q;
}

}  // namespace frachelm
