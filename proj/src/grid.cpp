#include "frachelm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "frachelm/errors.hpp"
#include "frachelm/field_io.hpp"

namespace frachelm {

void BoxGrid::validate() const {
  if (!(L > 0.0)) throw Error(ErrorKind::ValidationError, "grid half-width L must be positive");
  if (n < 8) throw Error(ErrorKind::ValidationError, "grid needs n >= 8 points per axis");
}

ComplexField::ComplexField(const BoxGrid& grid) : grid_(grid), values_(grid.size()) {
  grid.validate();
}

ComplexField::ComplexField(const BoxGrid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  grid.validate();
  if (values_.size() != grid.size()) {
    throw Error(ErrorKind::GridMismatch, "value count does not match n^3");
  }
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::ValidationError, "field contains non-finite values");
    }
  }
}

void ComplexField::require_same_grid(const ComplexField& o) const {
  if (!(grid_ == o.grid_)) throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx a) {
  for (cplx& v : values_) v *= a;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(cplx a, ComplexField b) { return b *= a; }

Potential::Potential(const BoxGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid.validate();
  if (values_.size() != grid.size()) {
    throw Error(ErrorKind::GridMismatch, "potential value count does not match n^3");
  }
  const int n = grid.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double v = values_[grid.index(i, j, k)];
        if (!std::isfinite(v)) throw Error(ErrorKind::ValidationError, "potential not finite");
        const int edge = std::min({i, j, k, n - 1 - i, n - 1 - j, n - 1 - k});
        if (edge < 2 && v != 0.0) {
          std::ostringstream os;
          os << "potential must vanish on the two outermost cell layers (node " << i << "," << j
             << "," << k << ")";
          throw Error(ErrorKind::ValidationError, os.str());
        }
        sup_norm_ = std::max(sup_norm_, std::abs(v));
      }
    }
  }
}

Potential Potential::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Potential(grid_, std::move(v));
}

Potential Potential::translated(int di, int dj, int dk) const {
  const int n = grid_.n;
  std::vector<double> v(values_.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double q = values_[grid_.index(i, j, k)];
        if (q == 0.0) continue;
        const int a = i + di, b = j + dj, c = k + dk;
        if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) {
          throw Error(ErrorKind::ValidationError, "translation moves support out of the box");
        }
        v[grid_.index(a, b, c)] = q;
      }
    }
  }
  return Potential(grid_, std::move(v));
}

std::uint64_t Potential::digest() const {
  std::uint64_t h = fnv1a(&grid_.n, sizeof(grid_.n));
  h = fnv1a(&grid_.L, sizeof(grid_.L), h);
  return fnv1a(values_.data(), values_.size() * sizeof(double), h);
}

namespace {

// C-infinity step: 1 for tau <= 0, 0 for tau >= 1.
double smooth_step_down(double tau) {
  if (tau <= 0.0) return 1.0;
  if (tau >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - tau));
  const double b = std::exp(-1.0 / tau);
  return a / (a + b);
}

}  // namespace

double PotentialSpec::operator()(const Vec3& x) const {
  const double r = norm(x - center);
  if (r >= cutoff_outer) return 0.0;
  const double taper = smooth_step_down((r - cutoff_inner) / (cutoff_outer - cutoff_inner));
  return height * std::exp(-r * r / (2.0 * width * width)) * taper;
}

Potential PotentialSpec::sample(const BoxGrid& grid) const {
  grid.validate();
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int k = 0; k < grid.n; ++k) v[grid.index(i, j, k)] = (*this)(grid.node(i, j, k));
    }
  }
  return Potential(grid, std::move(v));
}

PotentialSpec stock_potential() { return PotentialSpec{}; }

}  // namespace frachelm
