#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "frachelm/vec3.hpp"

namespace frachelm {

using cplx = std::complex<double>;

/// Cell-centered cube [-L, L]^3 with n nodes per axis, x_i = -L + (i + 1/2) h.
struct BoxGrid {
  double L = 1.0;
  int n = 32;

  double h() const { return 2.0 * L / n; }
  double cell_volume() const { const double a = h(); return a * a * a; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double coord(int i) const { return -L + (i + 0.5) * h(); }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  /// Row-major with the z index fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }

  void validate() const;
  bool operator==(const BoxGrid&) const = default;
};

/// Complex samples on every node of a grid.
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(const BoxGrid& grid);
  ComplexField(const BoxGrid& grid, std::vector<cplx> values);

  const BoxGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(cplx a);

  /// Throws GridMismatch unless both fields live on the same grid.
  void require_same_grid(const ComplexField& o) const;

 private:
  BoxGrid grid_;
  std::vector<cplx> values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(cplx a, ComplexField b);

/// Real, compactly supported potential. The two outermost cell layers must
/// vanish so that supp Q sits strictly inside the box.
class Potential {
 public:
  Potential() = default;
  Potential(const BoxGrid& grid, std::vector<double> values);

  const BoxGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double sup_norm() const { return sup_norm_; }
  std::size_t size() const { return values_.size(); }

  Potential scaled(double factor) const;
  /// Shifted by whole cells; throws ValidationError if support leaves the interior.
  Potential translated(int di, int dj, int dk) const;
  /// Stable 64-bit digest of grid and values (cache keys, manifests).
  std::uint64_t digest() const;

 private:
  BoxGrid grid_;
  std::vector<double> values_;
  double sup_norm_ = 0.0;
};

/// Analytic description of a potential that can be sampled on any grid.
struct PotentialSpec {
  Vec3 center{};
  double width = 0.25;       // Gaussian standard deviation
  double height = 1.0;
  double cutoff_inner = 0.55;  // taper starts
  double cutoff_outer = 0.8;   // identically zero beyond

  double operator()(const Vec3& x) const;
  Potential sample(const BoxGrid& grid) const;
};

/// exp(-|x|^2/(2*0.25^2)) smoothly tapered to zero outside |x| <= 0.8.
PotentialSpec stock_potential();

}  // namespace frachelm
