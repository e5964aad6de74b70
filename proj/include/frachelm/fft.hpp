#pragma once

#include <complex>
#include <span>

namespace frachelm {

/// Unnormalized in-place 3D complex FFT (FFTW backend). Plans are created
/// once per shape under a global lock; execution is reentrant.
class Fft3 {
 public:
  Fft3(int n0, int n1, int n2);

  /// sum_x f(x) e^{-2 pi i k.x/n}
  void forward(std::span<std::complex<double>> data) const;
  /// sum_k F(k) e^{+2 pi i k.x/n}
  void backward(std::span<std::complex<double>> data) const;

  std::size_t size() const { return static_cast<std::size_t>(n0_) * n1_ * n2_; }

 private:
  int n0_, n1_, n2_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace frachelm
