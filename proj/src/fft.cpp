#include "frachelm/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace frachelm {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// Plans live for the whole program; FFTW_ESTIMATE keeps them deterministic.
PlanPair plans_for(int n0, int n1, int n2) {
  static std::map<std::tuple<int, int, int>, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  const auto key = std::make_tuple(n0, n1, n2);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const std::size_t count = static_cast<std::size_t>(n0) * n1 * n2;
  fftw_complex* scratch = fftw_alloc_complex(count);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.forward = fftw_plan_dft_3d(n0, n1, n2, scratch, scratch, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft_3d(n0, n1, n2, scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  cache.emplace(key, p);
  return p;
}

}  // namespace

Fft3::Fft3(int n0, int n1, int n2) : n0_(n0), n1_(n1), n2_(n2) {
  const PlanPair p = plans_for(n0, n1, n2);
  forward_plan_ = p.forward;
  backward_plan_ = p.backward;
}

void Fft3::forward(std::span<std::complex<double>> data) const {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), ptr, ptr);
}

void Fft3::backward(std::span<std::complex<double>> data) const {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), ptr, ptr);
}

}  // namespace frachelm
