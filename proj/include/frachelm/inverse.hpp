#pragma once

#include <array>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "frachelm/farfield.hpp"
#include "frachelm/forward.hpp"

namespace frachelm {

/// rho = m + l, k = |rho|, theta = (m - l)/k, x_hat = -rho/k, so that
/// k x_hat - k theta = -2m and the Born amplitude samples Qhat(-2m).
struct FrequencyProbe {
  Vec3 m;
  Vec3 l;
  Vec3 rho;
  double k = 0.0;
  Vec3 theta;
  Vec3 x_hat;
  cplx qhat_estimate;
  double a = 0.0;

  Vec3 target() const { return m * -2.0; }
};

/// l = l_mag normalize(m x e), falling back to e = x axis when m is parallel
/// to e and to l = l_mag z when m = 0. Throws ValidationError unless
/// l_mag > 0 and k > k0.
FrequencyProbe make_probe(const Vec3& m, double l_mag, double k0 = 1.0,
                          const Vec3& e_fallback = {0.0, 0.0, 1.0});

/// Far-field data u^inf(k, x_hat, theta) for plane-wave amplitude a.
/// Implementations must be safe for concurrent calls.
using FarFieldOracle = std::function<cplx(double k, const Vec3& x_hat, const Vec3& theta, double a)>;

/// a^3 fourier_at(Q, k (x_hat - theta))
FarFieldOracle synthetic_born_oracle(const Potential& Q);

/// Samples a potential on whatever grid a given wavenumber needs.
using PotentialSampler = std::function<Potential(const BoxGrid&)>;

/// Full nonlinear solve per query. The grid is refined with k (see
/// grid_points_for) and a small LRU cache keeps recent Green operators.
class NonlinearOracle {
 public:
  NonlinearOracle(PotentialSampler sampler, double L, double s, SolverOptions options = {},
                  int n_min = 32, std::size_t cache_capacity = 2);

  cplx operator()(double k, const Vec3& x_hat, const Vec3& theta, double a) const;
  int grid_points(double k) const { return grid_points_for(k, L_, n_min_); }
  double s() const { return s_; }
  const SolverOptions& options() const { return options_; }

 private:
  struct Entry {
    double k;
    int n;
    std::shared_ptr<const GreenOperator> G;
    std::shared_ptr<const Potential> Q;
  };
  Entry lookup(double k) const;

  PotentialSampler sampler_;
  double L_;
  double s_;
  SolverOptions options_;
  int n_min_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  mutable std::list<Entry> lru_;
};

FarFieldOracle as_oracle(std::shared_ptr<const NonlinearOracle> oracle);

/// CSV with header k,xhat_x,xhat_y,xhat_z,theta_x,theta_y,theta_z,a,re,im.
std::vector<FarFieldSample> read_farfield_csv(const std::string& path);
std::string farfield_csv(const std::vector<FarFieldSample>& samples);
/// Exact lookup (1e-9 per field); throws CoverageGap for unknown queries.
FarFieldOracle table_oracle(std::vector<FarFieldSample> samples);

/// F(k, x_hat, theta)/a^3; also stores the value and a in the probe.
cplx qhat_from_farfield(const FarFieldOracle& oracle, FrequencyProbe& probe, double a);

struct RemainderRow {
  double k = 0.0;
  cplx estimate;
  double error = 0.0;  // |estimate - reference|
};

struct RemainderStudy {
  std::vector<RemainderRow> rows;
  DecayFit fit;
  bool floor_limited = false;
  bool slope_ok = false;  // fit.slope <= -1
};

/// Probes m at each k (l_mag = sqrt(k^2 - |m|^2)) and fits the error decay.
RemainderStudy remainder_rate_study(const FarFieldOracle& oracle, cplx reference, const Vec3& m,
                                    std::span<const double> ks, double a, double k0 = 1.0);

struct ReconstructionPlan {
  int n = 16;            // reconstruction grid points per axis
  double L = 1.0;        // box half width
  double xi_max = 16.0;  // band limit |xi| <= xi_max
  double l_min = 8.0;    // l_mag = max(l_min, l_scale |m|)
  double l_scale = 4.0;
  double a = 0.05;
  double k0 = 1.0;

  void validate() const;
};

/// Lattice frequencies xi = (pi/L) idx, idx in [-n/2, n/2)^3, with |xi| <= xi_max.
std::vector<std::array<int, 3>> band_lattice(const ReconstructionPlan& plan);
/// One probe per conjugate pair, target -2m = xi.
std::vector<FrequencyProbe> plan_probes(const ReconstructionPlan& plan);

struct ReconstructionResult {
  BoxGrid grid;
  std::vector<std::array<int, 3>> lattice;
  std::vector<cplx> qhat;   // Hermitian-symmetrized, one per lattice point
  std::vector<FrequencyProbe> probes;
  ComplexField q_rec;
  std::optional<double> rel_l2_error;
  double imag_ratio = 0.0;  // ||Im Q_rec||_2 / ||Re Q_rec||_2
};

/// Probes run in order of increasing k so oracle caches stay warm. Throws
/// CoverageGap if some lattice frequency has neither itself nor its
/// conjugate partner among the probes.
ReconstructionResult sweep_and_reconstruct(const FarFieldOracle& oracle, const ReconstructionPlan& plan,
                                           std::vector<FrequencyProbe> probes,
                                           const Potential* truth = nullptr);
ReconstructionResult sweep_and_reconstruct(const FarFieldOracle& oracle, const ReconstructionPlan& plan,
                                           const Potential* truth = nullptr);

/// max over probes of |F1 - F2| at amplitude a.
double uniqueness_gap(const FarFieldOracle& F1, const FarFieldOracle& F2,
                      std::span<const FrequencyProbe> probes, double a);

}  // namespace frachelm
