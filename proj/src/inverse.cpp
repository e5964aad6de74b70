#include "frachelm/inverse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "frachelm/errors.hpp"

namespace frachelm {

FrequencyProbe make_probe(const Vec3& m, double l_mag, double k0, const Vec3& e_fallback) {
  if (!(l_mag > 0.0)) throw Error(ErrorKind::ValidationError, "l_mag must be positive");
  FrequencyProbe p;
  p.m = m;
  if (norm(m) == 0.0) {
    p.l = Vec3{0.0, 0.0, l_mag};
  } else {
    Vec3 c = cross(m, e_fallback);
    if (norm(c) < 1e-9) c = cross(m, Vec3{1.0, 0.0, 0.0});
    p.l = normalized(c) * l_mag;
  }
  p.rho = p.m + p.l;
  p.k = norm(p.rho);
  if (!(p.k > k0)) throw Error(ErrorKind::ValidationError, "probe wavenumber must exceed k0");
  p.theta = (p.m - p.l) / p.k;
  p.x_hat = p.rho * (-1.0 / p.k);
  return p;
}

FarFieldOracle synthetic_born_oracle(const Potential& Q) {
  auto pot = std::make_shared<const Potential>(Q);
  return [pot](double k, const Vec3& x_hat, const Vec3& theta, double a) {
    return a * a * a * fourier_at(*pot, (x_hat - theta) * k);
  };
}

NonlinearOracle::NonlinearOracle(PotentialSampler sampler, double L, double s, SolverOptions options,
                                 int n_min, std::size_t cache_capacity)
    : sampler_(std::move(sampler)), L_(L), s_(s), options_(options), n_min_(n_min),
      capacity_(std::max<std::size_t>(1, cache_capacity)) {}

NonlinearOracle::Entry NonlinearOracle::lookup(double k) const {
  std::lock_guard lock(mutex_);
  for (auto it = lru_.begin(); it != lru_.end(); ++it) {
    if (it->k == k) {
      lru_.splice(lru_.begin(), lru_, it);
      return lru_.front();
    }
  }
  const ScatteringParams params{s_, k, 1, 1.0};
  params.validate();
  const BoxGrid grid{L_, grid_points(k)};
  Entry e{k, grid.n, std::make_shared<const GreenOperator>(grid, params),
          std::make_shared<const Potential>(sampler_(grid))};
  lru_.push_front(e);
  while (lru_.size() > capacity_) lru_.pop_back();
  return e;
}

cplx NonlinearOracle::operator()(double k, const Vec3& x_hat, const Vec3& theta, double a) const {
  const Entry e = lookup(k);
  const ScatteringParams params{s_, k, 1, 1.0};
  const ComplexField u_in = plane_wave_on_grid(a, k, theta, e.G->grid());
  const SolveReport rep = picard_solve(*e.Q, u_in, *e.G, options_);
  return scattering_amplitude(*e.Q, rep.u, params, x_hat);
}

FarFieldOracle as_oracle(std::shared_ptr<const NonlinearOracle> oracle) {
  return [oracle](double k, const Vec3& x_hat, const Vec3& theta, double a) {
    return (*oracle)(k, x_hat, theta, a);
  };
}

std::vector<FarFieldSample> read_farfield_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::vector<FarFieldSample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("k,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    FarFieldSample s;
    double re = 0, im = 0;
    if (!(row >> s.k >> s.x_hat.x >> s.x_hat.y >> s.x_hat.z >> s.theta.x >> s.theta.y >> s.theta.z >>
          s.a >> re >> im)) {
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": expected 10 numbers");
    }
    s.value = {re, im};
    out.push_back(s);
  }
  return out;
}

std::string farfield_csv(const std::vector<FarFieldSample>& samples) {
  std::ostringstream out;
  out << "k,xhat_x,xhat_y,xhat_z,theta_x,theta_y,theta_z,a,re,im\n";
  auto put = [&out](double v, char sep) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf) << sep;
  };
  for (const auto& s : samples) {
    for (double v : {s.k, s.x_hat.x, s.x_hat.y, s.x_hat.z, s.theta.x, s.theta.y, s.theta.z, s.a, s.value.real()}) {
      put(v, ',');
    }
    put(s.value.imag(), '\n');
  }
  return out.str();
}

FarFieldOracle table_oracle(std::vector<FarFieldSample> samples) {
  auto table = std::make_shared<const std::vector<FarFieldSample>>(std::move(samples));
  return [table](double k, const Vec3& x_hat, const Vec3& theta, double a) {
    auto close = [](double u, double v) { return std::abs(u - v) <= 1e-9 * std::max(1.0, std::abs(v)); };
    for (const auto& s : *table) {
      if (close(s.k, k) && close(s.a, a) && norm(s.x_hat - x_hat) <= 1e-9 && norm(s.theta - theta) <= 1e-9) {
        return s.value;
      }
    }
    std::ostringstream msg;
    msg << "no far-field sample for k = " << k << ", x_hat = (" << x_hat.x << ", " << x_hat.y << ", "
        << x_hat.z << ")";
    throw Error(ErrorKind::CoverageGap, msg.str());
  };
}

cplx qhat_from_farfield(const FarFieldOracle& oracle, FrequencyProbe& probe, double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::ValidationError, "amplitude must be positive");
  probe.a = a;
  probe.qhat_estimate = oracle(probe.k, probe.x_hat, probe.theta, a) / (a * a * a);
  return probe.qhat_estimate;
}

RemainderStudy remainder_rate_study(const FarFieldOracle& oracle, cplx reference, const Vec3& m,
                                    std::span<const double> ks, double a, double k0) {
  if (ks.size() < 4) throw Error(ErrorKind::ValidationError, "remainder study needs >= 4 wavenumbers");
  RemainderStudy study;
  std::vector<double> x, y;
  const double floor = 1e-12 * std::max(1.0, std::abs(reference));
  double worst = 0.0;
  for (double k : ks) {
    const double l2 = k * k - dot(m, m);
    if (!(l2 > 0.0)) throw Error(ErrorKind::ValidationError, "k must exceed |m|");
    FrequencyProbe probe = make_probe(m, std::sqrt(l2), k0);
    const cplx est = qhat_from_farfield(oracle, probe, a);
    const double err = std::abs(est - reference);
    study.rows.push_back({k, est, err});
    worst = std::max(worst, err);
    x.push_back(k);
    y.push_back(std::max(err, floor));
  }
  study.floor_limited = worst <= floor;
  study.fit = fit_decay(x, y);
  study.slope_ok = !study.floor_limited && study.fit.slope <= -1.0;
  return study;
}

void ReconstructionPlan::validate() const {
  BoxGrid{L, n}.validate();
  if (!(xi_max > 0.0) || !(l_min > 0.0) || !(l_scale >= 0.0) || !(a > 0.0) || !(k0 > 0.0)) {
    throw Error(ErrorKind::ValidationError, "reconstruction plan needs positive xi_max, l_min, a, k0");
  }
}

std::vector<std::array<int, 3>> band_lattice(const ReconstructionPlan& plan) {
  plan.validate();
  std::vector<std::array<int, 3>> out;
  const double step = std::numbers::pi / plan.L;
  for (int i = -plan.n / 2; i < plan.n / 2; ++i) {
    for (int j = -plan.n / 2; j < plan.n / 2; ++j) {
      for (int l = -plan.n / 2; l < plan.n / 2; ++l) {
        if (step * std::sqrt(double(i * i + j * j + l * l)) <= plan.xi_max) out.push_back({i, j, l});
      }
    }
  }
  return out;
}

namespace {

// One member of each conjugate pair; points whose partner falls off the
// lattice (a component equal to -n/2) are probed directly.
bool is_representative(const std::array<int, 3>& idx, int n) {
  const std::array<int, 3> neg{-idx[0], -idx[1], -idx[2]};
  const bool partner_on_lattice = std::ranges::all_of(neg, [n](int v) { return v < n / 2; });
  return !partner_on_lattice || idx >= neg;
}

Vec3 lattice_xi(const ReconstructionPlan& plan, const std::array<int, 3>& idx) {
  const double step = std::numbers::pi / plan.L;
  return {step * idx[0], step * idx[1], step * idx[2]};
}

}  // namespace

std::vector<FrequencyProbe> plan_probes(const ReconstructionPlan& plan) {
  std::vector<FrequencyProbe> probes;
  for (const auto& idx : band_lattice(plan)) {
    if (!is_representative(idx, plan.n)) continue;
    const Vec3 m = lattice_xi(plan, idx) * -0.5;
    probes.push_back(make_probe(m, std::max(plan.l_min, plan.l_scale * norm(m)), plan.k0));
  }
  return probes;
}

ReconstructionResult sweep_and_reconstruct(const FarFieldOracle& oracle, const ReconstructionPlan& plan,
                                           std::vector<FrequencyProbe> probes, const Potential* truth) {
  plan.validate();
  ReconstructionResult res;
  res.grid = BoxGrid{plan.L, plan.n};
  res.lattice = band_lattice(plan);

  std::stable_sort(probes.begin(), probes.end(),
                   [](const FrequencyProbe& p, const FrequencyProbe& q) { return p.k < q.k; });
  for (FrequencyProbe& p : probes) qhat_from_farfield(oracle, p, plan.a);

  // Average repeated targets, then pair conjugates.
  const double step = std::numbers::pi / plan.L;
  std::map<std::array<int, 3>, std::pair<cplx, int>> by_idx;
  for (const FrequencyProbe& p : probes) {
    const Vec3 t = p.target() / step;
    const std::array<int, 3> idx{int(std::lround(t.x)), int(std::lround(t.y)), int(std::lround(t.z))};
    if (norm(t - Vec3{double(idx[0]), double(idx[1]), double(idx[2])}) > 1e-6) continue;
    auto& slot = by_idx[idx];
    slot.first += p.qhat_estimate;
    slot.second += 1;
  }
  auto estimate = [&](const std::array<int, 3>& idx) -> std::optional<cplx> {
    auto it = by_idx.find(idx);
    if (it == by_idx.end()) return std::nullopt;
    return it->second.first / double(it->second.second);
  };
  res.qhat.reserve(res.lattice.size());
  for (const auto& idx : res.lattice) {
    const auto self = estimate(idx);
    const auto partner = estimate({-idx[0], -idx[1], -idx[2]});
    if (self && partner) {
      res.qhat.push_back(0.5 * (*self + std::conj(*partner)));
    } else if (self) {
      res.qhat.push_back(*self);
    } else if (partner) {
      res.qhat.push_back(std::conj(*partner));
    } else {
      throw Error(ErrorKind::CoverageGap, "lattice frequency (" + std::to_string(idx[0]) + ", " +
                                              std::to_string(idx[1]) + ", " + std::to_string(idx[2]) +
                                              ") has no probe");
    }
  }
  res.probes = std::move(probes);

  // Q(x) = (2L)^{-3} sum_xi Qhat(xi) e^{i xi.x}
  const BoxGrid& g = res.grid;
  const int n = g.n;
  res.q_rec = ComplexField(g);
  const double norm3 = 1.0 / std::pow(2.0 * plan.L, 3);
  for (std::size_t t = 0; t < res.lattice.size(); ++t) {
    const Vec3 xi = lattice_xi(plan, res.lattice[t]);
    std::vector<cplx> px(n), py(n), pz(n);
    for (int i = 0; i < n; ++i) {
      const double x = g.coord(i);
      px[i] = res.qhat[t] * norm3 * std::polar(1.0, xi.x * x);
      py[i] = std::polar(1.0, xi.y * x);
      pz[i] = std::polar(1.0, xi.z * x);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx pij = px[i] * py[j];
        for (int l = 0; l < n; ++l) res.q_rec[g.index(i, j, l)] += pij * pz[l];
      }
    }
  }

  std::vector<double> re2(g.size()), im2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    re2[i] = std::pow(res.q_rec[i].real(), 2);
    im2[i] = std::pow(res.q_rec[i].imag(), 2);
  }
  const double re_norm = std::sqrt(pairwise_sum(re2));
  res.imag_ratio = re_norm > 0.0 ? std::sqrt(pairwise_sum(im2)) / re_norm : 0.0;
  if (truth) {
    if (!(truth->grid() == g)) throw Error(ErrorKind::GridMismatch, "ground truth must live on the reconstruction grid");
    std::vector<double> diff(g.size()), ref(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      diff[i] = std::pow(res.q_rec[i].real() - (*truth)[i], 2);
      ref[i] = std::pow((*truth)[i], 2);
    }
    const double ref_norm = std::sqrt(pairwise_sum(ref));
    res.rel_l2_error = std::sqrt(pairwise_sum(diff)) / (ref_norm > 0.0 ? ref_norm : 1.0);
  }
  return res;
}

ReconstructionResult sweep_and_reconstruct(const FarFieldOracle& oracle, const ReconstructionPlan& plan,
                                           const Potential* truth) {
  return sweep_and_reconstruct(oracle, plan, plan_probes(plan), truth);
}

double uniqueness_gap(const FarFieldOracle& F1, const FarFieldOracle& F2,
                      std::span<const FrequencyProbe> probes, double a) {
  double gap = 0.0;
  for (const FrequencyProbe& p : probes) {
    gap = std::max(gap, std::abs(F1(p.k, p.x_hat, p.theta, a) - F2(p.k, p.x_hat, p.theta, a)));
  }
  return gap;
}

}  // namespace frachelm
