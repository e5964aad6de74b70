#include "frachelm/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "frachelm/acceptance.hpp"
#include "frachelm/config.hpp"
#include "frachelm/errors.hpp"
#include "frachelm/field_io.hpp"
#include "frachelm/inverse.hpp"
#include "frachelm/manifest.hpp"

namespace frachelm {

namespace {

namespace fs = std::filesystem;

// Shortest round-trip form, so CSV output is exact and byte-stable.
std::string g17(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_radii(const std::string& spec) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw Error(ErrorKind::ParseError, "bad number '" + s + "' in --r");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    // start:stop:count, inclusive and evenly spaced
    std::vector<std::string> parts;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw Error(ErrorKind::ParseError, "--r range must be start:stop:count");
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const int count = static_cast<int>(number(parts[2]));
    if (count < 1) throw Error(ErrorKind::ValidationError, "--r range needs count >= 1");
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  } else {
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(number(item));
  }
  for (double r : out) {
    if (!(r > 0.0)) throw Error(ErrorKind::NonpositiveRadius, "radii must be positive");
  }
  return out;
}

Vec3 parse_vec(const std::string& s) {
  ExperimentConfig c = parse_config("incident.direction = " + s);
  return c.direction;
}

PotentialSpec potential_spec(const ExperimentConfig& c) {
  return {c.potential_center, c.potential_width, c.potential_height, c.potential_cutoff_inner,
          c.potential_cutoff_outer};
}

Potential load_potential_file(const std::string& path) {
  const ComplexField f = read_field(path);
  std::vector<double> values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) values[i] = f[i].real();
  return Potential(f.grid(), std::move(values));
}

Potential config_potential(const ExperimentConfig& c, const BoxGrid& grid) {
  if (c.potential == "builtin") return potential_spec(c).sample(grid);
  Potential Q = load_potential_file(c.potential);
  if (!(Q.grid() == grid)) {
    throw Error(ErrorKind::ValidationError, "potential file grid differs from grid.n / grid.L");
  }
  return Q;
}

ComplexField config_incident(const ExperimentConfig& c, double k, const BoxGrid& grid) {
  if (c.incident == "plane") return plane_wave_on_grid(c.amplitude, k, c.direction, grid);
  const SphereQuadrature quad = sphere_quadrature(c.herglotz_order);
  return herglotz_on_grid(HerglotzDensity::bump(quad, c.direction, c.herglotz_width, c.amplitude), k, grid);
}

ReconstructionPlan config_plan(const ExperimentConfig& c) {
  ReconstructionPlan plan;
  plan.n = c.lattice_n;
  plan.L = c.L;
  plan.xi_max = c.xi_max;
  plan.l_min = c.l_min;
  plan.l_scale = c.l_scale;
  plan.a = c.probe_amplitude;
  plan.k0 = c.k0;
  return plan;
}

SolverOptions config_solver(const ExperimentConfig& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  return o;
}

struct Context {
  std::string output_dir;
  std::string config_path;
  ExperimentConfig config;
  RunManifest manifest;

  std::string path(const std::string& name) const { return (fs::path(output_dir) / name).string(); }

  void begin(const std::string& subcommand) {
    if (!config_path.empty()) config = load_config(config_path);
    validate_for(config, subcommand);
    if (output_dir.empty()) output_dir = config.output_dir;
    if (output_dir.empty()) {
      const char* env = std::getenv("FRACHELM_OUTPUT_DIR");
      output_dir = env ? env : ".";
    }
    fs::create_directories(output_dir);
    manifest.subcommand = subcommand;
    const std::string text = to_text(config);
    manifest.config_digest = hex_digest(fnv1a(text.data(), text.size()));
    manifest.started = utc_timestamp();
    write_text_atomic(path(subcommand + ".effective.conf"), text);
    manifest.output(path(subcommand + ".effective.conf"));
  }

  void write_field_with_meta(const std::string& name, const ComplexField& f, const std::string& what) {
    write_field(path(name), f);
    write_metadata(path(name + ".meta"), {{"s", g17(config.s)},
                                          {"k", g17(config.k)},
                                          {"grid.n", std::to_string(f.grid().n)},
                                          {"grid.L", g17(f.grid().L)},
                                          {"content", what},
                                          {"provenance", "frachelm " + manifest.subcommand},
                                          {"config_digest", manifest.config_digest}});
    manifest.output(path(name));
  }

  void write_text(const std::string& name, const std::string& text) {
    write_text_atomic(path(name), text);
    manifest.output(path(name));
  }

  void finish() {
    manifest.finished = utc_timestamp();
    manifest.write(path(manifest.subcommand + ".manifest"));
  }
};

// ---------------------------------------------------------------------------

int cmd_greens(double s, double k, int branch, const std::string& radii, const std::string& method_name,
               const std::string& out_path) {
  const ScatteringParams params{s, k, branch, 1.0};
  params.validate();
  const KernelMethod method = kernel_method_from_string(method_name);
  std::ostringstream csv;
  csv << "r,re,im,est_error,method\n";
  for (double r : parse_radii(radii)) {
    const KernelEval e = phi_s(r, params, method);
    csv << g17(r) << ',' << g17(e.value.real()) << ',' << g17(e.value.imag()) << ',' << g17(e.est_error) << ','
        << to_string(e.method) << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_atomic(out_path, csv.str());
  }
  return 0;
}

int cmd_incident(Context& ctx) {
  ctx.begin("incident");
  const BoxGrid grid{ctx.config.L, ctx.config.n};
  ctx.write_field_with_meta("u_in.fhf", config_incident(ctx.config, ctx.config.k, grid), "incident " + ctx.config.incident);
  ctx.manifest.stage("incident", "ok");
  ctx.finish();
  return 0;
}

int cmd_forward(Context& ctx) {
  ctx.begin("forward");
  const ExperimentConfig& c = ctx.config;
  const BoxGrid grid{c.L, c.n};
  const ScatteringParams params{c.s, c.k, c.branch, c.k0};
  const Potential Q = config_potential(c, grid);
  const ComplexField u_in = config_incident(c, c.k, grid);
  const SolveReport rep = picard_solve(Q, u_in, params, config_solver(c));
  ctx.manifest.stage("solve", "ok");
  ctx.write_field_with_meta("u.fhf", rep.u, "total field");
  ctx.write_field_with_meta("u_sc.fhf", rep.u_sc, "scattered field");
  std::ostringstream report;
  report << "converged = " << (rep.converged ? "true" : "false") << '\n'
         << "iterations = " << rep.iterations << '\n'
         << "contraction_factor = " << g17(rep.contraction_factor) << '\n'
         << "u_l4_norm = " << g17(rep.l4_norm) << '\n'
         << "u_sc_l4_norm = " << g17(lp_norm(rep.u_sc, 4.0)) << '\n'
         << "residual_history =";
  for (double r : rep.residual_history) report << ' ' << g17(r);
  report << '\n';
  ctx.write_text("forward_report.txt", report.str());
  ctx.finish();
  std::cout << report.str();
  return 0;
}

int cmd_farfield(Context& ctx, bool probes) {
  ctx.begin("farfield");
  const ExperimentConfig& c = ctx.config;
  std::vector<FarFieldSample> samples;
  if (probes) {
    const ReconstructionPlan plan = config_plan(c);
    const PotentialSpec spec = potential_spec(c);
    if (c.potential != "builtin") throw Error(ErrorKind::ValidationError, "--probes needs the builtin potential");
    const NonlinearOracle oracle([spec](const BoxGrid& g) { return spec.sample(g); }, c.L, c.s, config_solver(c));
    std::vector<FrequencyProbe> list = plan_probes(plan);
    std::stable_sort(list.begin(), list.end(), [](const auto& p, const auto& q) { return p.k < q.k; });
    for (const FrequencyProbe& p : list) {
      samples.push_back({p.k, p.x_hat, p.theta, plan.a, oracle(p.k, p.x_hat, p.theta, plan.a)});
    }
  } else {
    const BoxGrid grid{c.L, c.n};
    const Potential Q = config_potential(c, grid);
    const std::vector<double> ks = c.k_list.empty() ? std::vector<double>{c.k} : c.k_list;
    for (double k : ks) {
      const ScatteringParams params{c.s, k, c.branch, c.k0};
      const SolveReport rep =
          picard_solve(Q, plane_wave_on_grid(c.amplitude, k, c.direction, grid), params, config_solver(c));
      for (const Vec3& x_hat : c.directions) {
        samples.push_back({k, x_hat, c.direction, c.amplitude, scattering_amplitude(Q, rep.u, params, x_hat)});
      }
    }
  }
  ctx.manifest.stage("farfield", "ok");
  ctx.write_text("farfield.csv", farfield_csv(samples));
  ctx.finish();
  return 0;
}

int cmd_invert(Context& ctx) {
  ctx.begin("invert");
  const ExperimentConfig& c = ctx.config;
  const ReconstructionPlan plan = config_plan(c);

  std::optional<Potential> reference;  // continuous-transform reference for Qhat
  std::optional<Potential> truth;      // samples on the reconstruction grid
  const BoxGrid recon_grid{plan.L, plan.n};
  if (c.potential == "builtin") {
    reference = potential_spec(c).sample(BoxGrid{c.L, std::max(64, c.n)});
    truth = potential_spec(c).sample(recon_grid);
  } else {
    reference = load_potential_file(c.potential);
    if (reference->grid() == recon_grid) truth = reference;
  }

  FarFieldOracle oracle;
  if (c.oracle == "synthetic-born") {
    oracle = synthetic_born_oracle(*reference);
  } else if (c.oracle == "nonlinear") {
    PotentialSampler sampler;
    if (c.potential == "builtin") {
      const PotentialSpec spec = potential_spec(c);
      sampler = [spec](const BoxGrid& g) { return spec.sample(g); };
    } else {
      const Potential fixed = *reference;
      sampler = [fixed](const BoxGrid& g) {
        if (!(g == fixed.grid())) throw Error(ErrorKind::GridMismatch, "potential file does not resolve this k");
        return fixed;
      };
    }
    const int n_min = c.potential == "builtin" ? 32 : reference->grid().n;
    oracle = as_oracle(std::make_shared<const NonlinearOracle>(sampler, c.L, c.s, config_solver(c), n_min));
  } else {
    oracle = table_oracle(read_farfield_csv(c.oracle_file));
  }
  const ReconstructionResult res = sweep_and_reconstruct(oracle, plan, truth ? &*truth : nullptr);
  ctx.manifest.stage("reconstruct", "ok");
  ctx.write_field_with_meta("q_rec.fhf", res.q_rec, "reconstructed potential");

  std::ostringstream csv;
  csv << "idx_x,idx_y,idx_z,xi_x,xi_y,xi_z,re,im,ref_re,ref_im,abs_error\n";
  const double step = std::numbers::pi / plan.L;
  for (std::size_t i = 0; i < res.lattice.size(); ++i) {
    const auto& idx = res.lattice[i];
    const Vec3 xi{step * idx[0], step * idx[1], step * idx[2]};
    const cplx ref = fourier_at(*reference, xi);
    csv << idx[0] << ',' << idx[1] << ',' << idx[2] << ',' << g17(xi.x) << ',' << g17(xi.y) << ',' << g17(xi.z)
        << ',' << g17(res.qhat[i].real()) << ',' << g17(res.qhat[i].imag()) << ',' << g17(ref.real()) << ','
        << g17(ref.imag()) << ',' << g17(std::abs(res.qhat[i] - ref)) << '\n';
  }
  ctx.write_text("reconstruction.csv", csv.str());
  std::ostringstream summary;
  summary << "probes = " << res.probes.size() << '\n'
          << "lattice_points = " << res.lattice.size() << '\n'
          << "imag_ratio = " << g17(res.imag_ratio) << '\n';
  if (res.rel_l2_error) summary << "rel_l2_error = " << g17(*res.rel_l2_error) << '\n';
  ctx.write_text("invert_summary.txt", summary.str());
  ctx.finish();
  std::cout << summary.str();
  return 0;
}

int cmd_verify(const std::string& suite, const std::vector<int>& ids) {
  if (suite != "acceptance") throw Error(ErrorKind::ValidationError, "unknown suite '" + suite + "'");
  bool all = true;
  run_acceptance(ids, [&](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
    all = all && r.passed;
  });
  return all ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"frachelm: scattering toolkit for the nonlinear fractional Helmholtz equation"};
  app.require_subcommand(1);
  int threads = 0;
  std::string output_dir;
  app.add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--output-dir", output_dir, "output directory (default: $FRACHELM_OUTPUT_DIR or .)");

  double g_s = 0.9, g_k = 8.0;
  int g_branch = 1;
  std::string g_r, g_method = "auto", g_out;
  auto* greens = app.add_subcommand("greens", "evaluate the fractional Green's function");
  greens->add_option("--s", g_s, "fractional order")->required();
  greens->add_option("--k", g_k, "wavenumber")->required();
  greens->add_option("--r", g_r, "radii: list a,b,c or range start:stop:count")->required();
  greens->add_option("--method", g_method, "auto | pv | subord | eps | asymptotic");
  greens->add_option("--branch", g_branch, "+1 outgoing, -1 incoming");
  greens->add_option("--out", g_out, "CSV file (default: stdout)");

  Context ctx;
  std::string inc_type = "plane", inc_direction;
  double inc_amplitude = 0.1, inc_k = 8.0, inc_L = 1.0, inc_width = 0.5;
  int inc_n = 32, inc_order = 16;
  auto* incident = app.add_subcommand("incident", "sample an incident wave on a grid");
  incident->add_option("--config", ctx.config_path, "config file (other flags are ignored)");
  incident->add_option("--type", inc_type, "plane | herglotz")->check(CLI::IsMember({"plane", "herglotz"}));
  incident->add_option("--k", inc_k, "wavenumber");
  incident->add_option("--n", inc_n, "grid points per axis");
  incident->add_option("--L", inc_L, "box half width");
  incident->add_option("--amplitude", inc_amplitude, "amplitude");
  incident->add_option("--direction", inc_direction, "unit vector x,y,z (plane direction or bump center)");
  incident->add_option("--order", inc_order, "sphere quadrature order (herglotz)");
  incident->add_option("--width", inc_width, "density bump width (herglotz)");

  auto* forward = app.add_subcommand("forward", "solve the forward scattering problem");
  forward->add_option("--config", ctx.config_path, "config file")->required();

  bool probes = false;
  auto* farfield = app.add_subcommand("farfield", "compute scattering amplitudes");
  farfield->add_option("--config", ctx.config_path, "config file")->required();
  farfield->add_flag("--probes", probes, "sample the reconstruction probe set instead of farfield.directions");

  auto* invert = app.add_subcommand("invert", "reconstruct the potential from far-field data");
  invert->add_option("--config", ctx.config_path, "config file")->required();

  std::string suite = "acceptance";
  std::vector<int> criteria;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", suite, "suite name")->check(CLI::IsMember({"acceptance"}));
  verify->add_option("--criterion", criteria, "criterion number(s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  ctx.output_dir = output_dir;

  try {
    if (*greens) return cmd_greens(g_s, g_k, g_branch, g_r, g_method, g_out);
    if (*incident) {
      if (ctx.config_path.empty()) {
        ExperimentConfig& c = ctx.config;
        c.incident = inc_type;
        c.k = inc_k;
        c.n = inc_n;
        c.L = inc_L;
        c.amplitude = inc_amplitude;
        c.herglotz_order = inc_order;
        c.herglotz_width = inc_width;
        if (!inc_direction.empty()) c.direction = parse_vec(inc_direction);
      }
      return cmd_incident(ctx);
    }
    if (*forward) return cmd_forward(ctx);
    if (*farfield) return cmd_farfield(ctx, probes);
    if (*invert) return cmd_invert(ctx);
    if (*verify) return cmd_verify(suite, criteria);
  } catch (const Error& e) {
    std::cerr << "frachelm: " << e.what() << '\n';
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "frachelm: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace frachelm
