#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frachelm/acceptance.hpp"
#include "frachelm/errors.hpp"
#include "frachelm/farfield.hpp"
#include "frachelm/fieldgrid.hpp"
#include "frachelm/forward.hpp"
#include "frachelm/greens.hpp"
#include "frachelm/inverse.hpp"
#include "frachelm/waves.hpp"

namespace py = pybind11;
using namespace frachelm;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> arr(const Vec3& v) { return {v.x, v.y, v.z}; }

int cube_side(const py::buffer_info& info) {
  if (info.ndim != 3 || info.shape[0] != info.shape[1] || info.shape[1] != info.shape[2]) {
    throw Error(ErrorKind::GridMismatch, "expected an (n, n, n) array");
  }
  return static_cast<int>(info.shape[0]);
}

ComplexField to_field(const CArray& a, double L) {
  const py::buffer_info info = a.request();
  const BoxGrid grid{L, cube_side(info)};
  grid.validate();
  const cplx* p = static_cast<const cplx*>(info.ptr);
  return ComplexField(grid, std::vector<cplx>(p, p + grid.size()));
}

Potential to_potential(const RArray& a, double L) {
  const py::buffer_info info = a.request();
  const BoxGrid grid{L, cube_side(info)};
  grid.validate();
  const double* p = static_cast<const double*>(info.ptr);
  return Potential(grid, std::vector<double>(p, p + grid.size()));
}

CArray to_array(const ComplexField& f) {
  const int n = f.grid().n;
  CArray out({n, n, n});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

RArray to_array(const Potential& q) {
  const int n = q.grid().n;
  RArray out({n, n, n});
  std::copy(q.values().begin(), q.values().end(), out.mutable_data());
  return out;
}

py::dict probe_dict(const FrequencyProbe& p) {
  py::dict d;
  d["m"] = arr(p.m);
  d["l"] = arr(p.l);
  d["k"] = p.k;
  d["theta"] = arr(p.theta);
  d["x_hat"] = arr(p.x_hat);
  d["target"] = arr(p.target());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fractional Helmholtz scattering kernels, solvers and reconstruction";

  py::register_exception_translator([](std::exception_ptr e) {
    try {
      if (e) std::rethrow_exception(e);
    } catch (const Error& err) {
      if (err.is_validation()) {
        PyErr_SetString(PyExc_ValueError, err.what());
      } else {
        PyErr_SetString(PyExc_ArithmeticError, err.what());
      }
    }
  });

  m.def("s3_kernel", &s3_kernel, py::arg("t"));
  m.def(
      "phi1", [](double r, double k, int branch) { return phi1(r, {1.0, k, branch, 1.0}); }, py::arg("r"),
      py::arg("k"), py::arg("branch") = 1);
  m.def(
      "phi_s",
      [](double r, double s, double k, const std::string& method, int branch) {
        const ScatteringParams p{s, k, branch, 1.0};
        p.validate();
        const KernelEval e = phi_s(r, p, kernel_method_from_string(method));
        return py::make_tuple(e.value, e.est_error, std::string(to_string(e.method)));
      },
      py::arg("r"), py::arg("s"), py::arg("k"), py::arg("method") = "auto", py::arg("branch") = 1,
      "Returns (value, estimated error, method name).");

  m.def(
      "stock_potential", [](int n, double L) { return to_array(stock_potential().sample({L, n})); },
      py::arg("n") = 32, py::arg("L") = 1.0);
  m.def(
      "plane_wave_on_grid",
      [](cplx a, double k, std::array<double, 3> theta, int n, double L) {
        return to_array(plane_wave_on_grid(a, k, vec(theta), {L, n}));
      },
      py::arg("amplitude"), py::arg("k"), py::arg("theta"), py::arg("n") = 32, py::arg("L") = 1.0);
  m.def(
      "fourier_at", [](const CArray& f, double L, std::array<double, 3> xi) { return fourier_at(to_field(f, L), vec(xi)); },
      py::arg("field"), py::arg("L"), py::arg("xi"));
  m.def(
      "frac_laplacian", [](const CArray& f, double L, double s) { return to_array(frac_laplacian_apply(to_field(f, L), s)); },
      py::arg("field"), py::arg("L"), py::arg("s"));
  m.def(
      "lp_norm", [](const CArray& f, double L, double p) { return lp_norm(to_field(f, L), p); }, py::arg("field"),
      py::arg("L"), py::arg("p"));

  m.def(
      "solve",
      [](const RArray& q, double L, double s, double k, const CArray& u_in, double tol, int max_iter) {
        const Potential Q = to_potential(q, L);
        SolverOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        SolveReport r;
        {
          py::gil_scoped_release release;
          r = picard_solve(Q, to_field(u_in, L), ScatteringParams{s, k, 1, 1.0}, opts);
        }
        py::dict d;
        d["u"] = to_array(r.u);
        d["u_sc"] = to_array(r.u_sc);
        d["iterations"] = r.iterations;
        d["residuals"] = r.residual_history;
        d["contraction_factor"] = r.contraction_factor;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("potential"), py::arg("L"), py::arg("s"), py::arg("k"), py::arg("u_in"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 50, "Picard iteration for u = u_in + G(Q|u|^2 u).");
  m.def(
      "scattering_amplitude",
      [](const RArray& q, const CArray& u, double L, double s, double k, std::array<double, 3> x_hat) {
        return scattering_amplitude(to_potential(q, L), to_field(u, L), {s, k, 1, 1.0}, vec(x_hat));
      },
      py::arg("potential"), py::arg("u"), py::arg("L"), py::arg("s"), py::arg("k"), py::arg("x_hat"));

  m.def(
      "make_probe",
      [](std::array<double, 3> mv, double l_mag, double k0) { return probe_dict(make_probe(vec(mv), l_mag, k0)); },
      py::arg("m"), py::arg("l_mag"), py::arg("k0") = 1.0);
  m.def(
      "reconstruct",
      [](const RArray& q, double L, const std::string& oracle_kind, double s, int n, double xi_max, double a) {
        const Potential Q = to_potential(q, L);
        ReconstructionPlan plan;
        plan.n = n;
        plan.L = L;
        plan.xi_max = xi_max;
        plan.a = a;
        FarFieldOracle oracle;
        if (oracle_kind == "synthetic-born") {
          oracle = synthetic_born_oracle(Q);
        } else if (oracle_kind == "nonlinear") {
          const auto spec = stock_potential();
          oracle = as_oracle(std::make_shared<const NonlinearOracle>(
              [spec](const BoxGrid& g) { return spec.sample(g); }, L, s));
        } else {
          throw Error(ErrorKind::ValidationError, "oracle must be synthetic-born or nonlinear");
        }
        const Potential truth = Q.grid().n == n ? Q : stock_potential().sample({L, n});
        ReconstructionResult r;
        {
          py::gil_scoped_release release;
          r = sweep_and_reconstruct(oracle, plan, &truth);
        }
        py::dict d;
        d["q_rec"] = to_array(r.q_rec);
        d["rel_l2_error"] = r.rel_l2_error ? py::cast(*r.rel_l2_error) : py::none();
        d["imag_ratio"] = r.imag_ratio;
        d["probes"] = r.probes.size();
        return d;
      },
      py::arg("potential"), py::arg("L") = 1.0, py::arg("oracle") = "synthetic-born", py::arg("s") = 0.9,
      py::arg("n") = 16, py::arg("xi_max") = 16.0, py::arg("a") = 0.05,
      "Probe sweep plus inverse Fourier series. The nonlinear oracle solves for the stock potential.");

  m.def(
      "run_acceptance_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_acceptance_criterion(id);
        }
        py::dict d;
        d["id"] = r.id;
        d["name"] = r.name;
        d["passed"] = r.passed;
        d["detail"] = r.detail;
        d["seconds"] = r.seconds;
        return d;
      },
      py::arg("id"));
  m.def("acceptance_criterion_count", &acceptance_criterion_count);
}
