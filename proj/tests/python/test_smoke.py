import math

import numpy as np
import pytest

import frachelm as fh


def test_kernels():
    assert fh.s3_kernel(0.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
    assert abs(fh.phi1(1.0, 2 * math.pi) - 1 / (4 * math.pi)) < 1e-15
    val, err, method = fh.phi_s(5.0, 0.9, 1.0)
    pv, _, pv_method = fh.phi_s(5.0, 0.9, 1.0, method="pv")
    assert method == "subordination" and pv_method == "principal-value"
    assert abs(val - pv) <= 1e-4 * abs(pv)
    assert err >= 0.0


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        fh.phi_s(1.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        fh.phi_s(-1.0, 0.9, 1.0)
    with pytest.raises(ValueError):
        fh.make_probe([0, 0, 0], 0.5, 1.0)


def test_fractional_laplacian_on_lattice_wave():
    u = fh.plane_wave_on_grid(1.0, 2 * math.pi, [1, 0, 0], n=16)
    out = fh.frac_laplacian(u, 1.0, 0.9)
    np.testing.assert_allclose(out, (2 * math.pi) ** 1.8 * u, rtol=1e-10, atol=1e-10)


def test_forward_solve_and_born_limit():
    q = fh.stock_potential(16)
    assert q.shape == (16, 16, 16)
    u_in = fh.plane_wave_on_grid(0.1, 4.0, [1, 0, 0], n=16)
    r = fh.solve(q, 1.0, 0.9, 4.0, u_in)
    assert r["converged"]
    assert r["u"].shape == (16, 16, 16)
    np.testing.assert_allclose(r["u"] - r["u_sc"], u_in, atol=1e-14)
    x_hat = np.array([1.0, 1.0, 1.0]) / math.sqrt(3)
    amp = fh.scattering_amplitude(q, r["u"], 1.0, 0.9, 4.0, x_hat)
    born = 0.1**3 * fh.fourier_at(q.astype(complex), 1.0, 4.0 * (x_hat - np.array([1.0, 0.0, 0.0])))
    assert abs(amp - born) <= 0.05 * abs(born)


def test_probe_algebra():
    p = fh.make_probe([1.0, 0.0, 0.0], 5.0)
    assert p["k"] == pytest.approx(math.sqrt(26))
    recon = p["k"] * (np.array(p["x_hat"]) - np.array(p["theta"]))
    np.testing.assert_allclose(recon, p["target"], atol=1e-13)


def test_born_reconstruction_on_full_lattice():
    q = fh.stock_potential(16)
    r = fh.reconstruct(q, xi_max=math.pi * math.sqrt(3) * 8 + 1)
    assert r["rel_l2_error"] < 1e-10
    assert r["q_rec"].shape == (16, 16, 16)


def test_acceptance_hook():
    assert fh.acceptance_criterion_count() == 11
    r = fh.run_acceptance_criterion(1)
    assert r["passed"], r["detail"]
