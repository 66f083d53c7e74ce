import math

import numpy as np
import pytest

import entlaser as el


def test_presets_are_listed():
    names = el.presets()
    for n in ("fig2", "fig3-I", "fig3-II", "fig4-I", "fig4-II"):
        assert n in names


def test_preset_params_round_trip():
    p = el.preset_params("fig2")
    assert p.omega3_mag == 25.0
    assert p.delta_b == 40.0
    q = el.PhysicalParams(**p.as_dict())
    assert q == p


def test_fig2_run():
    out = el.run_preset("fig2")
    assert out["t"].shape == (2000,)
    assert out["variance_sum"][0] == pytest.approx(2.0)
    assert np.array_equal(out["entangled"], out["variance_sum"] < 2.0)
    assert out["info"]["regime"] == "parametric-a"
    assert out["report"]["max_entangled_photons"] == pytest.approx(110, rel=0.1)


def test_coefficients_and_limits():
    p = el.preset_params("fig2")
    c = el.compute_coefficients(p)
    assert abs(c.alpha12 - 0.002) < 0.15 * 0.002
    assert c.d11.imag == 0.0
    alpha, alpha_prime = el.parametric_limits(p)
    assert alpha == pytest.approx(0.002)
    assert alpha_prime is None


def test_witness():
    assert el.variance_sum(el.coherent_state(3 + 1j, -2j)) == pytest.approx(2.0, abs=1e-12)
    assert el.variance_sum(el.two_mode_squeezed_state(0.5)) == pytest.approx(2 * math.exp(-1.0))


def test_simulate_parametric():
    p = el.preset_params("fig2")
    out = el.simulate(p, el.vacuum_state(), 3000.0, 500, "parametric")
    assert out["variance_sum"][-1] == pytest.approx(2 / 3, abs=1e-4)


def test_errors_are_typed():
    p = el.preset_params("fig2")
    p.gamma2 = -1.0
    with pytest.raises(el.InvalidParameter):
        el.compute_coefficients(p)
    with pytest.raises(el.RegimeMismatch):
        el.run_preset("fig3-I", "parametric")
    with pytest.raises(el.InvalidParameter):
        el.PhysicalParams(nu1=1.0)


def test_atomic_steady_state_is_a_density_matrix():
    rho = el.atomic_steady_state(el.preset_params("fig2"))
    assert rho.shape == (4, 4)
    assert np.trace(rho) == pytest.approx(1.0)
    assert np.allclose(rho, rho.conj().T)


def test_decay_oracle():
    text = """
[params]
g1 = 0
g2 = 0
omega3_mag = 25
omega4_mag = 2
phi3 = pi/2
phi4 = 0
delta_a = 0
delta_b = 40
gamma1 = 5
gamma2 = 5
gamma3 = 5
gamma4 = 5
kappa1 = 0.05
kappa2 = 0.02
[initial]
state = coherent
beta1_re = 0.3
beta2_im = 0.2
[sim]
t_max = 5
samples = 11
"""
    cmp = el.compare_oracle(text, "field", 6, 1e-8)
    assert cmp["passed"]
    assert cmp["max_deviation"] < 1e-8
