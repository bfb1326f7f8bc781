import math
import random

import pytest

from cflab import cycles, forms, kernels
from cflab.cycles import QuadratureSpec, integrate, make_cycle, refine_until
from cflab.errors import (ConvergenceError, InputError, PoleError,
                          UnsupportedKindError)
from cflab.forms import KForm

TWO_PI_I = 2j * math.pi


def test_circle_map_and_tangent():
    c = make_cycle("circle", center=0j, radius=1.0)
    assert c.map((math.pi / 2,))[0] == pytest.approx(1j)
    assert c.tangent((0.0,))[0][0] == pytest.approx(1j)


def test_make_cycle_validation():
    with pytest.raises(InputError):
        make_cycle("circle", center=0j, radius=-1.0)
    with pytest.raises(InputError):
        make_cycle("sphere_M", z=(0j,), eps=0.0)
    with pytest.raises(InputError):
        make_cycle("torus_D", eps=1.5)
    with pytest.raises(InputError):
        make_cycle("unknown_kind")


def test_torus_d_point_value():
    t = make_cycle("torus_D", eps=0.5)
    y1, x2, x1 = t.map((0.0, 0.0))
    assert y1 == pytest.approx(0.5)
    assert x2 == pytest.approx(0.5)
    assert x1 == pytest.approx(-7.0 / 3.0)


def test_tangent_frames_match_finite_differences():
    specs = [
        make_cycle("circle", center=0.2 + 0.1j, radius=0.8),
        make_cycle("segment", start=1 + 0j, end=0j),
        make_cycle("sphere_M", z=(0.3 + 0.1j,), eps=0.7),
        make_cycle("sphere_M", z=(0.2 + 0j, -0.1 + 0j), eps=0.5),
        make_cycle("torus_D", eps=0.5),
        make_cycle("torus_E", r1=0.5, r2=0.4),
        make_cycle("torus_generic", centers=(0j, 1j), radii=(0.5, 0.25)),
    ]
    h = 1e-6
    for cyc in specs:
        param = cyc.reference_param
        frame = cyc.tangent(param)
        for k in range(cyc.dim):
            plus = list(param)
            minus = list(param)
            plus[k] += h
            minus[k] -= h
            fp = cyc.map(tuple(plus))
            fm = cyc.map(tuple(minus))
            for i in range(cyc.ambient_dim):
                fd = (fp[i] - fm[i]) / (2 * h)
                scale = max(1.0, abs(frame[k][i]))
                assert abs(fd - frame[k][i]) < 1e-6 * scale, (cyc.kind, k, i)


def test_sphere_points_at_distance_eps():
    sphere = make_cycle("sphere_M", z=(0.2 + 0j, -0.1 + 0j), eps=0.5)
    for param in [(0.3, 0.1, 4.0), (1.2, 2.0, 0.5), sphere.reference_param]:
        point = sphere.map(param)
        x = point[3:]
        dist = math.sqrt(abs(x[0] - 0.2) ** 2 + abs(x[1] + 0.1) ** 2)
        assert dist == pytest.approx(0.5, abs=1e-13)


def test_orientation_sign_circle():
    c = make_cycle("circle", center=0j, radius=1.0)
    assert cycles.orientation_sign(c, (0j,)) == 1
    assert cycles.orientation_sign(c.reversed_factor(0), (0j,)) == -1


def test_orientation_sign_sphere_m_n2():
    sphere = make_cycle("sphere_M", z=(0j, 0j), eps=1.0)
    # The (psi, phi1, phi2) order parametrizes the 3-sphere inward.
    assert cycles.orientation_sign(sphere, (0j, 0j)) == -1


def test_orientation_sign_rejects_torus():
    t = make_cycle("torus_E", r1=0.5, r2=0.5)
    with pytest.raises(UnsupportedKindError):
        cycles.orientation_sign(t, (0j, 0j))


def test_integrate_residue_of_dx_over_x():
    c = make_cycle("circle", center=0j, radius=1.0)
    form = KForm.basis(1, 0, coeff=lambda p: 1 / p[0])
    val = integrate(form, c, 64)
    assert abs(val - TWO_PI_I) < 1e-12


def test_integrate_exact_segment():
    seg = make_cycle("segment", start=1 + 0j, end=0j)
    val = integrate(KForm.basis(1, 0), seg, 8)
    assert abs(val - (-1)) < 1e-14


def test_integrate_quad_validation():
    c = make_cycle("circle", center=0j, radius=1.0)
    with pytest.raises(InputError):
        QuadratureSpec.of(2, 1)
    with pytest.raises(InputError):
        integrate(KForm.basis(1, 0), c, (8, 8))
    with pytest.raises(InputError):
        integrate(KForm.basis(2, 0, 0), c, 8)


def test_integrate_linearity_in_form():
    rng = random.Random(31)
    c = make_cycle("circle", center=0.1 + 0.2j, radius=0.9)
    f = KForm.basis(1, 0, coeff=lambda p: 1 / p[0])
    g = KForm.basis(1, 0, coeff=lambda p: p[0] ** 2 + 1)
    a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    combo = forms.add(forms.scale(f, a), forms.scale(g, b))
    lhs = integrate(combo, c, 64)
    rhs = a * integrate(f, c, 64) + b * integrate(g, c, 64)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_reversing_a_circle_factor_negates_integral():
    t = make_cycle("torus_E", r1=0.5, r2=0.5)
    form = kernels.casebook_form("integrand_E")
    base = integrate(form, t, (32, 32))
    for k in (0, 1):
        flipped = integrate(form, t.reversed_factor(k), (32, 32))
        assert abs(flipped + base) <= 1e-13 * abs(base)


def test_torus_d_integral_independent_of_eps():
    form = kernels.casebook_form("theta_D")
    v_small = integrate(form, make_cycle("torus_D", eps=0.3), (128, 128))
    v_large = integrate(form, make_cycle("torus_D", eps=0.7), (128, 128))
    assert abs(v_small - v_large) < 1e-8


def test_integrate_worker_counts_agree_bitwise():
    sphere = make_cycle("sphere_M", z=(0.2 + 0j, -0.1 + 0j), eps=0.5)
    form = kernels.phi(2, (0.2, -0.1))
    quad = QuadratureSpec.of((8, 12, 12), 3)
    v1 = integrate(form, sphere, quad, workers=1)
    v2 = integrate(form, sphere, quad, workers=2)
    v5 = integrate(form, sphere, quad, workers=5)
    assert v1 == v2 == v5


def test_pole_on_grid_raises_pole_error():
    # Gauss rule with odd node count hits the midpoint 0 of (-1, 1).
    seg = cycles.Cycle(
        kind="segment", domain=cycles.ParamDomain((cycles.Interval(0.0, 1.0),)),
        map=lambda t: (-1 + 2 * t[0] + 0j,),
        tangent=lambda t: ((2 + 0j,),),
        ambient_dim=1, x_indices=(0,), reference_param=(0.25,))
    form = KForm.basis(1, 0, coeff=lambda p: 1 / p[0])
    with pytest.raises(PoleError) as err:
        integrate(form, seg, 5)
    assert err.value.param is not None


def test_refine_until_converges_quickly():
    c = make_cycle("circle", center=0j, radius=1.0)
    form = KForm.basis(1, 0, coeff=lambda p: 1 / p[0])
    value, delta = refine_until(form, c, 64, tol=1e-12)
    assert abs(value - TWO_PI_I) < 1e-12
    assert delta < 1e-12


def test_refine_until_polynomial_converges_first_doubling():
    seg = make_cycle("segment", start=0j, end=1 + 0j)
    form = KForm.basis(1, 0, coeff=lambda p: 3 * p[0] ** 2)
    value, delta = refine_until(form, seg, 8, tol=1e-13)
    assert value == pytest.approx(1.0, abs=1e-13)


def test_refine_until_nonconvergence_error():
    c = make_cycle("circle", center=0j, radius=1.0)
    rng = random.Random(0)

    def noisy(p):
        return rng.random()

    form = KForm.basis(1, 0, coeff=noisy)
    with pytest.raises(ConvergenceError) as err:
        refine_until(form, c, 4, tol=1e-15, max_doublings=2)
    assert err.value.last is not None
    assert err.value.previous is not None


def test_refine_until_propagates_pole_error():
    t = make_cycle("torus_generic", centers=(-0.5 + 0j, 1 + 0j),
                   radii=(0.5, 0.5))
    form = kernels.casebook_form("integrand_E")
    with pytest.raises(PoleError):
        refine_until(form, t, (8, 8), tol=1e-10)


def test_torus_integral_worker_counts_agree_bitwise():
    t = make_cycle("torus_D", eps=0.5)
    form = kernels.casebook_form("theta_D")
    v1 = integrate(form, t, (64, 64), workers=1)
    v3 = integrate(form, t, (64, 64), workers=3)
    assert v1 == v3


def test_integrand_e_pole_on_grid_raises():
    # The theta = 0 node maps u to exactly -0.5 + 0.5 = 0; the evaluation
    # must raise, not return garbage.
    t = make_cycle("torus_generic", centers=(-0.5 + 0j, 1 + 0j),
                   radii=(0.5, 0.5))
    form = kernels.casebook_form("integrand_E")
    with pytest.raises(PoleError):
        integrate(form, t, (8, 8))
