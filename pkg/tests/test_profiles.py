from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from maxsurf.families import cncn_matrix, sncn_matrix, snsn_matrix
from maxsurf.genmat import row_coefficients
from maxsurf.profiles import (
    NoRealSolutionError,
    ProfileError,
    QuarticCoeffs,
    UnsupportedProfileError,
    integrate_profile_numeric,
    solve_profile,
    tanh_family_conditions,
)

# row -> (init, delta) as used by the catalog
FAMILY_INITS = {
    "snsn": (snsn_matrix, [("zero", None)] * 3),
    "cncn": (cncn_matrix, [("turning", -1), ("turning", -1), ("zero", None)]),
    "sncn": (sncn_matrix, [("zero", None), ("turning", None), ("turning", None)]),
}


def family_rows(name, k=0.8, m=0.8):
    build, inits = FAMILY_INITS[name]
    a, b, c = row_coefficients(np.array(build(k * k, m * m)))
    convs = ("phi", "phi", "zeta")
    return [(QuarticCoeffs(a[i], b[i], c[i], convs[i]), *inits[i]) for i in range(3)]


def test_sn_profile_is_jacobi_sn():
    k = 0.6
    p = solve_profile(QuarticCoeffs(1.0, 0.5 * (1 + k * k), k * k), "zero")
    t = np.linspace(-5, 5, 41)
    assert p.form_tag == "sn-scaled"
    assert np.allclose(p.value(t), special.ellipj(t, k * k)[0], atol=1e-13)
    assert p.period == pytest.approx(4 * special.ellipk(k * k), rel=1e-13)


def test_cn_profile_is_jacobi_cn():
    k = 0.6
    p = solve_profile(QuarticCoeffs(1 - k * k, 0.5 * (1 - 2 * k * k), -k * k), "turning")
    t = np.linspace(-5, 5, 41)
    assert p.form_tag == "cn-scaled"
    assert np.allclose(p.value(t), special.ellipj(t, k * k)[1], atol=1e-13)


@pytest.mark.parametrize("delta", [1, -1])
def test_dn_profile_starts_at_selected_root(delta):
    k = 0.6
    kp2 = 1 - k * k
    q = QuarticCoeffs(-kp2, -(1 + kp2) / 2, -1.0)
    p = solve_profile(q, "turning", delta)
    assert p.form_tag == "dn-scaled"
    t = np.linspace(-3, 3, 31)
    dn = special.ellipj(t, k * k)[2]
    if p.value(0.0) == pytest.approx(1.0):
        assert np.allclose(p.value(t), dn, atol=1e-13)
    else:
        assert p.value(0.0) == pytest.approx(math.sqrt(kp2))
    assert q.delta_of_root(p.value(0.0) ** 2) == delta


@pytest.mark.parametrize(
    "q,init,tag,expect",
    [
        (QuarticCoeffs(1.0, 0.5, 0.0), "zero", "trig", np.sin),
        (QuarticCoeffs(1.0, -0.5, 0.0), "zero", "exp-like", np.sinh),
        (QuarticCoeffs(-1.0, -0.5, 0.0), "turning", "exp-like", np.cosh),
        (QuarticCoeffs(0.0, -0.5, 0.0), "unit", "exp-like", np.exp),
        (QuarticCoeffs(1.0, 1.0, 1.0), "zero", "tanh", np.tanh),
        (QuarticCoeffs(0.0, -0.5, -1.0), "turning", "dn-scaled", lambda t: 1 / np.cosh(t)),
        (QuarticCoeffs(1.0, 0.0, 0.0), "zero", "trig", lambda t: t),
    ],
)
def test_elementary_profiles(q, init, tag, expect):
    p = solve_profile(q, init)
    t = np.linspace(-1.5, 1.5, 13)
    assert p.form_tag == tag
    assert np.allclose(p.value(t), expect(t), rtol=1e-13, atol=1e-13)
    assert np.max(np.abs(p.residual(t))) < 1e-12


def test_zeta_convention_swaps_a_and_c():
    q = QuarticCoeffs(2.0, 0.3, 5.0, "zeta")
    assert q.to_phi() == QuarticCoeffs(5.0, -0.3, 2.0, "phi")
    assert q.to_phi().to_zeta() == q
    s = 0.7
    assert q.P(s) == pytest.approx(5.0 + 2 * 0.3 * s + 2.0 * s * s)


@pytest.mark.parametrize(
    "q,init,err",
    [
        (QuarticCoeffs(-1.0, 0.0, -1.0), "turning", NoRealSolutionError),
        (QuarticCoeffs(-1.0, -0.5, 0.0), "zero", ProfileError),
        (QuarticCoeffs(1.0, 0.0, 1.0), "zero", UnsupportedProfileError),
        (QuarticCoeffs(0.0, 0.0, 0.0), "zero", ProfileError),
        (QuarticCoeffs(1.0, 0.5, 0.0), "unit", ProfileError),
    ],
)
def test_profile_errors(q, init, err):
    with pytest.raises(err):
        solve_profile(q, init)


@pytest.mark.parametrize("name", list(FAMILY_INITS))
def test_closed_form_matches_rk4_over_one_period(name):
    for q, init, delta in family_rows(name):
        p = solve_profile(q, init, delta)
        num = integrate_profile_numeric(q, init, delta)
        t = np.linspace(0.0, p.period, 2001)
        assert np.max(np.abs(num.value(t) - p.value(t))) <= 1e-8
        assert np.max(np.abs(num.deriv(t) - p.deriv(t))) <= 1e-7


@given(k=st.floats(0.05, 0.95), m=st.floats(0.05, 0.95))
@settings(max_examples=40, deadline=None)
def test_family_rows_satisfy_their_ode(k, m):
    for name in FAMILY_INITS:
        for q, init, delta in family_rows(name, k, m):
            p = solve_profile(q, init, delta)
            t = np.linspace(-p.period, p.period, 101)
            scale = max(abs(q.a), abs(q.b), abs(q.c))
            assert np.max(np.abs(p.residual(t))) <= 1e-11 * scale * max(1.0, np.max(p.value(t) ** 4))
            # second derivative from the ODE agrees with differencing f'
            h = 1e-5
            fd = (p.deriv(t + h) - p.deriv(t - h)) / (2 * h)
            assert np.allclose(fd, p.second_deriv(t), atol=1e-6 * scale)


def test_turning_points_and_monotone_intervals():
    p = solve_profile(QuarticCoeffs(1.0, 0.5, 0.0), "zero")  # sin
    tp = p.turning_points()
    assert np.allclose(tp, [math.pi / 2, 3 * math.pi / 2])
    assert p.monotone_interval(0.0) == pytest.approx((-math.pi / 2, math.pi / 2))
    assert p.monotone_interval(0.0, 1) == pytest.approx((math.pi / 2, 3 * math.pi / 2))
    tanh = solve_profile(QuarticCoeffs(1.0, 1.0, 1.0), "zero")
    assert tanh.monotone_interval(0.0) == (-math.inf, math.inf)


def test_numeric_profile_is_nan_outside_table():
    num = integrate_profile_numeric(QuarticCoeffs(1.0, 0.5, 0.0), "zero")
    assert math.isnan(num.value(-1.0))
    assert num.value(1.0) == pytest.approx(math.sin(1.0), abs=1e-10)


def test_tanh_family_conditions():
    # tanh x tanh y = tanh(z / sqrt 2): b = (1, 1, -1/2), alpha_3^2 = 1/2
    assert tanh_family_conditions([1.0, 1.0, -0.5], [1.0, 1.0, math.sqrt(0.5)])
    assert not tanh_family_conditions([1.0, 1.0, -0.5], [1.0, 1.0, 0.5])
    assert not tanh_family_conditions([1.0, 2.0, -0.5], [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        tanh_family_conditions([1.0, 0.0, -0.5], [1.0, 1.0, 1.0])
