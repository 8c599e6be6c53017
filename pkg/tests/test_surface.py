from __future__ import annotations

import math

import numpy as np
import pytest

from maxsurf.families import get_entry, snsn_matrix, cncn_matrix, sinsin1_matrix, tanh_matrix
from maxsurf.genmat import NotGeneratingError, act
from maxsurf.profiles import ProfileError, QuarticCoeffs, solve_profile
from maxsurf.surface import (
    ImplicitSurface,
    NoSolutionError,
    ProductRHS,
    SingularPointError,
    build_from_matrix,
    causal_character,
    evaluate,
    evaluate_grid,
    pde_residual_fd,
    pde_residual_implicit,
    periods,
)


@pytest.fixture(scope="module")
def sinsin1():
    return build_from_matrix(np.array(sinsin1_matrix(), dtype=float), inits=("zero",) * 3)


@pytest.fixture(scope="module")
def tanh():
    return build_from_matrix(np.array(tanh_matrix(), dtype=float))


@pytest.fixture(scope="module")
def snsn():
    return build_from_matrix(np.array(snsn_matrix(0.64, 0.64)))


@pytest.fixture(scope="module")
def plane():
    # e^z = e^x e^y, i.e. u = x + y
    A = np.array([[0, 0, 0], [0, 0, 0], [0, -1, 0]], dtype=float)
    return build_from_matrix(A, inits=("unit",) * 3)


def test_sinsin1_value(sinsin1):
    r = evaluate(sinsin1, math.pi / 6, math.pi / 2)
    assert r.z == pytest.approx(math.pi / 6, abs=1e-12)
    # cos y = 0 puts the point on a null line
    assert r.causal == "null"
    assert evaluate(sinsin1, 0.3, 0.7).causal == "space-like"


def test_tanh_on_axis(tanh):
    r = evaluate(tanh, 0.0, 0.0)
    assert r.z == 0.0 and r.grad == (0.0, 0.0)
    assert r.causal == "space-like"
    # off the origin only u_y vanishes on the axis: u_x = sqrt(2) tanh y
    r = evaluate(tanh, 0.0, 0.7)
    assert r.z == 0.0
    assert r.grad == pytest.approx((math.sqrt(2) * math.tanh(0.7), 0.0), abs=1e-14)
    assert r.causal == "space-like"
    assert causal_character(tanh, 0.0, 0.0) == ("space-like", 0.0)


def test_implicit_self_consistency(snsn, rng):
    x, y = rng.uniform(-6, 6, (2, 100))
    z = snsn.u(x, y)
    G = snsn.rhs.value(x, y)
    assert np.max(np.abs(snsn.zeta.value(z) - G)) <= 1e-11


def test_closed_form_snsn(snsn, rng):
    from maxsurf.elliptic import jacobi_sn_cn_dn

    k = m = 0.8
    kp = math.sqrt(1 - k * k)
    lam = 1 / math.sqrt(1 - k * k * m * m)
    x, y = rng.uniform(-4, 4, (2, 200))
    z = snsn.u(x, y)
    lhs = jacobi_sn_cn_dn(lam * z, k * m)[0]
    rhs = jacobi_sn_cn_dn(x / kp, k)[0] * jacobi_sn_cn_dn(y / kp, m)[0]
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_sinsin1_residuals(sinsin1):
    assert abs(pde_residual_implicit(sinsin1, 0.3, 0.7)) <= 1e-9
    assert abs(pde_residual_fd(sinsin1, 0.3, 0.7, 1e-3)) <= 1e-5


def test_plane(plane):
    x = np.linspace(-2, 2, 9)
    assert np.allclose(plane.u(x, 0.5 * x), 1.5 * x, atol=1e-14)
    assert np.all(pde_residual_implicit(plane, x, x) == 0.0)
    assert abs(pde_residual_fd(plane, 0.3, -0.2, 1e-3)) <= 1e-8


def test_fd_richardson_ratio(tanh):
    r1 = pde_residual_fd(tanh, 0.5, 0.5, 1e-3)
    r2 = pde_residual_fd(tanh, 0.5, 0.5, 5e-4)
    assert r1 / r2 == pytest.approx(4.0, rel=0.2)


def test_fd_stencil_over_singular_point(sinsin1):
    with pytest.raises(SingularPointError):
        pde_residual_fd(sinsin1, math.pi / 2, math.pi / 2, 1e-3)


def test_singular_point_is_marked_not_raised(sinsin1):
    r = evaluate(sinsin1, math.pi / 2, math.pi / 2)
    assert r.singular and r.grad is None and r.hess is None
    assert r.z == pytest.approx(math.pi / 2)
    assert math.isnan(pde_residual_implicit(sinsin1, math.pi / 2, math.pi / 2))


def test_gradient_matches_central_differences(snsn):
    x, y = 0.4, -0.9
    r = evaluate(snsn, x, y)
    errs = []
    for h in (1e-3, 5e-4):
        gx = (snsn.u(x + h, y) - snsn.u(x - h, y)) / (2 * h)
        gy = (snsn.u(x, y + h) - snsn.u(x, y - h)) / (2 * h)
        errs.append(math.hypot(gx - r.grad[0], gy - r.grad[1]))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)


def test_grid_residual_snsn(snsn):
    g = evaluate_grid(snsn, np.linspace(0.05, 4.7, 50), np.linspace(0.05, 4.7, 50))
    ok = ~g.singular & ~g.failed
    assert np.max(np.abs(g.residual[ok])) <= 1e-8
    assert set(np.unique(g.causal[ok])) <= {"space-like", "time-like", "null"}


def test_no_solution():
    zeta = solve_profile(QuarticCoeffs(1.0, 0.5, 0.0), "zero")  # sin
    phi = solve_profile(QuarticCoeffs(4.0, 0.5, 0.0), "zero")  # 2 sin
    s = ImplicitSurface(zeta, ProductRHS(phi, zeta))
    with pytest.raises(NoSolutionError):
        evaluate(s, math.pi / 2, math.pi / 2)
    assert math.isnan(s.u(math.pi / 2, math.pi / 2))


def test_periods(sinsin1, tanh, snsn):
    assert periods(sinsin1) == pytest.approx((2 * math.pi, 2 * math.pi))
    assert periods(tanh) == (None, None)
    from maxsurf.elliptic import complete_K

    T1 = 4 * 0.6 * complete_K(0.8)
    assert periods(snsn)[0] == pytest.approx(T1, rel=1e-13)
    x = np.linspace(0.01, 5, 30)
    assert np.max(np.abs(snsn.u(x + T1, x) - snsn.u(x, x))) <= 1e-9


@pytest.mark.parametrize("builder,inits,deltas", [
    (snsn_matrix, (None,) * 3, (None,) * 3),
    (cncn_matrix, ("turning", "turning", None), (-1, -1, None)),
])
def test_equivalent_matrices_give_the_same_surface(builder, inits, deltas, rng):
    A = np.array(builder(0.64, 0.36))
    a1, a2 = 1.3, 0.7
    B = act(a1**-2, a2**-2, A)
    s = build_from_matrix(A, inits, deltas)
    t = build_from_matrix(B, inits, deltas)
    # profiles scale as (a1 phi, a2 psi, a1 a2 zeta)
    assert t.phi.value(0.37) == pytest.approx(a1 * s.phi.value(0.37), rel=1e-12)
    x, y = rng.uniform(-3, 3, (2, 50))
    assert np.allclose(s.u(x, y), t.u(x, y), atol=1e-11)


def test_sheets(sinsin1):
    up = sinsin1.with_sheet(1)
    assert up.branch == pytest.approx((math.pi / 2, 3 * math.pi / 2))
    z = up.u(0.3, 0.7)
    assert math.sin(z) == pytest.approx(math.sin(0.3) * math.sin(0.7))
    assert math.pi / 2 <= z <= 3 * math.pi / 2


def test_build_errors():
    with pytest.raises(NotGeneratingError):
        build_from_matrix(np.array([[1.0, 2, 3], [4, 5, 6], [7, 8, 10]]))
    with pytest.raises(ProfileError):
        build_from_matrix(np.array([[-1.0, 1, 1], [1, 1, -1], [1, -1, 1]]))


def test_catalog_surfaces_are_immutable():
    s = get_entry("snsn").surface
    with pytest.raises(AttributeError):
        s.sheet = 2
