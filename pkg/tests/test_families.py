from __future__ import annotations

import math

import numpy as np
import pytest

from maxsurf.elliptic import complete_K
from maxsurf.families import CATALOG_NAMES, build_catalog, get_entry, snsn_matrix, verify_entry
from maxsurf.genmat import is_generating
from maxsurf.surface import pde_residual_implicit


def test_catalog_names():
    names = [e.name for e in build_catalog()]
    assert names == list(CATALOG_NAMES)
    for n in ("snsn", "sncn", "cncn", "tanh-scherk", "one-periodic", "sinsin", "sinsin1", "catenoid"):
        assert n in names


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_every_entry_verifies(name):
    rep = verify_entry(get_entry(name))
    assert rep.ok, rep.format()


def test_snsn_display_matrix():
    e = get_entry("snsn", k=0.8, m=0.8)
    assert np.allclose(e.display_matrix, np.array(snsn_matrix(0.64, 0.64)), rtol=1e-14, atol=0)
    assert is_generating(e.display_matrix)
    # first row: 1/k'^2, lam^2 k'^2 m^2 / m'^2, k^2/k'^2 with k = m = 4/5
    assert e.display_matrix[0] == pytest.approx([1 / 0.36, 0.64 / (1 - 0.4096), 0.64 / 0.36], rel=1e-14)


def test_one_periodic_metadata():
    e = get_entry("one-periodic", alpha=0.6)
    assert e.expected.slab_bound == pytest.approx(complete_K(0.6) * 0.8)
    s = e.surface
    x = np.linspace(-3, 3, 41)
    # the displayed equation: sn(z / alpha'; alpha) = cos x / cosh y
    from maxsurf.elliptic import jacobi_sn_cn_dn

    X, Y = np.meshgrid(x, x)
    z = s.u(X, Y)
    assert np.allclose(jacobi_sn_cn_dn(z / 0.8, 0.6)[0], np.cos(X) / np.cosh(Y), atol=1e-13)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.9])
def test_sinsin_residual(alpha, rng):
    s = get_entry("sinsin", alpha=alpha).surface
    x, y = rng.uniform(-5, 5, (2, 200))
    r = pde_residual_implicit(s, x, y)
    assert np.nanmax(np.abs(r)) <= 1e-8


def test_sinsin_half_is_rotated_product():
    # sin z = (sin(sqrt2 x) + sin(sqrt2 y)) / 2 is sin z = sin x' cos y'
    s = get_entry("sinsin", alpha=0.5).surface
    x, y = 0.3, -0.4
    xp, yp = (x + y) / math.sqrt(2), (x - y) / math.sqrt(2)
    assert math.sin(s.u(x, y)) == pytest.approx(math.sin(xp) * math.cos(yp), abs=1e-14)


@pytest.mark.parametrize("name,params", [("snsn", {"k": 1.0}), ("cncn", {"m": -0.1}), ("one-periodic", {"alpha": 1.2}), ("sinsin", {"alpha": 0.0}), ("tanh-scherk", {"k": 0.5})])
def test_parameter_errors(name, params):
    with pytest.raises(ValueError):
        get_entry(name, **params)


def test_unknown_entry():
    with pytest.raises(ValueError):
        get_entry("helicoid")


def test_report_lists_failures():
    e = get_entry("tanh-scherk")
    rep = verify_entry(e)
    rep.add("synthetic", False, "forced")
    assert not rep.ok
    assert rep.failures == [("synthetic", False, "forced")]
    assert "FAIL synthetic: forced" in rep.format()
