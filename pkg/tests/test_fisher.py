from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsd import GridFunction, GridSpec, Strategy
from qsd.errors import NotADensity, NotPure
from qsd.fisher import (
    cramer_rao_product,
    fisher_information_closed,
    fisher_information_grid,
    signed_amplitude,
    surprisal_derivative,
)
from qsd.strategy import strategy_eval, strategy_pdf


def gaussian_pdf(var: float, m: float = 0.0, points: int = 1024) -> GridFunction:
    sd = math.sqrt(var)
    g = GridSpec(m - 8 * sd, m + 8 * sd, points)
    x = g.nodes
    return GridFunction(g, np.exp(-((x - m) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var))


@pytest.mark.parametrize("var, expected", [(0.5, 2.0), (2.0, 0.5)])
def test_gaussian_fisher(var, expected):
    r = fisher_information_grid(gaussian_pdf(var))
    assert r.value == pytest.approx(expected, abs=1e-3)
    assert r.method == "quadrature"


def test_psi1_fisher():
    assert fisher_information_grid(strategy_pdf(Strategy.pure(1))).value == pytest.approx(6.0, abs=1e-3)


@pytest.mark.parametrize("n, mu, expected", [(0, 1.0, 2.0), (3, 1.0, 14.0), (0, 5.0, 10.0)])
def test_closed_form(n, mu, expected):
    r = fisher_information_closed(Strategy.pure(n, mu))
    assert r.value == expected
    assert r.method == "closed_form"


def test_closed_form_rejects_superposition():
    with pytest.raises(NotPure):
        fisher_information_closed(Strategy(1.0, 0.0, (0.6, 0.8)))


@pytest.mark.parametrize("n", range(11))
def test_grid_agrees_with_closed_form(n):
    s = Strategy.pure(n)
    grid = fisher_information_grid(strategy_pdf(s)).value
    closed = fisher_information_closed(s).value
    assert abs(grid - closed) / closed <= 1e-3


def test_signed_amplitude_recovers_odd_states():
    s = Strategy.pure(3)
    g = s.default_grid()
    psi = strategy_eval(s, g.nodes)
    rec = signed_amplitude(psi**2)
    assert min(np.max(np.abs(rec - psi)), np.max(np.abs(rec + psi))) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(-3, 3))
def test_scale_law(lam, shift):
    # pdf of lam * X has Fisher information I / lam^2
    base = fisher_information_grid(strategy_pdf(Strategy.pure(2))).value
    scaled = fisher_information_grid(strategy_pdf(Strategy.pure(2, 1 / lam**2, shift))).value
    assert scaled * lam**2 == pytest.approx(base, rel=1e-3)


@settings(max_examples=20, deadline=None)
@given(st.floats(-50, 50))
def test_shift_invariance(m):
    base = fisher_information_grid(strategy_pdf(Strategy.pure(1))).value
    moved = fisher_information_grid(strategy_pdf(Strategy.pure(1, 1.0, m))).value
    assert moved == pytest.approx(base, abs=1e-6)


def test_not_a_density():
    g = GridSpec(-5, 5, 128)
    with pytest.raises(NotADensity):
        fisher_information_grid(GridFunction(g, -np.ones(128) / 10))
    with pytest.raises(NotADensity):
        fisher_information_grid(GridFunction(g, np.ones(128)))


def test_surprisal_gaussian():
    f = strategy_pdf(Strategy.pure(0))
    g = surprisal_derivative(f)
    win = g.support & (np.abs(g.nodes) <= 3)
    assert np.max(np.abs(g.values[win] - 2 * g.nodes[win])) < 1e-3


def test_surprisal_zero_at_mode():
    f = gaussian_pdf(0.5, m=2.0, points=1025)
    g = surprisal_derivative(f)
    assert g.values[512] == pytest.approx(0.0, abs=1e-9)


def test_surprisal_excludes_node_of_psi1():
    f = strategy_pdf(Strategy.pure(1), GridSpec(-10, 10, 1025))
    g = surprisal_derivative(f)
    assert not g.support[512]
    assert np.all(f.values[~g.support] < 1e-12)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_surprisal_variance_matches_fisher(n):
    f = strategy_pdf(Strategy.pure(n))
    g = surprisal_derivative(f)
    w = f.values * g.support
    var = np.trapezoid(w * g.values**2, f.nodes) - np.trapezoid(w * g.values, f.nodes) ** 2
    assert var == pytest.approx(fisher_information_grid(f).value, rel=1e-2)


@pytest.mark.parametrize("var", [0.1, 0.5, 3.0])
def test_cramer_rao_gaussian(var):
    assert cramer_rao_product(gaussian_pdf(var)) == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("n, expected", [(1, 3.0), (2, 5.0)])
def test_cramer_rao_excited(n, expected):
    assert cramer_rao_product(strategy_pdf(Strategy.pure(n))) == pytest.approx(expected, abs=1e-2)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=5).filter(lambda c: sum(v * v for v in c) > 1e-2))
def test_cramer_rao_lower_bound(raw):
    c = np.array(raw) / np.linalg.norm(raw)
    s = Strategy(1.0, 0.0, tuple(c))
    assert cramer_rao_product(strategy_pdf(s)) >= 1 - 1e-6
