from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsd import GridFunction, GridSpec, Strategy
from qsd.duality import (
    dual_spec,
    fisher_ft_invariance,
    fourier_transform_grid,
    fourier_transform_values,
    ft_eigen_defect,
    self_dual_grid,
    strategy_ft_eval,
    uncertainty_product,
)
from qsd.errors import LeakyDomain
from qsd.fisher import fisher_information_grid
from qsd.strategy import psi_pure_eval, strategy_eval


def transform(s: Strategy, grid: GridSpec):
    return fourier_transform_values(strategy_eval(s, grid.nodes), grid)


def parseval_defect(values, grid, dual) -> float:
    return abs(np.sum(np.abs(values) ** 2) * grid.h - np.sum(dual.modulus**2) * dual.spec.h)


def test_gaussian_is_fixed_point():
    grid = self_dual_grid()
    dual = transform(Strategy.pure(0), grid)
    assert np.max(np.abs(dual.modulus - psi_pure_eval(0, 1.0, 0.0, dual.nodes))) < 1e-8
    assert np.max(np.abs(dual.values_im)) < 1e-8


def test_gaussian_scale_inversion():
    grid = self_dual_grid(2.0)
    dual = transform(Strategy.pure(0, 2.0), grid)
    assert np.max(np.abs(dual.modulus - psi_pure_eval(0, 0.5, 0.0, dual.nodes))) < 1e-8


@pytest.mark.parametrize("n", range(9))
def test_hermite_eigenfunctions(n):
    assert ft_eigen_defect(n) <= 1e-7


@pytest.mark.parametrize("n, tol", [(0, 1e-8), (1, 1e-7), (4, 1e-7)])
def test_eigen_defect_examples(n, tol):
    assert ft_eigen_defect(n) <= tol


def test_eigen_defect_on_wide_default_style_grid():
    grid = Strategy.pure(4).default_grid(span=12.0, points=2048)
    assert ft_eigen_defect(4, grid) <= 1e-7


def test_analytic_transform_matches_fft():
    s = Strategy(2.5, -0.7, (0.6, 0.0, 0.48, 0.64))
    grid = self_dual_grid(s.mu, s.m)
    dual = transform(s, grid)
    assert np.max(np.abs(dual.values - strategy_ft_eval(s, dual.nodes))) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=6).filter(lambda c: sum(v * v for v in c) > 1e-2),
       st.floats(0.3, 4.0), st.floats(-2, 2))
def test_parseval(raw, mu, m):
    c = np.array(raw) / np.linalg.norm(raw)
    s = Strategy(mu, m, tuple(c))
    grid = self_dual_grid(mu, m, 4096)
    psi = strategy_eval(s, grid.nodes)
    assert parseval_defect(psi, grid, fourier_transform_values(psi, grid)) < 1e-8


def test_double_transform_reflects():
    s = Strategy(1.0, 0.3, (0.6, 0.8))
    grid = self_dual_grid(1.0, 0.0, 4096)
    dual = transform(s, grid)
    twice = fourier_transform_values(dual.values, dual.spec)
    expected = strategy_eval(s, -twice.nodes)
    assert np.max(np.abs(twice.values - expected)) < 1e-7


def test_leaky_domain():
    grid = GridSpec(-2.0, 2.0, 256)
    with pytest.raises(LeakyDomain):
        fourier_transform_grid(GridFunction(grid, psi_pure_eval(0, 1.0, 0.0, grid.nodes)))


def test_dual_spec_span():
    grid = GridSpec(-5.0, 5.0, 512)
    d = dual_spec(grid)
    assert d.points == 512
    assert d.x_min == pytest.approx(-math.pi / grid.h)
    assert d.x_max < math.pi / grid.h


def test_interpolation_is_linear_between_nodes():
    dual = transform(Strategy.pure(0), self_dual_grid())
    y = 0.5 * (dual.nodes[100] + dual.nodes[101])
    assert dual.at(y) == pytest.approx(0.5 * (dual.values[100] + dual.values[101]))


@pytest.mark.parametrize("n", range(11))
def test_uncertainty_ladder(n):
    assert uncertainty_product(Strategy.pure(n)) == pytest.approx(n + 0.5, abs=1e-6)


@pytest.mark.parametrize("mu", [0.2, 7.0])
def test_uncertainty_mu_invariant(mu):
    assert uncertainty_product(Strategy.pure(0, mu)) == pytest.approx(0.5, abs=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=6).filter(lambda c: sum(v * v for v in c) > 1e-2))
def test_uncertainty_lower_bound(raw):
    c = np.array(raw) / np.linalg.norm(raw)
    assert uncertainty_product(Strategy(1.0, 0.0, tuple(c)), 4096) >= 0.5 - 1e-9


@pytest.mark.parametrize("n, expected, tol", [(0, 2.0, 1e-3), (2, 10.0, 1e-2)])
def test_fisher_pair_examples(n, expected, tol):
    a, b = fisher_ft_invariance(n)
    assert a == pytest.approx(expected, abs=tol)
    assert b == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize("n", range(9))
def test_fisher_pair_agrees(n):
    a, b = fisher_ft_invariance(n)
    assert abs(a - b) / a <= 1e-3


@pytest.mark.parametrize("coeffs", [(1.0,), (0.0, 0.0, 1.0), (0.6, 0.0, 0.8), (0.0, 0.6, 0.0, 0.8)])
def test_plancherel_fisher(coeffs):
    # real amplitudes with even or odd parity have <y> = 0
    s = Strategy(1.0, 0.0, coeffs)
    grid = self_dual_grid(1.0, 0.0, 4096)
    psi = strategy_eval(s, grid.nodes)
    dual = fourier_transform_values(psi, grid)
    second = np.sum(dual.nodes**2 * dual.modulus**2) * dual.spec.h
    fisher = fisher_information_grid(GridFunction(grid, psi**2)).value
    assert fisher == pytest.approx(4 * second, rel=1e-3)
