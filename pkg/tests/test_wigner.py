from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsd import Strategy
from qsd.errors import DomainTooNarrow, ValidationError
from qsd.wigner import (
    PhaseGridSpec,
    RadialRegion,
    boundary_radii,
    laguerre_eval,
    negative_regions,
    wigner_closed,
    wigner_closed_grid,
    wigner_marginal_defect,
    wigner_numeric,
)


def odd_grid(s: Strategy, points: int = 129) -> PhaseGridSpec:
    # an odd count puts a node on (m, 0)
    return PhaseGridSpec.for_strategy(s, points=points)


@pytest.mark.parametrize("n, expected", [(0, 1 / math.pi), (1, -1 / math.pi)])
def test_numeric_at_origin(n, expected):
    s = Strategy.pure(n)
    f = wigner_numeric(s, odd_grid(s))
    assert f.values[64, 64] == pytest.approx(expected, abs=1e-9)


def test_ground_state_nonnegative():
    f = wigner_numeric(Strategy.pure(0))
    assert f.values.min() >= -1e-9


@pytest.mark.parametrize("n, x, y, expected", [
    (0, 0.0, 0.0, 1 / math.pi),
    (1, 1 / math.sqrt(2), 0.0, 0.0),
    (1, 0.0, 1 / math.sqrt(2), 0.0),
    (2, 0.0, 0.0, 1 / math.pi),
])
def test_closed_examples(n, x, y, expected):
    assert wigner_closed(n, 1.0, 0.0, x, y) == pytest.approx(expected, abs=1e-14)


@given(st.integers(0, 12), st.floats(0, 30))
def test_laguerre_matches_numpy(n, u):
    ref = np.polynomial.laguerre.lagval(u, [0] * n + [1])
    assert laguerre_eval(n, u) == pytest.approx(ref, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("n", range(9))
def test_numeric_matches_closed(n):
    s = Strategy.pure(n)
    f = wigner_numeric(s)
    ref = wigner_closed_grid(n, 1.0, 0.0, f.spec)
    assert np.max(np.abs(f.values - ref.values)) <= 1e-5
    assert f.integral() == pytest.approx(1.0, abs=1e-4)
    assert np.max(np.abs(f.values)) <= 1 / math.pi + 1e-9


def test_numeric_matches_closed_scaled_shifted():
    s = Strategy.pure(3, 2.5, -1.0)
    f = wigner_numeric(s)
    assert np.max(np.abs(f.values - wigner_closed_grid(3, 2.5, -1.0, f.spec).values)) <= 1e-5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.floats(0, 2 * math.pi), st.floats(0, 3))
def test_rotational_symmetry(n, theta, r):
    a = wigner_closed(n, 1.0, 0.0, r * math.cos(theta), r * math.sin(theta))
    b = wigner_closed(n, 1.0, 0.0, r, 0.0)
    assert a == pytest.approx(b, abs=1e-12)


def test_rotational_symmetry_numeric():
    s = Strategy.pure(2)
    f = wigner_numeric(s, odd_grid(s, 257))
    v = f.values
    assert np.max(np.abs(v - v.T)) < 1e-6  # equal axis spans at mu = 1


def test_domain_too_narrow():
    with pytest.raises(DomainTooNarrow):
        wigner_numeric(Strategy.pure(0), PhaseGridSpec(-0.5, 0.5, -5, 5, 64, 64))


def test_negative_regions_examples():
    assert negative_regions(0) == []
    (disk,) = negative_regions(1)
    assert disk.is_disk and disk.rho_hi == pytest.approx(0.707107, abs=1e-6)
    (ring,) = negative_regions(2)
    assert not ring.is_disk
    assert ring.rho_lo == pytest.approx(0.541196, abs=1e-6)
    assert ring.rho_hi == pytest.approx(1.306563, abs=1e-6)
    assert (ring.rho_lo, ring.rho_hi) == pytest.approx(
        (math.sqrt((2 - math.sqrt(2)) / 2), math.sqrt((2 + math.sqrt(2)) / 2)), abs=1e-10)


@pytest.mark.parametrize("n", range(9))
def test_region_counts(n):
    expected = n // 2 if n % 2 == 0 else (n + 1) // 2
    assert len(negative_regions(n)) == expected


@pytest.mark.parametrize("n", range(1, 9))
def test_boundaries_are_laguerre_roots(n):
    roots = np.sort(np.polynomial.laguerre.lagroots([0] * n + [1]))
    assert np.allclose(boundary_radii(n), np.sqrt(roots / 2), atol=1e-10)


@pytest.mark.parametrize("n", range(1, 7))
def test_regions_are_negative_on_grid(n):
    for r in negative_regions(n):
        hi = r.rho_hi if math.isfinite(r.rho_hi) else r.rho_lo + 1.0
        mid = 0.5 * (r.rho_lo + hi)
        assert wigner_closed(n, 1.0, 0.0, mid, 0.0) < 0


def test_radial_region_validation():
    with pytest.raises(ValidationError):
        RadialRegion(1.0, 0.5)
    with pytest.raises(ValidationError):
        boundary_radii(-1)


@pytest.mark.parametrize("n", range(7))
def test_marginals(n):
    s = Strategy.pure(n)
    dx, dy = wigner_marginal_defect(wigner_numeric(s), s)
    tol = 1e-6 if n == 0 else 1e-4
    assert dx <= tol and dy <= tol


def test_marginals_superposition():
    s = Strategy(1.0, 0.0, (1 / math.sqrt(2), 1 / math.sqrt(2)))
    f = wigner_numeric(s)
    dx, dy = wigner_marginal_defect(f, s)
    assert dx <= 1e-4 and dy <= 1e-4
    assert f.integral() == pytest.approx(1.0, abs=1e-4)
