"""Uniform 1-D grids, sampled functions and the quadrature/differencing they share."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValidationError(f"grid bounds out of order: {self.x_min} >= {self.x_max}")
        if int(self.points) != self.points or self.points < 16:
            raise ValidationError(f"grid needs an integer count >= 16, got {self.points}")
        object.__setattr__(self, "points", int(self.points))

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    @classmethod
    def centered(cls, center: float, half_width: float, points: int) -> GridSpec:
        return cls(center - half_width, center + half_width, points)

    def as_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "points": self.points}


@dataclass(frozen=True)
class GridFunction:
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.spec.points,):
            raise ValidationError(
                f"expected {self.spec.points} samples, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("grid function has non-finite samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def nodes(self) -> np.ndarray:
        return self.spec.nodes

    def integral(self) -> float:
        return trapezoid(self.values, self.spec.h)

    def at(self, x) -> np.ndarray:
        """Linear interpolation; zero outside the grid."""
        return np.interp(x, self.nodes, self.values, left=0.0, right=0.0)


def trapezoid(values: np.ndarray, h: float) -> float:
    v = np.asarray(values)
    return float(h * (v.sum(axis=-1) - 0.5 * (v[..., 0] + v[..., -1])))


def derivative(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative by central differences.

    Five-point (fourth-order) stencil in the interior, three-point central one
    node in from each edge, second-order one-sided at the two boundary nodes.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    d = np.gradient(v, h, edge_order=2)
    if n >= 5:
        d[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    return d
