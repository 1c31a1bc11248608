"""Log-log slope fits and constant fits over parameter sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError


@dataclass(frozen=True)
class SlopeFit:
    points: tuple
    slope: float
    intercept: float
    max_residual: float

    def predict(self, x) -> float:
        return math.exp(self.intercept) * x**self.slope


def _pairs(points):
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise DomainError("need at least three points")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise DomainError("log-log fit needs positive coordinates")
    return pts


def fit_slope(points) -> SlopeFit:
    """Least-squares line through (ln x, ln y)."""
    pts = _pairs(points)
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    if np.ptp(lx) == 0:
        raise DegenerateError("all x values coincide")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = np.abs(ly - (slope * lx + intercept))
    return SlopeFit(tuple(pts), float(slope), float(intercept), float(resid.max()))


@dataclass(frozen=True)
class FittedConstant:
    value: float
    sweep_size: int


def fit_constant(pairs) -> FittedConstant:
    """Smallest constant C with lhs <= C * rhs_unit for every (lhs, rhs_unit)."""
    pairs = [(float(a), float(b)) for a, b in pairs]
    if not pairs:
        raise DomainError("empty sweep")
    if any(b <= 0 for _, b in pairs):
        raise DomainError("rhs_unit must be positive")
    return FittedConstant(max(a / b for a, b in pairs), len(pairs))


def log_correct(points, power: float, mode: str = "divide-by-log"):
    """Replace y by y / |ln x|^power."""
    if mode != "divide-by-log":
        raise DomainError(f"unknown mode {mode!r}")
    out = []
    for x, y in points:
        if x >= 1:
            raise DomainError("log correction needs x < 1")
        out.append((x, y / abs(math.log(x)) ** power))
    return out
