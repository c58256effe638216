"""Extremal Renyi entropy at fixed concurrence.

For a Schmidt vector ``mu`` of length ``m`` with concurrence ``c`` we have
``sum(mu) = 1`` and ``sum(mu**2) = 1 - c**2 / 2``.  ``R_L(c)`` and ``R_U(c)``
are the minimum and maximum of ``H_alpha(mu)`` over that set.  Every interior
extremum on a face of the simplex takes at most two distinct nonzero values,
``gamma`` (``n1`` times) and ``delta`` (``n2`` times); such a vector is a
:class:`StationaryPattern`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .concurrence import max_concurrence
from .qstate import EPS_ALPHA

_FEAS_TOL = 1e-12

MODES = ("min", "max")
METHODS = ("enumeration", "paper")


@dataclass(frozen=True)
class StationaryPattern:
    n1: int
    n2: int
    branch: str
    gamma: float
    delta: float

    @property
    def d(self) -> int:
        return self.n1 + self.n2

    def schmidt(self, m: int | None = None) -> np.ndarray:
        m = self.d if m is None else m
        if m < self.d:
            raise ValueError("pattern does not fit in dimension m")
        mu = np.zeros(m)
        mu[: self.n1] = self.gamma
        mu[self.n1 : self.d] = self.delta
        return np.sort(mu)[::-1]

    def residuals(self, c: float) -> tuple[float, float]:
        """Residuals of the normalization and concurrence constraints."""
        r1 = self.n1 * self.gamma + self.n2 * self.delta - 1.0
        r2 = 2.0 * (1.0 - self.n1 * self.gamma**2 - self.n2 * self.delta**2) - c * c
        return abs(r1), abs(r2)


@dataclass(frozen=True)
class CurvePoint:
    c: float
    value: float
    pattern: StationaryPattern | str


def check_c(c, m: int) -> None:
    cmax = max_concurrence(m)
    c = np.asarray(c, dtype=float)
    if np.any(c < 0) or np.any(c > cmax + 1e-12) or np.any(np.isnan(c)):
        raise ValueError(f"concurrence must lie in [0, {cmax:.6g}] for m={m}")


def _gamma_pair(n1: int, n2: int, c, sign: int):
    """Vectorized ``gamma`` and ``delta``; NaN where infeasible."""
    c = np.asarray(c, dtype=float)
    d = n1 + n2
    s = 1.0 - c * c / 2.0
    rad = n1 * n1 - n1 * d * (1.0 - n2 * s)
    rad = np.where((rad < 0) & (rad > -_FEAS_TOL), 0.0, rad)
    with np.errstate(invalid="ignore"):
        g = (n1 + sign * np.sqrt(rad)) / (n1 * d)
    dl = (1.0 - n1 * g) / n2
    ok = (rad >= 0) & (g >= -_FEAS_TOL) & (dl >= -_FEAS_TOL)
    g = np.where(ok, np.clip(g, 0.0, 1.0), np.nan)
    dl = np.where(ok, np.clip(dl, 0.0, 1.0), np.nan)
    return g, dl


def gamma_solutions(n1: int, n2: int, c: float) -> list[StationaryPattern]:
    """Feasible two-level solutions ``(gamma, delta)`` at concurrence ``c``.

    Both branches are returned when both are feasible; when the radicand
    vanishes they coincide and only one pattern is returned.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be positive")
    out = []
    for branch, sign in (("+", 1), ("-", -1)):
        g, dl = _gamma_pair(n1, n2, c, sign)
        if np.isnan(g):
            continue
        p = StationaryPattern(n1, n2, branch, float(g), float(dl))
        if out and abs(out[0].gamma - p.gamma) < 1e-14:
            continue
        out.append(p)
    return out


def _entropy_terms(values, mults, alpha: float):
    """``H_alpha`` of vectors whose entries are ``values[k]`` repeated
    ``mults[k]`` times; ``values`` are broadcastable arrays."""
    if alpha == 0:
        support = sum(np.where(v > 0, k, 0) for v, k in zip(values, mults))
        with np.errstate(divide="ignore"):
            return np.log2(support)
    if np.isinf(alpha):
        top = np.maximum.reduce([np.where(k > 0, v, 0.0) for v, k in zip(values, mults)])
        return -np.log2(top)
    if abs(alpha - 1.0) < EPS_ALPHA:
        total = 0.0
        for v, k in zip(values, mults):
            with np.errstate(divide="ignore", invalid="ignore"):
                total = total - k * np.where(v > 0, v * np.log2(np.where(v > 0, v, 1.0)), 0.0)
        return np.maximum(total, 0.0)
    total = 0.0
    for v, k in zip(values, mults):
        total = total + k * np.where(v > 0, np.abs(v) ** alpha, 0.0)
    with np.errstate(divide="ignore"):
        return np.maximum(np.log2(total) / (1.0 - alpha), 0.0)


def pattern_value(p: StationaryPattern, alpha: float) -> float:
    """``H_alpha`` of the pattern's Schmidt vector."""
    return float(_entropy_terms([np.float64(p.gamma), np.float64(p.delta)], [p.n1, p.n2], alpha))


@lru_cache(maxsize=None)
def pattern_shapes(m: int) -> tuple[tuple[int, int], ...]:
    return tuple((n1, d - n1) for d in range(2, m + 1) for n1 in range(1, d))


def _enumerate(c, alpha: float, m: int):
    """Stack of candidate values, one row per (shape, branch)."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    labels, rows = [], []
    for n1, n2 in pattern_shapes(m):
        for branch, sign in (("+", 1), ("-", -1)):
            g, dl = _gamma_pair(n1, n2, c, sign)
            val = _entropy_terms([g, dl], [n1, n2], alpha)
            rows.append(np.where(np.isnan(g), np.nan, val))
            labels.append((n1, n2, branch))
    return labels, np.vstack(rows)


def enumeration_values(c, alpha: float, m: int, mode: str):
    """Vectorized ``R_L`` (mode ``min``) or ``R_U`` (mode ``max``)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    _, vals = _enumerate(c, alpha, m)
    with np.errstate(all="ignore"):
        out = np.nanmin(vals, axis=0) if mode == "min" else np.nanmax(vals, axis=0)
    return float(out[0]) if np.ndim(c) == 0 else out


def segment_index(c, m: int):
    """Smallest ``d`` in ``2..m`` with ``c <= sqrt(2(d-1)/d)``."""
    c = np.asarray(c, dtype=float)
    d = np.full(c.shape, m, dtype=int)
    for k in range(m, 1, -1):
        d = np.where(c <= max_concurrence(k) + 1e-12, k, d)
    return d


def paper_values(c, alpha: float, m: int, mode: str, segment: int | None = None):
    """Printed branch table: ``gamma^+_{1,d-1}`` or ``gamma^-_{1,d-1}`` on
    the segment ``sqrt(2(d-2)/(d-1)) < c <= sqrt(2(d-1)/d)``.

    ``segment`` forces ``d``; with ``d`` one above the natural segment this
    gives the right-hand limit at a segment boundary, where the printed
    branches are discontinuous.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not (0 < alpha < np.inf):
        raise ValueError("paper branches are defined for 0 < alpha < inf only")
    c = np.asarray(c, dtype=float)
    if abs(alpha - 2.0) < EPS_ALPHA:
        return -np.log2(1.0 - c * c / 2.0)
    d = segment_index(c, m) if segment is None else np.full(c.shape, int(segment))
    rad = 2.0 * (d - 1) * (d * (2.0 - c * c) - 2.0)
    rad = np.maximum(rad, 0.0)
    plus = (alpha > 2) == (mode == "min")
    g = (2.0 + (1 if plus else -1) * np.sqrt(rad)) / (2.0 * d)
    g = np.clip(g, 0.0, 1.0)
    rest = (1.0 - g) / (d - 1)
    return _entropy_terms([g, rest], [1, d - 1], alpha)


def named_curve(n1: int, n2: int, c, alpha: float):
    """``R_{n1 n2}(c)``: the ``gamma^+`` pattern with ``n1`` copies of
    ``gamma``; NaN outside ``max(c_{n1}, c_{n2}) <= c <= c_{n1+n2}``."""
    c = np.asarray(c, dtype=float)
    lo = max(max_concurrence(n1), max_concurrence(n2))
    hi = max_concurrence(n1 + n2)
    g, dl = _gamma_pair(n1, n2, c, +1)
    val = _entropy_terms([g, dl], [n1, n2], alpha)
    inside = (c >= lo - 1e-12) & (c <= hi + 1e-12) & ~np.isnan(g)
    return np.where(inside, val, np.nan)


def curve_values(c, alpha: float, m: int, mode: str, method: str = "enumeration"):
    check_c(c, m)
    if method == "enumeration":
        return enumeration_values(c, alpha, m, mode)
    if method == "paper":
        return paper_values(c, alpha, m, mode)
    raise ValueError(f"method must be one of {METHODS}")


def extremal_curve(
    c: float, alpha: float, m: int, mode: str = "min", method: str = "enumeration"
) -> CurvePoint:
    """``R_L(c)`` or ``R_U(c)`` with the pattern that attains it."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    check_c(c, m)
    c = float(c)
    if method == "paper":
        value = float(paper_values(c, alpha, m, mode))
        if abs(alpha - 2.0) < EPS_ALPHA:
            return CurvePoint(c, value, "alpha=2")
        d = int(segment_index(c, m))
        plus = (alpha > 2) == (mode == "min")
        g = float(np.clip((2.0 + (1 if plus else -1) * np.sqrt(max(0.0, 2.0 * (d - 1) * (d * (2.0 - c * c) - 2.0)))) / (2.0 * d), 0, 1))
        pat = StationaryPattern(1, d - 1, "+" if plus else "-", g, (1.0 - g) / (d - 1))
        return CurvePoint(c, value, pat)
    if method != "enumeration":
        raise ValueError(f"method must be one of {METHODS}")
    labels, vals = _enumerate(c, alpha, m)
    col = vals[:, 0]
    if np.all(np.isnan(col)):
        raise ValueError(f"no feasible pattern at c={c}")
    k = int(np.nanargmin(col) if mode == "min" else np.nanargmax(col))
    n1, n2, branch = labels[k]
    g, dl = _gamma_pair(n1, n2, c, 1 if branch == "+" else -1)
    return CurvePoint(c, float(col[k]), StationaryPattern(n1, n2, branch, float(g), float(dl)))


def all_patterns(c: float, m: int) -> list[StationaryPattern]:
    """Every feasible stationary pattern at ``c`` in dimension ``m``."""
    out = []
    for n1, n2 in pattern_shapes(m):
        out.extend(gamma_solutions(n1, n2, c))
    return out
