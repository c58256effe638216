"""Brute-force extremization of ``H_alpha`` on the fixed-concurrence slice of
the probability simplex.

The feasible set ``{mu >= 0, sum mu = 1, sum mu^2 = s}`` is a sphere of radius
``sqrt(s - 1/k)`` around the uniform point intersected with the simplex.  The
search covers the relative interior by dense parametrization plus a local
polish and recurses into the faces (one fewer nonzero entry).  Nothing here
uses the stationary-point formulas, so it can serve as an independent check
on :mod:`renyibounds.curves`.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .concurrence import max_concurrence
from .qstate import EPS_ALPHA

CIRCLE_SAMPLES = 100_000
OUTER_SAMPLES = 600
INNER_SAMPLES = 600
POLISH_STARTS = 3
_PENALTY = 1e6


def _entropy_rows(mu: np.ndarray, alpha: float) -> np.ndarray:
    """``H_alpha`` of each row of ``mu``; rows may be unnormalized by
    rounding, negative entries are clipped."""
    mu = np.clip(mu, 0.0, None)
    if abs(alpha - 1.0) < EPS_ALPHA:
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(mu > 0, mu * np.log2(np.where(mu > 0, mu, 1.0)), 0.0)
        return -t.sum(axis=-1)
    with np.errstate(divide="ignore"):
        return np.log2(np.sum(np.where(mu > 0, mu**alpha, 0.0), axis=-1)) / (1.0 - alpha)


def _entropy_scalar(p, alpha: float) -> float:
    if abs(alpha - 1.0) < EPS_ALPHA:
        return -sum(x * math.log2(x) for x in p if x > 0)
    return math.log2(sum(x**alpha for x in p if x > 0)) / (1.0 - alpha)


def _plane_basis(k: int) -> np.ndarray:
    """Orthonormal basis (rows) of ``{x in R^k : sum x = 0}``."""
    q, _ = np.linalg.qr(np.vstack([np.ones(k), np.eye(k)[:-1]]).T)
    return q[:, 1:].T


_B3 = _plane_basis(3)
_B4 = _plane_basis(4)


def _circle_points(total, sumsq, theta):
    """Points of ``{x in R^3: sum x = total, sum x^2 = sumsq}`` at angles
    ``theta``; ``total``/``sumsq`` broadcast against ``theta``."""
    r = np.sqrt(np.maximum(sumsq - total**2 / 3.0, 0.0))
    ct, st = np.cos(theta), np.sin(theta)
    return (total / 3.0)[..., None] + r[..., None] * (
        ct[..., None] * _B3[0] + st[..., None] * _B3[1]
    )


def _sign(mode: str) -> float:
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    return 1.0 if mode == "min" else -1.0


def _best(values: list[float], mode: str) -> float:
    values = [v for v in values if v is not None and np.isfinite(v)]
    return min(values) if mode == "min" else max(values)


def _oracle_2(c: float, alpha: float) -> float:
    s = 1.0 - c * c / 2.0
    t = np.sqrt(max(2.0 * s - 1.0, 0.0))
    mu = np.array([[(1 + t) / 2, (1 - t) / 2]])
    return float(_entropy_rows(mu, alpha)[0])


def _oracle_3(c: float, alpha: float, mode: str) -> float:
    sgn = _sign(mode)
    s = 1.0 - c * c / 2.0
    total, sumsq = np.array(1.0), np.array(s)
    theta = np.linspace(0.0, 2.0 * np.pi, CIRCLE_SAMPLES, endpoint=False)
    pts = _circle_points(total, sumsq, theta)
    feas = np.all(pts >= 0.0, axis=1)
    candidates = []
    if c <= 1.0 + 1e-15:
        candidates.append(_oracle_2(min(c, 1.0), alpha))
    if np.any(feas):
        vals = np.where(feas, _entropy_rows(pts, alpha), np.inf * sgn)
        i = int(np.argmin(sgn * vals))

        def f(th):
            p = _circle_points(total, sumsq, np.array([th]))[0]
            if np.any(p < 0):
                return _PENALTY
            return sgn * float(_entropy_rows(p[None], alpha)[0])

        step = 2.0 * np.pi / CIRCLE_SAMPLES
        res = minimize_scalar(
            f, bounds=(theta[i] - step, theta[i] + step), method="bounded",
            options={"xatol": 1e-13},
        )
        candidates.append(vals[i])
        if res.fun < _PENALTY:
            candidates.append(sgn * res.fun)
    return _best(candidates, mode)


def _sphere4_point(t, th, s):
    """Point with last entry ``t`` and the other three on their circle."""
    rest_total = 1.0 - t
    rest_sq = s - t * t
    p3 = _circle_points(np.asarray(rest_total), np.asarray(rest_sq), np.asarray(th))
    return np.concatenate([p3, np.broadcast_to(np.asarray(t)[..., None], p3.shape[:-1] + (1,))], axis=-1)


@lru_cache(maxsize=4)
def _sphere4_grid(c: float):
    """Feasible grid on the m=4 slice, shared across alpha and mode."""
    s = 1.0 - c * c / 2.0
    # the remaining circle is real iff 4 t^2 - 2 t + (1 - 3 s) <= 0
    disc = 4.0 - 16.0 * (1.0 - 3.0 * s)
    if disc < 0:
        return None
    t_lo = max(0.0, (2.0 - np.sqrt(disc)) / 8.0)
    t_hi = min(1.0, (2.0 + np.sqrt(disc)) / 8.0)
    ts = np.linspace(t_lo, t_hi, OUTER_SAMPLES)
    th = np.linspace(0.0, 2.0 * np.pi, INNER_SAMPLES, endpoint=False)
    pts = _sphere4_point(ts[:, None], th[None, :], s)
    feas = np.all(pts >= 0.0, axis=-1)
    if not np.any(feas):
        return None
    return s, t_lo, t_hi, ts, th, pts[feas], np.argwhere(feas)


def _oracle_4(c: float, alpha: float, mode: str) -> float:
    sgn = _sign(mode)
    candidates = []
    if c <= max_concurrence(3) + 1e-15:
        candidates.append(_oracle_3(min(c, max_concurrence(3)), alpha, mode))
    grid = _sphere4_grid(c)
    if grid is None:
        return _best(candidates, mode)
    s, t_lo, t_hi, ts, th, pts, where = grid
    vals = _entropy_rows(pts, alpha)
    k = min(POLISH_STARTS, vals.size)
    top = np.argpartition(sgn * vals, k - 1)[:k]

    b0, b1 = _B3[0].tolist(), _B3[1].tolist()

    def f(x):
        t, th_ = float(x[0]), float(x[1])
        if t < t_lo or t > t_hi:
            return _PENALTY
        rest = 1.0 - t
        r2 = s - t * t - rest * rest / 3.0
        r = math.sqrt(r2) if r2 > 0 else 0.0
        ct, st = math.cos(th_), math.sin(th_)
        p = [rest / 3.0 + r * (ct * b0[i] + st * b1[i]) for i in range(3)] + [t]
        if min(p) < 0:
            return _PENALTY
        return sgn * _entropy_scalar(p, alpha)

    dt = (t_hi - t_lo) / OUTER_SAMPLES
    dth = 2 * np.pi / INNER_SAMPLES
    for idx in top:
        a, b = where[idx]
        candidates.append(float(vals[idx]))
        x0 = np.array([ts[a], th[b]])
        res = minimize(
            f, x0, method="Nelder-Mead",
            options={"xatol": 1e-11, "fatol": 1e-14, "maxiter": 800,
                     "initial_simplex": np.array([x0, x0 + [dt, 0.0], x0 + [0.0, dth]])},
        )
        if res.fun < _PENALTY:
            candidates.append(sgn * float(res.fun))
    return _best(candidates, mode)


def simplex_oracle(c: float, alpha: float, m: int, mode: str = "min") -> float:
    """Extremal ``H_alpha`` over Schmidt vectors of length ``m`` with
    concurrence ``c``, found by direct search (``m <= 4``)."""
    if alpha < 0 or np.isinf(alpha):
        raise ValueError("oracle supports finite nonnegative alpha")
    cmax = max_concurrence(m)
    if c < 0 or c > cmax + 1e-12:
        raise ValueError(f"infeasible: c={c} outside [0, {cmax:.6g}]")
    c = min(float(c), cmax)
    _sign(mode)
    if m == 2:
        return _oracle_2(c, alpha)
    if m == 3:
        return _oracle_3(c, alpha, mode)
    if m == 4:
        return _oracle_4(c, alpha, mode)
    raise ValueError("simplex_oracle supports 2 <= m <= 4")
