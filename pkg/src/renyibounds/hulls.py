"""Convex and concave hulls of the extremal curves, and the final bounds.

``co`` is the largest convex function below ``R_L`` and ``ca`` the smallest
concave function above ``R_U`` on ``[0, c_max]``.  Both are built from a dense
sample of the curve with a monotone chain, then every chord that ends on a
smooth stretch of the curve is moved onto the exact tangency point.

A :class:`HullCache` is an ordinary mutable mapping; share one between
threads only with external locking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .concurrence import ConcurrenceBracket, concurrence_bracket, max_concurrence
from .curves import curve_values, paper_values
from .qstate import DensityMatrix, as_density

DEFAULT_GRID = 10_000
MIN_GRID = 1_000
DERIV_STEP = 1e-6
TANGENT_XTOL = 1e-12
KINDS = ("co", "ca")


class HullError(RuntimeError):
    pass


class TangencyError(HullError):
    pass


def kink_points(m: int) -> np.ndarray:
    """Concurrences where the support of the extremal Schmidt vector can
    change: ``0`` and ``sqrt(2(d-1)/d)`` for ``d = 2..m``."""
    return np.array([0.0] + [max_concurrence(d) for d in range(2, m + 1)])


def monotone_chain(x, y, lower: bool = True, rel_tol: float = 1e-14) -> list[int]:
    """Indices of the lower (or upper) hull of points sorted by ``x``.

    Points within ``rel_tol`` of collinear are dropped.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.diff(x) < 0):
        raise ValueError("x must be sorted")
    scale = rel_tol * max(1.0, float(np.ptp(x)) * max(1.0, float(np.ptp(y))))
    sgn = 1.0 if lower else -1.0
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if sgn * cross <= scale * (x[i] - x[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _derivative(curve: Callable[[float], float], c: float, h: float = DERIV_STEP) -> float:
    return (curve(c + h) - curve(c - h)) / (2.0 * h)


def tangent_from_point(
    curve: Callable[[float], float],
    anchor: tuple[float, float],
    lo: float,
    hi: float,
    scan: int = 400,
    h: float = DERIV_STEP,
) -> tuple[float, float]:
    """Line through ``anchor`` tangent to ``curve`` somewhere in ``[lo, hi]``.

    Solves ``curve'(c) (c - c0) = curve(c) - v0`` by bisection.  When the scan
    finds several roots the one farthest from the anchor is returned.

    Returns
    -------
    (slope, c_star)

    Raises
    ------
    TangencyError
        If no root exists in the interval or the curve is locally linear
        (every point is a tangency).
    """
    c0, v0 = anchor
    if not lo < hi:
        raise TangencyError("empty search interval")

    def g(c):
        return _derivative(curve, c, h) * (c - c0) - (curve(c) - v0)

    cs = np.linspace(lo, hi, scan)
    gs = np.array([g(c) for c in cs])
    size = max(1.0, float(np.max(np.abs([curve(c) - v0 for c in cs[:: max(1, scan // 20)]]))))
    if np.all(np.abs(gs) < 1e-10 * size):
        raise TangencyError("degenerate tangency: curve is linear on the interval")
    roots = []
    for i in range(scan - 1):
        if gs[i] == 0.0:
            roots.append((cs[i], cs[i]))
        elif gs[i] * gs[i + 1] < 0:
            roots.append((cs[i], cs[i + 1]))
    if gs[-1] == 0.0:
        roots.append((cs[-1], cs[-1]))
    if not roots:
        raise TangencyError(f"no tangency from {anchor} in [{lo}, {hi}]")
    a, b = max(roots, key=lambda r: abs(0.5 * (r[0] + r[1]) - c0))
    ga = g(a)
    while b - a > TANGENT_XTOL:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            a = b = mid
            break
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    c_star = 0.5 * (a + b)
    slope = (curve(c_star) - v0) / (c_star - c0)
    return float(slope), float(c_star)


@dataclass(frozen=True)
class Chord:
    start: tuple[float, float]
    end: tuple[float, float]
    slope: float
    refined: bool


@dataclass
class HullFunction:
    """Piecewise hull: ``breakpoints[i] .. breakpoints[i+1]`` is either the
    underlying curve (``"analytic"``) or a straight ``"chord"``."""

    kind: str
    alpha: float
    m: int
    method: str
    breakpoints: list[tuple[float, float]]
    segments: list[str]
    curve: Callable = field(repr=False)
    tangents: list[tuple[float, float]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def c_max(self) -> float:
        return self.breakpoints[-1][0]

    def chords(self) -> list[Chord]:
        out = []
        for i, seg in enumerate(self.segments):
            if seg != "chord":
                continue
            (c0, v0), (c1, v1) = self.breakpoints[i], self.breakpoints[i + 1]
            refined = any(abs(c - t) < 1e-15 for _, t in self.tangents for c in (c0, c1))
            out.append(Chord((c0, v0), (c1, v1), (v1 - v0) / (c1 - c0), refined))
        return out

    def vertices(self) -> list[tuple[float, float]]:
        """Breakpoints adjacent to at least one chord."""
        keep = set()
        for i, seg in enumerate(self.segments):
            if seg == "chord":
                keep.update((i, i + 1))
        return [self.breakpoints[i] for i in sorted(keep)]

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        scalar = c.ndim == 0
        c = np.atleast_1d(c)
        cmax = self.c_max
        if np.any(c < -1e-12) or np.any(c > cmax + 1e-9):
            raise ValueError(f"concurrence outside [0, {cmax:.6g}]")
        c = np.clip(c, 0.0, cmax)
        bc = np.array([b[0] for b in self.breakpoints])
        bv = np.array([b[1] for b in self.breakpoints])
        seg = np.clip(np.searchsorted(bc, c, side="right") - 1, 0, len(self.segments) - 1)
        out = np.empty_like(c)
        kinds = np.array(self.segments)[seg]
        chord = kinds == "chord"
        if np.any(chord):
            i = seg[chord]
            t = (c[chord] - bc[i]) / (bc[i + 1] - bc[i])
            out[chord] = bv[i] + t * (bv[i + 1] - bv[i])
        if np.any(~chord):
            out[~chord] = self.curve(c[~chord])
        # breakpoint values win at the joints (one-sided limits of jumps)
        hit = np.abs(c[:, None] - bc[None, :]) < 1e-15
        rows, cols = np.nonzero(hit)
        out[rows] = bv[cols]
        return float(out[0]) if scalar else out


def hull_of_curve(
    curve: Callable,
    kind: str,
    c_max: float,
    kinks,
    grid_size: int = DEFAULT_GRID,
    limits: dict[float, float] | None = None,
) -> tuple[list, list, list, list]:
    """Hull construction for an arbitrary vectorized ``curve`` on
    ``[0, c_max]``.  Returns ``(breakpoints, segments, tangents, warnings)``.

    ``limits`` maps kink locations to one-sided limits of a curve that jumps
    there; the hull then uses the lower (``co``) or upper (``ca``)
    semicontinuous envelope at that point.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be at least {MIN_GRID}")
    kinks = np.asarray(sorted(set(float(k) for k in kinks if 0.0 <= k <= c_max) | {0.0, c_max}))
    xs = np.union1d(np.linspace(0.0, c_max, grid_size), kinks)
    ys = np.asarray(curve(xs), dtype=float)
    for kc, kv in (limits or {}).items():
        i = int(np.argmin(np.abs(xs - kc)))
        ys[i] = min(ys[i], kv) if kind == "co" else max(ys[i], kv)
    if np.any(~np.isfinite(ys)):
        raise HullError("curve is not finite on the sampling grid")
    verts = monotone_chain(xs, ys, lower=(kind == "co"))
    step = c_max / (grid_size - 1)

    # a one-cell edge is still a chord when the curve bulges past it
    va, vb = np.asarray(verts[:-1]), np.asarray(verts[1:])
    mids = np.asarray(curve(0.5 * (xs[va] + xs[vb])), dtype=float)
    gap = (1.0 if kind == "co" else -1.0) * (mids - 0.5 * (ys[va] + ys[vb]))
    bulge = gap > 1e-9 * np.maximum(1.0, np.abs(ys[vb]))
    edges = ["chord" if (b - a > 2 or g) else "analytic" for a, b, g in zip(va, vb, bulge)]
    bidx = [verts[0]]
    segments = []
    for j, e in enumerate(edges):
        last = j == len(edges) - 1
        if e == "chord" or last or edges[j + 1] != e:
            bidx.append(verts[j + 1])
            segments.append(e)
    breakpoints = [(float(xs[i]), float(ys[i])) for i in bidx]

    def scalar_curve(c):
        return float(np.asarray(curve(np.array([c])), dtype=float)[0])

    def is_kink(c):
        return np.any(np.abs(kinks - c) < 1e-14)

    def smooth_bracket(c):
        lo, hi = c - 3 * step, c + 3 * step
        left = kinks[kinks < c - 1e-14]
        right = kinks[kinks > c + 1e-14]
        margin = 4 * DERIV_STEP
        if left.size:
            lo = max(lo, left[-1] + margin)
        if right.size:
            hi = min(hi, right[0] - margin)
        return max(lo, margin), min(hi, c_max - margin)

    tangents: list[tuple[float, float]] = []
    warnings: list[str] = []
    for s, seg in enumerate(segments):
        if seg != "chord":
            continue
        left_t = s > 0 and segments[s - 1] == "analytic" and not is_kink(breakpoints[s][0])
        right_t = (
            s + 1 < len(segments)
            and segments[s + 1] == "analytic"
            and not is_kink(breakpoints[s + 1][0])
        )
        if not (left_t or right_t):
            continue
        brk_l = smooth_bracket(breakpoints[s][0]) if left_t else None
        brk_r = smooth_bracket(breakpoints[s + 1][0]) if right_t else None
        p, q = breakpoints[s], breakpoints[s + 1]
        try:
            for _ in range(100):
                moved = 0.0
                if left_t:
                    _, c_new = tangent_from_point(scalar_curve, q, *brk_l, scan=16)
                    moved = max(moved, abs(c_new - p[0]))
                    p = (c_new, scalar_curve(c_new))
                if right_t:
                    _, c_new = tangent_from_point(scalar_curve, p, *brk_r, scan=16)
                    moved = max(moved, abs(c_new - q[0]))
                    q = (c_new, scalar_curve(c_new))
                if moved < 1e-11 or not (left_t and right_t):
                    break
        except TangencyError as exc:
            warnings.append(f"chord {s} left unrefined: {exc}")
            continue
        breakpoints[s], breakpoints[s + 1] = p, q
        slope = (q[1] - p[1]) / (q[0] - p[0])
        if left_t:
            tangents.append((slope, p[0]))
        if right_t:
            tangents.append((slope, q[0]))
    return breakpoints, segments, tangents, warnings


def build_hull(
    kind: str,
    alpha: float,
    m: int,
    method: str = "enumeration",
    grid_size: int = DEFAULT_GRID,
) -> HullFunction:
    """``co(R_L)`` for ``kind="co"`` or ``ca(R_U)`` for ``kind="ca"``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if m < 2:
        raise ValueError("hulls need m >= 2")
    mode = "min" if kind == "co" else "max"
    c_max = max_concurrence(m)

    def curve(c):
        return curve_values(np.clip(c, 0.0, c_max), alpha, m, mode, method)

    limits = None
    if method == "paper":
        limits = {
            max_concurrence(d): float(paper_values(max_concurrence(d), alpha, m, mode, segment=d + 1))
            for d in range(2, m)
        }
    bps, segs, tans, warns = hull_of_curve(curve, kind, c_max, kink_points(m), grid_size, limits)
    return HullFunction(kind, float(alpha), m, method, bps, segs, curve, tans, warns)


class HullCache(dict):
    """Hulls keyed by ``(kind, alpha, m, method, grid_size)``."""

    @staticmethod
    def key(kind, alpha, m, method, grid_size):
        return (kind, round(float(alpha) / 1e-12), int(m), method, int(grid_size))

    def get_hull(self, kind, alpha, m, method="enumeration", grid_size=DEFAULT_GRID) -> HullFunction:
        k = self.key(kind, alpha, m, method, grid_size)
        if k not in self:
            self[k] = build_hull(kind, alpha, m, method, grid_size)
        return self[k]


def _hull(cache, kind, alpha, m, method, grid_size):
    if cache is None:
        return build_hull(kind, alpha, m, method, grid_size)
    return cache.get_hull(kind, alpha, m, method, grid_size)


def bounds_from_concurrence(
    c_low: float,
    c_up: float,
    alpha: float,
    m: int,
    method: str = "enumeration",
    grid_size: int = DEFAULT_GRID,
    cache: HullCache | None = None,
) -> tuple[float, float]:
    """``(co(R_L)(c_low), ca(R_U)(c_up))``, clamped to ``[0, log m]``."""
    c_max = max_concurrence(m)
    if not (0.0 <= c_low <= c_up + 1e-12) or c_up > c_max + 1e-9:
        raise ValueError(f"need 0 <= c_low <= c_up <= {c_max:.6g}")
    c_up = min(c_up, c_max)
    c_low = min(c_low, c_up)
    lo = _hull(cache, "co", alpha, m, method, grid_size)(c_low)
    hi = _hull(cache, "ca", alpha, m, method, grid_size)(c_up)
    cap = float(np.log2(m))
    return min(max(lo, 0.0), cap), min(max(hi, 0.0), cap)


@dataclass(frozen=True)
class BoundsReport:
    alpha: float
    dims: tuple[int, int]
    bracket: ConcurrenceBracket
    e_low: float
    e_up: float
    method: str


def evaluate_bounds(
    rho: DensityMatrix,
    alpha: float,
    method: str = "enumeration",
    grid_size: int = DEFAULT_GRID,
    cache: HullCache | None = None,
) -> BoundsReport:
    """Lower and upper bounds on the entanglement Renyi entropy of ``rho``."""
    rho = as_density(rho)
    if rho.m < 2:
        raise ValueError("bounds need m >= 2")
    br = concurrence_bracket(rho)
    c_max = max_concurrence(rho.m)
    c_up = min(br.upper, c_max)
    c_low = min(br.lower, c_max)
    lo = _hull(cache, "co", alpha, rho.m, method, grid_size)(c_low)
    hi = _hull(cache, "ca", alpha, rho.m, method, grid_size)(c_up)
    cap = float(np.log2(rho.m))
    return BoundsReport(
        float(alpha), tuple(rho.dims), br,
        min(max(lo, 0.0), cap), min(max(hi, 0.0), cap), method,
    )
