"""Companion entanglement measures and checks of their inequalities with the
entanglement Renyi entropy.

Checks report their residuals instead of raising; a residual is
``lhs - rhs`` oriented so that a passing check has ``residual >= -tol``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qstate import (
    DensityMatrix,
    SchmidtVector,
    as_density,
    partial_transpose,
    renyi_entropy,
    schmidt_vector,
    trace_norm,
    _mu_array,
)
from .states import Decomposition

CHECK_TOL = 1e-9


@dataclass(frozen=True)
class MeasureValue:
    measure: str
    value: float
    alpha: float | None = None


@dataclass(frozen=True)
class InequalityResult:
    name: str
    lhs: float
    rhs: float
    passed: bool
    extra: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs


def _ge(name, lhs, rhs, tol=CHECK_TOL, **extra) -> InequalityResult:
    return InequalityResult(name, float(lhs), float(rhs), bool(lhs >= rhs - tol), extra)


def eof_pure(mu) -> float:
    return renyi_entropy(mu, 1.0)


def gm_pure(mu) -> float:
    """``-log`` of the largest squared Schmidt coefficient."""
    p = _mu_array(mu)
    return float(-np.log2(p.max()))


def g_concurrence_pure(mu) -> float:
    """``m`` times the geometric mean of all ``m`` coefficients."""
    p = _mu_array(mu)
    if np.any(p <= 0):
        return 0.0
    return float(p.size * np.exp(np.mean(np.log(p))))


def log_negativity(rho: DensityMatrix) -> float:
    return float(max(0.0, np.log2(trace_norm(partial_transpose(as_density(rho))))))


# --- inequality checks ----------------------------------------------------


def alpha_monotonicity_check(mu, alphas) -> InequalityResult:
    """``H_alpha`` must not increase along the sorted ``alphas``; the Shannon
    entropy sits between the ``alpha <= 1`` and ``alpha >= 1`` values."""
    alphas = [float(a) for a in alphas]
    if alphas != sorted(alphas):
        raise ValueError("alphas must be sorted")
    vals = [renyi_entropy(mu, a) for a in alphas]
    drops = [vals[i] - vals[i + 1] for i in range(len(vals) - 1)]
    ef = eof_pure(mu)
    below = [v for a, v in zip(alphas, vals) if a <= 1]
    above = [v for a, v in zip(alphas, vals) if a >= 1]
    sandwich = (not below or min(below) >= ef - CHECK_TOL) and (
        not above or max(above) <= ef + CHECK_TOL
    )
    worst = min(drops) if drops else 0.0
    return InequalityResult(
        "alpha_monotonicity", worst, 0.0,
        bool(worst >= -CHECK_TOL and sandwich),
        {"values": vals, "eof": ef},
    )


def _members(state) -> tuple[np.ndarray, list[np.ndarray]]:
    """Weights and Schmidt vectors for a Schmidt vector, pure state or
    decomposition."""
    if isinstance(state, Decomposition):
        return np.asarray(state.weights), [schmidt_vector(s).mu for s in state.members]
    if isinstance(state, SchmidtVector):
        return np.array([1.0]), [state.mu]
    if hasattr(state, "amplitudes"):
        return np.array([1.0]), [schmidt_vector(state).mu]
    return np.array([1.0]), [np.sort(np.asarray(state, dtype=float))[::-1]]


def gm_lemma_check(state, alpha: float, d: int | None = None) -> dict[str, InequalityResult]:
    """Geometric-measure inequalities in two readings.

    ``squared`` uses ``-sum p_i log mu_{i,1}^2``, the quantity the proof
    manipulates; ``definitional`` uses ``-sum p_i log mu_{i,1}``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    w, mus = _members(state)
    d = max(len(mu) for mu in mus) if d is None else d
    e_avg = float(sum(p * renyi_entropy(mu, alpha) for p, mu in zip(w, mus)))
    g_def = float(-sum(p * np.log2(mu[0]) for p, mu in zip(w, mus)))
    out = {}
    for variant, g in (("squared", 2.0 * g_def), ("definitional", g_def)):
        if alpha > 1 + 1e-12:
            r = _ge(f"gm_{variant}", alpha / (2 * (alpha - 1)) * g, e_avg)
        elif abs(alpha - 1) <= 1e-12:
            # at alpha = 1 the proof compares the entropy with -log mu_1
            r = _ge(f"gm_{variant}", e_avg, g_def if variant == "squared" else g)
        else:
            r = _ge(f"gm_{variant}", np.log2(d) / (1 - alpha),
                    e_avg + alpha / (2 * (1 - alpha)) * g)
        out[variant] = r
    return out


def ln_inequality_check(
    rho: DensityMatrix,
    alpha: float,
    n: int,
    decomposition: Decomposition | None = None,
    roof_estimate: float | None = None,
) -> dict[str, InequalityResult]:
    """``n LN(rho)`` against the decomposition average of ``E_alpha`` and
    against a convex-roof upper estimate.

    The window ``1/2 <= alpha <= (2n-1)/(2n)`` is enforced.  For a pure
    ``rho`` without an explicit decomposition the state itself is used.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not (0.5 - 1e-12 <= alpha <= (2 * n - 1) / (2 * n) + 1e-12):
        raise ValueError(f"alpha={alpha} outside [1/2, {(2 * n - 1) / (2 * n)}] for n={n}")
    rho = as_density(rho)
    lhs = n * log_negativity(rho)
    out = {}
    if decomposition is not None:
        avg = decomposition.average(lambda s: renyi_entropy(schmidt_vector(s), alpha))
        out["decomposition"] = _ge("ln_vs_decomposition", lhs, avg)
        # member-wise form: n sum p_i LN(psi_i) >= sum p_i E_alpha(psi_i)
        member = decomposition.average(lambda s: n * log_negativity(s.density()))
        out["members"] = _ge("ln_members", member, avg)
    if roof_estimate is not None:
        out["roof"] = _ge("ln_vs_roof_estimate", lhs, roof_estimate)
    if not out:
        ev = np.linalg.eigvalsh(rho.matrix)
        if ev[-1] < 1 - 1e-9:
            raise ValueError("mixed rho needs a decomposition or a roof estimate")
        vec = np.linalg.eigh(rho.matrix)[1][:, -1]
        from .qstate import PureState

        mu = schmidt_vector(PureState.normalized(vec, rho.dims))
        out["pure"] = _ge("ln_pure", lhs, renyi_entropy(mu, alpha))
    return out


def gconc_inequality_check(mu, alpha: float) -> InequalityResult:
    """``E_alpha`` against ``alpha/(1-alpha) log G + log d``: at most for
    ``alpha > 1``, at least for ``0 < alpha < 1``."""
    if alpha <= 0 or abs(alpha - 1.0) < 1e-12:
        raise ValueError("alpha must be positive and different from 1")
    p = _mu_array(mu)
    d = p.size
    e = renyi_entropy(p, alpha)
    g = g_concurrence_pure(p)
    if g == 0.0:
        # log G = -inf: the bound is +inf for alpha > 1 and -inf for alpha < 1
        rhs = np.inf if alpha > 1 else -np.inf
    else:
        rhs = alpha / (1 - alpha) * np.log2(g) + np.log2(d)
    if alpha > 1:
        return InequalityResult("gconc", float(rhs), e, bool(rhs >= e - CHECK_TOL), {"G": g})
    return InequalityResult("gconc", e, float(rhs), bool(e >= rhs - CHECK_TOL), {"G": g})
