"""Concurrence of pure states and computable brackets for mixed states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import (
    DensityMatrix,
    StateError,
    as_density,
    partial_transpose,
    purity,
    realign,
    reduced_purities,
    trace_norm,
    _mu_array,
)


def max_concurrence(m: int) -> float:
    """Largest pure-state concurrence on ``m (x) n``: ``sqrt(2(m-1)/m)``."""
    return float(np.sqrt(2.0 * (m - 1) / m))


def concurrence_pure(mu) -> float:
    p = _mu_array(mu)
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - np.sum(p**2)))))


def _separability_prefactor(m: int) -> float:
    if m < 2:
        raise StateError("concurrence bounds need m >= 2")
    return float(np.sqrt(2.0 / (m * (m - 1))))


def ppt_ccnr_terms(rho: DensityMatrix) -> dict:
    """Trace norms of the partial transpose and realignment and the two
    concurrence lower bounds built from them."""
    rho = as_density(rho)
    pre = _separability_prefactor(rho.m)
    pt = trace_norm(partial_transpose(rho))
    rl = trace_norm(realign(rho))
    return {
        "pt_norm": pt,
        "realign_norm": rl,
        "ppt": pre * max(0.0, pt - 1.0),
        "ccnr": pre * max(0.0, rl - 1.0),
    }


def ppt_ccnr_lower(rho: DensityMatrix) -> float:
    t = ppt_ccnr_terms(rho)
    return max(t["ppt"], t["ccnr"])


def purity_terms(rho: DensityMatrix) -> dict:
    rho = as_density(rho)
    p = purity(rho)
    pa, pb = reduced_purities(rho)
    # radicands can dip to -1e-16 on separable states
    return {
        "purity": p,
        "purity_A": pa,
        "purity_B": pb,
        "lower_A": float(np.sqrt(max(0.0, 2.0 * (p - pa)))),
        "lower_B": float(np.sqrt(max(0.0, 2.0 * (p - pb)))),
        "upper_A": float(np.sqrt(max(0.0, 2.0 * (1.0 - pa)))),
        "upper_B": float(np.sqrt(max(0.0, 2.0 * (1.0 - pb)))),
    }


def purity_bounds(rho: DensityMatrix) -> tuple[float, float]:
    """``(lower, upper)`` concurrence bounds from global and local purities."""
    t = purity_terms(rho)
    return max(t["lower_A"], t["lower_B"]), min(t["upper_A"], t["upper_B"])


@dataclass(frozen=True)
class ConcurrenceBracket:
    lower: float
    upper: float
    lower_source: str
    upper_source: str
    terms: dict

    @property
    def consistent(self) -> bool:
        return self.lower <= self.upper + 1e-12


def concurrence_bracket(rho: DensityMatrix) -> ConcurrenceBracket:
    """Largest available lower bound and smallest upper bound on the
    concurrence of ``rho``, with the name of the winning estimator."""
    rho = as_density(rho)
    sep = ppt_ccnr_terms(rho)
    pur = purity_terms(rho)
    # ties resolve to the first entry
    lows = [
        ("zero", 0.0),
        ("ppt", sep["ppt"]),
        ("ccnr", sep["ccnr"]),
        ("purity_A", pur["lower_A"]),
        ("purity_B", pur["lower_B"]),
    ]
    lower_source, lower = max(lows, key=lambda kv: kv[1])
    if pur["upper_A"] <= pur["upper_B"]:
        upper_source, upper = "purity_A", pur["upper_A"]
    else:
        upper_source, upper = "purity_B", pur["upper_B"]
    return ConcurrenceBracket(lower, upper, lower_source, upper_source, {**sep, **pur})


# --- two-copy observables ------------------------------------------------


def _swap_operator(m: int, n: int, which: str) -> np.ndarray:
    """Swap of the two copies of subsystem ``which`` on ``(A B) (x) (A' B')``."""
    d = m * n
    idx = np.arange(d * d).reshape(m, n, m, n)
    if which == "A":
        perm = idx.transpose(2, 1, 0, 3).ravel()
    elif which == "B":
        perm = idx.transpose(0, 3, 2, 1).ravel()
    else:
        raise StateError(f"unknown subsystem {which!r}")
    s = np.zeros((d * d, d * d))
    s[np.arange(d * d), perm] = 1.0
    return s


def two_copy_observables(m: int, n: int) -> dict[str, np.ndarray]:
    """``V1, V2, K1, K2`` on the doubled space, built from the symmetric and
    antisymmetric projectors of each doubled subsystem."""
    if m * n > 8:
        raise StateError("two-copy observables need m*n <= 8")
    eye = np.eye((m * n) ** 2)
    sa = _swap_operator(m, n, "A")
    sb = _swap_operator(m, n, "B")
    pa_minus, pa_plus = (eye - sa) / 2, (eye + sa) / 2
    pb_minus, pb_plus = (eye - sb) / 2, (eye + sb) / 2
    # factors act on disjoint tensor slots, so products equal tensor products
    return {
        "V1": 4 * (pa_minus - pa_plus) @ pb_minus,
        "V2": 4 * pa_minus @ (pb_minus - pb_plus),
        "K1": 4 * pa_minus,
        "K2": 4 * pb_minus,
    }


def two_copy_expectations(rho: DensityMatrix) -> dict[str, float]:
    rho = as_density(rho)
    obs = two_copy_observables(*rho.dims)
    rr = np.kron(rho.matrix, rho.matrix)
    return {k: float(np.trace(rr @ v).real) for k, v in obs.items()}


def two_copy_identity_check(rho: DensityMatrix) -> dict[str, float]:
    """Residuals ``|Tr(rho (x) rho X) - purity identity|`` for the four
    observables."""
    rho = as_density(rho)
    ex = two_copy_expectations(rho)
    p = purity(rho)
    pa, pb = reduced_purities(rho)
    target = {
        "V1": 2 * (p - pa),
        "V2": 2 * (p - pb),
        "K1": 2 * (1 - pa),
        "K2": 2 * (1 - pb),
    }
    return {k: abs(ex[k] - target[k]) for k in target}
