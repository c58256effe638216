"""Example states, random ensembles and random pure-state decompositions.

Randomness comes from ``numpy.random.Generator`` with the PCG64 bit
generator (``numpy.random.default_rng``).  Integer seeds map to streams
through ``numpy.random.SeedSequence``; independent workers should use
``SeedSequence(seed).spawn(k)`` rather than consecutive integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .qstate import (
    DensityMatrix,
    PureState,
    StateError,
    as_density,
    renyi_entropy,
    schmidt_vector,
)


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_seeds(seed: int, k: int) -> list[np.random.SeedSequence]:
    """``k`` independent child seeds for parallel workers."""
    return np.random.SeedSequence(seed).spawn(k)


def flip_operator(d: int) -> np.ndarray:
    """``F |a b> = |b a>`` on ``C^d (x) C^d``."""
    idx = np.arange(d * d).reshape(d, d)
    f = np.zeros((d * d, d * d))
    f[idx.T.ravel(), idx.ravel()] = 1.0
    return f


def werner(d: int, f: float) -> DensityMatrix:
    """``d (x) d`` Werner state with ``Tr(rho F) = f``."""
    if d < 2:
        raise ValueError("Werner states need d >= 2")
    if not -1.0 <= f <= 1.0:
        raise ValueError(f"f must lie in [-1, 1], got {f}")
    mat = ((d - f) * np.eye(d * d) + (d * f - 1) * flip_operator(d)) / (d**3 - d)
    return DensityMatrix(mat, (d, d))


def werner_concurrence(f: float) -> float:
    if not -1.0 <= f <= 1.0:
        raise ValueError(f"f must lie in [-1, 1], got {f}")
    return max(0.0, -f)


def example2_vector(a: float) -> np.ndarray:
    v = np.zeros(9)
    v[0] = a
    v[4] = v[8] = 1.0 / np.sqrt(3.0)
    return v / np.sqrt(a * a + 2.0 / 3.0)


def example2_state(a: float, x: float) -> DensityMatrix:
    """``(x/9) I + (1 - x)|psi><psi|`` on ``3 (x) 3`` with
    ``psi ~ (a, 0, 0, 0, 1/sqrt3, 0, 0, 0, 1/sqrt3)``."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    v = example2_vector(a)
    return DensityMatrix(x / 9.0 * np.eye(9) + (1.0 - x) * np.outer(v, v), (3, 3))


def example2_closed_forms(a: float) -> dict[str, float]:
    """Rounded closed forms for the ``x = 0.1`` family (coefficients carry
    2-4 significant digits)."""
    q = 2.0 + 3.0 * a * a
    out = {
        "C1": 2.0 * np.sqrt(6.53 + 41.46 * a**2 - 1.71 * a**4) / (3.0 * q),
        "C2": 2.0 * (5.0 + 6.9 * a**2 - 0.9 * a**4 + 9.353 * a * q) / (3.0 * q * q),
        "C3": (0.346 + 1.2 * a) / (0.667 + a * a),
        "Cbar": np.sqrt(6.0 * (6.38 + 33.72 * a**2 + 3.42 * a**4)) / (3.0 * q),
    }
    return {k: float(v) for k, v in out.items()}


def random_pure(m: int, n: int, seed=None) -> PureState:
    """Unitarily invariant random pure state."""
    rng = rng_from(seed)
    z = rng.standard_normal(m * n) + 1j * rng.standard_normal(m * n)
    return PureState.normalized(z, (m, n))


def random_density(m: int, n: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """``G G^dag / Tr(G G^dag)`` with ``G`` complex Gaussian of shape
    ``(m n, rank)``; full rank by default."""
    d = m * n
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}]")
    rng = rng_from(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)
    return DensityMatrix(w / np.trace(w).real, (m, n))


@dataclass(frozen=True)
class Decomposition:
    weights: np.ndarray
    members: tuple[PureState, ...]

    def reconstruct(self) -> np.ndarray:
        return sum(p * np.outer(s.amplitudes, s.amplitudes.conj())
                   for p, s in zip(self.weights, self.members))

    def average(self, fn) -> float:
        return float(sum(p * fn(s) for p, s in zip(self.weights, self.members)))


def _spectral(rho: DensityMatrix, tol: float = 1e-12):
    lam, vecs = np.linalg.eigh(rho.matrix)
    keep = lam > tol
    return lam[keep], vecs[:, keep]


def random_isometry(k: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``k x r`` matrix with orthonormal columns."""
    z = rng.standard_normal((k, r)) + 1j * rng.standard_normal((k, r))
    q, rr = np.linalg.qr(z)
    # fix column phases so the distribution is exactly Haar
    ph = np.diag(rr) / np.abs(np.diag(rr))
    return q * ph


def decomposition_from_isometry(rho: DensityMatrix, u: np.ndarray) -> Decomposition:
    rho = as_density(rho)
    lam, vecs = _spectral(rho)
    if u.shape[1] != lam.size:
        raise ValueError("isometry width must equal rank(rho)")
    # row i: sqrt(p_i) psi_i = sum_j U_ij sqrt(lam_j) v_j
    w = (u * np.sqrt(lam)[None, :]) @ vecs.T
    p = np.sum(np.abs(w) ** 2, axis=1)
    keep = p > 1e-15
    members = tuple(PureState(row / np.sqrt(pi), rho.dims) for row, pi in zip(w[keep], p[keep]))
    weights = p[keep] / p[keep].sum()
    return Decomposition(weights, members)


def random_decompositions(
    rho: DensityMatrix, k: int | None = None, samples: int = 2000, seed=None
) -> Iterator[Decomposition]:
    """Stream of random ``k``-member pure-state decompositions of ``rho``."""
    rho = as_density(rho)
    lam, _ = _spectral(rho)
    r = lam.size
    k = r + 2 if k is None else int(k)
    if k < r:
        raise StateError(f"k={k} is below rank(rho)={r}")
    rng = rng_from(seed)
    for _ in range(samples):
        yield decomposition_from_isometry(rho, random_isometry(k, r, rng))


def convex_roof_upper_estimate(
    rho: DensityMatrix,
    alpha: float,
    k: int | None = None,
    samples: int = 2000,
    seed=None,
    trace: list | None = None,
) -> float:
    """Smallest decomposition average of ``H_alpha`` over random samples.

    Any decomposition average is at least the convex roof, so the result is
    an upper bound on the entanglement Renyi entropy.  When ``trace`` is a
    list the running minimum after every sample is appended to it.
    """
    best = np.inf
    for dec in random_decompositions(rho, k, samples, seed):
        val = dec.average(lambda s: renyi_entropy(schmidt_vector(s), alpha))
        best = min(best, val)
        if trace is not None:
            trace.append(best)
    return float(best)
