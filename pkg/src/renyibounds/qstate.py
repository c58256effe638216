"""Dense linear algebra on bipartite Hilbert spaces.

States live on ``C^m (x) C^n`` with ``m <= n``; the composite basis index is
``i * n + j`` (row major, subsystem A first).  Entropies are in bits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-9
EPS_ALPHA = 1e-6


class StateError(ValueError):
    """Raised for malformed states: shape mismatches, bad norms, bad tags."""


class NumericalError(RuntimeError):
    """Raised when a dense decomposition fails to converge."""


@dataclass(frozen=True)
class Tolerances:
    herm: float = TOL_HERM
    trace: float = TOL_TRACE
    psd: float = TOL_PSD


class BipartiteDims(NamedTuple):
    m: int
    n: int

    @property
    def total(self) -> int:
        return self.m * self.n


def _check_dims(dims) -> BipartiteDims:
    m, n = (int(x) for x in dims)
    if m < 1 or n < 1:
        raise StateError(f"subsystem dimensions must be positive, got {dims}")
    return BipartiteDims(m, n)


def _swap_subsystems_matrix(mat: np.ndarray, m: int, n: int) -> np.ndarray:
    t = mat.reshape(m, n, m, n).transpose(1, 0, 3, 2)
    return t.reshape(m * n, m * n)


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator with declared bipartite dimensions.

    If ``m > n`` the two factors are swapped on construction so that the
    smaller subsystem is always A.  No positivity check is done here; see
    :func:`validate_density`.
    """

    matrix: np.ndarray
    dims: BipartiteDims
    relabeled: bool = field(default=False, compare=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (dims.total, dims.total):
            raise StateError(
                f"matrix shape {mat.shape} does not match dims {tuple(dims)}"
            )
        relabeled = self.relabeled
        if dims.m > dims.n:
            mat = _swap_subsystems_matrix(mat, dims.m, dims.n)
            dims = BipartiteDims(dims.n, dims.m)
            relabeled = True
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "relabeled", relabeled)

    @property
    def m(self) -> int:
        return self.dims.m

    @property
    def n(self) -> int:
        return self.dims.n


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    dims: BipartiteDims

    def __post_init__(self):
        dims = _check_dims(self.dims)
        vec = np.array(self.amplitudes, dtype=complex).ravel()
        if vec.size != dims.total:
            raise StateError(
                f"{vec.size} amplitudes do not match dims {tuple(dims)}"
            )
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > TOL_TRACE:
            raise StateError(f"pure state has norm {norm!r}, expected 1")
        if dims.m > dims.n:
            vec = vec.reshape(dims.m, dims.n).T.ravel()
            dims = BipartiteDims(dims.n, dims.m)
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims) -> "PureState":
        vec = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(vec / np.linalg.norm(vec), dims)

    def density(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix(np.outer(v, v.conj()), self.dims)


@dataclass(frozen=True)
class SchmidtVector:
    """Squared Schmidt coefficients, sorted nonincreasing."""

    mu: np.ndarray

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).ravel()
        if mu.size == 0:
            raise StateError("empty Schmidt vector")
        if np.any(mu < -TOL_PSD) or np.any(mu > 1 + TOL_TRACE):
            raise StateError("Schmidt coefficients must lie in [0, 1]")
        if abs(mu.sum() - 1.0) > TOL_TRACE:
            raise StateError(f"Schmidt coefficients sum to {mu.sum()!r}")
        mu = np.sort(np.clip(mu, 0.0, 1.0))[::-1].copy()
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    def __len__(self):
        return self.mu.size


class ValidationReport(NamedTuple):
    herm_residual: float
    min_eigenvalue: float
    trace_residual: float

    def ok(self, tol: Tolerances = Tolerances()) -> bool:
        return (
            self.herm_residual <= tol.herm
            and self.min_eigenvalue >= -tol.psd
            and self.trace_residual <= tol.trace
        )

    def failures(self, tol: Tolerances = Tolerances()) -> list[str]:
        out = []
        if self.herm_residual > tol.herm:
            out.append(f"hermiticity residual {self.herm_residual:.3e} > {tol.herm:.1e}")
        if self.min_eigenvalue < -tol.psd:
            out.append(f"min eigenvalue {self.min_eigenvalue:.3e} < -{tol.psd:.1e}")
        if self.trace_residual > tol.trace:
            out.append(f"trace residual {self.trace_residual:.3e} > {tol.trace:.1e}")
        return out


def as_density(rho, dims=None) -> DensityMatrix:
    """Coerce ``rho`` (a :class:`DensityMatrix`, :class:`PureState` or array)."""
    if isinstance(rho, DensityMatrix):
        return rho
    if isinstance(rho, PureState):
        return rho.density()
    if dims is None:
        raise StateError("dims are required for a bare matrix")
    return DensityMatrix(rho, dims)


def validate_density(rho: DensityMatrix) -> ValidationReport:
    """Residuals of the three density-matrix conditions.

    Acceptance is left to the caller (``report.ok(tolerances)``).
    """
    rho = as_density(rho)
    a = rho.matrix
    herm = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    h = 0.5 * (a + a.conj().T)
    try:
        evals = np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigensolver failed") from exc
    return ValidationReport(herm, float(evals.min()), float(abs(np.trace(a).real - 1.0)))


def partial_trace(rho: DensityMatrix, subsystem: str = "B") -> np.ndarray:
    """Reduced density matrix after tracing out ``subsystem`` ("A" or "B")."""
    rho = as_density(rho)
    m, n = rho.dims
    t = rho.matrix.reshape(m, n, m, n)
    if subsystem == "B":
        return np.einsum("ijkj->ik", t)
    if subsystem == "A":
        return np.einsum("ijil->jl", t)
    raise StateError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transpose on the indices of subsystem A."""
    rho = as_density(rho)
    m, n = rho.dims
    return rho.matrix.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n)


def realign(rho: DensityMatrix) -> np.ndarray:
    """Realignment ``R[(i,j),(k,l)] = rho[(i,k),(j,l)]``, shape ``(m^2, n^2)``."""
    rho = as_density(rho)
    m, n = rho.dims
    return rho.matrix.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def trace_norm(mat) -> float:
    """Sum of singular values."""
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    try:
        return float(np.linalg.svd(mat, compute_uv=False).sum())
    except np.linalg.LinAlgError as exc:
        raise NumericalError("SVD did not converge") from exc


def purity(rho: DensityMatrix) -> float:
    rho = as_density(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho.matrix) ** 2))


def reduced_purities(rho: DensityMatrix) -> tuple[float, float]:
    """``(Tr rho_A^2, Tr rho_B^2)``."""
    rho = as_density(rho)
    ra = partial_trace(rho, "B")
    rb = partial_trace(rho, "A")
    return float(np.sum(np.abs(ra) ** 2)), float(np.sum(np.abs(rb) ** 2))


def schmidt_vector(psi: PureState) -> SchmidtVector:
    """Eigenvalues of the reduced state on A, sorted, length ``m``."""
    if not isinstance(psi, PureState):
        raise StateError("schmidt_vector expects a PureState")
    m, n = psi.dims
    try:
        s = np.linalg.svd(psi.amplitudes.reshape(m, n), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("SVD did not converge") from exc
    mu = np.zeros(m)
    mu[: s.size] = s[:m] ** 2
    return SchmidtVector(mu / mu.sum())


def _mu_array(mu) -> np.ndarray:
    if isinstance(mu, SchmidtVector):
        return mu.mu
    return np.asarray(mu, dtype=float)


def renyi_entropy(mu, alpha: float) -> float:
    """Renyi-``alpha`` entropy of a probability vector, in bits.

    ``alpha`` within ``EPS_ALPHA`` of 1 gives the Shannon entropy; ``alpha=0``
    counts the support (``0**0 = 0``) and ``alpha=inf`` is the min-entropy.
    """
    if alpha < 0 or np.isnan(alpha):
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    p = _mu_array(mu)
    p = p[p > 0]
    if p.size == 0:
        raise StateError("probability vector has no support")
    if alpha == 0:
        return float(np.log2(p.size))
    if np.isinf(alpha):
        return float(-np.log2(p.max()))
    if abs(alpha - 1.0) < EPS_ALPHA:
        return float(max(0.0, -np.sum(p * np.log2(p))))
    return float(max(0.0, np.log2(np.sum(p**alpha)) / (1.0 - alpha)))


# --- state files ----------------------------------------------------------


def state_to_dict(state) -> dict:
    """JSON-ready mapping; pure states are written as amplitudes."""
    if isinstance(state, PureState):
        v = state.amplitudes
        return {
            "dims": list(state.dims),
            "amplitudes_re": v.real.tolist(),
            "amplitudes_im": v.imag.tolist(),
        }
    rho = as_density(state)
    return {
        "dims": list(rho.dims),
        "matrix_re": rho.matrix.real.tolist(),
        "matrix_im": rho.matrix.imag.tolist(),
    }


def state_from_dict(doc) -> DensityMatrix | PureState:
    if not isinstance(doc, dict) or "dims" not in doc:
        raise StateError("state document needs a 'dims' field")
    dims = doc["dims"]
    if not isinstance(dims, (list, tuple)) or len(dims) != 2:
        raise StateError("'dims' must be a pair [m, n]")
    try:
        if "matrix_re" in doc:
            re = np.asarray(doc["matrix_re"], dtype=float)
            im = np.asarray(doc.get("matrix_im", np.zeros_like(re)), dtype=float)
            if re.shape != im.shape:
                raise StateError("matrix_re and matrix_im shapes differ")
            return DensityMatrix(re + 1j * im, dims)
        if "amplitudes_re" in doc:
            re = np.asarray(doc["amplitudes_re"], dtype=float)
            im = np.asarray(doc.get("amplitudes_im", np.zeros_like(re)), dtype=float)
            if re.shape != im.shape:
                raise StateError("amplitudes_re and amplitudes_im shapes differ")
            return PureState(re + 1j * im, dims)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, StateError):
            raise
        raise StateError(f"malformed numeric field: {exc}") from exc
    raise StateError("state document needs matrix_re or amplitudes_re")


def load_state(path) -> DensityMatrix | PureState:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(doc)


def save_state(state, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh, indent=1)
        fh.write("\n")
