"""Dense complex linear algebra underneath the checker.

Everything is plain numpy: Kronecker and direct-sum composition, the partial
trace over a leading tensor factor, a real isometric vectorization of
Hermitian matrices, and an incrementally orthonormalized span basis with
tolerance-aware membership tests.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, ResourceLimitError

# Tolerances.  SPAN_TOL is the knob that decides span membership (and hence
# verdicts); the rest guard validation.  PROB_FLOOR is the probability below
# which a measurement branch counts as unreachable.
SPAN_TOL = 1e-8
UNITARY_TOL = 1e-9
HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
PROB_FLOOR = 1e-12

# Largest matrix dimension we agree to materialize.
DIM_CAP = 4096


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(value, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise DimensionError(f"{name} has non-finite entries")
    return arr


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor as the major index."""
    a = np.asarray(a)
    b = np.asarray(b)
    if max(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]) > DIM_CAP:
        raise ResourceLimitError(
            f"kron result would exceed the {DIM_CAP}-dimensional cap"
        )
    return np.kron(a, b)


def direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Block-diagonal direct sum of two square matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"direct_sum needs square blocks, got {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise DimensionError(f"direct_sum needs square blocks, got {b.shape}")
    n, m = a.shape[0], b.shape[0]
    if n + m > DIM_CAP:
        raise ResourceLimitError(
            f"direct_sum result would exceed the {DIM_CAP}-dimensional cap"
        )
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def partial_trace_left(op: np.ndarray, dim_left: int, dim_right: int) -> np.ndarray:
    """Trace out the leading factor of an operator on C^dl (x) C^dr."""
    op = np.asarray(op)
    d = dim_left * dim_right
    if op.shape != (d, d):
        raise DimensionError(
            f"operator shape {op.shape} does not match {dim_left}x{dim_right} split"
        )
    t = op.reshape(dim_left, dim_right, dim_left, dim_right)
    return np.einsum("ikil->kl", t)


def pure_density(ket: np.ndarray) -> np.ndarray:
    """Density matrix |v><v| of a (normalized) state vector."""
    v = np.asarray(ket, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > TRACE_TOL:
        raise DimensionError(f"state vector norm {n} is not 1")
    return np.outer(v, v.conj())


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    d = u.shape[0]
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(d)) <= tol)


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return bool(np.linalg.norm(h - h.conj().T) <= tol)


def is_density(rho: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Hermitian, positive semidefinite within tol, trace 1 within TRACE_TOL."""
    rho = np.asarray(rho)
    if not is_hermitian(rho):
        return False
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        return False
    eigs = np.linalg.eigvalsh(rho)
    return bool(eigs.min() >= -tol)


def hermitian_vectorize(h: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real coordinate vector of a Hermitian d x d matrix (length d^2).

    Layout: the d real diagonal entries first, then for each upper pair
    (i, j) with i < j in row-major order the pair (sqrt(2) Re h[i,j],
    sqrt(2) Im h[i,j]).  The map is an isometry for the Frobenius inner
    product, so spans and norms survive the translation to real vectors.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if np.linalg.norm(h - h.conj().T) > tol:
        raise DimensionError("hermitian_vectorize: input is not Hermitian")
    d = h.shape[0]
    out = np.empty(d * d)
    out[:d] = np.diag(h).real
    iu, ju = np.triu_indices(d, k=1)
    upper = h[iu, ju]
    out[d::2] = np.sqrt(2.0) * upper.real
    out[d + 1 :: 2] = np.sqrt(2.0) * upper.imag
    return out


class SpanBasis:
    """Growing real span with tolerance-aware membership tests.

    Stored directions are orthonormalized by modified Gram-Schmidt with one
    reorthogonalization pass; the raw vectors (plus an optional origin tag)
    are kept in insertion order.  Membership uses a relative residual:
    v is inside the span when ||v - proj(v)|| <= tolerance * max(1, ||v||).
    """

    def __init__(self, ambient_dim: int, tolerance: float = SPAN_TOL):
        if ambient_dim < 1:
            raise DimensionError("ambient dimension must be positive")
        if not tolerance > 0:
            raise ValueError("tolerance must be positive")
        self.ambient_dim = int(ambient_dim)
        self.tolerance = float(tolerance)
        self._q = np.zeros((0, self.ambient_dim))
        self.origins: list[object] = []

    def __len__(self) -> int:
        return self._q.shape[0]

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise DimensionError(
                f"vector length {v.shape[0]} != ambient dimension {self.ambient_dim}"
            )
        return v

    def residual(self, v) -> np.ndarray:
        """Component of v orthogonal to the current span (two-pass projection)."""
        v = self._check(v)
        r = v - self._q.T @ (self._q @ v)
        r = r - self._q.T @ (self._q @ r)
        return r

    def contains(self, v) -> tuple[bool, float]:
        """Return (membership, residual norm)."""
        v = self._check(v)
        rnorm = float(np.linalg.norm(self.residual(v)))
        bound = self.tolerance * max(1.0, float(np.linalg.norm(v)))
        return rnorm <= bound, rnorm

    def add(self, v, origin: object = None) -> None:
        """Insert a vector that is not yet inside the span."""
        v = self._check(v)
        inside, _ = self.contains(v)
        if inside:
            raise ValueError("vector is already inside the span")
        if len(self) >= self.ambient_dim:
            raise ValueError("span basis is already full")
        r = v.copy()
        for _ in range(2):  # MGS sweep + one reorthogonalization pass
            for q in self._q:
                r -= (q @ r) * q
        r /= np.linalg.norm(r)
        self._q = np.vstack([self._q, r])
        self.origins.append(origin)

    def orthonormality_defect(self) -> float:
        """||Q Q^T - I||_F over the stored directions (diagnostic)."""
        k = len(self)
        return float(np.linalg.norm(self._q @ self._q.T - np.eye(k)))
