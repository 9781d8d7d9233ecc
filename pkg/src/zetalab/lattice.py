"""Quadratic-form plumbing: Gram matrices, enumeration, SL2(Z) reduction.

A Gram matrix is a real symmetric positive-definite r x r numpy array
(2 <= r <= 6) representing Q[v] = v Q v^T on Z^r.  Upper-half-plane points
are plain python complex numbers with positive imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EnumerationCapError",
    "NotPositiveDefiniteError",
    "UpperHalfPoint",
    "cholesky",
    "enumerate_vectors",
    "gram_of_point",
    "normalize_det",
    "quadratic_values",
    "reduce_sl2",
    "validate_gram",
]

MAX_DIM = 6
ENUM_CAP = 10_000_000


class NotPositiveDefiniteError(ValueError):
    """Cholesky failed: the matrix is not positive-definite."""


class EnumerationCapError(RuntimeError):
    """Short-vector enumeration exceeded the configured cap."""


@dataclass(frozen=True)
class UpperHalfPoint:
    """z = x + iy with y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("UpperHalfPoint requires y > 0")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def as_point(z) -> complex:
    """Accept UpperHalfPoint or complex; return a validated complex."""
    if isinstance(z, UpperHalfPoint):
        return z.z
    w = complex(z)
    if not w.imag > 0:
        raise ValueError("point must lie in the upper half plane")
    return w


def validate_gram(Q: np.ndarray) -> np.ndarray:
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError("Gram matrix must be square")
    r = Q.shape[0]
    if not 2 <= r <= MAX_DIM:
        raise ValueError(f"dimension must be in [2, {MAX_DIM}]")
    if np.max(np.abs(Q - Q.T)) > 1e-12 * max(1.0, np.max(np.abs(Q))):
        raise ValueError("Gram matrix must be symmetric")
    Q = 0.5 * (Q + Q.T)
    try:
        np.linalg.cholesky(Q)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc
    return Q


def cholesky(Q: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L^T = Q; raises if not positive-definite."""
    Q = validate_gram(Q)
    try:
        return np.linalg.cholesky(Q)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc


def normalize_det(Q: np.ndarray) -> tuple[np.ndarray, float]:
    """Return (Q / det^{1/r}, det^{1/r}); the first factor has det 1."""
    Q = validate_gram(Q)
    cholesky(Q)  # positivity check
    r = Q.shape[0]
    scale = float(np.linalg.det(Q)) ** (1.0 / r)
    return Q / scale, scale


def quadratic_values(Q: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Q[v] for each row v of an integer matrix."""
    V = np.asarray(vectors, dtype=float)
    return np.einsum("ij,jk,ik->i", V, np.asarray(Q, dtype=float), V)


def enumerate_vectors(Q: np.ndarray, R: float, cap: int = ENUM_CAP) -> np.ndarray:
    """All v in Z^r \\ {0} with Q[v] <= R (Fincke-Pohst on the Cholesky factor).

    Returns an integer array sorted lexicographically; vectors come in +/-
    pairs since Q[-v] = Q[v].
    """
    if R <= 0:
        raise ValueError("R must be positive")
    L = cholesky(Q)
    U = L.T  # Q[v] = ||U v||^2
    r = U.shape[0]
    found: list[tuple[int, ...]] = []

    def descend(level: int, v: list[int], partial: np.ndarray, budget: float):
        # partial[i] = sum_{j>level} U[i, j] v_j for i <= level
        if budget < -1e-12:
            return
        uii = U[level, level]
        center = -partial[level] / uii
        half = np.sqrt(max(budget, 0.0)) / abs(uii)
        lo = int(np.ceil(center - half - 1e-12))
        hi = int(np.floor(center + half + 1e-12))
        for n in range(lo, hi + 1):
            contrib = (uii * n + partial[level]) ** 2
            rem = budget - contrib
            if rem < -1e-12:
                continue
            v[level] = n
            if level == 0:
                if any(v):
                    found.append(tuple(v))
                    if len(found) > cap:
                        raise EnumerationCapError(f"more than {cap} vectors below R={R}")
            else:
                descend(level - 1, v, partial + U[:, level] * n, rem)
            v[level] = 0

    descend(r - 1, [0] * r, np.zeros(r), float(R) * (1 + 1e-12))
    if not found:
        return np.zeros((0, r), dtype=int)
    out = np.array(sorted(found), dtype=int)
    return out


def reduce_sl2(z) -> tuple[complex, np.ndarray]:
    """Move z to the fundamental domain |x| <= 1/2, |z| >= 1 of SL2(Z).

    Returns (z', gamma) with z' = gamma . z; boundary ties are resolved
    toward x' <= 0.
    """
    w = as_point(z)
    g = np.eye(2, dtype=int)
    for _ in range(10_000):
        n = round(w.real)
        if n != 0:
            w = w - n
            g = np.array([[1, -n], [0, 1]], dtype=int) @ g
        if abs(w) < 1.0 - 1e-15:
            w = -1.0 / w
            g = np.array([[0, -1], [1, 0]], dtype=int) @ g
        else:
            break
    else:
        raise RuntimeError("SL2 reduction failed to terminate")
    # tie-breaking toward x <= 0
    if w.real > 0.5 - 1e-12:
        w = w - 1
        g = np.array([[1, -1], [0, 1]], dtype=int) @ g
    if abs(abs(w) - 1.0) < 1e-12 and w.real > 1e-12:
        w = -1.0 / w
        g = np.array([[0, -1], [1, 0]], dtype=int) @ g
    return w, g


def apply_mobius(gamma: np.ndarray, z) -> complex:
    (a, b), (c, d) = np.asarray(gamma)
    w = as_point(z)
    return (a * w + b) / (c * w + d)


def gram_of_point(z) -> np.ndarray:
    """The det-1 binary form with Q[(m, n)] = |m z + n|^2 / y."""
    w = as_point(z)
    x, y = w.real, w.imag
    return np.array([[(x * x + y * y) / y, x / y], [x / y, 1.0 / y]])


def point_of_gram(Q: np.ndarray) -> complex:
    """Inverse of gram_of_point for a det-1 binary form."""
    Q = validate_gram(Q)
    if Q.shape[0] != 2:
        raise ValueError("point_of_gram needs a binary form")
    Qn, _ = normalize_det(Q)
    y = 1.0 / Qn[1, 1]
    x = Qn[0, 1] / Qn[1, 1]
    return complex(x, y)
