"""Epstein zeta function Z_r(Q, s) on all of C via incomplete-gamma continuation.

For det-1 Q the theta-integral split at t=1 plus Poisson summation gives

    pi^{-s} Gamma(s) Z_r(Q, s)
        = sum_{v != 0} (pi Q[v])^{-s} Gamma(s, pi Q[v])
        + sum_{v != 0} (pi Q^{-1}[v])^{-(r/2-s)} Gamma(r/2 - s, pi Q^{-1}[v])
        + 2/(2s - r) - 2/(2s),

entire apart from the simple pole at s = r/2 (residue pi^{r/2}/Gamma(r/2)).
General determinants are reduced to this by Z_r(cQ, s) = c^{-s} Z_r(Q, s).

Accuracy note: the completed function is exponentially small on vertical
lines (|Gamma(s)| ~ e^{-pi|Im s|/2}) while individual bracket terms are not,
so cancellation limits double-precision accuracy to roughly
|Im s| <~ 15-20; the reported error bound includes this round-off term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import lattice, specfun

__all__ = [
    "EpsteinPoleError",
    "EvalResult",
    "LaurentConvergenceError",
    "LaurentExpansion",
    "check_functional_equation",
    "epstein_laurent",
    "epstein_residue",
    "epstein_zeta",
]


class EpsteinPoleError(ValueError):
    """Evaluation requested at (or too close to) s = 0 or s = r/2."""


class LaurentConvergenceError(RuntimeError):
    """Contour coefficients failed to stabilize under node doubling."""


@dataclass(frozen=True)
class EvalResult:
    """Value with a truncation + round-off error bound."""

    value: complex
    error_bound: float
    terms_used: int


@dataclass(frozen=True)
class LaurentExpansion:
    """Coefficients a_{-1} .. a_k of a function about ``center``."""

    center: complex
    coefficients: list
    radius: float

    @property
    def residue(self) -> complex:
        return self.coefficients[0]

    def coefficient(self, order: int) -> complex:
        return self.coefficients[order + 1]

    def evaluate(self, s: complex) -> complex:
        d = complex(s) - self.center
        total = self.coefficients[0] / d
        for k, a in enumerate(self.coefficients[1:]):
            total += a * d ** k
        return total


def _half_bracket_sum(Q: np.ndarray, s: complex, x_cut: float) -> tuple[complex, float, int]:
    """sum_{v != 0} (pi Q[v])^{-s} Gamma(s, pi Q[v]) over pi Q[v] <= x_cut.

    Returns (sum, sum of |terms| for round-off accounting, count).
    """
    vectors = lattice.enumerate_vectors(Q, x_cut / math.pi)
    if vectors.shape[0] == 0:
        return 0.0 + 0.0j, 0.0, 0
    values = lattice.quadratic_values(Q, vectors)
    order = np.argsort(values, kind="stable")
    x = math.pi * values[order]
    g = specfun.regularized_upper_gamma_array(s, x)
    terms = np.exp(-s * np.log(x)) * g
    return complex(np.sum(terms)), float(np.sum(np.abs(terms))), int(len(x))


def _tail_bound(r: int, sigma: float, x_cut: float) -> float:
    """Bound on the dropped |terms| of one half-bracket sum (det-1 form).

    For pi Q[v] = x > x_cut >= max(30, 3|s|) each term satisfies
    |x^{-s} Gamma(s, x)| <= 2 e^{-x}/x, and the shell count of lattice
    points is bounded by 3 V_r (r/2) t^{r/2-1} dt at these radii.
    """
    V = math.pi ** (r / 2.0) / math.gamma(r / 2.0 + 1.0)
    a = max(r / 2.0 - 1.0, 1e-6)
    integral = abs(specfun.upper_incomplete_gamma(a, x_cut))
    return 6.0 * V * (r / 2.0) * math.pi ** (-r / 2.0) * integral


def epstein_zeta(Q: np.ndarray, s, tol: float = 1e-10) -> EvalResult:
    """Z_r(Q, s) = sum'_{v in Z^r} Q[v]^{-s}, continued to C \\ {r/2}.

    The determinant is normalized first and restored through homogeneity
    Z_r(cQ, s) = c^{-s} Z_r(Q, s).  Raises :class:`EpsteinPoleError` within
    1e-6 of s = 0 or s = r/2.
    """
    Q = lattice.validate_gram(Q)
    r = Q.shape[0]
    s = complex(s)
    if abs(s) < 1e-6 or abs(s - r / 2.0) < 1e-6:
        raise EpsteinPoleError(f"s={s} too close to a pole/zero of the bracket (0 or r/2)")
    Qn, scale = lattice.normalize_det(Q)
    Qi = np.linalg.inv(Qn)
    x_cut = max(30.0, 3.0 * abs(s), 1.2 * -math.log(max(tol, 1e-300)))

    sum_a, abs_a, n_a = _half_bracket_sum(Qn, s, x_cut)
    s_dual = r / 2.0 - s
    sum_b, abs_b, n_b = _half_bracket_sum(Qi, s_dual, x_cut)
    bracket = sum_a + sum_b + 2.0 / (2.0 * s - r) - 2.0 / (2.0 * s)

    prefactor = cmath.exp(s * math.log(math.pi) - specfun.log_gamma(s))
    value = prefactor * bracket * scale ** (-s)

    amp = abs(prefactor) * scale ** (-s.real)
    tail = (_tail_bound(r, s.real, x_cut) + _tail_bound(r, s_dual.real, x_cut)) * amp
    roundoff = 64.0 * np.finfo(float).eps * (abs_a + abs_b + 1.0) * amp
    return EvalResult(value=value, error_bound=float(tail + roundoff), terms_used=n_a + n_b)


def check_functional_equation(Q: np.ndarray, s) -> float:
    """|Lambda(s) - Lambda_dual(r/2 - s)| for the completed Epstein zeta.

    Lambda(s) = pi^{-s} Gamma(s) Z_r(Q, s) with det-1 normalization, the
    dual side using Q^{-1} at r/2 - s.
    """
    Q = lattice.validate_gram(Q)
    r = Q.shape[0]
    s = complex(s)
    Qn, _ = lattice.normalize_det(Q)
    Qi = np.linalg.inv(Qn)
    lam = cmath.exp(-s * math.log(math.pi) + specfun.log_gamma(s)) * epstein_zeta(Qn, s).value
    sd = r / 2.0 - s
    lam_dual = cmath.exp(-sd * math.log(math.pi) + specfun.log_gamma(sd)) * epstein_zeta(Qi, sd).value
    return abs(lam - lam_dual)


def epstein_laurent(Q: np.ndarray, center, max_order: int = 1,
                    radius: float = 0.1, nodes: int = 64,
                    tol: float = 1e-8) -> LaurentExpansion:
    """Laurent coefficients a_{-1} .. a_{max_order} of Z_r(Q, .) about ``center``.

    Trapezoidal Cauchy integrals on |s - center| = radius; node count doubles
    (up to 256) until the coefficients stabilize.
    """
    Q = lattice.validate_gram(Q)
    center = complex(center)

    def coeffs(m: int) -> np.ndarray:
        theta = 2.0 * math.pi * np.arange(m) / m
        ring = center + radius * np.exp(1j * theta)
        f = np.array([epstein_zeta(Q, sv).value for sv in ring])
        orders = np.arange(-1, max_order + 1)
        phases = np.exp(-1j * np.outer(orders, theta))
        return (phases @ f) / m * radius ** (-orders.astype(float))

    prev = coeffs(nodes)
    m = nodes
    while m <= 256:
        m *= 2
        cur = coeffs(m)
        scale = np.max(np.abs(cur)) + 1.0
        if np.max(np.abs(cur - prev)) < tol * scale:
            return LaurentExpansion(center=center, coefficients=list(cur), radius=radius)
        prev = cur
    raise LaurentConvergenceError("Laurent coefficients did not stabilize under node doubling")


def epstein_residue(Q: np.ndarray) -> float:
    """Res_{s=r/2} Z_r(Q, s) for det-1 Q (equals pi^{r/2}/Gamma(r/2))."""
    Q = lattice.validate_gram(Q)
    r = Q.shape[0]
    if abs(np.linalg.det(Q) - 1.0) > 1e-8:
        raise ValueError("epstein_residue expects a det-1 form; normalize first")
    exp = epstein_laurent(Q, r / 2.0, max_order=0)
    return float(exp.residue.real)
