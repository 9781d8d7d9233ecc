"""Complex special functions used throughout the laboratory.

Everything here is double precision with explicit truncation control:

* ``log_gamma`` / ``digamma`` -- Stirling series with argument shifting.
* ``riemann_zeta`` / ``hurwitz_zeta`` -- Euler-Maclaurin with Bernoulli
  corrections; the cutoff N adapts to |Im s| so the series stays accurate
  on tall vertical lines (|Im s| up to ~1200).
* ``upper_incomplete_gamma`` -- Legendre continued fraction spliced with the
  lower-gamma power series.
* ``dirichlet_L`` -- Hurwitz-zeta decomposition for the small odd fundamental
  discriminants used by the imaginary-quadratic experiments.
* ``bessel_K`` -- trapezoidal quadrature of the integral
  K_nu(z) = int_0^oo exp(-z cosh v) cosh(nu v) dv (geometric convergence).
* ``dedekind_eta`` / ``eta_log_derivative`` -- q-product after fundamental
  domain reduction, with the full multiplier system tracked.
* ``psi_arg_xi`` -- a continuous branch of arg xi(1+2it) anchored at -pi/2
  as t -> 0+, returned as an :class:`ArgTrack`.

Array-friendly: the core evaluators accept numpy arrays and broadcast.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ArgTrack",
    "GammaPoleError",
    "bessel_K",
    "dedekind_eta",
    "digamma",
    "dirichlet_L",
    "eta_log_derivative",
    "hurwitz_zeta",
    "log_gamma",
    "lower_incomplete_gamma",
    "psi_arg_xi",
    "riemann_zeta",
    "upper_incomplete_gamma",
    "xi_completed",
    "xi_log",
]


class GammaPoleError(ValueError):
    """Evaluation requested exactly at a pole of Gamma."""


# Bernoulli numbers B_2, B_4, ..., B_40.
_BERNOULLI = [
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
    -236364091.0 / 2730, 8553103.0 / 6, -23749461029.0 / 870,
    8615841276005.0 / 14322, -7709321041217.0 / 510, 2577687858367.0 / 6,
    -26315271553053477373.0 / 1919190, 2929993913841559.0 / 6,
    -261082718496449122051.0 / 13530,
]

_STIRLING_RADIUS = 25.0
_TWO_PI = 2.0 * math.pi


def _wrap(values: np.ndarray, scalar: bool):
    if scalar:
        return complex(values.reshape(()))
    return values


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log sin(pi z), stable for large |Im z| (branch may differ by 2 pi i k)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    flat = z.reshape(-1)
    res = out.reshape(-1)
    for i, w in enumerate(flat):
        pw = math.pi * w
        if abs(pw.imag) < 20.0:
            res[i] = cmath.log(cmath.sin(pw))
        elif pw.imag > 0:
            # sin w = e^{-iw}(i/2)(1 - e^{2iw}) up to sign bookkeeping
            res[i] = -1j * pw + cmath.log(1.0 - cmath.exp(2j * pw)) + 1j * math.pi / 2 - math.log(2.0)
        else:
            res[i] = 1j * pw + cmath.log(1.0 - cmath.exp(-2j * pw)) - 1j * math.pi / 2 - math.log(2.0)
    return out


def log_gamma(s):
    """Principal-branch log Gamma(s) (Stirling with argument shifting).

    Accepts scalars or numpy arrays.  Raises :class:`GammaPoleError` at the
    poles s = 0, -1, -2, ...
    """
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1).copy()

    near_pole = (z.real < 0.5) & (np.abs(z - np.round(z.real)) < 1e-14)
    if np.any(near_pole):
        raise GammaPoleError("log_gamma evaluated at a non-positive integer")

    out = np.zeros_like(z)
    reflect = z.real < 0.5
    if np.any(reflect):
        zr = z[reflect]
        out[reflect] = math.log(math.pi) - _log_sin_pi(zr) - _log_gamma_core(1.0 - zr)
    if np.any(~reflect):
        out[~reflect] = _log_gamma_core(z[~reflect])
    return _wrap(out.reshape(arr.shape), scalar)


def _log_gamma_core(z: np.ndarray) -> np.ndarray:
    """log Gamma for Re z >= 0.5 via shifted Stirling series."""
    z = np.array(z, dtype=complex)
    shift = np.zeros_like(z)
    for _ in range(int(_STIRLING_RADIUS) + 2):
        mask = np.abs(z) < _STIRLING_RADIUS
        if not mask.any():
            break
        shift[mask] += np.log(z[mask])
        z[mask] += 1.0
    w = 1.0 / (z * z)
    series = np.zeros_like(z)
    power = 1.0 / z
    for k in range(1, 13):
        series += _BERNOULLI[k - 1] / (2 * k * (2 * k - 1)) * power
        power *= w
    return (z - 0.5) * np.log(z) - z + 0.5 * math.log(_TWO_PI) + series - shift


def digamma(s):
    """psi(s) = Gamma'(s)/Gamma(s), Stirling with shifting (complex capable)."""
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1).copy()
    if np.any((z.real < 0.5) & (np.abs(z - np.round(z.real)) < 1e-14)):
        raise GammaPoleError("digamma evaluated at a non-positive integer")
    out = np.zeros_like(z)
    reflect = z.real < 0.5
    if np.any(reflect):
        zr = z[reflect]
        # psi(1-x) - psi(x) = pi cot(pi x)
        out[reflect] = _digamma_core(1.0 - zr) - math.pi / np.tan(math.pi * zr)
    if np.any(~reflect):
        out[~reflect] = _digamma_core(z[~reflect])
    res = out.reshape(arr.shape)
    if scalar:
        val = complex(res.reshape(()))
        return val.real if abs(val.imag) < 1e-14 and np.isrealobj(s) else val
    return res


def _digamma_core(z: np.ndarray) -> np.ndarray:
    z = np.array(z, dtype=complex)
    shift = np.zeros_like(z)
    for _ in range(int(_STIRLING_RADIUS) + 2):
        mask = np.abs(z) < _STIRLING_RADIUS
        if not mask.any():
            break
        shift[mask] += 1.0 / z[mask]
        z[mask] += 1.0
    w = 1.0 / (z * z)
    series = np.zeros_like(z)
    power = w.copy()
    for k in range(1, 13):
        series += _BERNOULLI[k - 1] / (2 * k) * power
        power *= w
    return np.log(z) - 0.5 / z - series - shift


# ---------------------------------------------------------------------------
# zeta family (Euler-Maclaurin)
# ---------------------------------------------------------------------------

_EM_CORRECTIONS = 20


def _em_terms(s: np.ndarray, base: np.ndarray) -> np.ndarray:
    """Euler-Maclaurin boundary terms for sum_{n >= N} (n + a)^(-s), base = N + a."""
    correction = base ** (1.0 - s) / (s - 1.0) + 0.5 * base ** (-s)
    poch = np.ones_like(s)
    binv = 1.0 / base
    power = base ** (1.0 - s) * binv  # base^{-s}
    fact = 1.0
    for k in range(1, _EM_CORRECTIONS + 1):
        # pochhammer (s)_{2k-1} built incrementally
        if k == 1:
            poch = s.copy() if isinstance(s, np.ndarray) else s
        else:
            poch = poch * (s + (2 * k - 3)) * (s + (2 * k - 2))
        fact *= (2 * k) * (2 * k - 1)
        power *= binv * binv
        correction += _BERNOULLI[k - 1] / fact * poch * power * base
    return correction


def _em_cutoff(s: np.ndarray) -> int:
    tmax = float(np.max(np.abs(s.imag))) if s.size else 0.0
    return max(50, int(0.37 * tmax) + 10)


def riemann_zeta(s):
    """zeta(s) on C \\ {1} via Euler-Maclaurin (reflection for Re s < -0.5)."""
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1)
    if np.any(np.abs(z - 1.0) < 1e-12):
        raise ZeroDivisionError("zeta has a pole at s=1")
    out = np.empty_like(z)
    refl = z.real < -0.5
    if np.any(~refl):
        out[~refl] = _zeta_em(z[~refl])
    if np.any(refl):
        zr = z[refl]
        # zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
        lg = np.asarray(log_gamma(1.0 - zr), dtype=complex).reshape(zr.shape)
        chi = np.exp(zr * math.log(2.0) + (zr - 1.0) * math.log(math.pi) + lg + _log_sin_pi(zr / 2.0))
        out[refl] = chi * _zeta_em(1.0 - zr)
    return _wrap(out.reshape(arr.shape), scalar)


def _zeta_em(s: np.ndarray) -> np.ndarray:
    N = _em_cutoff(s)
    n = np.arange(1, N, dtype=float)
    # chunk the outer product to bound memory on long node lists
    out = np.empty_like(s)
    for lo in range(0, s.size, 2048):
        hi = min(lo + 2048, s.size)
        sc = s[lo:hi]
        out[lo:hi] = np.sum(n[:, None] ** (-sc[None, :]), axis=0)
    return out + _em_terms(s, np.full_like(s, float(N)))


def hurwitz_zeta(s, a: float):
    """Hurwitz zeta(s, a) for 0 < a <= 1, Euler-Maclaurin continuation."""
    if not 0.0 < a <= 1.0:
        raise ValueError("hurwitz_zeta requires 0 < a <= 1")
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1)
    if np.any(np.abs(z - 1.0) < 1e-12):
        raise ZeroDivisionError("hurwitz zeta has a pole at s=1")
    N = _em_cutoff(z)
    n = np.arange(0, N, dtype=float) + a
    out = np.empty_like(z)
    for lo in range(0, z.size, 2048):
        hi = min(lo + 2048, z.size)
        sc = z[lo:hi]
        out[lo:hi] = np.sum(n[:, None] ** (-sc[None, :]), axis=0)
    out = out + _em_terms(z, np.full_like(z, float(N) + a))
    return _wrap(out.reshape(arr.shape), scalar)


_CHARACTER_TABLE = {
    -3: (3, [0, 1, -1]),
    -4: (4, [0, 1, 0, -1]),
    -7: (7, [0, 1, 1, -1, 1, -1, -1]),
    -8: (8, [0, 1, 0, 1, 0, -1, 0, -1]),
    -11: (11, [0, 1, -1, 1, 1, 1, -1, -1, -1, 1, -1]),
}


def quadratic_character(D: int, n: int) -> int:
    """Kronecker symbol chi_D(n) for the supported fundamental discriminants."""
    if D not in _CHARACTER_TABLE:
        raise ValueError(f"unsupported discriminant {D}")
    q, table = _CHARACTER_TABLE[D]
    return table[n % q]


def dirichlet_L(s, D: int):
    """L(s, chi_D) for D in {-3,-4,-7,-8,-11}, continued via Hurwitz zeta."""
    if D not in _CHARACTER_TABLE:
        raise ValueError(f"{D} is not a supported fundamental discriminant")
    q, table = _CHARACTER_TABLE[D]
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1)
    at_one = np.abs(z - 1.0) < 1e-13
    out = np.zeros_like(z)
    if np.any(~at_one):
        zs = z[~at_one]
        acc = np.zeros_like(zs)
        for a0 in range(1, q):
            chi = table[a0]
            if chi:
                acc += chi * np.asarray(hurwitz_zeta(zs, a0 / q), dtype=complex).reshape(zs.shape)
        out[~at_one] = acc * float(q) ** (-zs)
    if np.any(at_one):
        # L(1, chi) = -(1/q) sum chi(a) psi(a/q)
        val = -sum(table[a0] * float(np.real(digamma(a0 / q))) for a0 in range(1, q)) / q
        out[at_one] = val
    return _wrap(out.reshape(arr.shape), scalar)


# ---------------------------------------------------------------------------
# completed zeta and its argument
# ---------------------------------------------------------------------------

def xi_log(s):
    """log xi(s) with xi(s) = pi^{-s/2} Gamma(s/2) zeta(s).

    The imaginary part is continuous in the Gamma factor (analytic log) but
    uses the principal log of zeta; consumers unwrap residual 2 pi jumps.
    """
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1)
    lg = np.asarray(log_gamma(z / 2.0), dtype=complex).reshape(z.shape)
    zeta = np.asarray(riemann_zeta(z), dtype=complex).reshape(z.shape)
    out = -(z / 2.0) * math.log(math.pi) + lg + np.log(zeta)
    return _wrap(out.reshape(arr.shape), scalar)


def xi_completed(s):
    """xi(s) = pi^{-s/2} Gamma(s/2) zeta(s); poles at s = 0, 1."""
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    z = arr.reshape(-1)
    if np.any(np.abs(z) < 1e-12) or np.any(np.abs(z - 1.0) < 1e-12):
        raise ZeroDivisionError("xi has poles at s=0 and s=1")
    out = np.exp(np.asarray(xi_log(z), dtype=complex).reshape(z.shape))
    return _wrap(out.reshape(arr.shape), scalar)


@dataclass(frozen=True)
class ArgTrack:
    """Continuous branch of psi(t) = arg xi(1+2it) on an ascending grid."""

    t_grid: np.ndarray
    psi_values: np.ndarray
    max_step: float

    def value(self, t) -> float:
        return float(np.interp(t, self.t_grid, self.psi_values))

    def derivative(self, t) -> float:
        grad = np.gradient(self.psi_values, self.t_grid)
        return float(np.interp(t, self.t_grid, grad))


def _psi_raw(t: np.ndarray) -> np.ndarray:
    """Im log xi(1+2it), branch of arg zeta principal (jumps fixed later)."""
    s = 1.0 + 2j * np.asarray(t, dtype=float)
    return np.asarray(xi_log(s), dtype=complex).reshape(np.shape(t)).imag


def _principal(d: np.ndarray) -> np.ndarray:
    return (d + math.pi) % _TWO_PI - math.pi


def psi_arg_xi(t_max: float, step: float = 0.05, t_min: float = 1e-3) -> ArgTrack:
    """Build the continuous branch of arg xi(1+2it) on [t_min, t_max].

    Anchored at -pi/2 as t -> 0+ (the pole of xi at 1 gives
    xi(1+2it) ~ -i/(2t)).  The grid refines adaptively until consecutive
    psi steps stay below pi.
    """
    if t_max <= t_min:
        raise ValueError("t_max must exceed t_min")
    t = np.unique(np.concatenate([[t_min], np.arange(t_min, t_max, step), [t_max]]))
    raw = _psi_raw(t)
    for _ in range(12):
        jumps = np.abs(_principal(np.diff(raw)))
        bad = jumps > 2.6
        if not bad.any():
            break
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        t = np.unique(np.concatenate([t, mids]))
        raw = _psi_raw(t)
    else:
        raise RuntimeError("psi track failed to unwrap after maximal refinement")
    psi = np.empty_like(raw)
    psi[0] = raw[0]  # approx -pi/2 near t=0
    psi[1:] = psi[0] + np.cumsum(_principal(np.diff(raw)))
    max_step = float(np.max(np.abs(np.diff(psi)))) if psi.size > 1 else 0.0
    return ArgTrack(t_grid=t, psi_values=psi, max_step=max_step)


# ---------------------------------------------------------------------------
# incomplete gamma
# ---------------------------------------------------------------------------

def upper_incomplete_gamma(s, x: float, tol: float = 1e-13) -> complex:
    """Gamma(s, x) = int_x^oo u^{s-1} e^{-u} du for x > 0, entire in s."""
    if x <= 0:
        raise ValueError("upper_incomplete_gamma requires x > 0")
    s = complex(s)
    if x >= abs(s) + 1.0 or x >= 40.0:
        return _upper_gamma_cf(s, x, tol)
    if s.real <= 0.5 and abs(s - round(s.real)) < 1e-8:
        # near a Gamma pole the splice cancels badly; the CF stays valid
        return _upper_gamma_cf(s, x, tol)
    # lift Re s above 0.5 with Gamma(s,x) = (Gamma(s+1,x) - x^s e^{-x})/s,
    # maintaining Gamma(s,x) = coeff*Gamma(s0,x) + shift
    coeff = 1.0 + 0.0j
    shift = 0.0 + 0.0j
    s0 = s
    while s0.real <= 0.5:
        coeff = coeff / s0
        shift = shift - coeff * cmath.exp(s0 * math.log(x) - x)
        s0 += 1.0
    gamma_full = cmath.exp(log_gamma(s0))
    lower = _lower_gamma_series(s0, x, tol)
    return coeff * (gamma_full - lower) + shift


def lower_incomplete_gamma(s, x: float, tol: float = 1e-13) -> complex:
    """gamma(s, x) = int_0^x u^{s-1} e^{-u} du (Re s > 0)."""
    if x <= 0:
        raise ValueError("lower_incomplete_gamma requires x > 0")
    s = complex(s)
    if s.real <= 0:
        raise ValueError("lower_incomplete_gamma requires Re s > 0")
    if x >= abs(s) + 1.0 or x >= 40.0:
        return cmath.exp(log_gamma(s)) - _upper_gamma_cf(s, x, tol)
    return _lower_gamma_series(s, x, tol)


def _lower_gamma_series(s: complex, x: float, tol: float) -> complex:
    term = 1.0 / s
    total = term
    n = 0
    while abs(term) > tol * abs(total) and n < 500:
        n += 1
        term *= x / (s + n)
        total += term
    return total * cmath.exp(s * math.log(x) - x)


def _upper_gamma_cf(s: complex, x: float, tol: float) -> complex:
    tiny = 1e-290
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / (b if b != 0 else tiny)
    f = d
    for n in range(1, 300):
        an = -n * (n - s)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        f *= delta
        if abs(delta - 1.0) < tol:
            break
    return cmath.exp(s * math.log(x) - x) * f


def regularized_upper_gamma_array(s: complex, xs: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """Vectorized Gamma(s, x) over an array of positive x (fixed s).

    Splits the array between the continued-fraction and power-series regimes;
    used by the lattice-sum evaluators where thousands of x share one s.
    """
    xs = np.asarray(xs, dtype=float)
    out = np.empty(xs.shape, dtype=complex)
    use_cf = (xs >= abs(s) + 1.0) | (xs >= 40.0)
    if use_cf.any():
        out[use_cf] = _upper_gamma_cf_vec(s, xs[use_cf], tol)
    rest = ~use_cf
    if rest.any():
        out[rest] = [upper_incomplete_gamma(s, float(x), tol) for x in xs[rest]]
    return out


def _upper_gamma_cf_vec(s: complex, xs: np.ndarray, tol: float) -> np.ndarray:
    tiny = 1e-290
    b = xs + 1.0 - s
    c = np.full(xs.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / np.where(b == 0, tiny, b)
    f = d.copy()
    for n in range(1, 300):
        an = -n * (n - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(d == 0, tiny, d)
        c = b + an / c
        c = np.where(c == 0, tiny, c)
        d = 1.0 / d
        delta = d * c
        f *= delta
        if np.max(np.abs(delta - 1.0)) < tol:
            break
    return np.exp(s * np.log(xs) - xs) * f


# ---------------------------------------------------------------------------
# K-Bessel
# ---------------------------------------------------------------------------

def bessel_K(nu, z: float, tol: float = 1e-13) -> complex:
    """K_nu(z) for z > 0 via K_nu(z) = int_0^oo e^{-z cosh v} cosh(nu v) dv.

    The substitution u = e^v symmetrizes the defining integral
    (1/2) int_0^oo exp(-z(u+1/u)/2) u^{nu-1} du; trapezoid sums converge
    geometrically for this analytic, doubly-exponentially decaying integrand.
    """
    if z <= 0:
        raise ValueError("bessel_K requires z > 0")
    nu = complex(nu)
    nr = abs(nu.real)
    v_max = 2.0
    while z * math.cosh(v_max) - nr * v_max - z < 60.0:
        v_max += 0.5
        if v_max > 700.0:
            break
    h = 0.5
    prev = None
    for _ in range(14):
        v = np.arange(0.0, v_max + h, h)
        g = np.exp(-z * np.cosh(v)) * np.cosh(nu * v)
        total = h * (np.sum(g) - 0.5 * g[0])
        if prev is not None and abs(total - prev) <= tol * abs(total) + 1e-300:
            return complex(total)
        prev = total
        h *= 0.5
    return complex(prev)


# ---------------------------------------------------------------------------
# Dedekind eta
# ---------------------------------------------------------------------------

def _eta_q_product(z: complex, terms: int = 64) -> complex:
    q = cmath.exp(2j * math.pi * z)
    prod = 1.0 + 0.0j
    qn = 1.0 + 0.0j
    for _ in range(terms):
        qn *= q
        prod *= 1.0 - qn
    return cmath.exp(2j * math.pi * z / 24.0) * prod


def dedekind_eta(z) -> complex:
    """eta(z) = q^{1/24} prod (1-q^n), q = e^{2 pi i z}, via reduction.

    The point is moved to the fundamental domain with translations
    (eta(z+1) = e^{i pi/12} eta(z)) and inversions
    (eta(-1/z) = sqrt(-iz) eta(z)), accumulating the multiplier, and the
    q-product is evaluated where |q| <= e^{-pi sqrt 3}.
    """
    w = complex(z)
    if w.imag <= 0:
        raise ValueError("dedekind_eta requires Im z > 0")
    acc = 1.0 + 0.0j
    for _ in range(200):
        n = round(w.real)
        if n != 0:
            w -= n
            acc *= cmath.exp(1j * math.pi * n / 12.0)
        if abs(w) < 1.0 - 1e-15:
            w = -1.0 / w
            # eta at the pre-inversion point equals sqrt(-i w_new) eta(w_new)
            acc *= cmath.sqrt(-1j * w)
        else:
            break
    return acc * _eta_q_product(w)


def _e2_series(z: complex, terms: int = 80) -> complex:
    """Weight-2 quasimodular E_2(z) = 1 - 24 sum sigma_1(n) q^n (Im z >= 0.5)."""
    q = cmath.exp(2j * math.pi * z)
    sigma = [0] * (terms + 1)
    for d in range(1, terms + 1):
        for m in range(d, terms + 1, d):
            sigma[m] += d
    total = 0.0 + 0.0j
    qn = 1.0 + 0.0j
    for n in range(1, terms + 1):
        qn *= q
        total += sigma[n] * qn
    return 1.0 - 24.0 * total


def eta_log_derivative(z) -> complex:
    """eta'(z)/eta(z) = (i pi / 12) E_2(z), reduced for convergence.

    Under z -> gamma z the weight-1/2 transformation law gives
    (log eta)'(z) = (cz+d)^{-2} (log eta)'(gamma z) - c / (2(cz+d)).
    """
    w = complex(z)
    if w.imag <= 0:
        raise ValueError("eta_log_derivative requires Im z > 0")
    if w.imag >= 0.75:
        return 1j * math.pi / 12.0 * _e2_series(w)
    from .lattice import reduce_sl2  # local import to avoid cycles at import time

    zp, gamma = reduce_sl2(w)
    (a, b), (c, d) = gamma
    j = c * w + d
    inner = 1j * math.pi / 12.0 * _e2_series(zp)
    return inner / (j * j) - 0.5 * c / j
