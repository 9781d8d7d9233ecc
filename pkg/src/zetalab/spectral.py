"""Critical-line spectral experiments.

* Exotic pseudo-Laplacian eigenparameters: w = 1/2 + it with
  a^w + c_w a^{1-w} = 0, reduced on the line (|c_w| = 1, arg c_w = -2 psi(t))
  to cos(t log a + psi(t)) = 0 with psi(t) = arg xi(1+2it).
* Spacing of those roots against the exact comparator pi/(log a + psi'(t)).
* The Green's-function constant-term identity: the spectral-expansion
  contour integral over Re s = 1/2 against the closed form
  a^{1-w} E_w(z)/(1-2w).
* The J(w) pairing integral and the repulsion experiment comparing
  cos(Theta) J(w) with sin(Theta) |thetaE_w|^2 / (2 tau).

Contour quadrature is composite Gauss-Legendre (panels of width 0.5,
16 nodes each by default) with explicit 1/tau^2 tail bounds; the
oscillatory integrand sharpens the Green's-check tail bound to
O(1/(phi T^2)) with phase slope phi = log a - |log y|.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import eisenstein, lattice, specfun

__all__ = [
    "ContourConfig",
    "GreensResult",
    "INNER_ONE_ONE",
    "RepulsionReport",
    "SpacingRow",
    "SpectralRoot",
    "exotic_roots",
    "greens_constant_term_check",
    "J_function",
    "modular_domain_volume",
    "repulsion_experiment",
    "root_count_prediction",
    "spacing_statistics",
    "zeta_k_line_zeros",
]

# <1, 1> on SL2(Z)\H with measure dx dy / y^2
INNER_ONE_ONE = math.pi / 3.0


def modular_domain_volume(panels: int = 200) -> float:
    """vol(SL2(Z)\\H) = int_{-1/2}^{1/2} dx / sqrt(1-x^2) by quadrature.

    Cross-checks the hard-coded <1,1> = pi/3 before the spectral formulas
    rely on it.
    """
    x, w = _gl_grid(-0.5, 0.5, 1.0 / panels, 8)
    return float(w @ (1.0 / np.sqrt(1.0 - x * x)))


@dataclass(frozen=True)
class ContourConfig:
    """Truncated Re s = 1/2 contour: height T, Gauss-Legendre density."""

    T: float = 300.0
    nodes_per_unit: int = 32
    tail_bound: float = 0.0  # 0 -> computed from the integrand decay

    @property
    def panel_width(self) -> float:
        return 0.5

    @property
    def nodes_per_panel(self) -> int:
        return max(2, int(self.nodes_per_unit * self.panel_width))


@dataclass(frozen=True)
class SpectralRoot:
    t: float
    w: complex
    lam: float  # w(w-1) = -1/4 - t^2
    residual: float  # |a^w + c_w a^{1-w}|
    a: float


@dataclass(frozen=True)
class SpacingRow:
    t: float  # midpoint of the gap
    gap: float
    comparator: float  # pi / (log a + psi'(t))
    pi_over_log_t: float


@dataclass(frozen=True)
class GreensResult:
    lhs: complex
    rhs: complex
    rel_error: float
    T: float
    tail_bound: float
    quad_error: float


def _gl_grid(lo: float, hi: float, panel_width: float, nodes: int):
    """Composite Gauss-Legendre nodes/weights on [lo, hi]."""
    base_x, base_w = np.polynomial.legendre.leggauss(nodes)
    n_panels = max(1, int(math.ceil((hi - lo) / panel_width - 1e-12)))
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    xs = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    ws = (half[:, None] * base_w[None, :]).ravel()
    return xs, ws


# ---------------------------------------------------------------------------
# exotic roots and spacing
# ---------------------------------------------------------------------------

def _scattering_residual(t: float, a: float) -> float:
    """|a^w + c_w a^{1-w}| at w = 1/2 + it, by the original complex equation."""
    w = 0.5 + 1j * t
    c_w = np.exp(complex(specfun.xi_log(2j * t)) - complex(specfun.xi_log(1.0 + 2j * t)))
    return abs(a ** w + c_w * a ** (1.0 - w))


def _psi_exact(track: specfun.ArgTrack, t: float) -> float:
    """psi(t) recomputed from xi, branch-matched to the interpolated track.

    The track's linear interpolation carries O(step^2 * psi'') error, which
    the zeta fluctuations on Re s = 1 make as large as ~1e-2; root polishing
    needs the exact value on the track's continuous branch.
    """
    raw = complex(specfun.xi_log(1.0 + 2j * t)).imag
    approx = track.value(t)
    return raw + 2.0 * math.pi * round((approx - raw) / (2.0 * math.pi))


def _phase(track: specfun.ArgTrack, a: float, t: float) -> float:
    return t * math.log(a) + track.value(t)


def _phase_exact(track: specfun.ArgTrack, a: float, t: float) -> float:
    return t * math.log(a) + _psi_exact(track, t)


def root_count_prediction(a: float, t_min: float, t_max: float,
                          track: specfun.ArgTrack) -> int:
    """Number of cosine zeros predicted by the phase increment."""
    lo = _phase(track, a, t_min)
    hi = _phase(track, a, t_max)
    return int(math.floor((hi + math.pi / 2) / math.pi)
               - math.floor((lo + math.pi / 2) / math.pi))


def exotic_roots(a: float, t_min: float = 0.1, t_max: float = 50.0,
                 track: specfun.ArgTrack | None = None) -> list[SpectralRoot]:
    """All w = 1/2 + it in [t_min, t_max] with a^w + c_w a^{1-w} = 0.

    Roots are bracketed as sign changes of cos(t log a + psi(t)) on a dense
    grid, bisected to 1e-12 in t, and re-validated against the original
    complex equation.
    """
    if a <= 1.0:
        raise ValueError("exotic_roots requires a > 1")
    if a < 2.0:
        warnings.warn("a < 2: the truncation theory assumes a well above 1")
    if t_min < 0.1:
        raise ValueError("t_min must be >= 0.1")
    if track is None:
        track = specfun.psi_arg_xi(t_max + 1.0)

    ts = np.arange(t_min, t_max + 0.005, 0.005)
    psi = np.interp(ts, track.t_grid, track.psi_values)
    phi = np.cos(ts * math.log(a) + psi)
    roots: list[SpectralRoot] = []
    sign_change = np.nonzero(np.sign(phi[:-1]) * np.sign(phi[1:]) < 0)[0]
    for i in sign_change:
        # widen the bracket: interpolation error can push the exact root
        # slightly outside the grid cell that showed the sign change
        lo = max(t_min, float(ts[i]) - 0.01)
        hi = min(t_max, float(ts[i + 1]) + 0.01)
        flo = math.cos(_phase_exact(track, a, lo))
        if flo * math.cos(_phase_exact(track, a, hi)) > 0:
            continue  # interpolation artifact, no true crossing here
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = math.cos(_phase_exact(track, a, mid))
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
            if hi - lo < 1e-13:
                break
        t = 0.5 * (lo + hi)
        roots.append(SpectralRoot(
            t=t, w=0.5 + 1j * t, lam=-0.25 - t * t,
            residual=_scattering_residual(t, a), a=a))
    return roots


def spacing_statistics(roots: list[SpectralRoot],
                       track: specfun.ArgTrack) -> list[SpacingRow]:
    """Consecutive gaps against the cosine-phase comparator pi/(log a + psi').

    psi' is taken by a symmetric difference across the gap itself: the
    spacing law is exact for the average slope over the interval, while the
    pointwise derivative fluctuates with zeta'/zeta on Re s = 1 and misses
    individual gaps by as much as ~15%.  The comparator therefore doubles as
    a check that consecutive roots really are adjacent phase crossings
    (a missed root would show up as a factor ~2 disagreement).
    """
    if len(roots) < 3:
        raise ValueError("need at least 3 roots for spacing statistics")
    a = roots[0].a
    rows = []
    for r0, r1 in zip(roots, roots[1:]):
        mid = 0.5 * (r0.t + r1.t)
        gap = r1.t - r0.t
        half = 0.5 * gap
        psi_slope = (_psi_exact(track, mid + half)
                     - _psi_exact(track, mid - half)) / gap
        comp = math.pi / (math.log(a) + psi_slope)
        rows.append(SpacingRow(t=mid, gap=gap, comparator=comp,
                               pi_over_log_t=math.pi / math.log(mid)))
    return rows


# ---------------------------------------------------------------------------
# Eisenstein values on the critical line
# ---------------------------------------------------------------------------

def _line_values(z, taus: np.ndarray) -> np.ndarray:
    """E_{1/2+i tau}(z) on an array of heights.

    At a CM point the zeta_K factorization is used (stable at any height);
    elsewhere the incomplete-gamma continuation limits the height to ~40
    because of round-off cancellation.
    """
    w = lattice.as_point(z)
    D = eisenstein.match_cm_point(w)
    s = 0.5 + 1j * np.asarray(taus, dtype=float)
    if D is not None:
        return eisenstein.cm_line_values(D, s)
    if np.max(np.abs(taus)) > 40.0:
        raise ValueError(
            "contour heights above 40 need a CM evaluation point "
            "(double-precision continuation cancels beyond that height)")
    return np.array([eisenstein.eisenstein_sl2(w, sv).value for sv in s])


# ---------------------------------------------------------------------------
# Green's-function constant-term identity
# ---------------------------------------------------------------------------

def _greens_tail_bound(a: float, y: float, T: float, lam_w: complex) -> float:
    """Tail of the oscillatory contour integral beyond height T.

    Every term of (a^{1-s} + c_{1-s} a^s)(y^s + c_s y^{1-s}) oscillates with
    phase slope at least phi = log a - |log y| (the psi-dependent phases only
    add), so one integration by parts gives O(sqrt(a y)/(phi T^2)).
    """
    phi = math.log(a) - abs(math.log(y))
    amp = 2.0 * math.sqrt(a * y)
    denom = max(T * T - abs(lam_w), T * T / 2.0)
    if phi > 0.1:
        return 8.0 * amp / (math.pi * phi * denom)
    # non-oscillatory fallback: plain 1/tau^2 decay
    return amp / (math.pi * max(T - math.sqrt(abs(lam_w)), T / 2.0))


def _greens_integral(z, w: complex, a: float, T: float, nodes_per_panel: int) -> complex:
    taus, wts = _gl_grid(0.0, T, 0.5, nodes_per_panel)
    s = 0.5 + 1j * taus
    lam_s = -0.25 - taus * taus
    lam_w = w * (w - 1.0)
    E = _line_values(z, taus)
    c_1ms = np.exp(np.asarray(specfun.xi_log(-2j * taus), dtype=complex)
                   - np.asarray(specfun.xi_log(1.0 - 2j * taus), dtype=complex))
    numer = (a ** (1.0 - s) + c_1ms * a ** s) * E
    # integrand at -tau conjugates the numerator only (lam_s is even),
    # so the full [-T, T] integral folds to 2 Re of the numerator
    integrand = 2.0 * np.real(numer) / (lam_s - lam_w)
    return (1.0 / (4.0 * math.pi)) * complex(wts @ integrand)


def greens_constant_term_check(z, w, a: float,
                               cfg: ContourConfig | None = None) -> GreensResult:
    """Spectral-contour LHS vs closed-form RHS = a^{1-w} E_w(z)/(1-2w).

    LHS = 1/((0 - lam_w) <1,1>) + (1/4pi) int_{-T}^{T}
          (a^{1-s} + c_{1-s} a^s) E_s(z) / (lam_s - lam_w) d tau,  s = 1/2+i tau.
    """
    if cfg is None:
        cfg = ContourConfig()
    zz = lattice.as_point(z)
    w = complex(w)
    if not w.real > 0.5:
        raise ValueError("greens check needs Re w > 1/2")
    if abs(w.imag) < 1e-12 and 0.5 < w.real <= 1.0:
        raise ValueError("w in (1/2, 1] sits on the residual spectrum")
    if a < zz.imag:
        raise ValueError("cut-off height a must be >= Im z")
    lam_w = w * (w - 1.0)
    if abs(lam_w.imag) < 1e-12 and lam_w.real <= 0.0:
        raise ValueError("lam_w = w(w-1) must avoid (-inf, 0]")

    const = 1.0 / ((0.0 - lam_w) * INNER_ONE_ONE)
    integral = _greens_integral(zz, w, a, cfg.T, cfg.nodes_per_panel)
    half = _greens_integral(zz, w, a, cfg.T, max(2, cfg.nodes_per_panel // 2))
    quad_error = abs(integral - half)
    lhs = const + integral

    rhs = a ** (1.0 - w) * eisenstein.eisenstein_sl2(zz, w).value / (1.0 - 2.0 * w)
    tail = cfg.tail_bound if cfg.tail_bound > 0 else _greens_tail_bound(a, zz.imag, cfg.T, lam_w)
    rel = (abs(lhs - rhs) + tail) / abs(rhs)
    return GreensResult(lhs=lhs, rhs=rhs, rel_error=float(rel), T=cfg.T,
                        tail_bound=float(tail), quad_error=float(quad_error))


# ---------------------------------------------------------------------------
# J(w) and the repulsion experiment
# ---------------------------------------------------------------------------

class _LineCache:
    """|E_s(tau_D)|^2 on a fixed Gauss-Legendre contour grid, computed once."""

    def __init__(self, D: int, T: float, nodes_per_panel: int):
        self.D = D
        self.T = T
        self.taus, self.wts = _gl_grid(0.0, T, 0.5, nodes_per_panel)
        s = 0.5 + 1j * self.taus
        self.F = np.abs(eisenstein.cm_line_values(D, s)) ** 2

    def theta_sq(self, tau: float) -> float:
        """|thetaE_w|^2 at w = 1/2 + i tau (pairing against E at tau_D)."""
        val = eisenstein.cm_line_values(self.D, np.array([0.5 + 1j * tau]))[0]
        return float(abs(val) ** 2)


def _j_from_cache(cache: _LineCache, tau: float, window: float = 0.0625) -> float:
    """J(1/2 + i tau): removable singularity handled by window interpolation."""
    taus, wts, F = cache.taus, cache.wts, cache.F
    F_tau = cache.theta_sq(tau)
    denom = tau * tau - taus * taus
    with np.errstate(divide="ignore", invalid="ignore"):
        G = (F - F_tau) / denom
    mask = np.abs(taus - tau) < window
    if mask.any():
        # quadratic fit through the 3 nearest clean nodes on each side
        clean = np.nonzero(~mask)[0]
        left = clean[taus[clean] < tau][-3:]
        right = clean[taus[clean] > tau][:3]
        idx = np.concatenate([left, right])
        coeff = np.polyfit(taus[idx] - tau, G[idx], 2)
        G[mask] = np.polyval(coeff, taus[mask] - tau)
    integral = float(wts @ G)
    lam_w = -0.25 - tau * tau
    return 1.0 / (-lam_w * INNER_ONE_ONE) + integral / (2.0 * math.pi)


def J_function(w, D: int, cfg: ContourConfig | None = None) -> float:
    """J(w) = 1/(-lam_w <1,1>) + (1/2 pi) int_0^T (F(tau') - F(tau)) d tau'
    / (tau^2 - tau'^2), with F = |E_s(tau_D)|^2 on the critical line."""
    if cfg is None:
        cfg = ContourConfig(T=120.0)
    w = complex(w)
    if abs(w.real - 0.5) > 1e-12 or w.imag <= 0.5:
        raise ValueError("J_function needs w = 1/2 + i tau with tau > 0.5")
    cache = _LineCache(D, cfg.T, cfg.nodes_per_panel)
    return _j_from_cache(cache, w.imag)


def _hardy_rotation_zeta(t: float) -> float:
    """Z(t) = e^{i theta(t)} zeta(1/2+it), real for real t."""
    theta = (complex(specfun.log_gamma(0.25 + 0.5j * t)).imag
             - 0.5 * t * math.log(math.pi))
    return float((np.exp(1j * theta) * complex(specfun.riemann_zeta(0.5 + 1j * t))).real)


def _hardy_rotation_L(t: float, D: int) -> float:
    """Rotated L(1/2+it, chi_D) for odd real chi (root number +1), real-valued."""
    q = abs(D)
    theta = (complex(specfun.log_gamma(0.75 + 0.5j * t)).imag
             + 0.5 * t * math.log(q / math.pi))
    return float((np.exp(1j * theta) * complex(specfun.dirichlet_L(0.5 + 1j * t, D))).real)


def _bisect_real(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    flo = f(lo)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def _scan_zeros(f, lo: float, hi: float, step: float = 0.02) -> list[float]:
    ts = np.arange(lo, hi + step, step)
    vals = np.array([f(t) for t in ts])
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        out.append(_bisect_real(f, float(ts[i]), float(ts[i + 1])))
    return out


def zeta_k_line_zeros(D: int, t_lo: float, t_hi: float) -> list[float]:
    """Ordinates of zeros of zeta_K(1/2+it) = zeta L(., chi_D), factor-wise.

    Each factor is rotated by its Hardy phase so zeros appear as sign
    changes of a real function.
    """
    zeros = _scan_zeros(_hardy_rotation_zeta, t_lo, t_hi)
    zeros += _scan_zeros(lambda t: _hardy_rotation_L(t, D), t_lo, t_hi)
    return sorted(zeros)


@dataclass(frozen=True)
class RepulsionReport:
    D: int
    a: float
    intervals: list  # (t_left, t_right, sign_changes, root or None)
    zk_zeros: list
    unique_per_interval: bool


def repulsion_experiment(D: int, a: float, tau_lo: float, tau_hi: float,
                         cfg: ContourConfig | None = None,
                         track: specfun.ArgTrack | None = None) -> RepulsionReport:
    """Eigenvalue condition cos(Theta) J(w) = sin(Theta) |thetaE_w|^2/(2 tau).

    Between consecutive zeros of cos(Theta), Theta = tau log a + psi(tau),
    the difference W = cos(Theta) J - sin(Theta) |thetaE|^2/(2 tau) should
    change sign exactly once.  Also recovers the on-line zeros of zeta_K for
    reference.
    """
    if cfg is None:
        cfg = ContourConfig(T=120.0)
    if track is None:
        track = specfun.psi_arg_xi(tau_hi + 1.0)
    cache = _LineCache(D, cfg.T, cfg.nodes_per_panel)

    def theta(t: float) -> float:
        return _phase(track, a, t)

    cos_zeros = _scan_zeros(lambda t: math.cos(theta(t)), tau_lo, tau_hi, step=0.01)

    def W(t: float) -> float:
        return (math.cos(theta(t)) * _j_from_cache(cache, t)
                - math.sin(theta(t)) * cache.theta_sq(t) / (2.0 * t))

    intervals = []
    all_unique = True
    for lo, hi in zip(cos_zeros, cos_zeros[1:]):
        # closed interval: at the cosine zeros W = -/+ sin(Theta) |thetaE|^2/(2t)
        # alternates sign exactly, so a crossing always exists even when a
        # zeta_K zero pins it arbitrarily close to an endpoint
        grid = np.linspace(lo, hi, 41)
        vals = np.array([W(t) for t in grid])
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        root = None
        if len(flips) >= 1:
            i = flips[0]
            root = _bisect_real(W, float(grid[i]), float(grid[i + 1]), tol=1e-8)
        if len(flips) != 1:
            all_unique = False
        intervals.append((lo, hi, int(len(flips)), root))

    zk = zeta_k_line_zeros(D, tau_lo, tau_hi)
    return RepulsionReport(D=D, a=a, intervals=intervals, zk_zeros=zk,
                           unique_per_interval=all_unique)
