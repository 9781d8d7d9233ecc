"""Epstein zeta continuation: closed-form oracles, functional equation,
residues, Laurent data."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetalab import epstein, lattice, specfun
from zetalab.acceptance import brute_force_epstein

CATALAN = 0.9159655941772190


def det1(Q):
    return lattice.normalize_det(np.asarray(Q, dtype=float))[0]


def test_z2_identity_closed_form():
    # Z_2(I, s) = 4 zeta(s) L(s, chi_{-4})
    val = epstein.epstein_zeta(np.eye(2), 2.0).value
    target = 4.0 * (math.pi ** 2 / 6.0) * CATALAN
    assert abs(val - target) < 1e-12
    s = 1.7 + 0.3j
    val = epstein.epstein_zeta(np.eye(2), s).value
    target = 4.0 * complex(specfun.riemann_zeta(s)) * complex(specfun.dirichlet_L(s, -4))
    assert abs(val - target) / abs(target) < 1e-10


def test_z4_identity_closed_form():
    # Z_4(I, s) = 8 (1 - 4^{1-s}) zeta(s) zeta(s-1)
    s = 2.5
    val = epstein.epstein_zeta(np.eye(4), s).value
    target = (8.0 * (1.0 - 4.0 ** (1.0 - s))
              * complex(specfun.riemann_zeta(s)) * complex(specfun.riemann_zeta(s - 1.0)))
    assert abs(val - target) / abs(target) < 1e-9


def test_brute_force_oracle():
    rng = np.random.default_rng(2)
    for r in (2, 3):
        B = rng.normal(size=(r, r)) * 0.3
        Q = det1(np.eye(r) + B @ B.T)
        s = r / 2.0 + 1.5
        oracle = brute_force_epstein(Q, s)
        val = epstein.epstein_zeta(Q, s).value
        assert abs(val - oracle) / abs(oracle) < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
def test_homogeneity(c, b1, b2):
    B = np.array([[b1, b2], [b2 / 2, -b1 / 3]])
    Q = np.eye(2) + B @ B.T
    s = 1.4 + 0.7j
    lhs = epstein.epstein_zeta(c * Q, s).value
    rhs = c ** (-s) * epstein.epstein_zeta(Q, s).value
    assert abs(lhs - rhs) / abs(rhs) < 1e-9


def test_functional_equation():
    rng = np.random.default_rng(4)
    cases = [(np.eye(2), 0.3 + 2.0j), (np.eye(3), 0.4 - 2.0j), (np.eye(4), 2.5 + 0.0j)]
    for r in (2, 3):
        B = rng.normal(size=(r, r)) * 0.25
        cases.append((det1(np.eye(r) + B @ B.T), 0.8 + 1.0j))
    for Q, s in cases:
        assert epstein.check_functional_equation(det1(Q), s) < 1e-9


def test_conjugation_symmetry():
    Q = det1(np.array([[2.0, 0.3], [0.3, 1.0]]))
    s = 1.3 + 2.1j
    a = epstein.epstein_zeta(Q, s).value
    b = epstein.epstein_zeta(Q, s.conjugate()).value
    assert abs(b - a.conjugate()) < 1e-12 * abs(a)


def test_value_at_zero_limit():
    # Z_r(Q, s) -> -1 as s -> 0, independent of Q
    exp = epstein.epstein_laurent(np.eye(2), 0.0, max_order=0)
    assert abs(exp.residue) < 1e-8
    assert abs(exp.coefficient(0) + 1.0) < 1e-8
    exp3 = epstein.epstein_laurent(det1(np.diag([2.0, 1.0, 1.0])), 0.0, max_order=0)
    assert abs(exp3.coefficient(0) + 1.0) < 1e-8


def test_residue_values():
    for r in (2, 3, 4):
        target = math.pi ** (r / 2.0) / math.gamma(r / 2.0)
        assert abs(epstein.epstein_residue(np.eye(r)) - target) < 1e-7
        rng = np.random.default_rng(r)
        B = rng.normal(size=(r, r)) * 0.25
        Q = det1(np.eye(r) + B @ B.T)
        assert abs(epstein.epstein_residue(Q) - target) < 1e-7


def test_laurent_reconstruction():
    Q = lattice.gram_of_point(0.2 + 1.1j)
    center = 1.0
    exp = epstein.epstein_laurent(Q, center, max_order=3)
    assert abs(exp.residue - math.pi) < 1e-9
    for s in (center + 0.04, center + 0.03j):
        direct = epstein.epstein_zeta(Q, s).value
        assert abs(exp.evaluate(s) - direct) / abs(direct) < 1e-7


def test_laurent_analytic_center():
    exp = epstein.epstein_laurent(np.eye(2), 0.75, max_order=1)
    assert abs(exp.residue) < 1e-10
    direct = epstein.epstein_zeta(np.eye(2), 0.75).value
    assert abs(exp.coefficient(0) - direct) < 1e-9


def test_pole_guard():
    with pytest.raises(epstein.EpsteinPoleError):
        epstein.epstein_zeta(np.eye(2), 1.0)
    with pytest.raises(epstein.EpsteinPoleError):
        epstein.epstein_zeta(np.eye(3), 1.5 + 1e-9j)
    with pytest.raises(epstein.EpsteinPoleError):
        epstein.epstein_zeta(np.eye(2), 0.0)


def test_error_bound_honesty():
    Q = det1(np.array([[1.5, 0.2], [0.2, 1.0]]))
    s = 1.3 + 4.0j
    loose = epstein.epstein_zeta(Q, s, tol=1e-6)
    tight = epstein.epstein_zeta(Q, s, tol=1e-13)
    assert abs(loose.value - tight.value) <= loose.error_bound + 1e-14
