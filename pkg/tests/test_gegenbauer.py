"""Gegenbauer machinery against independent quadrature and classical families."""

from __future__ import annotations

from fractions import Fraction
from math import cos, pi

import mpmath
import pytest

from stiffkit.exact import Surd
from stiffkit.gegenbauer import (
    Polynomial,
    a0,
    gegenbauer_poly,
    inner,
    moment,
    nodes,
)

mpmath.mp.dps = 40


def _moment_quad(d: int, k: int) -> mpmath.mpf:
    w = lambda t: (1 - t**2) ** (mpmath.mpf(d) / 2 - 1)
    z = mpmath.quad(w, [-1, 1])
    return mpmath.quad(lambda t: t**k * w(t), [-1, 1]) / z


@pytest.mark.parametrize("d", [1, 2, 3, 4, 7, 8])
def test_moments_match_quadrature(d):
    for k in range(0, 9):
        exact = moment(d, k)
        oracle = _moment_quad(d, k)
        assert abs(float(exact) - float(oracle)) < 1e-12


def test_moment_frozen_values():
    assert moment(2, 2) == Fraction(1, 3)
    assert moment(1, 2) == Fraction(1, 2)
    assert moment(3, 2) == Fraction(1, 4)
    assert moment(2, 4) == Fraction(1, 5)
    assert moment(7, 2) == Fraction(1, 8)
    assert moment(4, 3) == 0
    assert moment(1, 0) == 1


@pytest.mark.parametrize("d", [1, 2, 3, 7])
def test_low_degree_closed_forms(d):
    assert gegenbauer_poly(d, 0) == Polynomial([1])
    assert gegenbauer_poly(d, 1) == Polynomial([0, 1])
    # P_2 = ((d+1) t^2 - 1)/d
    assert gegenbauer_poly(d, 2) == Polynomial([Fraction(-1, d), 0, Fraction(d + 1, d)])


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
def test_orthogonality_and_normalization(d):
    polys = [gegenbauer_poly(d, n) for n in range(7)]
    for n, p in enumerate(polys):
        assert p(1) == 1
        assert p.degree == n
        for q in polys[:n]:
            assert inner(p, q, d) == 0
        assert inner(p, p, d) > 0


def test_chebyshev_special_case():
    # d = 1 gives Chebyshev polynomials of the first kind
    for n in range(1, 8):
        p = gegenbauer_poly(1, n)
        for x in [-0.9, -0.3, 0.1, 0.77]:
            assert abs(p.eval_float(x) - cos(n * mpmath.acos(x))) < 1e-12


def test_legendre_special_case():
    # d = 2 gives Legendre polynomials
    for n in range(1, 8):
        p = gegenbauer_poly(2, n)
        for x in [-0.8, -0.25, 0.4, 0.95]:
            assert abs(p.eval_float(x) - float(mpmath.legendre(n, x))) < 1e-12


@pytest.mark.parametrize("d", [3, 4, 7])
def test_general_gegenbauer_special_case(d):
    lam = mpmath.mpf(d - 1) / 2
    for n in range(1, 7):
        p = gegenbauer_poly(d, n)
        norm = mpmath.gegenbauer(n, lam, 1)
        for x in [-0.6, 0.15, 0.83]:
            oracle = mpmath.gegenbauer(n, lam, x) / norm
            assert abs(p.eval_float(x) - float(oracle)) < 1e-12


def test_a0_is_mean_value():
    q = Polynomial([Fraction(2), Fraction(-1), Fraction(0), Fraction(5), Fraction(1)])
    for d in (2, 4):
        oracle = sum(Fraction(c) * moment(d, k) for k, c in enumerate(q.coeffs))
        assert a0(q, d) == oracle
    assert a0(Polynomial([0, 1]), 3) == 0
    assert a0(Polynomial([1]), 5) == 1


def test_polynomial_ops():
    p = Polynomial([1, 2])          # 1 + 2t
    q = Polynomial([0, 0, 3])       # 3t^2
    assert (p * q).coeffs == (Fraction(0), Fraction(0), Fraction(3), Fraction(6))
    assert (p + q).degree == 2
    assert (p - p).degree == 0 and (p - p)(5) == 0
    assert p(Fraction(1, 2)) == 2
    assert q.derivative() == Polynomial([0, 6])
    assert Polynomial.monomial(3)(2) == 8


def test_nodes_exact_small_m():
    ns = nodes(4, 1)
    assert ns.exact and ns.nodes == (Surd(0),) and ns.weights == (Fraction(1),)

    ns = nodes(4, 2)
    assert ns.exact
    a = Surd.sqrt_of(Fraction(1, 5))
    assert ns.nodes == (-a, a)
    assert ns.weights == (Fraction(1, 2), Fraction(1, 2))

    ns = nodes(7, 2)
    assert ns.nodes == (-Surd.sqrt_of(Fraction(1, 8)), Surd.sqrt_of(Fraction(1, 8)))

    ns = nodes(2, 3)
    assert ns.exact
    a = Surd.sqrt_of(Fraction(3, 5))
    assert ns.nodes == (-a, Surd(0), a)
    assert sum(ns.weights) == 1
    # weights integrate t^2 and t^4 correctly (degree-5 exactness)
    for k in (2, 4):
        assert sum(w * (t * t).as_fraction() ** (k // 2)
                   for w, t in zip(ns.weights, ns.nodes)) == moment(2, k)


@pytest.mark.parametrize("d,m", [(1, 4), (1, 6), (2, 4), (2, 5), (3, 4), (7, 5)])
def test_nodes_float_are_roots_with_good_weights(d, m):
    ns = nodes(d, m)
    assert not ns.exact
    p = gegenbauer_poly(d, m)
    ts = ns.nodes_float()
    assert len(ts) == m and sorted(ts) == list(ts)
    for t in ts:
        assert abs(p.eval_float(t)) < 1e-11
    if d == 1:
        # closed form cos((2i-1)pi/2m), descending i
        expected = sorted(cos((2 * i - 1) * pi / (2 * m)) for i in range(1, m + 1))
        for got, want in zip(ts, expected):
            assert abs(got - want) < 1e-14
    # quadrature with these weights reproduces moments up to degree 2m-1
    ws = ns.weights_float()
    assert abs(sum(ws) - 1) < 1e-12
    for k in range(1, 2 * m):
        approx = sum(w * t**k for w, t in zip(ws, ts))
        assert abs(approx - float(moment(d, k))) < 1e-11


def test_float_roots_certified_by_exact_signs():
    # exact sign changes straddle each reported float root
    d, m = 3, 5
    p = gegenbauer_poly(d, m)
    for t in nodes(d, m).nodes_float():
        lo, hi = Fraction(t - 1e-13), Fraction(t + 1e-13)
        assert (p(lo) < 0) != (p(hi) < 0)
