"""Gegenbauer polynomials for the sphere S^d, normalized to P_n(1) = 1.

Everything is exact over Q: moments of the projection weight
w_d(t) = gamma_d * (1 - t^2)^(d/2 - 1) on [-1, 1] satisfy a two-step
recurrence, the polynomials come from Gram-Schmidt against those moments,
and quadrature weights are mean values of Lagrange fundamental polynomials.
Nodes are exact surds through degree 3; higher degrees fall back to floats
certified by exact sign changes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import cos, pi
from typing import Sequence, Union

import numpy as np

from .exact import Scalar, Surd

CoeffLike = Union[int, Fraction]


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with exact rational coefficients, ascending order."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence[CoeffLike]) -> None:
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def monomial(k: int, coeff: CoeffLike = 1) -> "Polynomial":
        return Polynomial([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: CoeffLike) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x):
        """Horner evaluation on a float or ndarray."""
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0])
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: CoeffLike) -> "Polynomial":
        return Polynomial([c / Fraction(scalar) for c in self.coeffs])

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0 and self.degree > 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{k}")
        return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def moment(d: int, k: int) -> Fraction:
    """k-th moment of the normalized weight w_d on [-1, 1].

    mu_0 = 1, odd moments vanish, and integration by parts gives
    mu_k = mu_{k-2} * (k-1)/(k+d-1).
    """
    if d < 1:
        raise ValueError("sphere dimension d must be >= 1")
    if k < 0:
        raise ValueError("moment order must be >= 0")
    if k == 0:
        return Fraction(1)
    if k % 2 == 1:
        return Fraction(0)
    return moment(d, k - 2) * Fraction(k - 1, k + d - 1)


def inner(p: Polynomial, q: Polynomial, d: int) -> Fraction:
    """Inner product of two polynomials against the weight w_d."""
    total = Fraction(0)
    for i, a in enumerate(p.coeffs):
        if not a:
            continue
        for j, b in enumerate(q.coeffs):
            if b:
                total += a * b * moment(d, i + j)
    return total


def a0(q: Polynomial, d: int) -> Fraction:
    """Mean of q over S^d (the degree-0 Gegenbauer coefficient)."""
    return inner(q, Polynomial([1]), d)


@lru_cache(maxsize=None)
def gegenbauer_poly(d: int, n: int) -> Polynomial:
    """Degree-n Gegenbauer polynomial for S^d with P_n(1) = 1."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n == 0:
        return Polynomial([1])
    q = Polynomial.monomial(n)
    for j in range(n):
        pj = gegenbauer_poly(d, j)
        coef = inner(q, pj, d) / inner(pj, pj, d)
        if coef:
            q = q - pj * coef
    at_one = q(1)
    if at_one == 0:
        raise ArithmeticError("orthogonal polynomial vanishes at 1")
    return q / at_one


@dataclass(frozen=True)
class NodeSet:
    """Roots of a Gegenbauer polynomial with their quadrature weights.

    nodes are ascending; exact means the nodes are Surd values (weights are
    then exact Fractions too).  Float nodes are accurate to 1e-14, certified
    by exact sign changes of the polynomial.
    """

    d: int
    m: int
    exact: bool
    nodes: tuple
    weights: tuple

    def nodes_float(self) -> tuple[float, ...]:
        return tuple(float(t) for t in self.nodes)

    def weights_float(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.weights)


def nodes(d: int, m: int) -> NodeSet:
    """Roots of P_m^(d) and the weights a_0(phi_i) of their Lagrange basis.

    m <= 3 has surd roots for every d: {0}, {+-1/sqrt(d+1)}, and
    {0, +-sqrt(3/(d+3))}.  Beyond that the roots are not single surds in
    general and are isolated by bisection with exact sign evaluation.
    """
    if m < 1:
        raise ValueError("node count m must be >= 1")
    if m == 1:
        return NodeSet(d, 1, True, (Surd(0),), (Fraction(1),))
    if m == 2:
        a = Surd.sqrt_of(Fraction(1, d + 1))
        return NodeSet(d, 2, True, (-a, a), (Fraction(1, 2), Fraction(1, 2)))
    if m == 3:
        asq = Fraction(3, d + 3)
        a = Surd.sqrt_of(asq)
        wside = moment(d, 2) / (2 * asq)
        wmid = 1 - 2 * wside
        return NodeSet(d, 3, True, (-a, Surd(0), a), (wside, wmid, wside))
    roots = _float_roots(d, m)
    weights = _float_weights(d, roots)
    return NodeSet(d, m, False, tuple(roots), tuple(weights))


def _float_roots(d: int, m: int) -> list[float]:
    """All m roots of P_m^(d) to 1e-14 by interlacing plus exact bisection."""
    if d == 1:
        # Chebyshev case: roots are cos((2i-1)pi/2m), exact formula
        return sorted(cos((2 * i - 1) * pi / (2 * m)) for i in range(1, m + 1))
    if m <= 3:
        return list(nodes(d, m).nodes_float())
    pm = gegenbauer_poly(d, m)
    inner_pts = _float_roots(d, m - 1)
    brackets = [-1.0] + inner_pts + [1.0]
    out = []
    for lo, hi in zip(brackets, brackets[1:]):
        out.append(_bisect_root(pm, Fraction(lo), Fraction(hi)))
    return out


def _bisect_root(p: Polynomial, lo: Fraction, hi: Fraction) -> float:
    """Unique root of p in (lo, hi); signs at the ends must differ."""
    flo = p(lo)
    fhi = p(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    assert (flo < 0) != (fhi < 0), "bracket does not straddle a sign change"
    for _ in range(60):
        mid = (lo + hi) / 2
        fmid = p(mid)
        if fmid == 0:
            return float(mid)
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if float(hi - lo) < 1e-15:
            break
    return float((lo + hi) / 2)


def _float_weights(d: int, roots: list[float]) -> list[float]:
    """a_0 of each Lagrange fundamental polynomial on the given roots."""
    mus = [float(moment(d, k)) for k in range(len(roots))]
    out = []
    for i, r in enumerate(roots):
        num = np.array([1.0])  # product of (t - r_j), ascending coefficients
        denom = 1.0
        for j, rj in enumerate(roots):
            if j == i:
                continue
            num = np.concatenate(([0.0], num)) + np.concatenate((-rj * num, [0.0]))
            denom *= r - rj
        out.append(sum(c * mu for c, mu in zip(num, mus)) / denom)
    return out
