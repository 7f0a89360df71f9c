"""Design strength and spectra, cross-checked against a naive pair loop."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from stiffkit.codes import (
    LatticeCode,
    LatticePoint,
    cross_polytope,
    cube,
    demicube,
    e8_roots,
    ngon,
    polytope_2_41,
)
from stiffkit.design import (
    constancy_check,
    halfcount_3design,
    index_set,
    pair_sum,
    pair_values,
    spectrum,
)
from stiffkit.exact import Surd
from stiffkit.gegenbauer import Polynomial, a0, gegenbauer_poly


def _pair_sum_naive(code: LatticeCode, n: int) -> Fraction:
    """O(N^2) reference: evaluate P_n at every ordered pair separately."""
    p = gegenbauer_poly(code.sphere_dim, n)
    total = Fraction(0)
    for x in code.points:
        for y in code.points:
            dot = Fraction(sum(a * b for a, b in zip(x, y)), code.norm_sq)
            total += p(dot)
    return total


@pytest.mark.parametrize("code", [cross_polytope(3), cube(3), demicube(4), demicube(5)])
def test_pair_sum_matches_naive_loop(code):
    for n in range(1, 6):
        assert pair_sum(code, n) == _pair_sum_naive(code, n)


def test_pair_values_bookkeeping():
    c = cube(3)
    vals = pair_values(c)
    assert sum(m for _, m in vals) == c.size**2
    assert [t for t, _ in vals] == sorted(t for t, _ in vals)
    as_dict = dict(vals)
    assert as_dict[Fraction(1)] == 8  # diagonal
    assert as_dict[Fraction(-1)] == 8


def test_strengths_of_standard_codes():
    assert index_set(cross_polytope(4), 5).strength == 3
    assert index_set(cube(3), 5).strength == 3
    assert index_set(demicube(3), 4).strength == 2
    for d in range(4, 9):
        assert index_set(demicube(d), 4).strength == 3
    assert index_set(e8_roots(), 8).strength == 7


def test_2_41_index_set():
    rep = index_set(polytope_2_41(), 10)
    assert sorted(rep.index_set) == [1, 2, 3, 4, 5, 6, 7, 9, 10]
    assert rep.strength == 7
    assert rep.exact
    assert rep.is_design(7) and not rep.is_design(8)
    assert pair_sum(polytope_2_41(), 8) == Fraction(388800, 143)


def test_float_design_check_ngon():
    for n in (4, 5, 6, 8):
        rep = index_set(ngon(n), n + 1)
        assert not rep.exact
        assert rep.strength == n - 1


def test_spectrum_exact():
    rep = spectrum(LatticePoint((1, 0, 0), 1), cube(3))
    assert rep.exact and rep.distinct_count == 2
    a = Surd.sqrt_of(Fraction(1, 3))
    assert rep.entries == ((-a, 4), (a, 4))
    assert rep.total == 8
    # E8 root against the 2_41 polytope: the five dots of the dual relation
    rep = spectrum(LatticePoint((2, 2, 0, 0, 0, 0, 0, 0), 8), polytope_2_41())
    b = Surd.sqrt_of(Fraction(1, 8))
    c = Surd.sqrt_of(Fraction(1, 2))
    assert rep.values() == (-c, -b, Surd(0), b, c)
    assert rep.distinct_count == 5


def test_spectrum_float_merging():
    rep = spectrum(np.array([0.0, 1.0]), ngon(4))
    assert not rep.exact
    assert rep.distinct_count == 3
    assert rep.total == 4
    counts = dict((round(v, 9), m) for v, m in rep.entries)
    assert counts == {-1.0: 1, 0.0: 2, 1.0: 1}


def test_spectrum_json():
    rep = spectrum(LatticePoint((1, 0, 0), 1), cross_polytope(3))
    d = rep.to_json_dict()
    assert d["exact"] and len(d["entries"]) == 3
    assert {e["value"] for e in d["entries"]} == {"-1", "0", "1"}


def test_halfcount_criterion():
    ok, _ = halfcount_3design(demicube(5))
    assert ok
    ok, _ = halfcount_3design(cube(4))
    assert ok
    # half of the cube with a fixed first coordinate: fails at I = {0}
    bad = LatticeCode("slab", 3, 3, tuple(p for p in cube(3).points if p[0] == 1))
    ok, witness = halfcount_3design(bad)
    assert not ok and witness == (0,)
    # odd size fails immediately
    odd = LatticeCode("odd", 3, 3, cube(3).points[:3])
    ok, witness = halfcount_3design(odd)
    assert not ok and witness == ()
    with pytest.raises(ValueError):
        halfcount_3design(cross_polytope(3))


def test_halfcount_agrees_with_pair_sums_on_random_subsets():
    rng = np.random.default_rng(3)
    full = cube(4).points
    for _ in range(20):
        k = int(rng.integers(2, 9)) * 2
        idx = rng.choice(len(full), size=k, replace=False)
        pts = tuple(sorted(full[i] for i in idx))
        code = LatticeCode("sub", 4, 4, pts)
        by_halfcount, _ = halfcount_3design(code)
        by_sums = index_set(code, 3).strength >= 3
        assert by_halfcount == by_sums


def test_constancy_check_design_invariance():
    # degree <= 3 polynomial potentials are constant on a 3-design
    q = Polynomial([Fraction(1), Fraction(-2), Fraction(3), Fraction(5)])
    dev = constancy_check(demicube(5), q, trials=50, seed=7)
    assert dev < 1e-12
    dev = constancy_check(cross_polytope(4), q, trials=50, seed=7)
    assert dev < 1e-12
    # degree 4 breaks constancy on a strength-3 code
    q4 = Polynomial([0, 0, 0, 0, 1])
    dev = constancy_check(cube(3), q4, trials=50, seed=7)
    assert dev > 1e-3


def test_a0_times_n_is_the_constant():
    # the constant value of a degree-<=strength potential equals a_0(q) * N
    q = Polynomial([Fraction(2), Fraction(1), Fraction(-1), Fraction(4)])
    code = demicube(6)
    d = code.sphere_dim
    y = np.array([1.0] + [0.0] * d)
    vals = q.eval_float(code.unit_array() @ y)
    assert abs(vals.sum() - float(a0(q, d)) * code.size) < 1e-10
