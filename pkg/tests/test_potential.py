"""Potential kernels, multistart minimization, and hypothesis checks."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from stiffkit.codes import (
    LatticePoint,
    cross_polytope,
    cube,
    demicube,
    e8_roots,
    polytope_2_41,
)
from stiffkit.exact import Surd
from stiffkit.gegenbauer import Polynomial
from stiffkit.potential import (
    Kernel,
    SingularEvaluation,
    minimize_potential,
    potential_eval,
    skip_one_add_two_check,
    verify_universal_minimum,
)
from stiffkit.stiffness import dual_search

NODES_241 = (
    -Surd.sqrt_of(Fraction(1, 2)),
    -Surd.sqrt_of(Fraction(1, 8)),
    Surd(0),
    Surd.sqrt_of(Fraction(1, 8)),
    Surd.sqrt_of(Fraction(1, 2)),
)


class TestKernel:
    def test_parse(self):
        k = Kernel.parse("riesz:2")
        assert k.family == "riesz" and k.param == 2
        assert Kernel.parse("gauss:1").family == "gauss"
        assert Kernel.parse("log").family == "log"

    def test_parse_rejects(self):
        with pytest.raises(ValueError):
            Kernel.parse("log:3")
        with pytest.raises((ValueError, ZeroDivisionError)):
            Kernel.parse("riesz:")
        with pytest.raises(ValueError):
            Kernel.parse("coulomb:1")
        with pytest.raises(ValueError):
            Kernel("riesz", Fraction(-1))

    def test_riesz_formula(self):
        k = Kernel.parse("riesz:2")
        # g(t) = |x-y|^(-2) = 1/(2-2t)
        for t in (-0.5, 0.0, 0.5):
            assert math.isclose(float(k.g(t)), 1.0 / (2 - 2 * t))

    def test_gauss_formula(self):
        k = Kernel.parse("gauss:3")
        for t in (-0.5, 0.0, 0.9):
            assert math.isclose(float(k.g(t)), math.exp(-3 * (2 - 2 * t)))

    def test_log_formula(self):
        k = Kernel.parse("log")
        assert math.isclose(float(k.g(0.0)), -math.log(2.0) + 2.0)

    def test_gradient_matches_finite_differences(self):
        kernels = [Kernel.parse("riesz:1"), Kernel.parse("riesz:4"),
                   Kernel.parse("gauss:2"), Kernel.parse("log"),
                   Kernel("poly", poly=Polynomial([1, Fraction(1, 2), 0, 3]))]
        h = 1e-6
        for k in kernels:
            for t in np.linspace(-0.9, 0.9, 13):
                num = (float(k.g(t + h)) - float(k.g(t - h))) / (2 * h)
                assert math.isclose(float(k.dg(t)), num, rel_tol=1e-5, abs_tol=1e-8), k.name

    def test_kernels_increasing_in_t(self):
        # all families reward proximity: dg > 0 on (-1, 1)
        for spec in ("riesz:1", "riesz:2", "gauss:1", "log"):
            k = Kernel.parse(spec)
            assert np.all(k.dg(np.linspace(-0.99, 0.99, 50)) > 0), spec


class TestPotentialEval:
    def test_demicube5_closed_form(self):
        # 16 points split 8/8 on the two dot values +-1/sqrt(5)
        val = potential_eval(np.array([1.0, 0, 0, 0, 0]), demicube(5),
                             Kernel.parse("riesz:2"))
        s5 = 5 ** 0.5
        expected = 8 / (2 - 2 / s5) + 8 / (2 + 2 / s5)
        assert math.isclose(val, expected, rel_tol=1e-14)
        assert math.isclose(val, 10.0, rel_tol=1e-14)

    def test_gauss_at_code_point(self):
        val = potential_eval(np.array([1.0, 0, 0]), cross_polytope(3),
                             Kernel.parse("gauss:1"))
        expected = 1.0 + math.exp(-4.0) + 4 * math.exp(-2.0)
        assert math.isclose(val, expected, rel_tol=1e-14)

    def test_singular_at_code_point(self):
        with pytest.raises(SingularEvaluation):
            potential_eval(np.array([1.0, 0, 0]), cross_polytope(3),
                           Kernel.parse("riesz:2"))
        with pytest.raises(SingularEvaluation):
            potential_eval(np.array([1.0, 0, 0]), cross_polytope(3),
                           Kernel.parse("log"))

    def test_antipodal_symmetry(self):
        k = Kernel.parse("gauss:1")
        z = np.array([0.3, -0.5, 0.4, 0.2])
        z /= np.linalg.norm(z)
        a = potential_eval(z, cross_polytope(4), k)
        b = potential_eval(-z, cross_polytope(4), k)
        assert math.isclose(a, b, rel_tol=1e-13)

    def test_design_invariance_low_degree_poly(self):
        # a cubic potential is constant over the sphere for any 3-design
        k = Kernel("poly", poly=Polynomial([2, 1, Fraction(1, 3), Fraction(1, 7)]))
        rng = np.random.default_rng(5)
        vals = []
        for _ in range(8):
            z = rng.normal(size=4)
            vals.append(potential_eval(z / np.linalg.norm(z), cross_polytope(4), k))
        assert max(vals) - min(vals) < 1e-12

    def test_rejects_non_unit_probe(self):
        with pytest.raises(ValueError):
            potential_eval(np.array([1.0, 1.0, 0.0]), cross_polytope(3),
                           Kernel.parse("gauss:1"))


class TestMinimize:
    def test_demicube5_riesz2(self):
        rep = minimize_potential(demicube(5), Kernel.parse("riesz:2"),
                                 restarts=120, seed=3,
                                 dual=dual_search(demicube(5), 2).unit_points())
        assert math.isclose(rep.global_min_value, 10.0, rel_tol=1e-12)
        assert rep.dual_match
        assert rep.gap >= -1e-8
        # ten argmin clusters: the signed basis vectors
        assert len(rep.argmin_cluster) == 10
        for p in rep.argmin_cluster:
            assert abs(np.abs(p).max() - 1.0) < 1e-6

    def test_report_json(self):
        rep = minimize_potential(cross_polytope(3), Kernel.parse("gauss:1"),
                                 restarts=20, seed=0)
        blob = rep.to_json_dict()
        for key in ("code", "kernel", "restarts", "seed", "global_min_value",
                    "argmin_cluster", "n_converged", "gradient_tol"):
            assert key in blob

    def test_determinism(self):
        a = minimize_potential(cross_polytope(3), Kernel.parse("riesz:1"),
                               restarts=30, seed=11)
        b = minimize_potential(cross_polytope(3), Kernel.parse("riesz:1"),
                               restarts=30, seed=11)
        assert a.global_min_value == b.global_min_value
        assert np.array_equal(a.argmin_cluster, b.argmin_cluster)


class TestUniversalMinimum:
    def test_cross4_with_true_dual(self):
        dual = dual_search(cross_polytope(4), 2).unit_points()
        reps = verify_universal_minimum(
            cross_polytope(4), 2, dual,
            [Kernel.parse("riesz:1"), Kernel.parse("gauss:1")],
            restarts=60, seed=0)
        for rep in reps:
            assert rep.passed, rep.kernel
            assert rep.dual_spread_rel <= 1e-9
            assert rep.gap >= -1e-8
            assert rep.equality_rel <= 1e-9

    def test_wrong_dual_fails(self):
        wrong = np.array([[1.0, 1.0, 0.0, 0.0]]) / 2 ** 0.5
        reps = verify_universal_minimum(
            cross_polytope(4), 2, wrong, [Kernel.parse("riesz:1")],
            restarts=40, seed=0)
        assert not reps[0].passed
        assert reps[0].gap < -1e-6


class TestSkipOneAddTwo:
    def test_241_hypotheses_exact(self):
        rep = skip_one_add_two_check(polytope_2_41(), 5, NODES_241)
        assert rep.index_ok
        assert rep.index_missing == ()
        assert rep.sum_ok and rep.sumsq_ok
        assert rep.sum_value == "0"
        assert rep.sumsq_value == "5/4"
        assert rep.bound_value == "15/8"
        assert math.isclose(rep.sumsq_margin, 0.625)
        assert rep.all_ok

    def test_241_witness_candidates(self):
        root = LatticePoint((2, 2, 0, 0, 0, 0, 0, 0), 8)
        rep = skip_one_add_two_check(polytope_2_41(), 5, NODES_241,
                                     candidates=[root])
        assert rep.witness_ok is True
        bogus = LatticePoint((1, 0, 0, 0, 0, 0, 0, 0), 1)
        rep2 = skip_one_add_two_check(polytope_2_41(), 5, NODES_241,
                                      candidates=[bogus])
        assert rep2.witness_ok is False
        assert not rep2.all_ok

    def test_demicube5_fails_index(self):
        nodes = (-Surd.sqrt_of(Fraction(1, 5)), Surd.sqrt_of(Fraction(1, 5)))
        rep = skip_one_add_two_check(demicube(5), 2, nodes)
        assert not rep.index_ok
        assert 4 in rep.index_missing
        assert not rep.all_ok

    def test_validation(self):
        with pytest.raises(ValueError):
            skip_one_add_two_check(cube(3), 1, [Surd(0)])
        with pytest.raises(ValueError):
            skip_one_add_two_check(cube(3), 2, [Surd(0)])
        with pytest.raises(ValueError):
            skip_one_add_two_check(cube(3), 2, [Surd(Fraction(1, 2)), Surd(0)])
        with pytest.raises(ValueError):
            skip_one_add_two_check(cube(3), 2, [Surd(0), Surd(2)])


class TestE8AsDualOf241:
    def test_potential_constant_on_roots(self):
        code = polytope_2_41()
        k = Kernel.parse("gauss:1")
        vals = [potential_eval(p.unit(), code, k)
                for p in e8_roots().lattice_points()[:12]]
        assert max(vals) - min(vals) < 1e-9 * abs(vals[0])
