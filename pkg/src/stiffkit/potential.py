"""Pairwise potentials on the sphere: evaluation, minimization, verification.

Kernels are functions of the dot product t with g(x.y) = f(|x-y|^2), so
|x-y|^2 = 2-2t.  Minimization is multistart projected gradient descent on
the unit sphere: seeded random starts plus the code antipodes plus any
supplied dual candidates, descended in one numpy batch, then clustered.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import fsum
from typing import Optional, Sequence

import numpy as np

from .codes import Code, LatticeCode, LatticePoint
from .design import index_set
from .exact import Scalar, Surd, scalar_str
from .gegenbauer import Polynomial

GRAD_TOL = 1e-10
CLUSTER_TOL = 1e-6
MAX_ITER = 600


class SingularEvaluation(ArithmeticError):
    """The kernel is infinite at a dot product of 1 (probe on a code point)."""


@dataclass(frozen=True)
class Kernel:
    """Potential kernel g(t); family decides the formula.

    riesz:    g(t) = (2-2t)^(-s/2)      = |x-y|^(-s)
    gauss:    g(t) = exp(-rate*(2-2t))  = exp(-rate*|x-y|^2)
    log:      g(t) = -log(2-2t) + 2
    poly:     g(t) = q(t) for a rational-coefficient polynomial q
    """

    family: str
    param: Optional[Fraction] = None
    poly: Optional[Polynomial] = None

    def __post_init__(self) -> None:
        if self.family not in ("riesz", "gauss", "log", "poly"):
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family in ("riesz", "gauss"):
            if self.param is None or self.param <= 0:
                raise ValueError(f"{self.family} kernel needs a positive parameter")
        if self.family == "poly" and self.poly is None:
            raise ValueError("poly kernel needs a polynomial")

    @staticmethod
    def parse(spec: str) -> "Kernel":
        """Parse 'riesz:2', 'gauss:1', or 'log'."""
        head, _, tail = spec.partition(":")
        head = head.strip().lower()
        if head == "riesz":
            return Kernel("riesz", Fraction(tail))
        if head in ("gauss", "gaussian"):
            return Kernel("gauss", Fraction(tail))
        if head == "log":
            if tail:
                raise ValueError("log kernel takes no parameter")
            return Kernel("log")
        raise ValueError(f"cannot parse kernel spec {spec!r}")

    @property
    def name(self) -> str:
        if self.family in ("riesz", "gauss"):
            return f"{self.family}:{self.param}"
        if self.family == "poly":
            return f"poly[{self.poly}]"
        return self.family

    @property
    def singular_at_one(self) -> bool:
        return self.family in ("riesz", "log")

    @property
    def strictly_convex_family(self) -> bool:
        """Families with all derivatives positive: argmins must sit on the dual."""
        return self.family in ("riesz", "gauss")

    def g(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "riesz":
            # t > 1 from float drift gives nan; callers treat nan as singular
            with np.errstate(invalid="ignore", divide="ignore"):
                return (2.0 - 2.0 * t) ** (-float(self.param) / 2.0)
        if self.family == "gauss":
            return np.exp(-float(self.param) * (2.0 - 2.0 * t))
        if self.family == "log":
            with np.errstate(invalid="ignore", divide="ignore"):
                return -np.log(2.0 - 2.0 * t) + 2.0
        return self.poly.eval_float(t)

    def dg(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "riesz":
            s = float(self.param)
            with np.errstate(invalid="ignore", divide="ignore"):
                return s * (2.0 - 2.0 * t) ** (-s / 2.0 - 1.0)
        if self.family == "gauss":
            r = float(self.param)
            return 2.0 * r * np.exp(-r * (2.0 - 2.0 * t))
        if self.family == "log":
            with np.errstate(invalid="ignore", divide="ignore"):
                return 1.0 / (1.0 - t)
        return self.poly.derivative().eval_float(t)


def potential_eval(x, code: Code, kernel: Kernel) -> float:
    """Potential of the code at one sphere point, compensated summation."""
    vec = x.unit() if isinstance(x, LatticePoint) else np.asarray(x, dtype=float)
    n = np.linalg.norm(vec)
    if abs(n - 1.0) > 1e-9:
        raise ValueError("probe point is not on the unit sphere")
    vec = vec / n
    dots = np.clip(code.unit_array() @ vec, -1.0, 1.0)
    if kernel.singular_at_one and np.any(dots >= 1.0 - 1e-12):
        raise SingularEvaluation(
            f"{kernel.name} is singular: probe coincides with a code point"
        )
    return fsum(kernel.g(dots).tolist())


@dataclass(frozen=True)
class MinimizationReport:
    """Multistart minimization outcome, with dual comparison when requested."""

    code_name: str
    kernel: str
    restarts: int
    seed: int
    global_min_value: float
    argmin_cluster: np.ndarray
    n_converged: int
    n_failed: int
    n_singular_starts: int
    gradient_tol: float
    cluster_tol: float
    dual_value: Optional[float] = None
    gap: Optional[float] = None  # best descended non-dual start minus dual value
    dual_match: Optional[bool] = None

    def to_json_dict(self) -> dict:
        out = {
            "code": self.code_name,
            "kernel": self.kernel,
            "restarts": self.restarts,
            "seed": self.seed,
            "global_min_value": self.global_min_value,
            "argmin_cluster": [[float(x) for x in p] for p in self.argmin_cluster],
            "n_converged": self.n_converged,
            "n_failed": self.n_failed,
            "n_singular_starts": self.n_singular_starts,
            "gradient_tol": self.gradient_tol,
            "cluster_tol": self.cluster_tol,
        }
        if self.dual_value is not None:
            out.update(dual_value=self.dual_value, gap=self.gap,
                       dual_match=self.dual_match)
        return out


def _as_unit_rows(points) -> np.ndarray:
    if points is None:
        return np.zeros((0, 0))
    if isinstance(points, LatticeCode):
        return points.unit_array()
    if hasattr(points, "unit_points"):
        return points.unit_points()
    rows = []
    for p in points:
        v = p.unit() if isinstance(p, LatticePoint) else np.asarray(p, dtype=float)
        rows.append(v / np.linalg.norm(v))
    return np.asarray(rows)


def _descend(units: np.ndarray, kernel: Kernel, starts: np.ndarray,
             gtol: float, max_iter: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched projected gradient descent with Armijo backtracking.

    Returns (points, values, converged_mask).  Stalled rows (no decrease at
    machine-level steps) count as converged only if their tangential
    gradient is below 1e-6.
    """
    x = starts.copy()
    alive = np.ones(len(x), dtype=bool)
    step = np.full(len(x), 0.1)
    grad_norm = np.full(len(x), np.inf)

    def pot(rows: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", over="ignore"):
            return kernel.g(np.clip(rows @ units.T, -1.0, None)).sum(axis=1)

    f = pot(x)
    for _ in range(max_iter):
        idx = np.nonzero(alive)[0]
        if not len(idx):
            break
        dots = x[idx] @ units.T
        grad = kernel.dg(dots) @ units
        tang = grad - np.einsum("ij,ij->i", grad, x[idx])[:, None] * x[idx]
        gn = np.linalg.norm(tang, axis=1)
        grad_norm[idx] = gn
        done = gn < gtol
        alive[idx[done]] = False
        work = idx[~done]
        if not len(work):
            continue
        direction = -tang[~done] / gn[~done][:, None]
        work_gn = gn[~done]
        pending = np.arange(len(work))  # local ids into work rows
        for _bt in range(45):
            if not len(pending):
                break
            rows = work[pending]
            trial = x[rows] + step[rows][:, None] * direction[pending]
            trial /= np.linalg.norm(trial, axis=1)[:, None]
            f_trial = pot(trial)
            ok = f_trial <= f[rows] - 1e-4 * step[rows] * work_gn[pending]
            acc = rows[ok]
            x[acc] = trial[ok]
            f[acc] = f_trial[ok]
            step[acc] = np.minimum(step[acc] * 1.5, 1.0)
            pending = pending[~ok]
            step[work[pending]] *= 0.5
        if len(pending):
            # no decrease even at machine-level steps: numerical plateau
            alive[work[pending]] = False
    converged = grad_norm < max(gtol, 1e-6)
    return x, f, converged


def minimize_potential(code: Code, kernel: Kernel, restarts: int = 200,
                       seed: int = 0, dual=None,
                       gtol: float = GRAD_TOL,
                       cluster_tol: float = CLUSTER_TOL,
                       max_iter: int = MAX_ITER) -> MinimizationReport:
    """Multistart minimization of the code's potential over the sphere.

    Starts: `restarts` seeded uniform points (one spawned generator stream
    per restart), every code antipode, and the supplied dual candidates.
    Starts where a singular kernel blows up are dropped and counted.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    units = code.unit_array()
    dim = code.ambient_dim

    streams = np.random.SeedSequence(seed).spawn(restarts)
    rand = np.array([np.random.default_rng(s).normal(size=dim) for s in streams])
    rand /= np.linalg.norm(rand, axis=1)[:, None]
    starts = [rand, -units]
    dual_units = _as_unit_rows(dual)
    n_dual = len(dual_units)
    if n_dual:
        starts.append(dual_units)
    x0 = np.vstack(starts)
    is_dual_start = np.zeros(len(x0), dtype=bool)
    if n_dual:
        is_dual_start[-n_dual:] = True

    # drop starts that evaluate to +inf under singular kernels
    with np.errstate(divide="ignore", over="ignore"):
        vals0 = kernel.g(np.clip(x0 @ units.T, -1.0, None)).sum(axis=1)
    finite = np.isfinite(vals0)
    n_singular = int(np.sum(~finite))
    x0, is_dual_start = x0[finite], is_dual_start[finite]

    pts, vals, conv = _descend(units, kernel, x0, gtol, max_iter)
    n_conv = int(np.sum(conv))
    n_failed = int(np.sum(~conv))

    dual_value: Optional[float] = None
    gap: Optional[float] = None
    dual_match: Optional[bool] = None
    if n_dual:
        dual_value = min(potential_eval(v, code, kernel) for v in dual_units)
        nd = conv & ~is_dual_start
        gap = float(vals[nd].min() - dual_value) if nd.any() else 0.0
        dual_match = gap >= -1e-8

    good = conv & np.isfinite(vals)
    global_min = float(vals[good].min()) if good.any() else float("inf")
    if dual_value is not None:
        global_min = min(global_min, dual_value)
    level = global_min + 1e-8 * (1.0 + abs(global_min))
    at_min = pts[good & (vals <= level)]
    reps: list[np.ndarray] = []
    for p in at_min:
        if all(np.linalg.norm(p - r) > cluster_tol for r in reps):
            reps.append(p)
    cluster = np.asarray(sorted(reps, key=tuple)) if reps else np.zeros((0, dim))
    return MinimizationReport(code.name, kernel.name, restarts, seed,
                              global_min, cluster, n_conv, n_failed,
                              n_singular, gtol, cluster_tol,
                              dual_value, gap, dual_match)


@dataclass(frozen=True)
class UniversalMinimumReport:
    """Per-kernel comparison of the multistart minimum with the dual value."""

    code_name: str
    kernel: str
    dual_value: float
    dual_spread_rel: float     # (max-min)/|mean| of the potential over dual points
    global_min_value: float
    gap: float                 # best non-dual descended value minus dual value
    equality_rel: float        # |global_min - dual_value| / |dual_value|
    argmin_max_dist: float     # worst distance from an argmin to the dual set
    n_converged: int
    restarts: int
    seed: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "code": self.code_name,
            "kernel": self.kernel,
            "dual_value": self.dual_value,
            "dual_spread_rel": self.dual_spread_rel,
            "global_min_value": self.global_min_value,
            "gap": self.gap,
            "equality_rel": self.equality_rel,
            "argmin_max_dist": self.argmin_max_dist,
            "n_converged": self.n_converged,
            "restarts": self.restarts,
            "seed": self.seed,
            "passed": self.passed,
        }


def verify_universal_minimum(code: Code, m: int, dual,
                             kernels: Sequence[Kernel],
                             restarts: int = 200, seed: int = 0,
                             argmin_tol: float = 1e-5) -> list[UniversalMinimumReport]:
    """Check that the dual attains the global potential minimum per kernel.

    Per kernel: (a) the potential is constant over the dual within 1e-9
    relative; (b) no descended start beats the dual value by more than
    1e-8; (c) for strictly convex families every argmin lies within
    argmin_tol of a dual point.
    """
    dual_units = _as_unit_rows(dual)
    if not len(dual_units):
        raise ValueError("dual candidate set is empty")
    out = []
    for k, kernel in enumerate(kernels):
        rep = minimize_potential(code, kernel, restarts=restarts,
                                 seed=seed + k, dual=dual_units)
        dvals = [potential_eval(v, code, kernel) for v in dual_units]
        mean = fsum(dvals) / len(dvals)
        spread = (max(dvals) - min(dvals)) / abs(mean) if mean else 0.0
        if len(rep.argmin_cluster):
            dists = [float(np.linalg.norm(dual_units - p, axis=1).min())
                     for p in rep.argmin_cluster]
            worst = max(dists)
        else:
            worst = float("inf")
        const_ok = spread <= 1e-9
        no_beat = rep.gap is not None and rep.gap >= -1e-8
        argmin_ok = (not kernel.strictly_convex_family) or worst <= argmin_tol
        equality = abs(rep.global_min_value - rep.dual_value) / abs(rep.dual_value)
        out.append(UniversalMinimumReport(
            code.name, kernel.name, rep.dual_value, spread,
            rep.global_min_value, rep.gap, equality, worst,
            rep.n_converged, restarts, seed + k,
            const_ok and no_beat and argmin_ok))
    return out


@dataclass(frozen=True)
class SkipOneAddTwoReport:
    """Exact verification of the skip-one-add-two hypotheses."""

    code_name: str
    m: int
    index_ok: bool
    index_missing: tuple[int, ...]
    sum_ok: bool
    sumsq_ok: bool
    sum_value: str
    sumsq_value: str
    bound_value: str
    sum_margin: float     # float(t_m/2 - sum)
    sumsq_margin: float   # float(bound - sumsq)
    witness_ok: Optional[bool]  # supplied candidates realize dots within t_list

    @property
    def all_ok(self) -> bool:
        base = self.index_ok and self.sum_ok and self.sumsq_ok
        return base and (self.witness_ok is not False)

    def to_json_dict(self) -> dict:
        return {
            "code": self.code_name,
            "m": self.m,
            "index_ok": self.index_ok,
            "index_missing": list(self.index_missing),
            "sum_ok": self.sum_ok,
            "sumsq_ok": self.sumsq_ok,
            "sum": self.sum_value,
            "sumsq": self.sumsq_value,
            "bound": self.bound_value,
            "sum_margin": self.sum_margin,
            "sumsq_margin": self.sumsq_margin,
            "witness_ok": self.witness_ok,
            "all_ok": self.all_ok,
        }


def skip_one_add_two_check(code: Code, m: int, t_list: Sequence[Scalar],
                           candidates: Optional[Sequence] = None) -> SkipOneAddTwoReport:
    """Exact check of the skipped-degree universal-minimality hypotheses.

    A code whose index set skips only degree 2m-2 below 2m still has a
    universally minimizing dual when the node sums obey sum(t) < t_m/2 and
    sum(t^2) - 2*sum(t)^2 < m(2m-1)/(4m+d-3); this verifies those bounds
    exactly.  Candidates, when given, are checked to realize dot products
    inside t_list only (nonempty dual).
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if len(t_list) != m:
        raise ValueError(f"need exactly {m} nodes, got {len(t_list)}")
    ts = [v if isinstance(v, Surd) else Surd(v) for v in t_list]
    for a, b in zip(ts, ts[1:]):
        if not a < b:
            raise ValueError("t_list must be strictly increasing")
    if not (Surd(-1) < ts[0] and ts[-1] < Surd(1)):
        raise ValueError("t_list must lie inside (-1, 1)")

    needed = list(range(1, 2 * m - 2)) + [2 * m - 1, 2 * m]
    rep = index_set(code, 2 * m)
    missing = tuple(n for n in needed if n not in rep.index_set)
    index_ok = not missing

    d = code.sphere_dim
    # sums stay in one quadratic extension for node sets of interest;
    # symmetric sets cancel to rationals
    total = Surd(0)
    for t in ts:
        total = total + t
    half_top = ts[-1] / 2
    sum_ok = total < half_top
    sumsq = Fraction(0)
    for t in ts:
        sumsq += (t * t).as_fraction()
    lhs = sumsq - 2 * (total * total).as_fraction()
    bound = Fraction(m * (2 * m - 1), 4 * m + d - 3)
    sumsq_ok = lhs < bound

    witness_ok: Optional[bool] = None
    if candidates is not None:
        from .design import spectrum

        witness_ok = True
        allowed = set(ts)
        for c in candidates:
            if isinstance(c, LatticePoint) and isinstance(code, LatticeCode):
                s = spectrum(c, code)
                if any(v not in allowed for v in s.values()):
                    witness_ok = False
                    break
            else:
                s = spectrum(np.asarray(c, dtype=float), code)
                floats = [float(t) for t in ts]
                for v in s.values():
                    if min(abs(float(v) - f) for f in floats) > 1e-9:
                        witness_ok = False
                        break
                if witness_ok is False:
                    break
    return SkipOneAddTwoReport(
        code.name, m, index_ok, missing, sum_ok, sumsq_ok,
        scalar_str(total), str(lhs), str(bound),
        float(half_top - total), float(bound - lhs), witness_ok)
