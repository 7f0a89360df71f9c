"""m-stiffness certificates and dual configuration search.

The dual of a code is the set of sphere points forming at most m distinct
dot products with it.  For a (2m-1)-design those dot values can only be
the m roots of the degree-m Gegenbauer polynomial, so the dual is found by
exhaustive enumeration: pick d+1 linearly independent code points, assign
each of them one of the m candidate values, solve the square linear system,
and keep unit solutions whose full spectrum stays within the candidate set.
Exact integer arithmetic (adjugate over a common quadratic extension) makes
the kept solutions certificates rather than approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

import numpy as np

from ._linalg import GreedyRank, adjugate_and_det, integer_nullspace
from .codes import Code, FloatCode, LatticeCode, LatticePoint, Vector, gcd_reduce
from .config import check_size
from .design import index_set, spectrum
from .exact import Scalar, Surd, scalar_str
from .gegenbauer import nodes as gegenbauer_nodes

FLOAT_RESIDUAL = 1e-9


class NotInGeneralPosition(ValueError):
    """The code does not span the ambient space, so the (d+1)x(d+1)
    enumeration cannot run.  For m >= 2 this means invalid input: a stiff
    code is at least a 3-design and those span."""


class NodesRequired(ValueError):
    """Candidate dot values cannot be inferred: the code is not a
    (2m-1)-design, so Gegenbauer roots are not certified canonical.
    Supply the node set explicitly."""


@dataclass(frozen=True)
class DualSearchResult:
    """Outcome of a dual enumeration.

    exact results carry LatticePoint entries; float results carry unit rows
    in points_float.  dual_complete is True only when the node set itself is
    certified (Gegenbauer roots of a verified (2m-1)-design), so the
    enumeration provably saw every dual point.  For caller-supplied nodes
    the search is exhaustive relative to those nodes but completeness of
    the node list is the caller's responsibility.
    """

    code_name: str
    m: int
    mode: str  # "exact" | "float" | "subspace"
    points: tuple[LatticePoint, ...]
    points_float: Optional[np.ndarray]
    dual_complete: bool
    nodes_supplied: bool
    node_values: tuple
    subspace_basis: Optional[tuple[Vector, ...]] = None
    max_residual: float = 0.0

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def count(self) -> int:
        if self.points:
            return len(self.points)
        if self.points_float is not None:
            return len(self.points_float)
        return 0

    @property
    def is_empty(self) -> bool:
        return self.count == 0 and self.subspace_basis is None

    def as_code(self, name: Optional[str] = None) -> LatticeCode:
        return dual_to_code(self.points, name or f"dual_{self.m}({self.code_name})")

    def unit_points(self) -> np.ndarray:
        if self.points_float is not None:
            return self.points_float
        return np.array([p.unit() for p in self.points])

    def to_json_dict(self) -> dict:
        out = {
            "code": self.code_name,
            "m": self.m,
            "mode": self.mode,
            "count": self.count,
            "dual_complete": self.dual_complete,
            "nodes_supplied": self.nodes_supplied,
            "nodes": [scalar_str(v) if isinstance(v, (Surd, Fraction, int)) else float(v)
                      for v in self.node_values],
        }
        if self.points:
            out["points"] = [
                {"vector": list(p.vector), "norm_sq": p.norm_sq} for p in self.points
            ]
        elif self.points_float is not None:
            out["points_decimal"] = [[float(x) for x in p] for p in self.points_float]
            out["max_residual"] = self.max_residual
        if self.subspace_basis is not None:
            out["subspace_basis"] = [list(b) for b in self.subspace_basis]
        return out


def dual_to_code(points: Sequence[LatticePoint], name: str) -> LatticeCode:
    """Rescale exact dual points to one common squared norm.

    With norm_sq = f^2 * s (s square-free), a common norm exists iff every
    point has the same s; the target is then lcm(f)^2 * s.
    """
    if not points:
        raise ValueError("no points to convert")
    from math import lcm

    from .exact import square_free_split

    reduced = []
    splits = []
    for p in points:
        v = p.direction()
        ns = sum(x * x for x in v)
        reduced.append((v, ns))
        splits.append(square_free_split(ns))
    parts = {s for _, s in splits}
    if len(parts) > 1:
        raise ValueError(f"dual norms have square-free parts {sorted(parts)}, "
                         "no common scaling exists")
    s = parts.pop()
    big_f = 1
    for f, _ in splits:
        big_f = lcm(big_f, f)
    target = big_f * big_f * s
    out = [tuple(x * (big_f // f) for x in v) for (v, _), (f, _) in zip(reduced, splits)]
    return LatticeCode(name, points[0].ambient_dim, target, tuple(sorted(out)))


def _independent_rows(code: LatticeCode) -> list[int]:
    """Indices of a maximal independent subset, greedy in sorted point order."""
    order = sorted(range(code.size), key=lambda i: code.points[i])
    tracker = GreedyRank(code.ambient_dim)
    chosen = []
    for i in order:
        if tracker.try_add(code.points[i]):
            chosen.append(i)
            if tracker.rank == code.ambient_dim:
                break
    return chosen


def _independent_rows_float(points: np.ndarray) -> list[int]:
    order = sorted(range(len(points)), key=lambda i: tuple(points[i]))
    chosen: list[int] = []
    basis: list[np.ndarray] = []
    for i in order:
        v = points[i].copy()
        for b in basis:
            v -= (v @ b) * b
        n = np.linalg.norm(v)
        if n > 1e-8:
            basis.append(v / n)
            chosen.append(i)
            if len(chosen) == points.shape[1]:
                break
    return chosen


def _default_nodes(code: Code, m: int):
    rep = index_set(code, max(2 * m - 1, 1))
    if rep.strength < 2 * m - 1:
        raise NodesRequired(
            f"{code.name} has design strength {rep.strength} < {2 * m - 1}; "
            "Gegenbauer roots are not certified as the only dual dot values, "
            "pass candidate nodes explicitly"
        )
    ns = gegenbauer_nodes(code.sphere_dim, m)
    return list(ns.nodes)


def _exact_rhs(node_values: Sequence[Scalar], norm_sq: int):
    """Scaled right-hand sides n_k with node*sqrt(norm_sq) = (n_k/Q)*sqrt(g).

    Returns (ints, Q, g) or None when the values do not sit in one
    quadratic extension.
    """
    root = Surd.sqrt_of(norm_sq)
    terms = [(v if isinstance(v, Surd) else Surd(v)) * root for v in node_values]
    # all nonzero terms must live in one quadratic extension Q(sqrt(g))
    rads = {t.radicand for t in terms if t.coeff != 0}
    if len(rads) > 1:
        return None
    g = rads.pop() if rads else 1
    q_lcm = 1
    for t in terms:
        q_lcm = q_lcm * t.coeff.denominator // gcd(q_lcm, t.coeff.denominator)
    ints = [int(t.coeff * q_lcm) for t in terms]
    return ints, q_lcm, g


def _digit_matrix(n_values: Sequence[int], width: int, dtype) -> np.ndarray:
    """All len(values)^width assignment rows, base-|values| digit expansion."""
    base = len(n_values)
    total = base**width
    idx = np.arange(total, dtype=np.int64)
    cols = []
    for pos in range(width):
        cols.append(idx % base)
        idx = idx // base
    digits = np.stack(cols, axis=1)
    lut = np.asarray(n_values, dtype=dtype)
    return lut[digits]


def dual_search(
    code: Code,
    m: int,
    mode: str = "auto",
    nodes: Optional[Sequence] = None,
    threads: Optional[int] = None,
) -> DualSearchResult:
    """Enumerate the dual configuration D_m of a code.

    Without explicit nodes the code must be a verified (2m-1)-design; the
    candidate dot values are then the m Gegenbauer roots and the result is
    provably all of D_m.  Supplied nodes restrict the search to points
    whose dots lie in that set.  mode picks the arithmetic: exact needs an
    integer code and surd nodes in a single quadratic extension.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if mode not in ("auto", "exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    d1 = code.ambient_dim

    # rank gate: the enumeration needs d+1 independent points
    if isinstance(code, LatticeCode):
        idx = _independent_rows(code)
    else:
        idx = _independent_rows_float(code.unit_array())
    if len(idx) < d1:
        if m == 1:
            return _subspace_dual(code, nodes_supplied=nodes is not None)
        raise NotInGeneralPosition(
            f"{code.name} spans only {len(idx)} of {d1} dimensions; "
            "a stiff code with m >= 2 is a 3-design and spans"
        )

    nodes_supplied = nodes is not None
    node_values = list(nodes) if nodes_supplied else _default_nodes(code, m)
    if len(node_values) > m:
        raise ValueError(f"{len(node_values)} nodes supplied for m = {m}")
    check_size(len(node_values) ** d1, f"dual enumeration for {code.name}")
    dual_complete = not nodes_supplied

    exact_nodes = all(isinstance(v, (int, Fraction, Surd)) for v in node_values)
    want_exact = isinstance(code, LatticeCode) and exact_nodes
    rhs = None
    if want_exact:
        rhs = _exact_rhs(node_values, code.norm_sq)
    if mode == "exact" and rhs is None:
        raise ValueError(
            "exact mode needs an integer code and surd nodes in one quadratic extension"
        )
    if mode != "float" and rhs is not None:
        return _dual_search_exact(code, m, idx, node_values, rhs,
                                  dual_complete, nodes_supplied, threads)
    return _dual_search_float(code, m, idx, node_values,
                              dual_complete, nodes_supplied, threads)


def _subspace_dual(code: Code, nodes_supplied: bool) -> DualSearchResult:
    """D_1 of a rank-deficient 1-design: the unit sphere of the orthogonal
    complement; a point pair when that complement is a line."""
    rep = index_set(code, 1)
    if rep.strength < 1:
        raise NodesRequired(
            f"{code.name} is not a 1-design (center of mass is not the origin)"
        )
    if isinstance(code, LatticeCode):
        basis = integer_nullspace(list(code.points))
        if len(basis) == 1:
            b = basis[0]
            p = LatticePoint(b, sum(x * x for x in b))
            pts = tuple(sorted([p, -p], key=lambda q: q.vector))
            return DualSearchResult(code.name, 1, "exact", pts, None, True,
                                    nodes_supplied, (Surd(0),))
        return DualSearchResult(code.name, 1, "subspace", (), None, True,
                                nodes_supplied, (Surd(0),),
                                subspace_basis=tuple(basis))
    u, s, vt = np.linalg.svd(code.unit_array())
    null = vt[np.sum(s > 1e-9):]
    if len(null) == 1:
        z = null[0] / np.linalg.norm(null[0])
        pts = np.vstack([z, -z])
        order = np.lexsort(pts.T[::-1])
        return DualSearchResult(code.name, 1, "float", (), pts[order], True,
                                nodes_supplied, (0.0,))
    return DualSearchResult(code.name, 1, "subspace", (), None, True,
                            nodes_supplied, (0.0,),
                            subspace_basis=tuple(tuple(float(x) for x in b) for b in null))


def _dual_search_exact(code, m, idx, node_values, rhs, dual_complete,
                       nodes_supplied, threads) -> DualSearchResult:
    n_ints, q_lcm, g = rhs
    d1 = code.ambient_dim
    rows = [list(code.points[i]) for i in idx]
    adj, det = adjugate_and_det(rows)
    assert det != 0
    if det < 0:
        adj = [[-x for x in row] for row in adj]
        det = -det
    # unit solutions satisfy g * |w|^2 == (Q * det)^2 with w = adj @ n
    target = q_lcm * q_lcm * det * det

    # int64 overflow guard: max |w_j| <= d1 * max|adj| * max|n|
    max_adj = max(abs(x) for row in adj for x in row)
    max_n = max((abs(x) for x in n_ints), default=0)
    w_bound = d1 * max_adj * max_n
    safe = w_bound**2 * d1 * g < 2**62 and target < 2**62

    adj_t = np.asarray(adj, dtype=np.int64).T
    nmat = _digit_matrix(n_ints, d1, np.int64)
    survivors = _enumerate_exact(nmat, adj_t, g, target, threads, safe)

    # dedup by signed direction and certify each survivor's full spectrum
    root_ns = Surd.sqrt_of(code.norm_sq)
    node_set = {v if isinstance(v, Surd) else Surd(v) for v in node_values}
    pts_mat = code.int_array() if code.norm_sq < 2**26 else None
    seen: dict[Vector, LatticePoint] = {}
    for w in survivors:
        direction = gcd_reduce(tuple(int(x) for x in w))
        if direction in seen:
            continue
        cand = LatticePoint(direction, sum(x * x for x in direction))
        # dots of cand against every code point, exact membership in the nodes
        if pts_mat is not None:
            raw = pts_mat @ np.asarray(direction, dtype=np.int64)
            uniq = np.unique(raw)
        else:
            uniq = sorted({sum(a * b for a, b in zip(p, direction)) for p in code.points})
        if len(uniq) > m:
            continue
        scale = Surd(1) / (Surd.sqrt_of(cand.norm_sq) * root_ns)
        vals = [Surd(int(u)) * scale for u in uniq]
        if all(v in node_set for v in vals):
            seen[direction] = cand
    pts = tuple(sorted(seen.values(), key=lambda p: p.vector))
    return DualSearchResult(code.name, m, "exact", pts, None, dual_complete,
                            nodes_supplied, tuple(node_values))


def _enumerate_exact(nmat, adj_t, g, target, threads, safe) -> list[np.ndarray]:
    """Rows w = adj^T-free solve outputs passing the integer unit-norm identity."""
    if not safe:
        nmat = nmat.astype(object)
        adj_t = adj_t.astype(object)
    chunks = max(1, int(threads or 1))
    bounds = np.linspace(0, len(nmat), chunks + 1, dtype=int)

    def work(lo: int, hi: int) -> list[np.ndarray]:
        w = nmat[lo:hi] @ adj_t
        norms = np.einsum("ij,ij->i", w, w)
        keep = np.nonzero(g * norms == target)[0]
        return [w[k] for k in keep]

    if chunks == 1:
        return work(0, len(nmat))
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=chunks) as ex:
        parts = list(ex.map(lambda b: work(b[0], b[1]), zip(bounds, bounds[1:])))
    return [w for part in parts for w in part]


def _dual_search_float(code, m, idx, node_values, dual_complete,
                       nodes_supplied, threads) -> DualSearchResult:
    d1 = code.ambient_dim
    units = code.unit_array()
    a = units[idx]
    a_inv_t = np.linalg.inv(a).T
    node_floats = [float(v) for v in node_values]
    nmat = _digit_matrix(node_floats, d1, np.float64)

    z = nmat @ a_inv_t  # row i solves a @ z = nmat[i]
    norms = np.linalg.norm(z, axis=1)
    cand = z[np.abs(norms - 1.0) < 1e-7]
    cand /= np.linalg.norm(cand, axis=1)[:, None]

    # spectrum certificate: every dot within residual of some node
    found = []
    max_res = 0.0
    node_arr = np.asarray(node_floats)
    for v in cand:
        dots = units @ v
        res = np.abs(dots[:, None] - node_arr[None, :]).min(axis=1).max()
        if res < FLOAT_RESIDUAL:
            found.append(v)
            max_res = max(max_res, float(res))
    # dedup on a 1e-9 mesh
    uniq: dict[tuple, np.ndarray] = {}
    for v in found:
        key = tuple(np.round(v / 1e-9).astype(np.int64).tolist())
        uniq.setdefault(key, v)
    pts = np.array(sorted(uniq.values(), key=lambda q: tuple(q))) if uniq else np.zeros((0, d1))

    # exactness upgrade: recognize integer directions w/sqrt(ns), ns <= 4096
    if isinstance(code, LatticeCode) and len(pts):
        lattice = _recognize_lattice_points(pts)
        if lattice is not None:
            exact_ok = _verify_exact_spectrum(code, lattice, m, node_values)
            if exact_ok:
                return DualSearchResult(code.name, m, "exact",
                                        tuple(sorted(lattice, key=lambda p: p.vector)),
                                        None, dual_complete, nodes_supplied,
                                        tuple(node_values))
    return DualSearchResult(code.name, m, "float", (), pts, dual_complete,
                            nodes_supplied, tuple(node_values), max_residual=max_res)


def _recognize_lattice_points(pts: np.ndarray) -> Optional[list[LatticePoint]]:
    out = []
    for v in pts:
        hit = None
        for ns in range(1, 4097):
            w = np.round(v * ns**0.5)
            if np.max(np.abs(v * ns**0.5 - w)) < 1e-7 * ns**0.5:
                w_int = tuple(int(x) for x in w)
                if sum(x * x for x in w_int) == ns:
                    hit = LatticePoint(gcd_reduce(w_int),
                                       sum(x * x for x in gcd_reduce(w_int)))
                    break
        if hit is None:
            return None
        out.append(hit)
    return out


def _verify_exact_spectrum(code: LatticeCode, points: Sequence[LatticePoint],
                           m: int, node_values) -> bool:
    exact_nodes = all(isinstance(v, (int, Fraction, Surd)) for v in node_values)
    node_set = {v if isinstance(v, Surd) else Surd(v) for v in node_values} \
        if exact_nodes else None
    for p in points:
        rep = spectrum(p, code)
        if rep.distinct_count > m:
            return False
        if node_set is not None:
            if any(v not in node_set for v in rep.values()):
                return False
        else:
            floats = [float(v) for v in node_values]
            for v in rep.values():
                if min(abs(float(v) - f) for f in floats) > FLOAT_RESIDUAL:
                    return False
    return True


@dataclass(frozen=True)
class StiffnessCertificate:
    """Stiffness verdict with the evidence that produced it."""

    code_name: str
    m: int
    design_strength: int
    stiff: bool
    dual: Optional[DualSearchResult]
    frequency_table: tuple  # per dual point: ((node, count), ...)
    frequencies_match_weights: Optional[bool]
    properties: dict

    def to_json_dict(self) -> dict:
        out = {
            "code": self.code_name,
            "m": self.m,
            "design_strength": self.design_strength,
            "stiff": self.stiff,
            "properties": dict(self.properties),
        }
        if self.dual is not None:
            out["dual"] = self.dual.to_json_dict()
        if self.frequencies_match_weights is not None:
            out["frequencies_match_weights"] = self.frequencies_match_weights
        if self.frequency_table:
            first = [
                {"node": scalar_str(v) if isinstance(v, (Surd, Fraction, int)) else float(v),
                 "count": c}
                for v, c in self.frequency_table[0]
            ]
            out["frequency_table"] = {
                "per_point": first,
                "constant_across_dual": len(set(self.frequency_table)) <= 1,
            }
        return out


def certify_stiff(code: Code, m: int, nodes: Optional[Sequence] = None,
                  threads: Optional[int] = None) -> StiffnessCertificate:
    """Full stiffness certificate: design strength, dual, frequencies, flags.

    Stiff means (2m-1)-design with nonempty dual.  The frequency table counts
    how many code points realize each node against every dual point; for a
    stiff code those counts match the quadrature weights times N.
    """
    rep = index_set(code, 2 * m)
    strength = rep.strength
    dual: Optional[DualSearchResult] = None
    try:
        dual = dual_search(code, m, nodes=nodes, threads=threads)
    except NodesRequired:
        if nodes is None and strength < 2 * m - 1:
            dual = None  # not a (2m-1)-design: not stiff, dual not enumerable
        else:
            raise
    stiff = strength >= 2 * m - 1 and dual is not None and not dual.is_empty

    freq_table: list[tuple] = []
    freq_match: Optional[bool] = None
    props: dict = {}
    if dual is not None and dual.count:
        if dual.exact and isinstance(code, LatticeCode):
            for p in dual.points:
                s = spectrum(p, code)
                freq_table.append(tuple((v, c) for v, c in s.entries))
        else:
            units = dual.unit_points()
            for v in units:
                s = spectrum(v, code)
                freq_table.append(tuple((round(float(val), 9), c)
                                        for val, c in s.entries))
        freq_match = _frequencies_match(code, m, dual, freq_table)
        props["antipodal"] = _dual_antipodal(dual)
        props["cardinality_ok"] = dual.count <= m ** code.ambient_dim
        props["double_dual_contains_code"] = _double_dual_contains(code, m, dual)
    return StiffnessCertificate(code.name, m, strength, stiff, dual,
                                tuple(freq_table), freq_match, props)


def _frequencies_match(code: Code, m: int, dual: DualSearchResult,
                       freq_table) -> bool:
    """Prop-2.3 check: counts equal a_0(Lagrange basis) * N for every point."""
    ns = gegenbauer_nodes(code.sphere_dim, m)
    n = code.size
    if dual.nodes_supplied and len(dual.node_values) == m:
        # weights only certified for the canonical Gegenbauer nodes
        expected = None
    else:
        expected = list(zip(ns.nodes, ns.weights))
    if expected is None:
        # all rows must at least agree with each other
        return len(set(freq_table)) <= 1
    if ns.exact and dual.exact:
        want = {(v if isinstance(v, Surd) else Surd(v)): Fraction(w) * n
                for v, w in expected}
        for row in freq_table:
            got = {v: c for v, c in row}
            if set(got) != set(want):
                return False
            if any(Fraction(got[k]) != want[k] for k in want):
                return False
        return True
    want_f = sorted((float(v), float(w) * n) for v, w in expected)
    for row in freq_table:
        got_f = sorted((float(v), c) for v, c in row)
        if len(got_f) != len(want_f):
            return False
        for (gv, gc), (wv, wc) in zip(got_f, want_f):
            if abs(gv - wv) > 1e-8 or abs(gc - wc) > 1e-6 * n:
                return False
    return True


def _dual_antipodal(dual: DualSearchResult) -> bool:
    if dual.points:
        dirs = {p.direction() for p in dual.points}
        return all(tuple(-x for x in d) in dirs for d in dirs)
    pts = dual.points_float
    if pts is None or not len(pts):
        return True
    for p in pts:
        if np.linalg.norm(pts + p[None, :], axis=1).min() > 1e-8:
            return False
    return True


def _double_dual_contains(code: Code, m: int, dual: DualSearchResult) -> bool:
    """Every code point forms at most m distinct dots against the dual."""
    if dual.exact and isinstance(code, LatticeCode):
        for v in code.points:
            vals = {LatticePoint(v, code.norm_sq).dot_unit(p) for p in dual.points}
            if len(vals) > m:
                return False
        return True
    dual_units = dual.unit_points()
    for v in code.unit_array():
        dots = np.sort(dual_units @ v)
        distinct = 1 + int(np.sum(np.diff(dots) > 1e-8))
        if distinct > m:
            return False
    return True


@dataclass(frozen=True)
class Dual1Stiff:
    """D_1 of a 1-stiff code: the unit sphere of span(code)^perp."""

    basis: tuple
    pair: Optional[tuple]
    dual_dim: int  # dimension of the orthogonal complement

    def to_json_dict(self) -> dict:
        out = {"dual_dim": self.dual_dim,
               "basis": [list(b) for b in self.basis]}
        if self.pair is not None:
            if isinstance(self.pair[0], LatticePoint):
                out["pair"] = [{"vector": list(p.vector), "norm_sq": p.norm_sq}
                               for p in self.pair]
            else:
                out["pair"] = [[float(x) for x in p] for p in self.pair]
        return out


def is_1stiff(code: Code) -> tuple[bool, Optional[tuple]]:
    """1-stiffness: center of mass at the origin and rank <= sphere_dim.

    Returns the verdict and, when true, a normal vector of a containing
    hyperplane (exact integer kernel vector for integer codes).
    """
    if isinstance(code, LatticeCode):
        sums = [sum(p[k] for p in code.points) for k in range(code.ambient_dim)]
        if any(s != 0 for s in sums):
            return False, None
        basis = integer_nullspace(list(code.points))
        if not basis:
            return False, None
        return True, basis[0]
    pts = code.unit_array()
    if np.linalg.norm(pts.sum(axis=0)) > 1e-12 * code.size:
        return False, None
    u, s, vt = np.linalg.svd(pts)
    null = vt[np.sum(s > 1e-9):]
    if not len(null):
        return False, None
    return True, tuple(float(x) for x in null[0])


def dual_1stiff(code: Code) -> Dual1Stiff:
    """Describe D_1 = span(code)^perp intersected with the sphere."""
    ok, _ = is_1stiff(code)
    if not ok:
        raise ValueError(f"{code.name} is not 1-stiff")
    if isinstance(code, LatticeCode):
        basis = integer_nullspace(list(code.points))
        pair = None
        if len(basis) == 1:
            b = basis[0]
            p = LatticePoint(b, sum(x * x for x in b))
            pair = (p, -p)
        return Dual1Stiff(tuple(basis), pair, len(basis))
    u, s, vt = np.linalg.svd(code.unit_array())
    null = vt[np.sum(s > 1e-9):]
    basis = tuple(tuple(float(x) for x in b) for b in null)
    pair = None
    if len(null) == 1:
        z = null[0] / np.linalg.norm(null[0])
        pair = (tuple(float(x) for x in z), tuple(float(-x) for x in z))
    return Dual1Stiff(basis, pair, len(basis))


@dataclass(frozen=True)
class SharpnessReport:
    code_name: str
    inner_dot_count: int
    strength: int
    sharp: bool
    strongly_sharp: bool
    dot_values: tuple

    def to_json_dict(self) -> dict:
        return {
            "code": self.code_name,
            "inner_dot_count": self.inner_dot_count,
            "strength": self.strength,
            "sharp": self.sharp,
            "strongly_sharp": self.strongly_sharp,
            "dot_values": [scalar_str(v) for v in self.dot_values],
        }


def classify_sharp(code: LatticeCode) -> SharpnessReport:
    """Sharpness: m' distinct inter-point dots vs design strength 2m'-1 (2m')."""
    if not isinstance(code, LatticeCode):
        raise ValueError("sharpness classification needs an exact code")
    from .design import pair_values

    vals = [t for t, _ in pair_values(code) if t != 1]
    m_prime = len(vals)
    rep = index_set(code, 2 * m_prime)
    sharp = rep.strength >= 2 * m_prime - 1
    strongly = rep.strength >= 2 * m_prime
    return SharpnessReport(code.name, m_prime, rep.strength, sharp, strongly,
                           tuple(vals))


def _cluster_cost(dots: np.ndarray, m: int) -> np.ndarray:
    """Total width of the best split of sorted dots into m contiguous clusters.

    Zero exactly when at most m distinct values remain; computed as the
    value range minus the m-1 largest adjacent gaps.  Accepts a batch with
    dot rows and returns one cost per row.
    """
    arr = np.sort(np.atleast_2d(dots), axis=1)
    gaps = np.diff(arr, axis=1)
    spread = arr[:, -1] - arr[:, 0]
    if m >= arr.shape[1]:
        return np.zeros(len(arr))
    if m > 1:
        top = -np.partition(-gaps, m - 2, axis=1)[:, : m - 1]
        spread = spread - top.sum(axis=1)
    return spread


def _max_cluster_width(dots: np.ndarray, m: int) -> float:
    """Largest single-cluster width after cutting at the m-1 biggest gaps."""
    arr = np.sort(np.asarray(dots, dtype=float))
    if m >= len(arr):
        return 0.0
    if m == 1:
        return float(arr[-1] - arr[0])
    gaps = np.diff(arr)
    cuts = np.sort(np.argsort(gaps)[-(m - 1):])
    width = 0.0
    lo = 0
    for c in list(cuts) + [len(arr) - 1]:
        width = max(width, float(arr[c] - arr[lo]))
        lo = c + 1
    return width


def _pattern_search(z: np.ndarray, units: np.ndarray, m: int,
                    h0: float) -> np.ndarray:
    """Derivative-free descent of the cluster cost over the sphere."""
    z = z / np.linalg.norm(z)
    d1 = len(z)
    cost = float(_cluster_cost(units @ z, m)[0])
    h = h0
    while h > 1e-13:
        # orthonormal tangent frame at the current point
        basis = np.linalg.svd(z[None, :])[2][1:]
        trials = np.vstack([z + s * h * b for b in basis for s in (1.0, -1.0)])
        trials /= np.linalg.norm(trials, axis=1)[:, None]
        costs = _cluster_cost(trials @ units.T, m)
        k = int(np.argmin(costs))
        if costs[k] < cost:
            z, cost = trials[k], float(costs[k])
            h = min(h * 1.5, h0)
        else:
            h *= 0.4
    return z


def brute_force_dual(code: Code, m: int, samples: int = 100_000,
                     seed: int = 0, width_tol: float = 1e-6) -> np.ndarray:
    """Dense-sampling search for all unit points with <= m distinct code dots.

    Independent of the linear-system route: scans quasi-random sphere
    points (a Fibonacci spiral on S^2, seeded Gaussian directions
    otherwise), keeps candidates whose dot multiset is nearly m-clusterable
    at grid resolution, then sharpens each cluster of candidates by
    pattern search and keeps those within width_tol of m-clusterability.
    Returns deduplicated unit rows sorted lexicographically.
    """
    units = code.unit_array()
    d1 = code.ambient_dim
    if d1 == 3:
        i = np.arange(samples, dtype=float)
        phi = (1 + 5**0.5) / 2
        zc = 1.0 - 2.0 * (i + 0.5) / samples
        r = np.sqrt(np.maximum(0.0, 1.0 - zc * zc))
        th = 2 * np.pi * i / phi
        pts = np.stack([r * np.cos(th), r * np.sin(th), zc], axis=1)
    else:
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(samples, d1))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
    spacing = (4 * np.pi / samples) ** 0.5 if d1 == 3 else samples ** (-1.0 / max(1, d1 - 1))

    costs = np.empty(samples)
    chunk = 1 << 14
    for lo in range(0, samples, chunk):
        hi = min(samples, lo + chunk)
        costs[lo:hi] = _cluster_cost(pts[lo:hi] @ units.T, m)
    keep_thresh = 2.0 * m * spacing  # cost slope is at most ~2m per unit move
    low = costs < keep_thresh
    kept, kcost = pts[low], costs[low]
    if not len(kept):
        return np.zeros((0, d1))

    # one refinement per connected blob of kept samples
    link = 2.5 * spacing
    labels = -np.ones(len(kept), dtype=int)
    n_comp = 0
    for i in range(len(kept)):
        if labels[i] >= 0:
            continue
        stack = [i]
        labels[i] = n_comp
        while stack:
            j = stack.pop()
            near = np.nonzero((labels < 0) &
                              (np.linalg.norm(kept - kept[j], axis=1) < link))[0]
            labels[near] = n_comp
            stack.extend(near.tolist())
        n_comp += 1

    found: list[np.ndarray] = []
    for comp in range(n_comp):
        members = np.nonzero(labels == comp)[0]
        z = kept[members[np.argmin(kcost[members])]]
        zr = _pattern_search(z, units, m, spacing)
        if _max_cluster_width(units @ zr, m) <= width_tol:
            if not any(np.linalg.norm(zr - f) < 1e-7 for f in found):
                found.append(zr)
    return np.array(sorted(found, key=lambda q: tuple(q))) if found else np.zeros((0, d1))


def circle_dual_scan(code: Code, m: int, resolution: int = 1_000_000,
                     width_tol: float = 1e-8) -> np.ndarray:
    """All directions on the circle with <= m distinct code dots.

    Scans the angle grid of the given resolution, refines each low-cost
    run by golden-section search, and keeps angles whose dot multiset
    collapses to m clusters of width at most width_tol.
    """
    if code.ambient_dim != 2:
        raise ValueError("angular scan applies to codes on S^1 only")
    units = code.unit_array()
    alphas = np.arctan2(units[:, 1], units[:, 0])
    n = len(units)

    def cost(th: float) -> float:
        return float(_cluster_cost(np.cos(th - alphas), m)[0])

    step = 2 * np.pi / resolution
    thetas = np.arange(resolution) * step
    costs = np.empty(resolution)
    chunk = 1 << 16
    for lo in range(0, resolution, chunk):
        hi = min(resolution, lo + chunk)
        costs[lo:hi] = _cluster_cost(np.cos(thetas[lo:hi, None] - alphas[None, :]), m)
    keep_thresh = 4.0 * n * step
    low = costs < keep_thresh
    if not low.any():
        return np.zeros((0, 2))

    # group contiguous low-cost runs, remembering the wrap at 2*pi
    idx = np.nonzero(low)[0]
    breaks = np.nonzero(np.diff(idx) > 1)[0]
    runs = np.split(idx, breaks + 1)
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == resolution - 1:
        runs[0] = np.concatenate([runs[-1] - resolution, runs[0]])
        runs.pop()

    gold = (5**0.5 - 1) / 2
    hits: list[float] = []
    for run in runs:
        a = (run[0] - 1) * step
        b = (run[-1] + 1) * step
        while b - a > 1e-14:
            c, d = b - gold * (b - a), a + gold * (b - a)
            if cost(c) < cost(d):
                b = d
            else:
                a = c
        th = 0.5 * (a + b)
        if _max_cluster_width(np.cos(th - alphas), m) <= width_tol:
            hits.append(th % (2 * np.pi))
    hits.sort()
    out = [th for i, th in enumerate(hits)
           if not i or (th - hits[i - 1]) > 1e-9]
    if len(out) > 1 and (out[0] + 2 * np.pi - out[-1]) <= 1e-9:
        out.pop()
    return np.array([[np.cos(th), np.sin(th)] for th in out])
