"""Design strength certification through Gegenbauer pair sums.

A configuration is an n-design exactly when the double sum of P_k over all
ordered point pairs vanishes for k = 1..n.  For integer codes the Gram
matrix is computed in int64 (with an overflow guard), collapsed to a
multiset of dot values, and each P_k is evaluated once per distinct value
in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import fsum
from typing import Optional, Sequence, Union

import numpy as np

from .codes import Code, FloatCode, LatticeCode, LatticePoint
from .exact import Scalar, Surd, scalar_str
from .gegenbauer import Polynomial, a0, gegenbauer_poly

FLOAT_DESIGN_TOL = 1e-10  # relative to N^2, for float codes


@dataclass(frozen=True)
class SpectrumReport:
    """Multiset of dot products between one probe point and a code."""

    probe: str
    code_name: str
    exact: bool
    entries: tuple[tuple[Union[Scalar, float], int], ...]  # (value, multiplicity), ascending

    @property
    def distinct_count(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def values(self) -> tuple:
        return tuple(v for v, _ in self.entries)

    def to_json_dict(self) -> dict:
        return {
            "probe": self.probe,
            "code": self.code_name,
            "exact": self.exact,
            "entries": [
                {"value": scalar_str(v) if self.exact else float(v), "count": m}
                for v, m in self.entries
            ],
        }


@dataclass(frozen=True)
class DesignReport:
    """Index set and design strength of a code, checked up to a degree bound."""

    code_name: str
    checked_up_to: int
    index_set: frozenset[int]
    strength: int
    exact: bool

    def is_design(self, n: int) -> bool:
        if n > self.checked_up_to:
            raise ValueError(f"only checked up to degree {self.checked_up_to}")
        return all(k in self.index_set for k in range(1, n + 1))

    def to_json_dict(self) -> dict:
        return {
            "code": self.code_name,
            "checked_up_to": self.checked_up_to,
            "index_set": sorted(self.index_set),
            "strength": self.strength,
            "exact": self.exact,
        }


@lru_cache(maxsize=64)
def _gram_multiset(code: LatticeCode) -> tuple[tuple[Fraction, int], ...]:
    """Multiset of unit dot products over all ordered pairs, diagonal included."""
    pts = code.int_array()
    # |v.w| <= norm_sq, so int64 is safe whenever norm_sq fits comfortably
    if code.norm_sq < 2**31:
        gram = pts @ pts.T
        vals, counts = np.unique(gram, return_counts=True)
        pairs = [(int(v), int(c)) for v, c in zip(vals, counts)]
    else:
        raw: dict[int, int] = {}
        for i, p in enumerate(code.points):
            for q in code.points:
                s = sum(a * b for a, b in zip(p, q))
                raw[s] = raw.get(s, 0) + 1
        pairs = sorted(raw.items())
    return tuple((Fraction(v, code.norm_sq), c) for v, c in pairs)


def pair_values(code: LatticeCode) -> tuple[tuple[Fraction, int], ...]:
    """Distinct unit dot values with multiplicities, over ordered pairs."""
    return _gram_multiset(code)


def pair_sum(code: Code, n: int) -> Union[Fraction, float]:
    """Sum of P_n(x_i . x_j) over all ordered pairs (i, j)."""
    d = code.sphere_dim
    p = gegenbauer_poly(d, n)
    if isinstance(code, LatticeCode):
        return sum((p(t) * c for t, c in _gram_multiset(code)), Fraction(0))
    pts = code.unit_array()
    gram = np.clip(pts @ pts.T, -1.0, 1.0)
    return float(np.sum(p.eval_float(gram)))


def index_set(code: Code, n_max: int) -> DesignReport:
    """Degrees n <= n_max whose Gegenbauer pair sum vanishes."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    exact = isinstance(code, LatticeCode)
    idx = set()
    n2 = code.size**2
    for n in range(1, n_max + 1):
        s = pair_sum(code, n)
        if exact:
            if s == 0:
                idx.add(n)
        elif abs(s) <= FLOAT_DESIGN_TOL * n2:
            idx.add(n)
    strength = 0
    while strength + 1 in idx:
        strength += 1
    return DesignReport(code.name, n_max, frozenset(idx), strength, exact)


def spectrum(probe: Union[LatticePoint, Sequence[float], np.ndarray],
             code: Code,
             tol: float = 1e-9) -> SpectrumReport:
    """Dot products of one unit probe point against every code point.

    Exact when both the probe and the code are integer models; dot values
    are then rationals or surds.  Otherwise float values are merged when
    closer than tol.
    """
    if isinstance(probe, LatticePoint) and isinstance(code, LatticeCode):
        if probe.ambient_dim != code.ambient_dim:
            raise ValueError("probe dimension does not match the code")
        scale = Surd.sqrt_of(Fraction(1, probe.norm_sq * code.norm_sq))
        raw: dict[int, int] = {}
        for p in code.points:
            s = sum(a * b for a, b in zip(probe.vector, p))
            raw[s] = raw.get(s, 0) + 1
        entries = tuple((Surd(v) * scale, c) for v, c in sorted(raw.items()))
        return SpectrumReport(str(probe.vector), code.name, True, entries)
    vec = probe.unit() if isinstance(probe, LatticePoint) else np.asarray(probe, dtype=float)
    vec = vec / np.linalg.norm(vec)
    dots = np.sort(code.unit_array() @ vec)
    entries = []
    i = 0
    while i < len(dots):
        j = i
        while j + 1 < len(dots) and dots[j + 1] - dots[i] <= tol:
            j += 1
        entries.append((float(np.mean(dots[i:j + 1])), j - i + 1))
        i = j + 1
    return SpectrumReport(np.array2string(vec, precision=6), code.name, False,
                          tuple(entries))


def halfcount_3design(code: LatticeCode) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Half-count criterion for sign-vector codes on the cube {-1, 1}^d.

    Such a code is a 3-design iff N is even and, for every set I of one,
    two, or three coordinate indices, exactly half the points have an even
    number of negative entries at I.  Returns (verdict, witness index set).
    """
    d = code.ambient_dim
    if any(abs(x) != 1 for p in code.points for x in p):
        raise ValueError("half-count criterion applies to sign-vector codes only")
    if code.size % 2 == 1:
        return False, ()
    pts = code.int_array()
    from itertools import combinations
    for k in (1, 2, 3):
        if k > d:
            break
        for idx in combinations(range(d), k):
            prods = pts[:, idx].prod(axis=1)
            # product +1 iff evenly many negatives at idx
            if int(np.sum(prods == 1)) * 2 != code.size:
                return False, idx
    return True, None


def constancy_check(code: Code, q: Polynomial, trials: int, seed: int) -> float:
    """Max deviation of (1/N) sum_i q(x_i . y) from a_0(q) over random y.

    For an n-design and deg q <= n the potential is constant a_0(q) times N;
    the deviation reported here is per point (already divided by N).
    """
    d = code.sphere_dim
    rng = np.random.default_rng(seed)
    pts = code.unit_array()
    target = float(a0(q, d))
    worst = 0.0
    for _ in range(trials):
        y = rng.normal(size=d + 1)
        y /= np.linalg.norm(y)
        val = fsum(q.eval_float(pts @ y).tolist()) / code.size
        worst = max(worst, abs(val - target))
    return worst
