"""Point configurations on spheres: exact integer models and float fallbacks.

A LatticeCode stores integer coordinate vectors sharing one squared norm, so
every dot product between unit points is an exact rational (v.w)/norm_sq.
Configurations without such a model (polygons, glued or rotated families)
are FloatCodes with an explicit tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import cos, gcd, pi, sin
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .config import check_size
from .exact import Surd

Vector = tuple[int, ...]


def gcd_reduce(vec: Vector) -> Vector:
    """Divide out the (positive) gcd, preserving direction and sign."""
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


@dataclass(frozen=True)
class LatticePoint:
    """A single sphere point v/sqrt(norm_sq) with integer coordinates v."""

    vector: Vector
    norm_sq: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))
        s = sum(x * x for x in self.vector)
        if s != self.norm_sq or self.norm_sq <= 0:
            raise ValueError(
                f"vector {self.vector} has squared norm {s}, not {self.norm_sq}"
            )

    @property
    def ambient_dim(self) -> int:
        return len(self.vector)

    def direction(self) -> Vector:
        """Canonical key: two points are the same sphere point iff keys match."""
        return gcd_reduce(self.vector)

    def unit(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float) / float(self.norm_sq) ** 0.5

    def dot_unit(self, other: "LatticePoint") -> Surd:
        """Exact dot product of the two unit points: rational over sqrt(ns*ns')."""
        raw = sum(a * b for a, b in zip(self.vector, other.vector))
        return Surd(raw) / Surd.sqrt_of(self.norm_sq * other.norm_sq)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(tuple(-x for x in self.vector), self.norm_sq)


@dataclass(frozen=True)
class LatticeCode:
    """Finite configuration of distinct points, all with the same norm_sq."""

    name: str
    ambient_dim: int
    norm_sq: int
    points: tuple[Vector, ...]
    exact: bool = field(default=True)

    def __post_init__(self) -> None:
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "exact", True)
        check_size(len(pts), f"code {self.name!r}")
        if not pts:
            raise ValueError("a code needs at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError(f"code {self.name!r} has repeated points")
        for p in pts:
            if len(p) != self.ambient_dim:
                raise ValueError(
                    f"point {p} has dimension {len(p)}, expected {self.ambient_dim}"
                )
            s = sum(x * x for x in p)
            if s != self.norm_sq:
                raise ValueError(
                    f"point {p} has squared norm {s}, expected {self.norm_sq}"
                )

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def sphere_dim(self) -> int:
        """d for the sphere S^d the unit points live on."""
        return self.ambient_dim - 1

    def int_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.int64)

    def unit_array(self) -> np.ndarray:
        return self.int_array().astype(float) / float(self.norm_sq) ** 0.5

    def lattice_points(self) -> list[LatticePoint]:
        return [LatticePoint(p, self.norm_sq) for p in self.points]

    def direction_set(self) -> frozenset[Vector]:
        return frozenset(gcd_reduce(p) for p in self.points)

    def same_point_set(self, other: Union["LatticeCode", Iterable[LatticePoint]]) -> bool:
        """Set equality as sphere points, ignoring the integer scaling."""
        if isinstance(other, LatticeCode):
            theirs = other.direction_set()
        else:
            theirs = frozenset(p.direction() for p in other)
        return self.direction_set() == theirs

    def is_antipodal(self) -> bool:
        pset = set(self.points)
        return all(tuple(-x for x in p) in pset for p in self.points)

    def unit_dot(self, i: int, j: int) -> Fraction:
        raw = sum(a * b for a, b in zip(self.points[i], self.points[j]))
        return Fraction(raw, self.norm_sq)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "norm_sq": self.norm_sq,
            "points": [list(p) for p in self.points],
        }


@dataclass
class FloatCode:
    """Configuration given by floating unit vectors with a comparison tolerance."""

    name: str
    ambient_dim: int
    points: np.ndarray
    tolerance: float = 1e-12
    exact: bool = field(default=False)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.ambient_dim:
            raise ValueError(
                f"points array has shape {pts.shape}, expected (N, {self.ambient_dim})"
            )
        check_size(len(pts), f"code {self.name!r}")
        norms = np.linalg.norm(pts, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-9):
            raise ValueError("float code points must be unit vectors (within 1e-9)")
        self.points = pts / norms[:, None]
        self.exact = False
        if len(pts) <= 4096:  # pairwise distinctness check, skipped for huge codes
            diffs = np.linalg.norm(self.points[:, None, :] - self.points[None, :, :], axis=2)
            np.fill_diagonal(diffs, np.inf)
            if diffs.min() < 10 * self.tolerance:
                raise ValueError(f"code {self.name!r} has points closer than the tolerance")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def sphere_dim(self) -> int:
        return self.ambient_dim - 1

    def unit_array(self) -> np.ndarray:
        return self.points

    def is_antipodal(self) -> bool:
        for p in self.points:
            d = np.linalg.norm(self.points + p[None, :], axis=1)
            if d.min() > self.tolerance * 10:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "points_decimal": [[float(x) for x in p] for p in self.points],
            "tolerance": self.tolerance,
        }


Code = Union[LatticeCode, FloatCode]


# --- constructors ---


def cross_polytope(d: int) -> LatticeCode:
    """The 2d signed standard basis vectors in R^d."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    pts = []
    for i in range(d):
        for s in (1, -1):
            v = [0] * d
            v[i] = s
            pts.append(tuple(v))
    return LatticeCode(f"cross_polytope({d})", d, 1, tuple(sorted(pts)))


def cube(d: int) -> LatticeCode:
    """All 2^d sign vectors in R^d."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    check_size(2**d, f"cube({d})")
    pts = tuple(sorted(product((-1, 1), repeat=d)))
    return LatticeCode(f"cube({d})", d, d, pts)


def demicube(d: int) -> LatticeCode:
    """The 2^(d-1) sign vectors with an even number of minus signs."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    check_size(2 ** (d - 1), f"demicube({d})")
    pts = tuple(sorted(p for p in product((-1, 1), repeat=d)
                       if sum(1 for x in p if x < 0) % 2 == 0))
    return LatticeCode(f"demicube({d})", d, d, pts)


def e8_roots() -> LatticeCode:
    """The 240 shortest nonzero vectors of the (doubled) E8 lattice.

    112 vectors with two entries +-2, plus the 128 even-parity sign vectors
    scaled to the same squared norm 8.
    """
    pts: list[Vector] = []
    for i, j in combinations(range(8), 2):
        for si, sj in product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            pts.append(tuple(v))
    pts.extend(p for p in product((-1, 1), repeat=8)
               if sum(1 for x in p if x < 0) % 2 == 0)
    return LatticeCode("e8_roots", 8, 8, tuple(sorted(pts)))


def polytope_2_41() -> LatticeCode:
    """The 2160 vertices of the 2_41 polytope on S^7, scaled to norm_sq 16.

    Type I: four entries +-2.  Type II: one entry +-4.  Type III: seven
    entries +-1 and one entry +-3, with an odd number of negative entries.
    """
    pts: list[Vector] = []
    for pos in combinations(range(8), 4):
        for signs in product((2, -2), repeat=4):
            v = [0] * 8
            for p, s in zip(pos, signs):
                v[p] = s
            pts.append(tuple(v))
    for i in range(8):
        for s in (4, -4):
            v = [0] * 8
            v[i] = s
            pts.append(tuple(v))
    for big in range(8):
        for signs in product((1, -1), repeat=8):
            if sum(1 for x in signs if x < 0) % 2 == 1:
                v = list(signs)
                v[big] *= 3
                pts.append(tuple(v))
    return LatticeCode("polytope_2_41", 8, 16, tuple(sorted(pts)))


def ngon(n: int) -> FloatCode:
    """Regular n-gon on the unit circle, first vertex at (1, 0)."""
    if n < 2:
        raise ValueError("a polygon needs at least 2 vertices")
    check_size(n, f"ngon({n})")
    pts = [(cos(2 * pi * k / n), sin(2 * pi * k / n)) for k in range(n)]
    return FloatCode(f"ngon({n})", 2, np.asarray(pts), tolerance=1e-12)


# --- serialization ---


def save_code(code: Code, path: str | Path) -> None:
    Path(path).write_text(json.dumps(code.to_json_dict(), indent=2) + "\n")


def load_code(path: str | Path) -> Code:
    """Read a code from JSON; the key set decides exact vs float."""
    data = json.loads(Path(path).read_text())
    name = data.get("name", Path(path).stem)
    if "points" in data:
        pts = tuple(tuple(int(x) for x in p) for p in data["points"])
        return LatticeCode(name, int(data["ambient_dim"]), int(data["norm_sq"]), pts)
    if "points_decimal" in data:
        return FloatCode(
            name,
            int(data["ambient_dim"]),
            np.asarray(data["points_decimal"], dtype=float),
            tolerance=float(data.get("tolerance", 1e-12)),
        )
    raise ValueError(f"{path}: neither 'points' nor 'points_decimal' present")
