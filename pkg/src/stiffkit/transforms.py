"""Constructive operations: symmetrization, facet derivation, gluing,
and the rotated-cubes family.

Gluing implements the reflection construction that adds cardinalities of
two m-stiff codes: reflect the first code so a dual point is shared, then
reflect again across a generic hyperplane through that dual point to force
disjointness.  The genericity conditions are tested explicitly and the
random direction is retried on failure.
"""

from __future__ import annotations

from fractions import Fraction
from math import cos, pi, sin
from typing import Optional

import numpy as np

from ._linalg import integer_nullspace
from .codes import Code, FloatCode, LatticeCode, LatticePoint, Vector, cube, gcd_reduce
from .design import spectrum
from .exact import Surd, square_free_split
from .stiffness import StiffnessCertificate, certify_stiff


def symmetrize(code: Code) -> Code:
    """The union code ∪ (-code); input must have no antipodal pair."""
    if isinstance(code, LatticeCode):
        pset = set(code.points)
        for p in code.points:
            if tuple(-x for x in p) in pset:
                raise ValueError(f"{code.name} contains the antipodal pair ±{p}")
        pts = tuple(sorted(pset | {tuple(-x for x in p) for p in code.points}))
        return LatticeCode(f"symmetrize({code.name})", code.ambient_dim,
                           code.norm_sq, pts)
    pts = code.unit_array()
    for p in pts:
        if np.linalg.norm(pts + p[None, :], axis=1).min() < 10 * code.tolerance:
            raise ValueError(f"{code.name} contains an antipodal pair")
    return FloatCode(f"symmetrize({code.name})", code.ambient_dim,
                     np.vstack([pts, -pts]), tolerance=code.tolerance)


def _orthogonal_integer_basis(x: Vector) -> Optional[list[Vector]]:
    """Pairwise-orthogonal integer basis of {x}^perp with equal squared norms.

    Equal norms are possible iff the Gram-Schmidt norms share one
    square-free part; returns None otherwise.
    """
    raw = integer_nullspace([x])
    basis: list[tuple[Fraction, ...]] = []
    for v in raw:
        w = [Fraction(c) for c in v]
        for b in basis:
            bb = sum(c * c for c in b)
            coef = sum(a * c for a, c in zip(w, b)) / bb
            if coef:
                w = [a - coef * c for a, c in zip(w, b)]
        basis.append(tuple(w))
    ints: list[Vector] = []
    for b in basis:
        lcm = 1
        for c in b:
            lcm = lcm * c.denominator // np.gcd(lcm, c.denominator)
        ints.append(gcd_reduce(tuple(int(c * lcm) for c in b)))
    splits = [square_free_split(sum(c * c for c in v)) for v in ints]
    parts = {s for _, s in splits}
    if len(parts) > 1:
        return None
    big_f = 1
    for f, _ in splits:
        big_f = int(np.lcm(big_f, f))
    return [tuple(c * (big_f // f) for c in v) for v, (f, _) in zip(ints, splits)]


def facet_derive(code: Code, x, t) -> Code:
    """Slice {y : x.y = t} projected to the unit sphere of {x}^perp.

    Each selected y maps to (y - t*x)/sqrt(1-t^2), written in a basis of
    the orthogonal complement: an equal-norm integer basis keeps the
    output exact when one exists, otherwise floating coordinates.
    The pairwise dots transform as u -> (u - t^2)/(1 - t^2).
    """
    exact_in = isinstance(code, LatticeCode) and isinstance(x, LatticePoint) \
        and isinstance(t, (int, Fraction, Surd))
    if exact_in:
        tt = t if isinstance(t, Surd) else Surd(t)
        if tt == 1 or tt == -1:
            raise ValueError("t = ±1 slices to a single point, not a facet")
        rep = spectrum(x, code)
        if tt not in set(rep.values()):
            raise ValueError(f"dot value {t} is not attained by {code.name}")
        # selected rows: x.y == t * sqrt(ns_x * ns_c) on the integer side
        target = tt * Surd.sqrt_of(x.norm_sq * code.norm_sq)
        if target.radicand == 1 and target.coeff.denominator == 1:
            raw_t = int(target.coeff)
            rows = [y for y in code.points
                    if sum(a * b for a, b in zip(x.vector, y)) == raw_t]
            basis = _orthogonal_integer_basis(x.vector)
            if basis is not None:
                coords = [tuple(sum(a * b for a, b in zip(y, bv)) for bv in basis)
                          for y in rows]
                norms = {sum(c * c for c in w) for w in coords}
                assert len(norms) == 1, "slice points must share one norm"
                ns = norms.pop()
                return LatticeCode(f"facet({code.name},t={t})",
                                   code.ambient_dim - 1, ns,
                                   tuple(sorted(coords)))
        # irrational slice threshold or no equal-norm basis: fall through
    # float path
    xv = x.unit() if isinstance(x, LatticePoint) else np.asarray(x, dtype=float)
    xv = xv / np.linalg.norm(xv)
    tf = float(t)
    if abs(tf) >= 1 - 1e-12:
        raise ValueError("t = ±1 slices to a single point, not a facet")
    units = code.unit_array()
    dots = units @ xv
    sel = units[np.abs(dots - tf) < 1e-9]
    if not len(sel):
        raise ValueError(f"dot value {t} is not attained by {code.name}")
    proj = (sel - tf * xv[None, :]) / (1.0 - tf * tf) ** 0.5
    # orthonormal basis of {x}^perp from the full SVD of x as a row
    _, _, vt = np.linalg.svd(xv[None, :])
    basis_f = vt[1:]
    coords = proj @ basis_f.T
    return FloatCode(f"facet({code.name},t={float(t):.6g})",
                     code.ambient_dim - 1, coords,
                     tolerance=getattr(code, "tolerance", 1e-12))


def _dual_point(cert: StiffnessCertificate) -> np.ndarray:
    """One unit vector from the dual: a listed point, or a subspace direction."""
    pts = cert.dual.unit_points()
    if len(pts):
        return pts[0]
    basis = cert.dual.subspace_basis
    v = np.asarray(basis[0], dtype=float)
    return v / np.linalg.norm(v)


def glue(code1: Code, code2: Code, m: int, seed: int = 0,
         max_retries: int = 64) -> tuple[FloatCode, StiffnessCertificate]:
    """Union of two m-stiff codes after two reflections, again m-stiff.

    Reflect code1 so a dual point of code1 lands on a dual point z2 of
    code2, then reflect across a generic hyperplane containing z2 to make
    the copy disjoint from code2.  The resulting union of (2m-1)-designs
    is a (2m-1)-design with z2 in its dual.
    """
    if code1.ambient_dim != code2.ambient_dim:
        raise ValueError("codes live in different ambient dimensions")
    if code1.sphere_dim < 2:
        raise ValueError("gluing needs sphere dimension d >= 2")
    cert1 = certify_stiff(code1, m)
    cert2 = certify_stiff(code2, m)
    if not cert1.stiff or not cert2.stiff:
        raise ValueError("both inputs must be m-stiff")
    z1 = _dual_point(cert1)
    z2 = _dual_point(cert2)
    if np.linalg.norm(z1 - z2) < 1e-9:
        z2 = -z2  # duals are antipodal, so -z2 is also a dual point

    pts1 = code1.unit_array()
    pts2 = code2.unit_array()
    u = z1 - z2
    u /= np.linalg.norm(u)
    pts1r = pts1 - 2.0 * (pts1 @ u)[:, None] * u[None, :]  # now z2 in its dual

    rng = np.random.default_rng(seed)
    d1 = code1.ambient_dim
    for _ in range(max_retries):
        a = rng.normal(size=d1)
        a -= (a @ z2) * z2  # enforce a ⊥ z2
        n = np.linalg.norm(a)
        if n < 1e-9:
            continue
        a /= n
        # genericity: a not parallel to any w - v, a not perpendicular to code2
        diffs = pts2[:, None, :] - pts1r[None, :, :]
        dn = np.linalg.norm(diffs, axis=2)
        with np.errstate(invalid="ignore", divide="ignore"):
            cosines = np.abs(diffs @ a) / np.where(dn > 1e-12, dn, np.inf)
        if np.any(cosines > 1.0 - 1e-9):
            continue
        if np.any(np.abs(pts2 @ a) < 1e-9):
            continue
        pts1rr = pts1r - 2.0 * (pts1r @ a)[:, None] * a[None, :]
        # explicit disjointness check
        gap = np.linalg.norm(pts2[:, None, :] - pts1rr[None, :, :], axis=2).min()
        if gap < 1e-8:
            continue
        union = np.vstack([pts1rr, pts2])
        out = FloatCode(f"glue({code1.name},{code2.name},m={m})", d1, union,
                        tolerance=1e-9)
        cert = certify_stiff(out, m)
        return out, cert
    raise RuntimeError(f"no generic reflection direction found in {max_retries} tries")


def rotated_cubes(n: int, seed: int = 0) -> tuple[FloatCode, StiffnessCertificate]:
    """Union of n copies of the cube on S^2 rotated about the z-axis.

    Rotation angles pi*k/(2n) keep the two horizontal planes z = ±1/sqrt(3)
    and kill every rotational symmetry of the union for n >= 2, leaving
    only the axis pair ±e_3 in the dual.
    """
    if n < 1:
        raise ValueError("need at least one copy")
    base = cube(3).unit_array()
    copies = []
    for k in range(n):
        th = pi * k / (2 * n)
        c, s = cos(th), sin(th)
        rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        copies.append(base @ rot.T)
    fc = FloatCode(f"rotated_cubes({n})", 3, np.vstack(copies), tolerance=1e-10)
    cert = certify_stiff(fc, 2)
    return fc, cert
