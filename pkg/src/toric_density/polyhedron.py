"""Newton polyhedra of lattice supports: faces, the diagonal face, the dual index.

The polyhedron is conv(generators) + R_+^n. Facet normals are nonnegative
because translating along any coordinate axis stays inside. The diagonal ray
R_+ (1,...,1) enters through a unique boundary point t0 * 1; the smallest
face containing it drives all the asymptotics downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp
from .hull import upward_hull
from .model import UniformMultiplicativeSpec
from .vectors import dot, frac, fracvec, rank, vsub


@dataclass(frozen=True)
class NewtonPolyhedron:
    n: int
    points: tuple            # generating lattice points
    vertices: tuple          # extreme points (subset of points)
    facets: tuple            # (normal, offset): <normal, x> >= offset on the hull

    def min_support(self, a) -> Fraction:
        """m(a) = min over the hull of <a, x>, attained at a vertex for a >= 0."""
        a = fracvec(a)
        return min(dot(a, v) for v in self.vertices)


@dataclass(frozen=True)
class Face:
    polar: tuple             # the defining vector a with face = argmin <a, .>
    offset: Fraction         # m(a)
    generators: tuple        # generating points lying on the face
    recession: frozenset     # coordinate directions contained in the face
    dim: int
    compact: bool

    def contains(self, x) -> bool:
        return dot(self.polar, x) == self.offset


@dataclass(frozen=True)
class DiagonalFace:
    t0: Fraction             # diagonal hitting parameter: t0 * 1 on the boundary
    face: Face
    c: tuple                 # normalized polar vector, strictly interior choice
    iota: Fraction           # |c| = 1 / t0
    rho: int                 # support points on the face minus its dimension
    face_point_count: int
    compact: bool
    count_exact: bool        # False when the count is a lower bound only


class NotCompact(Exception):
    pass


def build_polyhedron(points, dim_cap: int = 10) -> NewtonPolyhedron:
    """Exact facet/vertex description of conv(points) + R_+^n."""
    pts = [fracvec(p) for p in points]
    if not pts:
        raise ValueError("no generating points")
    n = len(pts[0])
    facets, vertices = upward_hull(pts, n, dim_cap=dim_cap)
    return NewtonPolyhedron(n=n, points=tuple(sorted(set(pts))),
                            vertices=tuple(vertices), facets=tuple(facets))


def _face_from_polar(e: NewtonPolyhedron, a) -> tuple:
    a = fracvec(a)
    m = e.min_support(a)
    gens = tuple(p for p in e.points if dot(a, p) == m)
    rec = frozenset(i for i, ai in enumerate(a) if ai == 0)
    base = gens[0]
    span = [vsub(p, base) for p in gens[1:]]
    span += [tuple(Fraction(1 if j == i else 0) for j in range(e.n)) for i in sorted(rec)]
    dim = rank(span)
    return Face(polar=a, offset=m, generators=gens, recession=rec,
                dim=dim, compact=not rec), m


def support_face(e: NewtonPolyhedron, a):
    """(m(a), face) for a nonzero nonnegative direction a."""
    a = fracvec(a)
    if all(x == 0 for x in a) or any(x < 0 for x in a):
        raise ValueError("polar direction must be nonnegative and nonzero")
    face, m = _face_from_polar(e, a)
    return m, face


def diagonal_hit(e: NewtonPolyhedron) -> Fraction:
    """Smallest t with t * (1,...,1) inside the hull."""
    t0 = Fraction(0)
    for w, m in e.facets:
        s = sum(w)
        if s > 0:
            t0 = max(t0, frac(m) / s)
    return t0


def _interior_polar(e: NewtonPolyhedron, face_gens, recession):
    """A normalized polar vector in the relative interior of the face's polar set.

    Maximizes the minimal slack: off-face vertices stay strictly above 1 and,
    outside the face's recession directions, all coordinates stay strictly
    positive. Any vertex-of-the-LP choice can sit on the boundary of the
    polar set (selecting a larger face), which breaks strict positivity, so
    the interior point is the safe canonical representative.
    """
    n = e.n
    face_set = set(face_gens)
    off = [v for v in e.vertices if v not in face_set]
    nvar = n + 1  # c_1..c_n, delta
    a_eq, b_eq = [], []
    for g in face_gens:
        a_eq.append(list(g) + [0])
        b_eq.append(1)
    for i in sorted(recession):
        row = [0] * nvar
        row[i] = 1
        a_eq.append(row)
        b_eq.append(0)
    a_ge, b_ge = [], []
    for v in off:
        a_ge.append(list(v) + [-1])
        b_ge.append(1)
    for i in range(n):
        if i in recession:
            continue
        row = [0] * nvar
        row[i] = 1
        row[n] = -1
        a_ge.append(row)
        b_ge.append(0)
    row = [0] * nvar
    row[n] = -1
    a_ge.append(row)
    b_ge.append(-1)  # delta <= 1
    objective = [0] * n + [1]
    val, x = lp.solve_lp(objective, a_eq, b_eq, a_ge, b_ge, maximize=True)
    if val <= 0:
        raise ValueError("face has no normalized polar vector in the open cone")
    return tuple(x[:n])


def diagonal_face(e: NewtonPolyhedron,
                  spec: Optional[UniformMultiplicativeSpec] = None) -> DiagonalFace:
    """The smallest face meeting the diagonal, with its polar data.

    When the weight spec is supplied, the face point count enumerates every
    supported lattice point on the face (possible exactly when the face is
    compact: the polar vector is then strictly positive and bounds the
    search). Otherwise generating points on the face are counted and the
    result is flagged as a lower bound.
    """
    t0 = diagonal_hit(e)
    diag = tuple(t0 for _ in range(e.n))
    active = [(w, m) for w, m in e.facets if dot(w, diag) == m]
    assert active, "diagonal ray must exit through some facet"
    gens = tuple(p for p in e.points
                 if all(dot(w, p) == m for w, m in active))
    rec = frozenset(i for i in range(e.n)
                    if all(w[i] == 0 for w, _ in active))
    base = gens[0]
    point_span = [vsub(p, base) for p in gens[1:]]
    point_dim = rank(point_span)
    span = point_span + [tuple(Fraction(1 if j == i else 0) for j in range(e.n))
                         for i in sorted(rec)]
    dim = rank(span)
    compact = not rec
    c = _interior_polar(e, gens, rec)
    iota = sum(c, Fraction(0))
    assert iota * t0 == 1, "normalized polar must invert the hitting parameter"

    face = Face(polar=c, offset=Fraction(1), generators=gens, recession=rec,
                dim=dim, compact=compact)
    if spec is not None and compact:
        count = _count_face_points(spec, c)
        exact = True
    else:
        count = len(gens)
        exact = compact
    # the log power subtracts the dimension spanned by the face's lattice
    # points; for compact faces this is the face dimension itself, and the
    # count always exceeds it (k points span at most an affine (k-1)-space)
    rho = count - point_dim
    return DiagonalFace(t0=t0, face=face, c=c, iota=iota, rho=rho,
                        face_point_count=count, compact=compact, count_exact=exact)


def _count_face_points(spec: UniformMultiplicativeSpec, c) -> int:
    """Total weight of lattice points v with <c, v> = 1 (c strictly positive).

    Weights beyond {0,1} count with multiplicity, matching the pole order
    of the associated local series.
    """
    n = spec.arity
    found = 0

    def rec(prefix, remaining):
        nonlocal found
        i = len(prefix)
        if i == n:
            if remaining == 0:
                found += spec.g(prefix)
            return
        ci = c[i]
        k = 0
        while True:
            contrib = ci * k
            if contrib > remaining:
                break
            rec(prefix + (k,), remaining - contrib)
            k += 1

    rec((), Fraction(1))
    return found


def face_points(spec: UniformMultiplicativeSpec, c):
    """The supported lattice points on the compact diagonal face."""
    n = spec.arity
    out = []

    def rec(prefix, remaining):
        i = len(prefix)
        if i == n:
            if remaining == 0 and spec.g(prefix):
                out.append(prefix)
            return
        ci = c[i]
        k = 0
        while True:
            contrib = ci * k
            if contrib > remaining:
                break
            rec(prefix + (k,), remaining - contrib)
            k += 1

    rec((), Fraction(1))
    return sorted(out)


def iota_lp(e: NewtonPolyhedron):
    """min |c| over the dual of the hull intersected with the positive orthant.

    Vertex constraints suffice because the recession cone is the full
    positive orthant. Exact rational simplex; the minimizer is one (possibly
    boundary) normalized polar vector of the diagonal face.
    """
    nverts = list(e.vertices)
    objective = [1] * e.n
    a_ge = [list(v) for v in nverts]
    b_ge = [1] * len(nverts)
    val, x = lp.solve_lp(objective, a_ge=a_ge, b_ge=b_ge)
    return val, tuple(x)


def polar_vectors(e: NewtonPolyhedron, face: Face, want: int = 2):
    """Distinct normalized polar vectors of a face (for invariance checks).

    Returns between one and `want` vectors; a single vector means the polar
    set is (numerically) a point.
    """
    gens, rec = face.generators, face.recession
    center = _interior_polar(e, gens, rec)
    out = [center]
    n = e.n
    off = [v for v in e.vertices if v not in set(gens)]
    for sense in (False, True):
        for coord in range(n):
            if coord in rec:
                continue
            objective = [0] * n
            objective[coord] = 1
            a_eq = [list(g) for g in gens] + [_unit_row(n, i) for i in sorted(rec)]
            b_eq = [1] * len(gens) + [0] * len(rec)
            a_ge = [list(v) for v in off] + [_unit_row(n, i) for i in range(n) if i not in rec]
            b_ge = [1] * len(off) + [0] * (n - len(rec))
            try:
                _, x = lp.solve_lp(objective, a_eq, b_eq, a_ge, b_ge, maximize=sense)
            except lp.Unbounded:
                continue
            cand = tuple((a + b) / 2 for a, b in zip(center, x))
            if cand not in out and _face_of(e, cand) == gens:
                out.append(cand)
            if len(out) >= want:
                return out
    return out


def _unit_row(n, i):
    row = [0] * n
    row[i] = 1
    return row


def _face_of(e: NewtonPolyhedron, a):
    m = e.min_support(a)
    if m == 0:
        return None
    scaled = tuple(x / m for x in a)
    return tuple(p for p in e.points if dot(scaled, p) == 1)


def lemma1_check(e: NewtonPolyhedron, face: Face, c) -> bool:
    """Face meets the diagonal exactly when |c| equals the dual index."""
    c = fracvec(c)
    iota, _ = iota_lp(e)
    t0 = diagonal_hit(e)
    diag = tuple(t0 for _ in range(e.n))
    meets = face.contains(diag)
    return meets == (sum(c, Fraction(0)) == iota)
