"""Minimal generators of a weight support, with a stabilization heuristic.

The support S*(g) of a uniform multiplicative weight is upward closed enough
for convex purposes: any point dominating another contributes nothing new to
the hull conv(S*) + R_+^n. By Dickson's lemma the componentwise-minimal
subset is finite, but no effective bound is available in general, so
completeness is certified heuristically: enumerate up to a cap, then double
the cap and compare the resulting hull vertex sets.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .hull import upward_hull
from .model import UniformMultiplicativeSpec


class CapTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class LatticePointSet:
    """An antichain of weighted lattice points plus completeness metadata."""

    points: tuple
    cap: int
    stabilized: bool
    spec: UniformMultiplicativeSpec
    compact_face_members: Optional[frozenset] = None

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _enumerate_minimal(spec: UniformMultiplicativeSpec, cap: int):
    """Graded scan of |v| <= cap keeping the g-supported antichain.

    Grading makes the filter one-directional: a point can only dominate
    earlier accepted points, never be dominated by later ones. Subtrees whose
    every completion dominates an accepted generator are pruned.
    """
    n = spec.arity
    accepted: list[tuple] = []

    def dominated(nu):
        for g in accepted:
            if all(a >= b for a, b in zip(nu, g)):
                return True
        return False

    def subtree_dead(prefix):
        k = len(prefix)
        for g in accepted:
            if all(a >= b for a, b in zip(prefix, g)) and all(x == 0 for x in g[k:]):
                return True
        return False

    def rec(prefix, rest):
        if len(prefix) == n - 1:
            nu = prefix + (rest,)
            if not dominated(nu) and spec.g(nu):
                accepted.append(nu)
            return
        for k in range(rest + 1):
            nxt = prefix + (k,)
            if not subtree_dead(nxt):
                rec(nxt, rest - k)

    for total in range(1, cap + 1):
        rec((), total)
    return accepted


def minimal_generators(spec: UniformMultiplicativeSpec, cap: Optional[int] = None) -> LatticePointSet:
    """All componentwise-minimal points of the support within |v| <= cap."""
    if spec.arity < 1:
        raise ValueError("arity must be at least 1")
    if cap is None:
        cap = spec.default_cap
    if cap < 1:
        raise ValueError("cap must be positive")
    pts = _enumerate_minimal(spec, cap)
    if not pts and cap < 2 * spec.default_cap:
        raise CapTooSmall(f"no support points with |v| <= {cap}")
    return LatticePointSet(points=tuple(sorted(pts)), cap=cap, stabilized=False, spec=spec)


def membership(spec: UniformMultiplicativeSpec, nu) -> int:
    """The exact weight g(v)."""
    return spec.weight(nu)


def _compact_face_flags(points, n):
    """Points lying on at least one compact face of the hull.

    The smallest face containing a point is cut out by its tight facets;
    it is compact exactly when no coordinate direction is orthogonal to all
    of them. Points interior to the hull lie on no face and are excluded.
    """
    from .vectors import dot
    facets, _ = upward_hull(points, n)
    members = set()
    for p in points:
        tight = [w for w, m in facets if dot(w, p) == m]
        if tight and all(any(w[i] != 0 for w in tight) for i in range(n)):
            members.add(tuple(p))
    return frozenset(members)


def stabilization_check(spec: UniformMultiplicativeSpec, current: LatticePointSet) -> LatticePointSet:
    """Re-enumerate at twice the cap; stable when the hull vertices agree.

    Returns the doubled-cap set carrying the flag and the compact-face
    membership of each point. The criterion is a pragmatic stand-in for an
    effective generator bound, which is not available; downstream constants
    refuse to certify when the flag is off.
    """
    doubled = minimal_generators(spec, 2 * current.cap)
    _, v1 = upward_hull(current.points, spec.arity)
    _, v2 = upward_hull(doubled.points, spec.arity)
    return replace(doubled, stabilized=(v1 == v2),
                   compact_face_members=_compact_face_flags(doubled.points,
                                                            spec.arity))


def generators_with_check(spec: UniformMultiplicativeSpec, cap: Optional[int] = None) -> LatticePointSet:
    """Convenience pipeline: enumerate, then stabilize."""
    return stabilization_check(spec, minimal_generators(spec, cap))
