import random
from fractions import Fraction

import pytest

from toric_density.hull import polytope_volume, upward_hull
from toric_density.lp import Infeasible, Unbounded, solve_lp
from toric_density.vectors import dot


class TestUpwardHull:
    def test_unit_vectors(self):
        facets, vertices = upward_hull([(1, 0), (0, 1)], 2)
        assert set(vertices) == {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))}
        normals = {tuple(map(int, w)) for w, _ in facets}
        assert normals == {(1, 0), (0, 1), (1, 1)}

    def test_three_dim(self):
        pts = [(2, 0, 1), (0, 2, 1)]
        facets, vertices = upward_hull(pts, 3)
        got = {(tuple(map(int, w)), int(m)) for w, m in facets}
        assert got == {((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 1),
                       ((1, 1, 0), 2)}
        # (1,1,2) >= 4 is valid on the hull but not a facet
        for p in pts:
            assert dot((1, 1, 2), p) >= 4
        assert len(vertices) == 2

    def test_every_generator_inside(self):
        rng = random.Random(1)
        for _ in range(30):
            n = rng.randint(2, 4)
            pts = [tuple(rng.randint(0, 9) for _ in range(n)) for _ in range(rng.randint(1, 7))]
            pts = [p for p in pts if any(p)]
            if not pts:
                continue
            facets, vertices = upward_hull(pts, n)
            for p in pts:
                for w, m in facets:
                    assert dot(w, p) >= m
            for v in vertices:
                tight = [w for w, m in facets if dot(w, v) == m]
                from toric_density.vectors import rank
                assert rank(tight) == n

    def test_facet_normals_nonnegative(self):
        facets, _ = upward_hull([(3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 0)], 3)
        for w, _ in facets:
            assert all(x >= 0 for x in w)


class TestVolume:
    def test_simplices(self):
        assert polytope_volume([(0, 0), (1, 0), (0, 1)]) == Fraction(1, 2)
        assert polytope_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == Fraction(1, 6)

    def test_half_diag_triangle(self):
        pts = [(0, 0), (Fraction(1, 2), Fraction(1, 2)), (0, 1)]
        assert polytope_volume(pts) == Fraction(1, 4)

    def test_unit_square(self):
        assert polytope_volume([(0, 0), (1, 0), (0, 1), (1, 1)]) == 1

    def test_degenerate(self):
        assert polytope_volume([(0, 0), (1, 1), (2, 2)]) == 0

    def test_cube_with_interior_points(self):
        pts = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
        pts.append((Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
        assert polytope_volume(pts) == 1

    def test_random_translation_invariance(self):
        rng = random.Random(9)
        for _ in range(10):
            pts = [tuple(Fraction(rng.randint(0, 8), rng.randint(1, 3)) for _ in range(3))
                   for _ in range(6)]
            shift = tuple(Fraction(rng.randint(-3, 3)) for _ in range(3))
            moved = [tuple(a + b for a, b in zip(p, shift)) for p in pts]
            assert polytope_volume(pts) == polytope_volume(moved)


class TestSimplex:
    def test_basic_min(self):
        # min x + y subject to x + y >= 1
        val, x = solve_lp([1, 1], a_ge=[[1, 1]], b_ge=[1])
        assert val == 1 and sum(x) == 1

    def test_two_constraints(self):
        val, x = solve_lp([1, 1, 1], a_ge=[[2, 0, 1], [0, 2, 1]], b_ge=[1, 1])
        assert val == Fraction(1)

    def test_equality(self):
        val, x = solve_lp([0, -1], a_eq=[[1, 1]], b_eq=[2], a_ge=[[1, -1]], b_ge=[0])
        # max y with x + y = 2, x >= y
        assert val == -1 and x == (Fraction(1), Fraction(1))

    def test_infeasible(self):
        with pytest.raises(Infeasible):
            solve_lp([1], a_eq=[[1]], b_eq=[-2])

    def test_unbounded(self):
        with pytest.raises(Unbounded):
            solve_lp([-1], a_ge=[[1]], b_ge=[0])

    def test_maximize(self):
        val, x = solve_lp([1, 2], a_ge=[[-1, 0], [0, -1], [-1, -1]],
                          b_ge=[-1, -1, Fraction(-3, 2)], maximize=True)
        assert val == Fraction(5, 2)

    def test_random_against_scipy(self):
        scipy = pytest.importorskip("scipy.optimize")
        rng = random.Random(17)
        for _ in range(20):
            n, m = rng.randint(2, 4), rng.randint(2, 4)
            c = [rng.randint(1, 5) for _ in range(n)]
            a = [[rng.randint(0, 4) for _ in range(n)] for _ in range(m)]
            a = [row for row in a if any(row)]
            b = [rng.randint(1, 6) for _ in range(len(a))]
            val, x = solve_lp(c, a_ge=a, b_ge=b)
            res = scipy.linprog(c, A_ub=[[-v for v in row] for row in a],
                                b_ub=[-v for v in b], bounds=[(0, None)] * n,
                                method="highs")
            assert res.success
            assert abs(float(val) - res.fun) < 1e-7
