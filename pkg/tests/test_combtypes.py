import random
from fractions import Fraction

import pytest

from tropi.cones import ORIGIN, minimal_containing_cone
from tropi.combtypes import (
    CombinatorialType,
    DecoratedGraph,
    NumericalData,
    TypeProblem,
    check_gathmann,
    check_global_balancing,
    collect_sensitive_slopes,
    lift_numerical_data,
    pushforward_type,
    ray_coefficient,
    solve_balancing,
    validate_type,
)
from tropi.linalg import solve_rational_system, vec_dot
from tropi.subdivide import compose, identity_subdivision, stellar, stellar_at_point

from fixtures import E1, E2, deg, golden_graph, golden_lambda, golden_type, quadrant


class TestGraph:
    def test_not_a_tree(self):
        with pytest.raises(TypeProblem):
            DecoratedGraph(
                ["a", "b"], [("a", "b"), ("b", "a")], [], {"a": (0,), "b": (0,)}
            )

    def test_disconnected(self):
        with pytest.raises(TypeProblem):
            DecoratedGraph(
                ["a", "b", "c", "d"],
                [("a", "b"), ("a", "b")],
                [],
                {v: (0,) for v in "abcd"},
            )

    def test_bad_labels(self):
        with pytest.raises(TypeProblem):
            DecoratedGraph(["a"], [], [("a", 2)], {"a": (0,)})

    def test_valence(self):
        g = golden_graph()
        assert g.valence("v3") == 2
        assert g.legs_at("v3") == [3]


class TestBalancing:
    def test_golden_solution(self):
        slopes = solve_balancing(golden_type())
        assert slopes[E1] == (1, 2)
        assert slopes[E2] == (2, 1)

    def test_single_vertex(self):
        q = quadrant()
        t = CombinatorialType(
            graph=DecoratedGraph(["v"], [], [("v", 1)], {"v": deg(q, **{str((1, 0)): 1})}),
            target=q,
            vertex_cones={"v": ORIGIN},
            edge_cones={},
            leg_cones={1: frozenset({q.rays.index((1, 0))})},
            leg_slopes={1: (1, 0)},
        )
        assert solve_balancing(t) == {}

    def test_root_invariance(self):
        t = golden_type()
        base = solve_balancing(t, root="v1")
        for root in ("v2", "v3"):
            assert solve_balancing(t, root=root) == base

    def test_global_balancing_violation(self):
        t = golden_type()
        bad = {**t.graph.degrees, "v3": (1, 0)}
        t2 = CombinatorialType(
            graph=DecoratedGraph(
                t.graph.vertices, t.graph.edges, t.graph.legs, bad
            ),
            target=t.target,
            vertex_cones=t.vertex_cones,
            edge_cones=t.edge_cones,
            leg_cones=t.leg_cones,
            leg_slopes=t.leg_slopes,
        )
        with pytest.raises(TypeProblem, match="direction"):
            solve_balancing(t2)

    def test_matches_linear_system_oracle(self):
        # stack the per-vertex equations and solve generically per direction;
        # on the coordinate fan a slope's ray component is an ambient entry
        t = golden_type()
        slopes = solve_balancing(t)
        edges = list(t.graph.edges)
        for i, ray in enumerate(t.target.rays):
            coord = ray.index(1)
            rows, rhs = [], []
            for v in t.graph.vertices:
                row = [1 if e[0] == v else (-1 if e[1] == v else 0) for e in edges]
                rows.append(row)
                b = Fraction(t.graph.degrees[v][i])
                for j in t.graph.legs_at(v):
                    b -= ray_coefficient(t.target, i, t.leg_slopes[j])
                rhs.append(b)
            sol = solve_rational_system(rows, rhs)
            assert sol is not None
            for e, val in zip(edges, sol.vector):
                assert Fraction(slopes[e][coord]) == val


class TestValidate:
    def test_golden_valid(self):
        report = validate_type(golden_type(with_slopes=True))
        assert report.valid, report.failures()

    def test_support_violation(self):
        t = golden_type(with_slopes=True)
        q = t.target
        t.edge_cones[E1] = frozenset({q.rays.index((1, 0))})
        report = validate_type(t)
        names = {c.name for c in report.failures()}
        assert "slope-support" in names

    def test_antisymmetry_violation(self):
        t = golden_type(with_slopes=True)
        t.edge_slopes[(E1[1], E1[0])] = (1, 2)  # flipped without negating
        report = validate_type(t)
        assert any(c.name == "antisymmetry" for c in report.failures())

    def test_face_condition_violation(self):
        t = golden_type(with_slopes=True)
        q = t.target
        t.vertex_cones["v1"] = frozenset({q.rays.index((0, 1))})
        report = validate_type(t)
        assert any(c.name == "face-condition" for c in report.failures())

    def test_positivity_violation(self):
        t = golden_type(with_slopes=True)
        t.edge_slopes[E1] = (-1, 2)
        report = validate_type(t)
        assert any(c.name == "positivity" for c in report.failures())


class TestGathmann:
    def test_golden_passes(self):
        assert check_gathmann(golden_type(with_slopes=True)) is True

    def test_degree_perturbation_fails(self):
        t = golden_type(with_slopes=True)
        g = t.graph
        bumped = {**g.degrees, "v3": (1, 0)}
        t2 = CombinatorialType(
            graph=DecoratedGraph(g.vertices, g.edges, g.legs, bumped),
            target=t.target,
            vertex_cones=t.vertex_cones,
            edge_cones=t.edge_cones,
            leg_cones=t.leg_cones,
            leg_slopes=t.leg_slopes,
            edge_slopes=t.edge_slopes,
        )
        assert check_gathmann(t2) is False

    def test_unsolved_slopes(self):
        with pytest.raises(TypeProblem):
            check_gathmann(golden_type())

    def test_single_interior_vertex(self):
        q = quadrant()
        t = CombinatorialType(
            graph=DecoratedGraph(
                ["v"],
                [],
                [("v", 1), ("v", 2)],
                {"v": deg(q, **{str((1, 0)): 1, str((0, 1)): 1})},
            ),
            target=q,
            vertex_cones={"v": ORIGIN},
            edge_cones={},
            leg_cones={
                1: frozenset({q.rays.index((1, 0))}),
                2: frozenset({q.rays.index((0, 1))}),
            },
            leg_slopes={1: (1, 0), 2: (0, 1)},
            edge_slopes={},
        )
        assert check_gathmann(t) is True


class TestCollectSlopes:
    def test_golden(self):
        slopes = collect_sensitive_slopes([golden_type(with_slopes=True)])
        assert slopes == {(1, 2), (2, 1)}

    def test_dedup_across_types(self):
        t = golden_type(with_slopes=True)
        assert collect_sensitive_slopes([t, t]) == {(1, 2), (2, 1)}

    def test_mixed_sign_excluded(self):
        q = quadrant()
        full = frozenset(range(2))
        ray1 = frozenset({q.rays.index((1, 0))})
        t = CombinatorialType(
            graph=DecoratedGraph(
                ["a", "b"],
                [("a", "b")],
                [("a", 1), ("b", 2)],
                {"a": deg(q, **{str((1, 0)): 1}), "b": deg(q, **{str((0, 1)): 1})},
            ),
            target=q,
            vertex_cones={"a": ORIGIN, "b": ORIGIN},
            edge_cones={("a", "b"): full},
            leg_cones={1: ray1, 2: frozenset({q.rays.index((0, 1))})},
            leg_slopes={1: (1, 0), 2: (0, 1)},
        )
        slopes = solve_balancing(t)
        t = t.with_slopes(slopes)
        # slope is mixed-sign: (a->b) carries (-1, 1)
        assert collect_sensitive_slopes([t]) == set()


class TestPushforward:
    def test_identity(self):
        t = golden_type(with_slopes=True)
        s = identity_subdivision(t.target)
        out = pushforward_type(s, t)
        assert out.edge_slopes == t.edge_slopes
        assert out.vertex_cones == t.vertex_cones

    def test_bivalent_vertex_merged(self):
        q = quadrant()
        s = stellar_at_point(q, (1, 1))
        r = s.refined
        mid = frozenset({r.rays.index((1, 1))})
        cone_lo = frozenset({r.rays.index((1, 0)), r.rays.index((1, 1))})
        cone_hi = frozenset({r.rays.index((1, 1)), r.rays.index((0, 1))})
        zero = tuple(0 for _ in r.rays)
        t = CombinatorialType(
            graph=DecoratedGraph(
                ["a", "m", "b"],
                [("a", "m"), ("m", "b")],
                [("a", 1), ("b", 2)],
                {"a": zero, "m": zero, "b": zero},
            ),
            target=r,
            vertex_cones={"a": ORIGIN, "m": mid, "b": mid},
            edge_cones={("a", "m"): mid, ("m", "b"): mid},
            leg_cones={1: mid, 2: mid},
            leg_slopes={1: (0, 0), 2: (0, 0)},
            edge_slopes={("a", "m"): (1, 1), ("m", "b"): (1, 1)},
        )
        # degree bookkeeping is all zero, m is legless and bivalent
        out = pushforward_type(s, t)
        assert set(out.graph.vertices) == {"a", "b"}
        assert len(out.graph.edges) == 1
        e = out.graph.edges[0]
        assert out.slope_from("a", e) == (1, 1)

    def test_functoriality(self):
        t = golden_type(with_slopes=True)
        s1 = stellar_at_point(quadrant(), (1, 1))
        s2 = stellar_at_point(s1.refined, (1, 2))
        comp = compose(s1, s2)
        # build a simple type on the doubly refined fan and push both ways
        r = s2.refined
        zero = tuple(0 for _ in r.rays)
        full_ray = frozenset({r.rays.index((1, 0))})
        up = CombinatorialType(
            graph=DecoratedGraph(["a"], [], [("a", 1)], {"a": zero}),
            target=r,
            vertex_cones={"a": ORIGIN},
            edge_cones={},
            leg_cones={1: full_ray},
            leg_slopes={1: (0, 0)},
            edge_slopes={},
        )
        via_steps = pushforward_type(s1, pushforward_type(s2, up))
        direct = pushforward_type(comp, up)
        assert via_steps.vertex_cones == direct.vertex_cones
        assert via_steps.graph.degrees == direct.graph.degrees


class TestLift:
    def test_golden_lift(self):
        q = quadrant()
        s = stellar(q, frozenset(range(2)))
        lam = golden_lambda()
        lifted = lift_numerical_data(s, lam)
        r = s.refined
        by_ray = dict(zip(r.rays, lifted.total_degree))
        assert by_ray[(1, 1)] == 3
        assert by_ray[(1, 0)] == 1
        assert by_ray[(0, 1)] == 1

    def test_disjoint_case(self):
        q = quadrant()
        s = stellar(q, frozenset(range(2)))
        lam = NumericalData(2, [(2, 0), (0, 2)], deg(q, **{str((1, 0)): 2, str((0, 1)): 2}))
        lifted = lift_numerical_data(s, lam)
        by_ray = dict(zip(s.refined.rays, lifted.total_degree))
        assert by_ray[(1, 1)] == 0
        assert by_ray[(1, 0)] == 2 and by_ray[(0, 1)] == 2

    def test_zero_data(self):
        q = quadrant()
        s = stellar(q, frozenset(range(2)))
        lam = NumericalData(0, [], (0, 0))
        lifted = lift_numerical_data(s, lam)
        assert all(x == 0 for x in lifted.total_degree)

    def test_preserves_global_balancing(self):
        q = quadrant()
        s = stellar(q, frozenset(range(2)))
        lam = golden_lambda()
        assert check_global_balancing(q, lam) is None
        lifted = lift_numerical_data(s, lam)
        assert check_global_balancing(s.refined, lifted) is None

    def test_rejects_composite(self):
        s1 = stellar_at_point(quadrant(), (1, 1))
        s2 = stellar_at_point(s1.refined, (1, 2))
        comp = compose(s1, s2)
        with pytest.raises(TypeProblem):
            lift_numerical_data(comp, golden_lambda())


class TestGlobalBalancing:
    def test_golden(self):
        assert check_global_balancing(quadrant(), golden_lambda()) is None

    def test_violation_reported(self):
        q = quadrant()
        lam = NumericalData(1, [(1, 0)], deg(q, **{str((1, 0)): 2}))
        assert check_global_balancing(q, lam) is not None
