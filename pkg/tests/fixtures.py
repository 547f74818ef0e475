"""Shared builders for the worked three-vertex plane example and friends.

The running configuration: target is the fan of the plane quadrant (two
boundary rays), three vertices of degrees 2, 2, 0, legs with tangency
vectors (1,0), (0,1), (3,3), and two edges joining the degree-2 vertices to
the degree-0 one.  The unique balanced slopes are (1,2) and (2,1).
"""

from tropi.cones import ORIGIN, ConeComplex, build_snc_tropicalization
from tropi.combtypes import CombinatorialType, DecoratedGraph, NumericalData

E1 = ("v1", "v3")
E2 = ("v2", "v3")


def quadrant() -> ConeComplex:
    return build_snc_tropicalization(2, [{1}, {2}, {1, 2}])


def octant() -> ConeComplex:
    return build_snc_tropicalization(
        3, [{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]
    )


def deg(c: ConeComplex, **by_ray) -> tuple:
    """Degree vector in canonical ray order, entries given per ray tuple."""
    return tuple(by_ray.get(str(r), 0) for r in c.rays)


def golden_graph() -> DecoratedGraph:
    q = quadrant()
    two = deg(q, **{str((1, 0)): 2, str((0, 1)): 2})
    zero = deg(q)
    return DecoratedGraph(
        vertices=["v1", "v2", "v3"],
        edges=[E1, E2],
        legs=[("v1", 1), ("v2", 2), ("v3", 3)],
        degrees={"v1": two, "v2": two, "v3": zero},
    )


def golden_type(with_slopes: bool = False) -> CombinatorialType:
    """The non-realizable three-vertex configuration on the quadrant."""
    q = quadrant()
    full = frozenset(range(len(q.rays)))
    ray_e1 = frozenset({q.rays.index((1, 0))})
    ray_e2 = frozenset({q.rays.index((0, 1))})
    t = CombinatorialType(
        graph=golden_graph(),
        target=q,
        vertex_cones={"v1": ORIGIN, "v2": ORIGIN, "v3": full},
        edge_cones={E1: full, E2: full},
        leg_cones={1: ray_e1, 2: ray_e2, 3: full},
        leg_slopes={1: (1, 0), 2: (0, 1), 3: (3, 3)},
    )
    if with_slopes:
        t = t.with_slopes({E1: (1, 2), E2: (2, 1)})
    return t


def golden_lambda() -> NumericalData:
    q = quadrant()
    return NumericalData(
        n=3,
        alphas=[(1, 0), (0, 1), (3, 3)],
        total_degree=deg(q, **{str((1, 0)): 4, str((0, 1)): 4}),
    )
