"""The worked plane-quadrant example used by the CLI self-test.

Target: the fan of a plane with two boundary lines (rays e1, e2, one
two-dimensional cone).  Numerical data: three markings with tangency
vectors (1,0), (0,1), (3,3) and total degree 4 against each line.  The
three-vertex configuration below balances to edge slopes (1,2) and (2,1)
but is not smoothable.
"""

from __future__ import annotations

from .combtypes import CombinatorialType, DecoratedGraph, NumericalData
from .cones import ORIGIN, ConeComplex, build_snc_tropicalization
from .enumeration import DegreeCatalogue

E1 = ("v1", "v3")
E2 = ("v2", "v3")


def quadrant() -> ConeComplex:
    return build_snc_tropicalization(2, [{1}, {2}, {1, 2}])


def example_type(with_slopes: bool = False) -> CombinatorialType:
    q = quadrant()
    full = frozenset(range(len(q.rays)))
    ray_e1 = frozenset({q.rays.index((1, 0))})
    ray_e2 = frozenset({q.rays.index((0, 1))})
    by_ray = {(1, 0): 2, (0, 1): 2}
    two = tuple(by_ray.get(r, 0) for r in q.rays)
    zero = tuple(0 for _ in q.rays)
    t = CombinatorialType(
        graph=DecoratedGraph(
            vertices=["v1", "v2", "v3"],
            edges=[E1, E2],
            legs=[("v1", 1), ("v2", 2), ("v3", 3)],
            degrees={"v1": two, "v2": two, "v3": zero},
        ),
        target=q,
        vertex_cones={"v1": ORIGIN, "v2": ORIGIN, "v3": full},
        edge_cones={E1: full, E2: full},
        leg_cones={1: ray_e1, 2: ray_e2, 3: full},
        leg_slopes={1: (1, 0), 2: (0, 1), 3: (3, 3)},
    )
    if with_slopes:
        t = t.with_slopes({E1: (1, 2), E2: (2, 1)})
    return t


def example_data() -> NumericalData:
    q = quadrant()
    by_ray = {(1, 0): 4, (0, 1): 4}
    return NumericalData(
        n=3,
        alphas=[(1, 0), (0, 1), (3, 3)],
        total_degree=tuple(by_ray.get(r, 0) for r in q.rays),
    )


def example_catalogue() -> DegreeCatalogue:
    return DegreeCatalogue(atoms=[(0, 0), (2, 2), (4, 4)], max_vertices=3)
