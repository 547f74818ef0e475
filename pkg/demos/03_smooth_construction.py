"""Constructive smoothing of a well-behaved type.

On the sensitized fan, a two-vertex type whose edge walks from the
origin up the ray (1,2) satisfies every sensitivity consequence, so the
constructive procedure produces exact edge lengths and vertex positions.
We verify the realization, cross-check with the independent feasibility
solve, and emit an SVG overlay of the fan and the realized tree.
"""

import os

from tropi import (
    CombinatorialType,
    DecoratedGraph,
    ORIGIN,
    render_svg,
    sensitize,
    smooth_construct,
    smoothable_lp,
    solve_balancing,
    verify_realization,
)
from tropi.worked_example import quadrant

fan = sensitize(quadrant(), [(1, 2), (2, 1)]).refined
print(f"sensitized fan rays: {list(fan.rays)}")

ray = frozenset({fan.rays.index((1, 2))})
ray_e1 = frozenset({fan.rays.index((1, 0))})
t = CombinatorialType(
    graph=DecoratedGraph(
        ["u", "w"],
        [("u", "w")],
        [("u", 1), ("w", 2)],
        {
            "u": tuple(1 if r in [(1, 0), (1, 2)] else 0 for r in fan.rays),
            "w": tuple(1 if r == (1, 2) else 0 for r in fan.rays),
        },
    ),
    target=fan,
    vertex_cones={"u": ORIGIN, "w": ray},
    edge_cones={("u", "w"): ray},
    leg_cones={1: ray_e1, 2: ray},
    leg_slopes={1: (1, 0), 2: (2, 4)},
)
t = t.with_slopes(solve_balancing(t))
print(f"balanced edge slope: {t.edge_slopes[('u', 'w')]}")

r = smooth_construct(t)
print(f"root vertex: {r.root_vertex}")
for e, length in r.edge_lengths.items():
    print(f"edge {e[0]}–{e[1]}: length {length}")
for v, p in r.vertex_positions.items():
    print(f"vertex {v} at {tuple(str(x) for x in p)}")

report = verify_realization(t, r)
print(f"realization verified: {report.valid}")
print(f"independent feasibility solve agrees: {smoothable_lp(t) is not None}")

out = os.path.join(os.path.dirname(__file__), "realization.svg")
with open(out, "w", encoding="utf-8") as fh:
    fh.write(render_svg(fan, t, r))
print(f"wrote {out}")
