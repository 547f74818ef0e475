"""Seeded random instance builders shared by the unit and acceptance suites.

Everything takes an explicit random.Random so runs are reproducible.
Two families matter:

- arbitrary structurally-sound instances of every persisted schema, for
  serialization round-trips;
- "staircase" types on smooth fans, built so that each edge either keeps
  the vertex cone or moves up/down by exactly one ray, with the slope
  equal to that ray's generator.  These satisfy the slope-sensitivity
  consequences by construction and exercise the constructive smoothing.
"""

import random
from fractions import Fraction

from tropi.combtypes import (
    CombinatorialType,
    DecoratedGraph,
    NumericalData,
    ray_coefficient,
)
from tropi.cones import ORIGIN, ConeComplex, build_snc_tropicalization, minimal_containing_cone
from tropi.enumeration import DegreeCatalogue
from tropi.smoothing import Realization
from tropi.subdivide import stellar


def random_tree_edges(rng: random.Random, names: list[str]) -> list[tuple[str, str]]:
    """Uniform random labeled tree (random parent attachment)."""
    edges = []
    for i in range(1, len(names)):
        j = rng.randrange(i)
        edges.append((names[j], names[i]))
    return edges


def coordinate_fan(k: int) -> ConeComplex:
    """The full first-orthant fan in dimension k (all faces)."""
    return build_snc_tropicalization(
        k,
        [
            {i + 1 for i in range(k) if mask >> i & 1}
            for mask in range(1, 1 << k)
        ],
    )


def random_complex(rng: random.Random, k: int = None) -> ConeComplex:
    k = k if k is not None else rng.choice([2, 3])
    # random downward-closed stratum family over {1..k}
    max_strata = []
    for _ in range(rng.randint(1, k + 1)):
        size = rng.randint(1, k)
        max_strata.append(frozenset(rng.sample(range(1, k + 1), size)))
    strata = {frozenset({i}) for i in range(1, k + 1)}
    for s in max_strata:
        members = sorted(s)
        for mask in range(1, 1 << len(members)):
            strata.add(frozenset(m for i, m in enumerate(members) if mask >> i & 1))
    fan = build_snc_tropicalization(k, sorted(strata, key=sorted))
    # a couple of barycentric stellar refinements for variety
    for _ in range(rng.randint(0, 2)):
        big = [c for c in fan.max_cones if len(c) >= 2]
        if not big:
            break
        fan = stellar(fan, rng.choice(sorted(big, key=sorted))).refined
    return fan


def random_smooth_fan(rng: random.Random, k: int) -> ConeComplex:
    """Smooth fan: the orthant fan, optionally stellar-refined (smoothness
    is preserved by barycentric stellar subdivision of a smooth cone)."""
    fan = coordinate_fan(k)
    for _ in range(rng.randint(0, 2)):
        big = [c for c in fan.max_cones if len(c) >= 2]
        if not big:
            break
        fan = stellar(fan, rng.choice(sorted(big, key=sorted))).refined
    return fan


def random_cone(rng: random.Random, fan: ConeComplex):
    return rng.choice(sorted(fan.cones(), key=lambda c: (len(c), sorted(c))))


def random_lambda(rng: random.Random, fan: ConeComplex) -> NumericalData:
    n = rng.randint(0, 4)
    alphas = []
    for _ in range(n):
        cone = random_cone(rng, fan)
        gens = fan.generators(cone)
        a = tuple(
            sum(rng.randint(0, 3) * g[i] for g in gens)
            for i in range(fan.ambient_dim)
        )
        alphas.append(a)
    total = [0] * len(fan.rays)
    for a in alphas:
        for i in range(len(fan.rays)):
            c = ray_coefficient(fan, i, a)
            assert c is not None and c.denominator == 1
            total[i] += int(c)
    return NumericalData(n, alphas, tuple(total))


def random_raw_type(rng: random.Random, fan: ConeComplex) -> CombinatorialType:
    """Structurally complete type with arbitrary cone/slope decorations.
    Not necessarily valid — used for serialization round-trips."""
    n_v = rng.randint(1, 5)
    names = [f"v{i}" for i in range(n_v)]
    edges = random_tree_edges(rng, names)
    n_legs = rng.randint(0, 3)
    legs = [(rng.choice(names), j + 1) for j in range(n_legs)]
    k = fan.ambient_dim
    degrees = {
        v: tuple(rng.randint(-2, 4) for _ in fan.rays) for v in names
    }
    with_slopes = rng.random() < 0.5
    return CombinatorialType(
        graph=DecoratedGraph(names, edges, legs, degrees),
        target=fan,
        vertex_cones={v: random_cone(rng, fan) for v in names},
        edge_cones={e: random_cone(rng, fan) for e in edges},
        leg_cones={j + 1: random_cone(rng, fan) for j in range(n_legs)},
        leg_slopes={
            j + 1: tuple(rng.randint(-3, 3) for _ in range(k))
            for j in range(n_legs)
        },
        edge_slopes=(
            {e: tuple(rng.randint(-3, 3) for _ in range(k)) for e in edges}
            if with_slopes
            else None
        ),
    )


def random_realization(rng: random.Random, t: CombinatorialType) -> Realization:
    def frac():
        return Fraction(rng.randint(-50, 50), rng.randint(1, 12))

    k = t.target.ambient_dim
    return Realization(
        rng.choice(list(t.graph.vertices)),
        {e: frac() for e in t.graph.edges},
        {v: tuple(frac() for _ in range(k)) for v in t.graph.vertices},
    )


def random_catalogue(rng: random.Random, n_rays: int) -> DegreeCatalogue:
    atoms = [
        tuple(rng.randint(0, 3) for _ in range(n_rays))
        for _ in range(rng.randint(1, 4))
    ]
    return DegreeCatalogue(atoms, rng.randint(1, 4))


# -- staircase types: valid, sensitivity-passing, smoothable ------------------


def _max_cones_containing(fan: ConeComplex, cone) -> list:
    return sorted(
        (frozenset(m) for m in fan.max_cones if cone <= frozenset(m)),
        key=sorted,
    )


def random_staircase_type(
    rng: random.Random, fan: ConeComplex, max_vertices: int = 8
) -> CombinatorialType:
    """Valid type on a smooth fan whose every edge either is contracted or
    moves one ray up/down, carrying that ray's generator as its slope."""
    n_v = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n_v)]
    edges = random_tree_edges(rng, names)
    vertex_cones = {names[0]: random_cone(rng, fan)}
    edge_cones = {}
    slopes = {}
    edge_fan_coords = {}
    k = fan.ambient_dim
    for a, b in edges:  # a is always the already-placed parent
        sa = vertex_cones[a]
        n_rays = len(fan.rays)
        moves = ["stay"]
        ups = sorted(
            {i for m in _max_cones_containing(fan, sa) for i in m} - sa
        )
        if ups:
            moves.append("up")
        if sa:
            moves.append("down")
        move = rng.choice(moves)
        if move == "stay":
            vertex_cones[b] = sa
            edge_cones[(a, b)] = sa
            slopes[(a, b)] = tuple(0 for _ in range(k))
            edge_fan_coords[(a, b)] = [0] * n_rays
        elif move == "up":
            i = rng.choice(ups)
            sb = sa | {i}
            vertex_cones[b] = sb
            edge_cones[(a, b)] = sb
            slopes[(a, b)] = fan.rays[i]  # away from a, into the new ray
            edge_fan_coords[(a, b)] = [1 if j == i else 0 for j in range(n_rays)]
        else:
            i = rng.choice(sorted(sa))
            sb = sa - {i}
            vertex_cones[b] = sb
            edge_cones[(a, b)] = sa
            slopes[(a, b)] = tuple(-x for x in fan.rays[i])
            edge_fan_coords[(a, b)] = [-1 if j == i else 0 for j in range(n_rays)]
    # legs: slopes positive on the vertex cone so face conditions hold
    legs = []
    leg_cones = {}
    leg_slopes = {}
    label = 0
    for v in names:
        for _ in range(rng.randint(0, 2)):
            label += 1
            legs.append((v, label))
            base = rng.choice(_max_cones_containing(fan, vertex_cones[v]))
            gens = fan.generators(base)
            ids = sorted(base)
            coeffs = [
                rng.randint(1, 3) if i in vertex_cones[v] else rng.randint(0, 2)
                for i in ids
            ]
            slope = tuple(
                sum(c * g[d] for c, g in zip(coeffs, gens)) for d in range(k)
            )
            leg_slopes[label] = slope
            cone = minimal_containing_cone(fan, slope)
            assert cone is not None
            leg_cones[label] = cone if slope != (0,) * k else vertex_cones[v]
            if not vertex_cones[v] <= leg_cones[label]:
                # zero coefficients erased part of the vertex cone; widen
                leg_cones[label] = frozenset(
                    i for i, c in zip(ids, coeffs) if c > 0
                ) | vertex_cones[v]
    # degrees forced by balancing: degree = legs + outgoing slopes, in fan
    # coordinates (edges contribute their known coefficient vectors, which
    # may be negative and hence have no piecewise-linear coordinates)
    degrees = {}
    for v in names:
        total = [Fraction(0)] * len(fan.rays)
        for j in [j for w, j in legs if w == v]:
            for i in range(len(fan.rays)):
                c = ray_coefficient(fan, i, leg_slopes[j])
                assert c is not None
                total[i] += c
        for a, b in edges:
            if a == v:
                total = [x + y for x, y in zip(total, edge_fan_coords[(a, b)])]
            elif b == v:
                total = [x - y for x, y in zip(total, edge_fan_coords[(a, b)])]
        assert all(x.denominator == 1 for x in total)
        degrees[v] = tuple(int(x) for x in total)
    return CombinatorialType(
        graph=DecoratedGraph(names, edges, legs, degrees),
        target=fan,
        vertex_cones=vertex_cones,
        edge_cones=edge_cones,
        leg_cones=leg_cones,
        leg_slopes=leg_slopes,
        edge_slopes=slopes,
    )
