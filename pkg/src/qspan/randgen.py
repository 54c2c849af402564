"""
Seeded random instances for property checks: small permutation groups,
G-sets with non-free actions (coset actions of random subgroups plus fixed
points), relation spans built from random orbit subsets, and presheaves
obtained from spans through the fiber construction.
"""

from __future__ import annotations

from .groups import (GSet, PermGroup, disjoint_union_gsets, group_closure,
                     perm_mul, product_gset, sub_gset, EquivariantMap)
from .spans import GSetSpan, coproduct, gset_span_to_groupoid_span


def random_perm(rng, n: int):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def random_group(rng, max_degree: int = 7, max_order: int = 120,
                 tries: int = 200) -> PermGroup:
    "A random enumerated group of order at most max_order (never trivial)."
    for _ in range(tries):
        degree = rng.randrange(2, max_degree + 1)
        k = rng.randrange(1, 3)
        gens = [random_perm(rng, degree) for _ in range(k)]
        try:
            g = group_closure(gens, cap=max_order + 1)
        except Exception:
            continue
        if 2 <= g.order <= max_order:
            return g
    raise RuntimeError("could not sample a group within the order bound")


def random_subgroup_indices(rng, group: PermGroup):
    "Element indices of the closure of one or two random elements."
    group.enumerate()
    seeds = [rng.randrange(group.order) for _ in range(rng.randrange(1, 3))]
    seen = {0}
    frontier = list(seeds)
    seen.update(seeds)
    while frontier:
        nxt = []
        for a in frontier:
            for b in seeds:
                c = group.mul_index(b, a)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
            inv = group.inv_index(a)
            if inv not in seen:
                seen.add(inv)
                nxt.append(inv)
        frontier = nxt
    return sorted(seen)


def random_gset(rng, group: PermGroup, max_size: int = 30, parts: int = 3) -> GSet:
    """A random G-set: disjoint union of coset actions of random subgroups
    (non-free whenever a subgroup is proper) and fixed points."""
    pieces = []
    total = 0
    for _ in range(rng.randrange(1, parts + 1)):
        sub = random_subgroup_indices(rng, group)
        x = GSet.coset_action(group, sub)
        if total + x.size > max_size:
            continue
        pieces.append(x)
        total += x.size
    if rng.randrange(2) and total + 1 <= max_size:
        pieces.append(GSet.trivial_action(group, rng.randrange(1, 3)))
    if not pieces:
        pieces.append(GSet.one_point(group))
    return disjoint_union_gsets(pieces)


def random_relation_span(rng, x: GSet, y: GSet, max_orbits: int = 3) -> GSetSpan:
    "A span whose apex is a random union of orbits of X x Y, legs projections."
    xy = product_gset(x, y)
    orbits = list(xy.orbits())
    rng.shuffle(orbits)
    chosen = orbits[:rng.randrange(1, min(max_orbits, len(orbits)) + 1)]
    points = sorted(p for o in chosen for p in o)
    apex = sub_gset(xy, points)
    ny = y.size
    left = EquivariantMap(apex, y, (p % ny for p in points), check=False)
    right = EquivariantMap(apex, x, (p // ny for p in points), check=False)
    return GSetSpan(apex, left, right)


def random_span(rng, x: GSet, y: GSet) -> GSetSpan:
    "A relation span, possibly thickened by a coproduct multiplicity."
    s = random_relation_span(rng, x, y)
    if rng.randrange(3) == 0:
        s = coproduct([s] * rng.randrange(2, 4))
    return s


def random_composable_groupoid_spans(rng, max_order: int = 24,
                                     max_size: int = 8):
    "A composable pair (t, s) of action-groupoid spans over a random group."
    group = random_group(rng, max_degree=6, max_order=max_order)
    x = random_gset(rng, group, max_size=max_size, parts=2)
    y = random_gset(rng, group, max_size=max_size, parts=2)
    z = random_gset(rng, group, max_size=max_size, parts=2)
    s = random_span(rng, x, y)
    t = random_span(rng, y, z)
    from .groupoids import action_groupoid
    xg, yg, zg = action_groupoid(x), action_groupoid(y), action_groupoid(z)
    gs = gset_span_to_groupoid_span(s, left_grpd=yg, right_grpd=xg)
    gt = gset_span_to_groupoid_span(t, left_grpd=zg, right_grpd=yg)
    return gt, gs
