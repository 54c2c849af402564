"""
Finite set-valued presheaves on groupoids.

A presheaf assigns a finite set to each object and a bijection to each
morphism, contravariantly: for m: a -> b the action maps the set at b to
the set at a.  Pullback along a functor precomposes; the left adjoint
pushforward is computed as an explicit colimit over comma categories with
a union-find, with canonical minimal representatives for determinism.

The Grothendieck correspondence identifies presheaves on (X x Y)//G with
spans of G-sets from X to Y: fibers become the sets, the inverse group
action becomes the transport.
"""

from __future__ import annotations

import itertools

from .groups import EquivariantMap, GSet
from .groupoids import ActionGroupoid, Groupoid, GroupoidFunctor
from .spans import GSetSpan, SpanMap


class PresheafBaseError(ValueError):
    """The base groupoid lacks the structure an operation needs."""


class Presheaf:
    "A contravariant finite-set-valued functor on a groupoid."

    def __init__(self, base: Groupoid, sets, action, check: bool = True):
        self.base = base
        self.sets = tuple(tuple(s) for s in sets)
        self._action = action          # callable morphism -> tuple of indices
        self._cache = {}
        if check:
            self.validate_sampled()

    def action(self, m):
        "Index mapping from the set at tgt(m) to the set at src(m)."
        if m not in self._cache:
            self._cache[m] = tuple(self._action(m))
        return self._cache[m]

    def size(self) -> int:
        return sum(len(s) for s in self.sets)

    def validate_sampled(self, max_pairs: int = 10 ** 4):
        "Identity/composition/bijectivity laws; exhaustive when small."
        base = self.base
        for x in range(base.n_objects):
            e = self.action(base.identity(x))
            assert e == tuple(range(len(self.sets[x]))), "identity must act as identity"
        count = 0
        for m in base.morphisms():
            a = self.action(m)
            assert sorted(a) == list(range(len(self.sets[base.src(m)]))), \
                "action must be a bijection"
            count += 1
            if count >= max_pairs:
                break
        count = 0
        for m1 in base.morphisms():
            for m2 in base.morphisms_from(base.tgt(m1)):
                c = base.compose(m2, m1)
                a1, a2, ac = self.action(m1), self.action(m2), self.action(c)
                assert ac == tuple(a1[a2[i]] for i in range(len(ac))), \
                    "contravariant composition law fails"
                count += 1
                if count >= max_pairs:
                    return True
            if count >= max_pairs:
                return True
        return True


def constant_presheaf(base: Groupoid, k: int) -> Presheaf:
    sets = [tuple(range(k))] * base.n_objects
    ident = tuple(range(k))
    return Presheaf(base, sets, lambda m: ident, check=False)


def empty_presheaf(base: Groupoid) -> Presheaf:
    return Presheaf(base, [()] * base.n_objects, lambda m: (), check=False)


def coproduct_presheaf(p: Presheaf, q: Presheaf) -> Presheaf:
    "Pointwise disjoint union."
    assert p.base is q.base or p.base == q.base
    sets = []
    for x in range(p.base.n_objects):
        sets.append(tuple((0, e) for e in p.sets[x]) + tuple((1, e) for e in q.sets[x]))

    def action(m):
        pa = p.action(m)
        qa = q.action(m)
        off = len(p.sets[p.base.src(m)])
        return tuple(pa) + tuple(off + i for i in qa)

    return Presheaf(p.base, sets, action, check=False)


def pullback_presheaf(f: GroupoidFunctor, p: Presheaf) -> Presheaf:
    "f*: precompose sets and actions with the functor."
    assert p.base is f.target or p.base == f.target
    sets = [p.sets[f.obj(x)] for x in range(f.source.n_objects)]
    return Presheaf(f.source, sets, lambda m: p.action(f.mor(m)), check=False)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.find(p)
            self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller representative for determinism
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def left_pushforward(f: GroupoidFunctor, p: Presheaf) -> Presheaf:
    """f_!: left Kan extension along f, as a comma-category colimit.

    At a target object h the set is the disjoint union of p(g) over comma
    objects (g, alpha: f(g) -> h), quotiented by the relation generated by
    comma morphisms; morphisms of the target transport classes bijectively.
    """
    assert p.base is f.source or p.base == f.source
    src, tgt = f.source, f.target

    comma = {}      # h -> list of (g, alpha)
    for h in range(tgt.n_objects):
        objs = []
        for g in range(src.n_objects):
            for alpha in tgt.hom(f.obj(g), h):
                objs.append((g, alpha))
        comma[h] = objs

    # elements (g, alpha, s) / relation from source morphisms m: g -> g':
    # for a comma morphism m: (g, alpha) -> (g', alpha') with alpha'.f(m) = alpha,
    # identify (g, alpha, p(m)(s')) with (g', alpha', s')
    classes = {}    # h -> (reps list, element -> rep index)
    for h in range(tgt.n_objects):
        by_g = {}
        for g, alpha in comma[h]:
            by_g.setdefault(g, []).append(alpha)
        uf = _UnionFind()
        for g, alpha in comma[h]:
            for s in range(len(p.sets[g])):
                uf.find((g, alpha, s))
        for g in by_g:
            for m in src.morphisms_from(g):
                g2 = src.tgt(m)
                fm = f.mor(m)
                a = p.action(m)
                for alpha in by_g[g]:
                    alpha2 = tgt.compose(alpha, tgt.inv(fm))
                    for s2 in range(len(p.sets[g2])):
                        uf.union((g, alpha, a[s2]), (g2, alpha2, s2))
        members = {}
        for g, alpha in comma[h]:
            for s in range(len(p.sets[g])):
                members.setdefault(uf.find((g, alpha, s)), []).append((g, alpha, s))
        reps = sorted(members)
        index = {}
        for i, r in enumerate(reps):
            for el in members[r]:
                index[el] = i
        classes[h] = (reps, index)

    sets = [tuple(classes[h][0]) for h in range(tgt.n_objects)]

    def action(m):
        # contravariant: classes at tgt(m) pull back along m
        h2 = tgt.tgt(m)
        h1 = tgt.src(m)
        reps2, _ = classes[h2]
        _, index1 = classes[h1]
        minv = tgt.inv(m)
        out = []
        for (g, alpha, s) in reps2:
            out.append(index1[(g, tgt.compose(minv, alpha), s)])
        # normalize to canonical class reps of h1
        return tuple(out)

    return Presheaf(tgt, sets, action, check=False)


def linearize_span(s, p: Presheaf) -> Presheaf:
    "The push-pull functor of a groupoid span: pushforward after pullback."
    return left_pushforward(s.left, pullback_presheaf(s.right, p))


# -- Grothendieck correspondence ------------------------------------------


def _pair_base_factors(base: Groupoid):
    if not isinstance(base, ActionGroupoid):
        raise PresheafBaseError("base must be an action groupoid of a product G-set")
    factors = getattr(base.gset, "factors", None)
    if factors is None:
        raise PresheafBaseError("base G-set does not carry product-pair structure")
    return factors


def span_to_presheaf(s: GSetSpan, base: ActionGroupoid) -> Presheaf:
    """The presheaf of fibers of a span of G-sets, on the groupoid
    (X x Y)//G.

    The set at (x, y) is the fiber over the pair; a morphism (g, (x,y))
    acts by g^-1 on the fiber at the target.
    """
    x_set, y_set = _pair_base_factors(base)
    if s.source_foot != x_set or s.target_foot != y_set:
        raise PresheafBaseError("span feet do not match the base product")
    ny = y_set.size
    fibers = [[] for _ in range(base.n_objects)]
    for a in range(s.apex.size):
        fibers[s.right(a) * ny + s.left(a)].append(a)
    sets = [tuple(f) for f in fibers]
    lookup = [{a: i for i, a in enumerate(f)} for f in fibers]
    group = base.group

    def action(m):
        g, src_obj = base.morphism_label(m)
        tgt_obj = base.gset.act_element(g, src_obj)
        ginv = group.inv_index(g)
        look = lookup[src_obj]
        return tuple(look[s.apex.act_element(ginv, a)] for a in sets[tgt_obj])

    return Presheaf(base, sets, action, check=False)


def presheaf_to_span(p: Presheaf) -> GSetSpan:
    """The span of G-sets of a presheaf on (X x Y)//G.

    Apex points are pairs (pair object, fiber element); the group acts
    through the inverses of the presheaf transports.
    """
    base = p.base
    x_set, y_set = _pair_base_factors(base)
    ny = y_set.size
    points = [(obj, k) for obj in range(base.n_objects) for k in range(len(p.sets[obj]))]
    index = {pt: i for i, pt in enumerate(points)}
    group = base.group
    action = []
    for gi, g_el in enumerate(group.generator_indices):
        row = []
        for (obj, k) in points:
            obj2 = base.gset.act_element(g_el, obj)
            m = base.morphism_id(g_el, obj)          # obj -> obj2
            amap = p.action(m)                        # sets[obj2] -> sets[obj]
            k2 = amap.index(k)
            row.append(index[(obj2, k2)])
        action.append(row)
    labels = tuple((base.gset.label(obj), p.sets[obj][k]) for (obj, k) in points)
    apex = GSet(group, len(points), action, labels=labels, check=False)
    left = EquivariantMap(apex, y_set, ((obj % ny) for (obj, _) in points), check=False)
    right = EquivariantMap(apex, x_set, ((obj // ny) for (obj, _) in points), check=False)
    return GSetSpan(apex, left, right)


def check_natural_iso(p: Presheaf, q: Presheaf, components) -> bool:
    """Validate a given family of bijections p(x) -> q(x) for naturality:
    components[x][i] is the q-index of the i-th p-element at object x."""
    base = p.base
    for x in range(base.n_objects):
        comp = components[x]
        if sorted(comp) != list(range(len(q.sets[x]))) or \
                len(comp) != len(p.sets[x]):
            return False
    for m in base.morphisms():
        a, b = base.src(m), base.tgt(m)
        pa, qa = p.action(m), q.action(m)
        fa, fb = components[a], components[b]
        for s in range(len(p.sets[b])):
            if fa[pa[s]] != qa[fb[s]]:
                return False
    return True


def span_roundtrip(s: GSetSpan, base: ActionGroupoid):
    """span -> presheaf -> span, with the canonical isomorphism witness.

    Returns (presheaf, rebuilt span, SpanMap witness).
    """
    p = span_to_presheaf(s, base)
    s2 = presheaf_to_span(p)
    ny = _pair_base_factors(base)[1].size
    offsets = {}
    pos = 0
    for obj in range(base.n_objects):
        offsets[obj] = pos
        pos += len(p.sets[obj])
    position = [{a: k for k, a in enumerate(p.sets[obj])}
                for obj in range(base.n_objects)]
    images = []
    for a in range(s.apex.size):
        obj = s.right(a) * ny + s.left(a)
        images.append(offsets[obj] + position[obj][a])
    witness = SpanMap(s, s2, images)
    return p, s2, witness


def presheaf_roundtrip(p: Presheaf):
    """presheaf -> span -> presheaf, with the canonical pointwise bijections
    validated for naturality.  Returns (span, rebuilt presheaf, ok).
    """
    base = p.base
    s = presheaf_to_span(p)
    p2 = span_to_presheaf(s, base)
    offsets = {}
    pos = 0
    for obj in range(base.n_objects):
        offsets[obj] = pos
        pos += len(p.sets[obj])
    components = []
    for obj in range(base.n_objects):
        lookup = {a: k for k, a in enumerate(p2.sets[obj])}
        components.append(tuple(lookup[offsets[obj] + k]
                                for k in range(len(p.sets[obj]))))
    return s, p2, check_natural_iso(p, p2, components)


def presheaf_pointwise_iso(p: Presheaf, q: Presheaf):
    """A natural family of bijections p -> q found by matching sizes and
    transports, or None.  Exhaustive (intended for small instances)."""
    if p.base.n_objects != q.base.n_objects:
        return None
    return next(iter(enumerate_nat_trans(p, q, bijective=True)), None)


def enumerate_nat_trans(p: Presheaf, q: Presheaf, bijective: bool = False):
    """All natural transformations p => q by backtracking over objects.

    Exponential; use only on desk-size instances.
    """
    base = p.base
    n = base.n_objects
    mor_by_src = [[] for _ in range(n)]
    for m in base.morphisms():
        mor_by_src[base.src(m)].append(m)

    def candidates(x):
        dom = range(len(p.sets[x]))
        cod = range(len(q.sets[x]))
        if bijective:
            if len(p.sets[x]) != len(q.sets[x]):
                return
            for perm in itertools.permutations(cod):
                yield tuple(perm)
        else:
            for f in itertools.product(cod, repeat=len(p.sets[x])):
                yield f

    def consistent(partial, x):
        # naturality for all morphisms between already-assigned objects:
        # for m: a -> b, phi_a(p.action(m)(s)) == q.action(m)(phi_b(s))
        for a in range(x + 1):
            if partial[a] is None:
                continue
            for m in mor_by_src[a]:
                b = base.tgt(m)
                if b > x or partial[b] is None:
                    continue
                pa, qa = p.action(m), q.action(m)
                fa, fb = partial[a], partial[b]
                for s in range(len(p.sets[b])):
                    if fa[pa[s]] != qa[fb[s]]:
                        return False
        return True

    def rec(x, partial):
        if x == n:
            yield tuple(partial)
            return
        for f in candidates(x):
            partial[x] = f
            if consistent(partial, x):
                yield from rec(x + 1, partial)
        partial[x] = None

    yield from rec(0, [None] * n)
