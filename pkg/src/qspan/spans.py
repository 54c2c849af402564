"""
Spans of finite G-sets and of groupoids.

A span from X to Y is an apex with two equivariant legs, ``right`` into X
and ``left`` into Y; its decategorification is the fiber matrix with entry
(y, x) = |left^-1(y) n right^-1(x)|.

Composition uses flattened path apexes: the composite of n atomic spans
has apex points (x0, a1, .., an) where x0 is a source-foot point and a_i
an apex point of the i-th atomic factor.  Concatenation makes composition
strictly associative with *identical* point sets, which is what lets long
braid words compose without associator bookkeeping.

Span isomorphism is decided orbit by orbit: a G-map over fixed feet out of
an orbit is determined by one representative's image, and invertibility
forces the translated point stabilizers to be *equal* (not merely
contained).  Orbits are matched by a bipartite perfect matching over that
test, which makes the decision procedure complete.
"""

from __future__ import annotations

from .exactnum import QMatrix
from .groups import (EquivariantMap, GSet, GroupMismatchError, sub_gset)
from .groupoids import (ActionGroupoid, Groupoid, GroupoidFunctor,
                        action_groupoid, induced_functor, product_groupoid,
                        weak_pullback)


class FootMismatchError(ValueError):
    """Feet of the spans do not agree."""


class GSetSpan:
    "A span of finite G-sets from right.target to left.target."

    def __init__(self, apex: GSet, left: EquivariantMap, right: EquivariantMap,
                 path_arity: int = 1, steps=None):
        if left.source != apex or right.source != apex:
            raise ValueError("legs must share the apex as source")
        self.apex = apex
        self.left = left
        self.right = right
        self.path_arity = path_arity
        self.steps = tuple(steps) if steps is not None else (self,)
        assert len(self.steps) == path_arity

    @property
    def source_foot(self) -> GSet:
        return self.right.target

    @property
    def target_foot(self) -> GSet:
        return self.left.target

    @property
    def group(self):
        return self.apex.group

    def __repr__(self):
        return "GSetSpan(apex=%d pts, %d -> %d, arity=%d)" % (
            self.apex.size, self.source_foot.size, self.target_foot.size, self.path_arity)

    def path_tuple(self, i: int):
        "The point as a flattened path (x0, a1, .., an)."
        if self.path_arity == 1 and self.steps == (self,):
            return (self.right(i), i)
        return self.apex.labels[i]

    def foot_path(self, i: int):
        """The visited foot points (f0, f1, .., fn) along the path.

        For composites of relation-type spans this determines the point.
        """
        path = self.path_tuple(i)
        out = [path[0]]
        for step, a in zip(self.steps, path[1:]):
            out.append(step.left(a))
        return tuple(out)

    def fiber_matrix(self) -> QMatrix:
        "Entry (y, x) counts apex points over the pair; rows = target foot."
        rows = self.target_foot.size
        cols = self.source_foot.size
        counts = [0] * (rows * cols)
        li, ri = self.left.images, self.right.images
        for p in range(self.apex.size):
            counts[li[p] * cols + ri[p]] += 1
        return QMatrix(rows, cols, counts)

    def is_relation(self) -> bool:
        "Whether (right, left) is injective on the apex."
        pairs = set(zip(self.right.images, self.left.images))
        return len(pairs) == self.apex.size


def identity_span(x: GSet) -> GSetSpan:
    e = EquivariantMap.identity(x)
    return GSetSpan(x, e, e)


def compose_gset_spans(t: GSetSpan, s: GSetSpan) -> GSetSpan:
    "Composite t o s of s: X -> Y and t: Y -> Z, by matched flattened paths."
    if s.target_foot != t.source_foot:
        raise FootMismatchError("middle feet disagree")
    if s.group != t.group:
        raise GroupMismatchError("spans over different groups")
    bucket = {}
    for j in range(t.apex.size):
        bucket.setdefault(t.right(j), []).append(j)
    points = []           # (i, j) pairs
    paths = []
    for i in range(s.apex.size):
        y = s.left(i)
        s_path = s.path_tuple(i)
        for j in bucket.get(y, ()):
            points.append((i, j))
            paths.append(s_path + t.path_tuple(j)[1:])
    index = {pt: k for k, pt in enumerate(points)}
    group = s.group
    action = []
    for gi in range(len(group.generators)):
        srow = s.apex.action[gi]
        trow = t.apex.action[gi]
        action.append([index[(srow[i], trow[j])] for (i, j) in points])
    apex = GSet(group, len(points), action, labels=tuple(paths), check=False)
    left = EquivariantMap(apex, t.target_foot,
                          (t.left(j) for (_, j) in points), check=False)
    right = EquivariantMap(apex, s.source_foot,
                           (s.right(i) for (i, _) in points), check=False)
    return GSetSpan(apex, left, right,
                    path_arity=s.path_arity + t.path_arity,
                    steps=s.steps + t.steps)


def compose_word(spans) -> GSetSpan:
    "Composite of a list of spans applied left to right (first span first)."
    spans = list(spans)
    out = spans[0]
    for nxt in spans[1:]:
        out = compose_gset_spans(nxt, out)
    return out


def coproduct(spans) -> GSetSpan:
    "Disjoint-union apex; fiber matrices add.  All feet must agree."
    spans = list(spans)
    first = spans[0]
    for sp in spans:
        if sp.source_foot != first.source_foot or sp.target_foot != first.target_foot:
            raise FootMismatchError("coproduct needs equal feet")
    group = first.group
    total = sum(sp.apex.size for sp in spans)
    action = []
    for gi in range(len(group.generators)):
        row = []
        off = 0
        for sp in spans:
            row.extend(off + q for q in sp.apex.action[gi])
            off += sp.apex.size
        action.append(row)
    labels = tuple((k, sp.apex.label(p))
                   for k, sp in enumerate(spans) for p in range(sp.apex.size))
    apex = GSet(group, total, action, labels=labels, check=False)
    left = EquivariantMap(apex, first.target_foot,
                          (sp.left(p) for sp in spans for p in range(sp.apex.size)),
                          check=False)
    right = EquivariantMap(apex, first.source_foot,
                           (sp.right(p) for sp in spans for p in range(sp.apex.size)),
                           check=False)
    return GSetSpan(apex, left, right)


def scalar_multiple(n: int, s: GSetSpan) -> GSetSpan:
    if n < 1:
        raise ValueError("scalar multiple needs n >= 1")
    return coproduct([s] * n)


def decompose_irreducible(s: GSetSpan):
    """Orbit decomposition of the apex into irreducible sub-spans.

    Canonical order: by minimal apex point of each orbit.
    """
    out = []
    for orbit in s.apex.orbits():
        apex = sub_gset(s.apex, orbit)
        left = EquivariantMap(apex, s.target_foot,
                              (s.left(p) for p in orbit), check=False)
        right = EquivariantMap(apex, s.source_foot,
                               (s.right(p) for p in orbit), check=False)
        out.append(GSetSpan(apex, left, right,
                            path_arity=s.path_arity, steps=s.steps))
    return out


class SpanMap:
    "A 2-morphism of spans: a G-map between apexes commuting with both legs."

    def __init__(self, source: GSetSpan, target: GSetSpan, images, check: bool = True):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if check:
            self.validate()

    def validate(self):
        s, t = self.source, self.target
        assert len(self.images) == s.apex.size
        for gi in range(len(s.group.generators)):
            srow = s.apex.action[gi]
            trow = t.apex.action[gi]
            for p in range(s.apex.size):
                assert self.images[srow[p]] == trow[self.images[p]], \
                    "span map not equivariant"
        for p in range(s.apex.size):
            q = self.images[p]
            assert t.left(q) == s.left(p) and t.right(q) == s.right(p), \
                "span map does not commute with the legs"
        return True

    @property
    def is_bijective(self) -> bool:
        return len(set(self.images)) == self.source.apex.size == self.target.apex.size

    def then(self, other: "SpanMap") -> "SpanMap":
        "other after self."
        assert other.source is self.target or other.source.apex.size == self.target.apex.size
        return SpanMap(self.source, other.target,
                       (other.images[q] for q in self.images), check=False)

    def inverse(self) -> "SpanMap":
        assert self.is_bijective
        inv = [0] * len(self.images)
        for p, q in enumerate(self.images):
            inv[q] = p
        return SpanMap(self.target, self.source, inv, check=False)

    @classmethod
    def identity(cls, s: GSetSpan) -> "SpanMap":
        return cls(s, s, range(s.apex.size), check=False)


def _orbit_data(span: GSetSpan):
    "Per-orbit: (members, rep, legs of rep, stabilizer of rep as a frozenset)."
    apex = span.apex
    data = []
    for orbit in apex.orbits():
        rep = orbit[0]
        stab = frozenset(apex.stabilizer_indices(rep))
        data.append((orbit, rep, (span.right(rep), span.left(rep)), stab))
    return data


def span_iso(s: GSetSpan, t: GSetSpan):
    """Find a G-equivariant bijection between apexes commuting with both
    legs, or return None.

    Two orbits are matchable iff some point of the target orbit carries the
    same leg pair as the source representative and has *equal* stabilizer;
    a perfect matching over this relation assembles the isomorphism.
    """
    if s.source_foot != t.source_foot or s.target_foot != t.target_foot:
        raise FootMismatchError("span_iso needs equal feet")
    if s.apex.size != t.apex.size:
        return None
    s.group.enumerate()
    sdata = _orbit_data(s)
    tdata = _orbit_data(t)
    if sorted(len(o) for o, _, _, _ in sdata) != sorted(len(o) for o, _, _, _ in tdata):
        return None

    # candidate target points for each source orbit rep, orbit by orbit
    edges = {}
    for si, (sorbit, srep, slegs, sstab) in enumerate(sdata):
        for ti, (torbit, trep, _, _) in enumerate(tdata):
            if len(torbit) != len(sorbit):
                continue
            for b in torbit:
                if (t.right(b), t.left(b)) != slegs:
                    continue
                if frozenset(t.apex.stabilizer_indices(b)) == sstab:
                    edges.setdefault(si, {})[ti] = b
                    break

    # Kuhn's augmenting-path bipartite matching
    match_t = {}

    def augment(si, banned):
        for ti in edges.get(si, {}):
            if ti in banned:
                continue
            banned.add(ti)
            if ti not in match_t or augment(match_t[ti], banned):
                match_t[ti] = si
                return True
        return False

    for si in range(len(sdata)):
        if not augment(si, set()):
            return None

    images = [0] * s.apex.size
    trans = s.apex.transversal()
    for ti, si in match_t.items():
        sorbit = sdata[si][0]
        b = edges[si][ti]
        col = t.apex.element_column(b)
        for p in sorbit:
            images[p] = int(col[trans[p]])
    return SpanMap(s, t, images, check=True)


def span_iso_obstruction(s: GSetSpan, t: GSetSpan):
    """Comparable orbit-type summaries of both spans, for reporting why an
    isomorphism does or does not exist.

    An orbit type is (orbit size, stabilizer order, sorted leg fiber
    signature); multisets of types must agree for spans to be isomorphic.
    """
    def types(span):
        out = []
        for orbit, rep, legs, stab in _orbit_data(span):
            out.append((len(orbit), len(stab)))
        out.sort()
        return out
    return {"left_orbit_types": types(s), "right_orbit_types": types(t)}


def product_span(s, t):
    "Componentwise product; works for both G-set spans and groupoid spans."
    if isinstance(s, GSetSpan):
        from .groups import product_gset
        apex = product_gset(s.apex, t.apex)
        tgt = product_gset(s.target_foot, t.target_foot)
        src = product_gset(s.source_foot, t.source_foot)
        n2, m2, k2 = t.apex.size, t.target_foot.size, t.source_foot.size
        left = EquivariantMap(
            apex, tgt,
            (s.left(p) * m2 + t.left(q)
             for p in range(s.apex.size) for q in range(n2)), check=False)
        right = EquivariantMap(
            apex, src,
            (s.right(p) * k2 + t.right(q)
             for p in range(s.apex.size) for q in range(n2)), check=False)
        return GSetSpan(apex, left, right)
    return product_groupoid_span(s, t)


class GroupoidSpan:
    "A span of groupoids; legs are functors sharing the apex."

    def __init__(self, apex: Groupoid, left: GroupoidFunctor, right: GroupoidFunctor):
        assert left.source is apex and right.source is apex
        self.apex = apex
        self.left = left
        self.right = right

    @property
    def source_foot(self) -> Groupoid:
        return self.right.target

    @property
    def target_foot(self) -> Groupoid:
        return self.left.target

    def __repr__(self):
        return "GroupoidSpan(apex=%d objs)" % self.apex.n_objects

    @classmethod
    def identity(cls, g: Groupoid) -> "GroupoidSpan":
        f = GroupoidFunctor.identity(g)
        return cls(g, f, f)


def compose_groupoid_spans(t: GroupoidSpan, s: GroupoidSpan) -> GroupoidSpan:
    "Composite t o s via the weak pullback of s.left against t.right."
    assert s.target_foot is t.source_foot or s.target_foot == t.source_foot, \
        "middle feet disagree"
    wp = weak_pullback(s.left, t.right)
    return GroupoidSpan(wp.apex,
                        wp.left_proj.then(t.left),
                        wp.right_proj.then(s.right))


def product_groupoid_span(s: GroupoidSpan, t: GroupoidSpan) -> GroupoidSpan:
    apex = product_groupoid(s.apex, t.apex)
    tgt = product_groupoid(s.target_foot, t.target_foot)
    src = product_groupoid(s.source_foot, t.source_foot)

    def pair_functor(f1, f2, source, target):
        def obj(x):
            a, b = source.obj_split(x)
            return target.obj(f1.obj(a), f2.obj(b))

        def mor(m):
            m1, m2 = source.mor_split(m)
            return target.mor(f1.mor(m1), f2.mor(m2))
        return GroupoidFunctor(source, target, obj, mor)

    return GroupoidSpan(apex,
                        pair_functor(s.left, t.left, apex, tgt),
                        pair_functor(s.right, t.right, apex, src))


def gset_span_to_groupoid_span(s: GSetSpan,
                               apex_grpd: ActionGroupoid | None = None,
                               left_grpd: ActionGroupoid | None = None,
                               right_grpd: ActionGroupoid | None = None) -> GroupoidSpan:
    "The span of action groupoids induced by a span of G-sets."
    apex_grpd = apex_grpd or action_groupoid(s.apex)
    left_grpd = left_grpd or action_groupoid(s.target_foot)
    right_grpd = right_grpd or action_groupoid(s.source_foot)
    return GroupoidSpan(apex_grpd,
                        induced_functor(s.left, apex_grpd, left_grpd),
                        induced_functor(s.right, apex_grpd, right_grpd))
