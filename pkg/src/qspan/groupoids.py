"""
Explicit finite groupoids, functors, action groupoids, cardinality,
full inverse images, weak pullbacks and products.

Morphisms are identified by integer ids.  Every groupoid exposes
src/tgt/inv/identity/compose plus two performance-critical hooks:

* ``conn_edges_from(x)``: enough (src, tgt) object edges out of x to
  generate the connected components (for action groupoids, generator
  morphisms only);
* ``hom(x, y)``: the list of morphism ids x -> y.

Cardinality is the sum over connected components of 1/|Aut(rep)|, with
|Aut| counted honestly by enumerating self-morphisms, never by the
orbit-counting shortcut (the identity |X//G| = |X|/|G| is a theorem the
test suite checks, not a definition baked into the code).
"""

from __future__ import annotations

from fractions import Fraction

from .groups import GSet, EquivariantMap

MORPHISM_CAP = 10 ** 7


class GroupoidSizeError(RuntimeError):
    """Morphism count would exceed the desk-scale cap."""


class Groupoid:
    "Interface; concrete groupoids subclass and fill in the primitives."

    n_objects: int

    # -- primitives ---------------------------------------------------------

    @property
    def n_morphisms(self) -> int:
        raise NotImplementedError

    def morphisms(self):
        "Iterator over all morphism ids."
        raise NotImplementedError

    def src(self, m) -> int:
        raise NotImplementedError

    def tgt(self, m) -> int:
        raise NotImplementedError

    def inv(self, m):
        raise NotImplementedError

    def identity(self, x: int):
        raise NotImplementedError

    def compose(self, m2, m1):
        "m2 after m1; defined when tgt(m1) == src(m2)."
        raise NotImplementedError

    def hom(self, x: int, y: int):
        raise NotImplementedError

    def morphisms_from(self, x: int):
        raise NotImplementedError

    def conn_edges_from(self, x: int):
        "Object edges out of x sufficient to generate connectivity."
        for m in self.morphisms_from(x):
            yield self.tgt(m)

    def object_label(self, x: int):
        return x

    # -- derived structure ---------------------------------------------------

    def aut_order(self, x: int) -> int:
        return len(self.hom(x, x))

    def components(self):
        """Connected components, canonical representative = minimal object.

        Returns a list of tuples of objects, ordered by representative.
        """
        if getattr(self, "_components", None) is None:
            seen = [False] * self.n_objects
            comps = []
            for start in range(self.n_objects):
                if seen[start]:
                    continue
                seen[start] = True
                members = [start]
                frontier = [start]
                while frontier:
                    nxt = []
                    for x in frontier:
                        for y in self.conn_edges_from(x):
                            if not seen[y]:
                                seen[y] = True
                                members.append(y)
                                nxt.append(y)
                    frontier = nxt
                members.sort()
                comps.append(tuple(members))
            self._components = comps
        return self._components

    def class_of(self):
        "Array mapping each object to its component index."
        if getattr(self, "_class_of", None) is None:
            out = [0] * self.n_objects
            for ci, comp in enumerate(self.components()):
                for x in comp:
                    out[x] = ci
            self._class_of = out
        return self._class_of

    def cardinality(self) -> Fraction:
        total = Fraction(0)
        for comp in self.components():
            total += Fraction(1, self.aut_order(comp[0]))
        return total

    # -- validation -----------------------------------------------------------

    def validate(self, max_pairs: int = 10 ** 4, rng=None):
        """Check identity, inverse and associativity axioms.

        Exhaustive when the number of composable pairs stays below
        ``max_pairs``; sampled otherwise (pass an rng for sampling).
        """
        ms = list(self.morphisms())
        for x in range(self.n_objects):
            e = self.identity(x)
            assert self.src(e) == x and self.tgt(e) == x
        for m in ms:
            x, y = self.src(m), self.tgt(m)
            i = self.inv(m)
            assert self.src(i) == y and self.tgt(i) == x
            assert self.compose(i, m) == self.identity(x)
            assert self.compose(m, i) == self.identity(y)
            assert self.compose(m, self.identity(x)) == m
            assert self.compose(self.identity(y), m) == m
        by_src = {}
        for m in ms:
            by_src.setdefault(self.src(m), []).append(m)
        pairs = []
        for m1 in ms:
            for m2 in by_src.get(self.tgt(m1), ()):
                pairs.append((m2, m1))
                if len(pairs) > max_pairs:
                    break
            if len(pairs) > max_pairs:
                break
        if len(pairs) > max_pairs and rng is not None:
            pairs = [
                (m2, m1)
                for m1 in (rng.choice(ms) for _ in range(100))
                for m2 in by_src.get(self.tgt(m1), ())[:5]
            ]
        for m2, m1 in pairs:
            c = self.compose(m2, m1)
            assert self.src(c) == self.src(m1) and self.tgt(c) == self.tgt(m2)
            for m3 in by_src.get(self.tgt(m2), ())[:4]:
                assert self.compose(m3, c) == self.compose(self.compose(m3, m2), m1)
        return True


class TableGroupoid(Groupoid):
    "A small groupoid with everything stored in tables."

    def __init__(self, n_objects, src, tgt, inv, identity, compose_table,
                 object_labels=None):
        self.n_objects = n_objects
        self._src = tuple(src)
        self._tgt = tuple(tgt)
        self._inv = tuple(inv)
        self._identity = tuple(identity)
        self._compose = dict(compose_table)
        self._labels = tuple(object_labels) if object_labels is not None else None
        self._hom = {}
        self._from = {}
        for m in range(len(self._src)):
            self._hom.setdefault((self._src[m], self._tgt[m]), []).append(m)
            self._from.setdefault(self._src[m], []).append(m)

    def __eq__(self, other):
        return (isinstance(other, TableGroupoid)
                and self.n_objects == other.n_objects
                and self._src == other._src and self._tgt == other._tgt
                and self._inv == other._inv and self._identity == other._identity
                and self._compose == other._compose)

    def __hash__(self):
        return hash(("table", self.n_objects, self._src, self._tgt, self._inv))

    @property
    def n_morphisms(self):
        return len(self._src)

    def morphisms(self):
        return range(len(self._src))

    def src(self, m):
        return self._src[m]

    def tgt(self, m):
        return self._tgt[m]

    def inv(self, m):
        return self._inv[m]

    def identity(self, x):
        return self._identity[x]

    def compose(self, m2, m1):
        return self._compose[(m2, m1)]

    def hom(self, x, y):
        return self._hom.get((x, y), [])

    def morphisms_from(self, x):
        return self._from.get(x, [])

    def object_label(self, x):
        return self._labels[x] if self._labels is not None else x

    @classmethod
    def discrete(cls, n: int) -> "TableGroupoid":
        ident = list(range(n))
        return cls(n, ident, ident, ident, ident, {(m, m): m for m in range(n)})


def terminal_groupoid() -> TableGroupoid:
    "The terminal groupoid: one object, one (identity) morphism."
    return TableGroupoid.discrete(1)


def disjoint_union(a: Groupoid, b: Groupoid) -> TableGroupoid:
    "Materialized disjoint union (desk scale only)."
    n = a.n_objects + b.n_objects
    amap = {m: i for i, m in enumerate(a.morphisms())}
    bmap = {m: len(amap) + i for i, m in enumerate(b.morphisms())}
    src, tgt, inv = [], [], []
    for m in a.morphisms():
        src.append(a.src(m))
        tgt.append(a.tgt(m))
        inv.append(amap[a.inv(m)])
    for m in b.morphisms():
        src.append(a.n_objects + b.src(m))
        tgt.append(a.n_objects + b.tgt(m))
        inv.append(bmap[b.inv(m)])
    ident = [amap[a.identity(x)] for x in range(a.n_objects)]
    ident += [bmap[b.identity(x)] for x in range(b.n_objects)]
    table = {}
    for m1 in a.morphisms():
        for m2 in a.morphisms_from(a.tgt(m1)):
            table[(amap[m2], amap[m1])] = amap[a.compose(m2, m1)]
    for m1 in b.morphisms():
        for m2 in b.morphisms_from(b.tgt(m1)):
            table[(bmap[m2], bmap[m1])] = bmap[b.compose(m2, m1)]
    labels = [("L", a.object_label(x)) for x in range(a.n_objects)]
    labels += [("R", b.object_label(x)) for x in range(b.n_objects)]
    return TableGroupoid(n, src, tgt, inv, ident, table, object_labels=labels)


class ActionGroupoid(Groupoid):
    """The weak quotient X//G of a G-set.

    Objects are the points of X; the morphism (g, x): x -> g.x gets id
    g_index * |X| + x.  Composition is the group product: (h, g.x) o (g, x)
    = (hg, x).
    """

    def __init__(self, gset: GSet, cap: int = MORPHISM_CAP):
        group = gset.group.enumerate()
        if group.order * gset.size > cap:
            raise GroupoidSizeError(
                "action groupoid with %d morphisms exceeds cap %d"
                % (group.order * gset.size, cap))
        self.gset = gset
        self.group = group
        self.n_objects = gset.size
        self._n = gset.size

    def __eq__(self, other):
        return isinstance(other, ActionGroupoid) and self.gset == other.gset

    def __hash__(self):
        return hash(("action", self.gset))

    @property
    def n_morphisms(self):
        return self.group.order * self._n

    def morphisms(self):
        return range(self.n_morphisms)

    def morphism_label(self, m):
        "(g index, source point) for morphism id m."
        return divmod(m, self._n)

    def morphism_id(self, g_index: int, x: int) -> int:
        return g_index * self._n + x

    def src(self, m):
        return m % self._n

    def tgt(self, m):
        g, x = divmod(m, self._n)
        return self.gset.act_element(g, x)

    def inv(self, m):
        g, x = divmod(m, self._n)
        return self.group.inv_index(g) * self._n + self.gset.act_element(g, x)

    def identity(self, x):
        return x

    def compose(self, m2, m1):
        g2, x2 = divmod(m2, self._n)
        g1, x1 = divmod(m1, self._n)
        assert x2 == self.gset.act_element(g1, x1), "morphisms not composable"
        return self.group.mul_index(g2, g1) * self._n + x1

    def hom(self, x, y):
        return [g * self._n + x for g in self.gset.transporter_indices(x, y)]

    def morphisms_from(self, x):
        return range(x, self.n_morphisms, self._n)

    def conn_edges_from(self, x):
        for row in self.gset.action:
            yield row[x]

    def aut_order(self, x):
        return len(self.gset.stabilizer_indices(x))

    def object_label(self, x):
        return self.gset.label(x)


class ProductGroupoid(Groupoid):
    """The product of two groupoids, presented virtually.

    Objects are pair indices a*n2+b; morphism ids are pairs (m1, m2).
    Nothing is materialized, so factor sizes like |G|.|X| x |G|.|X| stay
    cheap.
    """

    def __init__(self, g1: Groupoid, g2: Groupoid):
        self.g1 = g1
        self.g2 = g2
        self.n_objects = g1.n_objects * g2.n_objects

    def __eq__(self, other):
        return (isinstance(other, ProductGroupoid)
                and self.g1 == other.g1 and self.g2 == other.g2)

    def __hash__(self):
        return hash(("product", self.g1, self.g2))

    def obj(self, a, b):
        return a * self.g2.n_objects + b

    def obj_split(self, x):
        return divmod(x, self.g2.n_objects)

    def mor(self, m1, m2):
        return (m1, m2)

    def mor_split(self, m):
        return m

    @property
    def n_morphisms(self):
        return self.g1.n_morphisms * self.g2.n_morphisms

    def morphisms(self):
        for m1 in self.g1.morphisms():
            for m2 in self.g2.morphisms():
                yield self.mor(m1, m2)

    def src(self, m):
        m1, m2 = self.mor_split(m)
        return self.obj(self.g1.src(m1), self.g2.src(m2))

    def tgt(self, m):
        m1, m2 = self.mor_split(m)
        return self.obj(self.g1.tgt(m1), self.g2.tgt(m2))

    def inv(self, m):
        m1, m2 = self.mor_split(m)
        return self.mor(self.g1.inv(m1), self.g2.inv(m2))

    def identity(self, x):
        a, b = self.obj_split(x)
        return self.mor(self.g1.identity(a), self.g2.identity(b))

    def compose(self, m2, m1):
        a2, b2 = self.mor_split(m2)
        a1, b1 = self.mor_split(m1)
        return self.mor(self.g1.compose(a2, a1), self.g2.compose(b2, b1))

    def hom(self, x, y):
        a1, b1 = self.obj_split(x)
        a2, b2 = self.obj_split(y)
        h1 = self.g1.hom(a1, a2)
        h2 = self.g2.hom(b1, b2)
        return [self.mor(u, v) for u in h1 for v in h2]

    def morphisms_from(self, x):
        a, b = self.obj_split(x)
        for m1 in self.g1.morphisms_from(a):
            for m2 in self.g2.morphisms_from(b):
                yield self.mor(m1, m2)

    def conn_edges_from(self, x):
        a, b = self.obj_split(x)
        for a2 in self.g1.conn_edges_from(a):
            yield self.obj(a2, b)
        for b2 in self.g2.conn_edges_from(b):
            yield self.obj(a, b2)

    def aut_order(self, x):
        a, b = self.obj_split(x)
        return self.g1.aut_order(a) * self.g2.aut_order(b)

    def object_label(self, x):
        a, b = self.obj_split(x)
        return (self.g1.object_label(a), self.g2.object_label(b))


def product_groupoid(g1: Groupoid, g2: Groupoid) -> ProductGroupoid:
    return ProductGroupoid(g1, g2)


class SubGroupoid(Groupoid):
    "The full subgroupoid on a subset of objects (closed under morphisms)."

    def __init__(self, parent: Groupoid, objects):
        self.parent = parent
        self.objects = tuple(sorted(objects))
        self.n_objects = len(self.objects)
        self._index = {x: i for i, x in enumerate(self.objects)}

    @property
    def n_morphisms(self):
        return sum(1 for _ in self.morphisms())

    def morphisms(self):
        for x in self.objects:
            for m in self.parent.morphisms_from(x):
                yield m

    def src(self, m):
        return self._index[self.parent.src(m)]

    def tgt(self, m):
        return self._index[self.parent.tgt(m)]

    def inv(self, m):
        return self.parent.inv(m)

    def identity(self, x):
        return self.parent.identity(self.objects[x])

    def compose(self, m2, m1):
        return self.parent.compose(m2, m1)

    def hom(self, x, y):
        return self.parent.hom(self.objects[x], self.objects[y])

    def morphisms_from(self, x):
        return self.parent.morphisms_from(self.objects[x])

    def conn_edges_from(self, x):
        for y in self.parent.conn_edges_from(self.objects[x]):
            yield self._index[y]

    def aut_order(self, x):
        return self.parent.aut_order(self.objects[x])

    def object_label(self, x):
        return self.parent.object_label(self.objects[x])


class GroupoidFunctor:
    "A functor given by an object map and a morphism map (callable)."

    def __init__(self, source: Groupoid, target: Groupoid, object_map, morphism_map):
        self.source = source
        self.target = target
        self._obj = object_map            # callable or indexable
        self._mor = morphism_map          # callable

    def obj(self, x):
        o = self._obj
        return o(x) if callable(o) else o[x]

    def mor(self, m):
        return self._mor(m)

    def __call__(self, x):
        return self.obj(x)

    @classmethod
    def identity(cls, g: Groupoid) -> "GroupoidFunctor":
        return cls(g, g, lambda x: x, lambda m: m)

    @classmethod
    def constant(cls, g: Groupoid, target: Groupoid, obj: int) -> "GroupoidFunctor":
        e = target.identity(obj)
        return cls(g, target, lambda x: obj, lambda m: e)

    @classmethod
    def basis(cls, target: Groupoid, obj: int) -> "GroupoidFunctor":
        "The functor from the terminal groupoid picking out one object."
        return cls.constant(terminal_groupoid(), target, obj)

    def then(self, g: "GroupoidFunctor") -> "GroupoidFunctor":
        "g after self."
        assert g.source is self.target or g.source == self.target
        return GroupoidFunctor(self.source, g.target,
                               lambda x: g.obj(self.obj(x)),
                               lambda m: g.mor(self.mor(m)))

    def validate(self, max_pairs: int = 10 ** 4):
        src, tgt = self.source, self.target
        ms = list(src.morphisms())
        for m in ms:
            fm = self.mor(m)
            assert tgt.src(fm) == self.obj(src.src(m))
            assert tgt.tgt(fm) == self.obj(src.tgt(m))
        for x in range(src.n_objects):
            assert self.mor(src.identity(x)) == tgt.identity(self.obj(x))
        by_src = {}
        for m in ms:
            by_src.setdefault(src.src(m), []).append(m)
        count = 0
        for m1 in ms:
            for m2 in by_src.get(src.tgt(m1), ()):
                assert self.mor(src.compose(m2, m1)) == \
                    tgt.compose(self.mor(m2), self.mor(m1))
                count += 1
                if count >= max_pairs:
                    return True
        return True


def action_groupoid(x: GSet, cap: int = MORPHISM_CAP) -> ActionGroupoid:
    "The weak quotient X//G (requires the group to enumerate)."
    return ActionGroupoid(x, cap=cap)


def induced_functor(f: EquivariantMap, src_grpd: ActionGroupoid,
                    tgt_grpd: ActionGroupoid) -> GroupoidFunctor:
    "The functor X//G -> Y//G induced by a G-map f: X -> Y."
    assert src_grpd.gset == f.source and tgt_grpd.gset == f.target
    images = f.images
    n_src = src_grpd._n
    n_tgt = tgt_grpd._n

    def mor(m):
        g, x = divmod(m, n_src)
        return g * n_tgt + images[x]

    return GroupoidFunctor(src_grpd, tgt_grpd, lambda x: images[x], mor)


def groupoid_cardinality(g: Groupoid) -> Fraction:
    return g.cardinality()


def iso_classes(g: Groupoid):
    "Connected components with canonical (minimal-object) representatives."
    return g.components()


def full_inverse_image(p: GroupoidFunctor, x: int) -> SubGroupoid:
    "The full subgroupoid of p's source on objects v with p(v) iso to x."
    target_classes = p.target.class_of()
    cls = target_classes[x]
    objs = [v for v in range(p.source.n_objects) if target_classes[p.obj(v)] == cls]
    return SubGroupoid(p.source, objs)


class WeakPullbackGroupoid(Groupoid):
    """Apex of the weak pullback of p: G -> I and q: H -> I.

    Objects are triples (h, g, alpha) with alpha: p(g) -> q(h) in I.  A
    morphism out of (h, g, alpha) is a pair (f: g -> g', f': h -> h'); its
    target has alpha' = q(f') o alpha o p(f)^-1.
    """

    def __init__(self, p: GroupoidFunctor, q: GroupoidFunctor):
        assert p.target is q.target or p.target == q.target
        self.p = p
        self.q = q
        self.I = p.target
        G, H = p.source, q.source
        labels = []
        for g in range(G.n_objects):
            pg = p.obj(g)
            for h in range(H.n_objects):
                qh = q.obj(h)
                for alpha in self.I.hom(pg, qh):
                    labels.append((h, g, alpha))
        self.object_labels = tuple(labels)
        self.n_objects = len(labels)
        self._obj_index = {lab: i for i, lab in enumerate(labels)}

    def _target_of(self, x, f, f2):
        h, g, alpha = self.object_labels[x]
        G, H, I = self.p.source, self.q.source, self.I
        g2 = G.tgt(f)
        h2 = H.tgt(f2)
        alpha2 = I.compose(I.compose(self.q.mor(f2), alpha), I.inv(self.p.mor(f)))
        return self._obj_index[(h2, g2, alpha2)]

    @property
    def n_morphisms(self):
        total = 0
        G, H = self.p.source, self.q.source
        for (h, g, alpha) in self.object_labels:
            total += sum(1 for _ in G.morphisms_from(g)) * sum(1 for _ in H.morphisms_from(h))
        return total

    def morphisms(self):
        G, H = self.p.source, self.q.source
        for x, (h, g, alpha) in enumerate(self.object_labels):
            for f in G.morphisms_from(g):
                for f2 in H.morphisms_from(h):
                    yield (x, f, f2)

    def morphisms_from(self, x):
        G, H = self.p.source, self.q.source
        h, g, alpha = self.object_labels[x]
        for f in G.morphisms_from(g):
            for f2 in H.morphisms_from(h):
                yield (x, f, f2)

    def src(self, m):
        return m[0]

    def tgt(self, m):
        x, f, f2 = m
        return self._target_of(x, f, f2)

    def identity(self, x):
        h, g, alpha = self.object_labels[x]
        return (x, self.p.source.identity(g), self.q.source.identity(h))

    def inv(self, m):
        x, f, f2 = m
        y = self._target_of(x, f, f2)
        return (y, self.p.source.inv(f), self.q.source.inv(f2))

    def compose(self, m2, m1):
        x1, f1, f21 = m1
        x2, f2, f22 = m2
        assert self._target_of(x1, f1, f21) == x2
        return (x1, self.p.source.compose(f2, f1), self.q.source.compose(f22, f21))

    def hom(self, x, y):
        hx, gx, ax = self.object_labels[x]
        hy, gy, ay = self.object_labels[y]
        G, H, I = self.p.source, self.q.source, self.I
        out = []
        for f in G.hom(gx, gy):
            for f2 in H.hom(hx, hy):
                if I.compose(self.q.mor(f2), ax) == I.compose(ay, self.p.mor(f)):
                    out.append((x, f, f2))
        return out

    def conn_edges_from(self, x):
        h, g, alpha = self.object_labels[x]
        G, H, I = self.p.source, self.q.source, self.I
        for f in self._gen_morphisms(G, g):
            alpha2 = I.compose(alpha, I.inv(self.p.mor(f)))
            yield self._obj_index[(h, G.tgt(f), alpha2)]
        for f2 in self._gen_morphisms(H, h):
            alpha2 = I.compose(self.q.mor(f2), alpha)
            yield self._obj_index[(H.tgt(f2), g, alpha2)]

    @staticmethod
    def _gen_morphisms(g: Groupoid, x: int):
        "A generating set of morphisms out of x (generators for action groupoids)."
        if isinstance(g, ActionGroupoid):
            for gi in g.group.generator_indices:
                yield gi * g._n + x
        elif isinstance(g, ProductGroupoid):
            a, b = g.obj_split(x)
            for f in WeakPullbackGroupoid._gen_morphisms(g.g1, a):
                yield g.mor(f, g.g2.identity(b))
            for f2 in WeakPullbackGroupoid._gen_morphisms(g.g2, b):
                yield g.mor(g.g1.identity(a), f2)
        elif isinstance(g, WeakPullbackGroupoid):
            gp, gq = g.p.source, g.q.source
            h, gg, alpha = g.object_labels[x]
            for f in WeakPullbackGroupoid._gen_morphisms(gp, gg):
                yield (x, f, gq.identity(h))
            for f2 in WeakPullbackGroupoid._gen_morphisms(gq, h):
                yield (x, gp.identity(gg), f2)
        elif isinstance(g, SubGroupoid):
            for m in g.morphisms_from(x):
                yield m
        else:
            for m in g.morphisms_from(x):
                yield m

    def aut_order(self, x):
        h, g, alpha = self.object_labels[x]
        G, H, I = self.p.source, self.q.source, self.I
        by_val = {}
        for f2 in H.hom(h, h):
            v = self.q.mor(f2)
            by_val[v] = by_val.get(v, 0) + 1
        count = 0
        for f in G.hom(g, g):
            beta = I.compose(I.compose(alpha, self.p.mor(f)), I.inv(alpha))
            count += by_val.get(beta, 0)
        return count

    def object_label(self, x):
        return self.object_labels[x]


class WeakPullbackResult:
    "Apex groupoid plus the two projection functors and the (h, g, alpha) labels."

    def __init__(self, apex: WeakPullbackGroupoid):
        self.apex = apex
        self.object_labels = apex.object_labels
        H = apex.q.source
        G = apex.p.source
        self.left_proj = GroupoidFunctor(
            apex, H,
            lambda x: apex.object_labels[x][0],
            lambda m: m[2])
        self.right_proj = GroupoidFunctor(
            apex, G,
            lambda x: apex.object_labels[x][1],
            lambda m: m[1])


def weak_pullback(p: GroupoidFunctor, q: GroupoidFunctor) -> WeakPullbackResult:
    """Weak pullback of p: G -> I, q: H -> I.

    Apex objects are (h, g, alpha: p(g) -> q(h)); left projection lands in
    H (q's source), right projection in G (p's source), matching the usual
    picture with H drawn on the left.
    """
    return WeakPullbackResult(WeakPullbackGroupoid(p, q))
