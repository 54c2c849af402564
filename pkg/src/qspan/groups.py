"""
Finite permutation groups given by generators, finite G-sets, and
equivariant maps.

Permutations are tuples of images on {0..degree-1}.  Composition order is
fixed once and for all here: ``perm_mul(a, b)`` applies the *right* factor
first, i.e. (a*b)(x) = a(b(x)).  Every other module inherits this
convention.
"""

from __future__ import annotations

from functools import reduce

import numpy

Perm = tuple


class EnumerationLimitError(RuntimeError):
    """Group closure would exceed the configured cap."""


class GroupMismatchError(ValueError):
    """Operands live under different groups."""


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def perm_mul(a: Perm, b: Perm) -> Perm:
    "(a*b)(x) = a(b(x)): apply b first."
    return tuple(a[b[x]] for x in range(len(a)))


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


def is_perm(a) -> bool:
    n = len(a)
    return sorted(a) == list(range(n))


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse disjoint-cycle notation like ``(0 1)(2 4 3)`` into a permutation.

    Points are 0-indexed; fixed points are omitted.  Raises ValueError on
    malformed input, repeated points, or points out of range.
    """
    images = list(range(degree))
    seen = set()
    i = 0
    text = text.strip()
    if not text:
        raise ValueError("empty cycle expression")
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c != "(":
            raise ValueError("expected '(' at position %d" % i)
        j = text.index(")", i) if ")" in text[i:] else -1
        if j < 0:
            raise ValueError("unclosed cycle starting at position %d" % i)
        body = text[i + 1:j].replace(",", " ").split()
        pts = [int(p) for p in body]
        if len(pts) < 1:
            raise ValueError("empty cycle at position %d" % i)
        for p in pts:
            if not 0 <= p < degree:
                raise ValueError("point %d out of range for degree %d" % (p, degree))
            if p in seen:
                raise ValueError("point %d repeated" % p)
            seen.add(p)
        for k, p in enumerate(pts):
            images[p] = pts[(k + 1) % len(pts)]
        i = j + 1
    return tuple(images)


def cycles_str(perm: Perm) -> str:
    "Canonical disjoint-cycle string; identity prints as '()'."
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        p = perm[start]
        while p != start:
            cyc.append(p)
            seen.add(p)
            p = perm[p]
        out.append("(" + " ".join(str(x) for x in cyc) + ")")
    return "".join(out) if out else "()"


DEFAULT_CAP = 10 ** 6


class PermGroup:
    """A finite permutation group, stored by generators.

    Full enumeration is lazy (breadth-first closure over the generators)
    and cached; only element-level operations (stabilizers, transporters,
    span-isomorphism search) force it.
    """

    def __init__(self, degree: int, generators, cap: int = DEFAULT_CAP):
        self.degree = degree
        gens = tuple(tuple(g) for g in generators)
        for g in gens:
            if len(g) != degree or not is_perm(g):
                raise ValueError("generator %r is not a permutation of degree %d" % (g, degree))
        self.generators = gens
        self.cap = cap
        self._elements = None
        self._index = None
        self._words = None       # per element: (parent index, generator index), None for identity
        self._inv_index = None
        self._gen_indices = None

    def __eq__(self, other):
        return (isinstance(other, PermGroup) and self.degree == other.degree
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.degree, self.generators))

    def __repr__(self):
        return "PermGroup(degree=%d, gens=%s)" % (
            self.degree, ",".join(cycles_str(g) for g in self.generators) or "()")

    # -- enumeration ------------------------------------------------------

    @property
    def is_enumerated(self) -> bool:
        return self._elements is not None

    def enumerate(self, cap=None):
        "Breadth-first closure; records a word DAG for replaying actions."
        if self._elements is not None:
            return self
        cap = self.cap if cap is None else cap
        ident = identity_perm(self.degree)
        elements = [ident]
        index = {ident: 0}
        words = [None]
        frontier = [0]
        while frontier:
            new_frontier = []
            for ei in frontier:
                e = elements[ei]
                for gi, g in enumerate(self.generators):
                    p = perm_mul(g, e)
                    if p not in index:
                        if len(elements) >= cap:
                            raise EnumerationLimitError(
                                "group closure exceeds cap %d" % cap)
                        index[p] = len(elements)
                        elements.append(p)
                        words.append((ei, gi))
                        new_frontier.append(index[p])
            frontier = new_frontier
        self._elements = tuple(elements)
        self._index = index
        self._words = tuple(words)
        return self

    @property
    def elements(self):
        self.enumerate()
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_index(self, perm: Perm) -> int:
        self.enumerate()
        return self._index[tuple(perm)]

    def __contains__(self, perm) -> bool:
        self.enumerate()
        return tuple(perm) in self._index

    @property
    def generator_indices(self):
        if self._gen_indices is None:
            self._gen_indices = tuple(self.element_index(g) for g in self.generators)
        return self._gen_indices

    def mul_index(self, i: int, j: int) -> int:
        "Index of elements[i] * elements[j] (j applied first)."
        return self._index[perm_mul(self._elements[i], self._elements[j])]

    def inv_index(self, i: int) -> int:
        if self._inv_index is None:
            self._inv_index = [None] * self.order
        if self._inv_index[i] is None:
            self._inv_index[i] = self._index[perm_inv(self._elements[i])]
        return self._inv_index[i]

    # -- constructors ------------------------------------------------------

    @classmethod
    def trivial(cls, degree: int = 1) -> "PermGroup":
        g = cls(degree, [])
        g._elements = (identity_perm(degree),)
        g._index = {identity_perm(degree): 0}
        g._words = (None,)
        return g

    @classmethod
    def symmetric(cls, n: int) -> "PermGroup":
        if n <= 1:
            return cls.trivial(max(n, 1))
        transposition = tuple([1, 0] + list(range(2, n)))
        cycle = tuple(list(range(1, n)) + [0])
        return cls(n, [transposition, cycle])

    @classmethod
    def cyclic(cls, n: int) -> "PermGroup":
        if n <= 1:
            return cls.trivial(max(n, 1))
        return cls(n, [tuple(list(range(1, n)) + [0])])

    @classmethod
    def from_elements(cls, degree: int, elements) -> "PermGroup":
        "A subgroup given by its full element list (must contain the identity)."
        elements = [tuple(e) for e in elements]
        ident = identity_perm(degree)
        assert ident in elements
        elements = [ident] + sorted(e for e in elements if e != ident)
        g = cls(degree, elements[1:])
        g._elements = tuple(elements)
        g._index = {e: i for i, e in enumerate(elements)}
        # every non-identity element is a generator, one BFS step deep
        g._words = (None,) + tuple((0, k - 1) for k in range(1, len(elements)))
        return g


def group_closure(generators, cap: int = DEFAULT_CAP, degree=None) -> PermGroup:
    "Enumerate the group generated by `generators`, failing above `cap`."
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("need at least one generator or an explicit degree")
        degree = len(gens[0])
    g = PermGroup(degree, gens, cap=cap)
    g.enumerate()
    return g


class GSet:
    """A finite set with an action of a PermGroup, given per generator.

    ``action[i][p]`` is the image of point p under generator i.  Optional
    ``labels`` give stable, hashable names to points (flags, pairs, paths).
    """

    def __init__(self, group: PermGroup, size: int, action, labels=None, check: bool = True):
        self.group = group
        self.size = size
        self.action = tuple(tuple(row) for row in action)
        self.labels = tuple(labels) if labels is not None else None
        if len(self.action) != len(group.generators):
            raise ValueError("need one action row per generator")
        if check:
            for row in self.action:
                if len(row) != size or not is_perm(row):
                    raise ValueError("action row is not a permutation of the points")
        if self.labels is not None and len(self.labels) != size:
            raise ValueError("labels length mismatch")
        self._orbits = None
        self._orbit_of = None
        self._rows = None
        self._transversal = None
        self._stab_cache = {}
        self._transporter_cache = {}

    def __eq__(self, other):
        return (isinstance(other, GSet) and self.group == other.group
                and self.size == other.size and self.action == other.action)

    def __hash__(self):
        return hash((self.group, self.size, self.action))

    def __repr__(self):
        return "GSet(size=%d, group=%r)" % (self.size, self.group)

    def label(self, p):
        return self.labels[p] if self.labels is not None else p

    # -- generator-level action -------------------------------------------

    def act_gen(self, i: int, p: int) -> int:
        return self.action[i][p]

    def check_random_words(self, rng, trials: int = 30, max_len: int = 8):
        """Sampled relation check: words that agree as group elements must act
        identically on the points.  Returns True or raises AssertionError."""
        gens = self.group.generators
        if not gens:
            return True
        seen = {}
        for _ in range(trials):
            word = [rng.randrange(len(gens)) for _ in range(rng.randrange(1, max_len))]
            perm = reduce(perm_mul, (gens[i] for i in word), identity_perm(self.group.degree))
            row = tuple(range(self.size))
            for i in reversed(word):   # rightmost letter of the product acts first
                row = tuple(self.action[i][x] for x in row)
            if perm in seen:
                assert seen[perm] == row, "action does not respect a group relation"
            seen[perm] = row
        return True

    # -- orbits ------------------------------------------------------------

    def orbits(self):
        "Orbit partition from generators only; orbits sorted by minimal point."
        if self._orbits is None:
            seen = [False] * self.size
            orbits = []
            orbit_of = [0] * self.size
            for start in range(self.size):
                if seen[start]:
                    continue
                frontier = [start]
                seen[start] = True
                members = [start]
                while frontier:
                    nxt = []
                    for p in frontier:
                        for row in self.action:
                            q = row[p]
                            if not seen[q]:
                                seen[q] = True
                                members.append(q)
                                nxt.append(q)
                    frontier = nxt
                members.sort()
                for p in members:
                    orbit_of[p] = len(orbits)
                orbits.append(tuple(members))
            self._orbits = tuple(orbits)
            self._orbit_of = tuple(orbit_of)
        return self._orbits

    def orbit_of(self, p: int) -> int:
        self.orbits()
        return self._orbit_of[p]

    # -- element-level action ----------------------------------------------

    def element_column(self, p: int):
        """g . p for every enumerated group element, as an int32 array.

        Built by dynamic programming along the enumeration word DAG, one
        point at a time, so memory stays O(|G|) per *queried* point instead
        of O(|G| x |X|) up front.
        """
        col = self._rows.get(p) if self._rows is not None else None
        if col is None:
            g = self.group.enumerate()
            n = g.order
            col = numpy.empty(n, dtype=numpy.int32)
            col[0] = p
            words = g._words
            action = self.action
            for k in range(1, n):
                parent, gi = words[k]
                col[k] = action[gi][col[parent]]
            if self._rows is None:
                self._rows = {}
            self._rows[p] = col
        return col

    def act_element(self, g_index: int, p: int) -> int:
        return int(self.element_column(p)[g_index])

    def stabilizer_indices(self, p: int):
        "Indices of all group elements fixing the point p."
        if p not in self._stab_cache:
            col = self.element_column(p)
            self._stab_cache[p] = tuple(int(i) for i in numpy.nonzero(col == p)[0])
        return self._stab_cache[p]

    def transversal(self):
        "For each point p, an element index u with u . min(orbit(p)) = p."
        if self._transversal is None:
            g = self.group.enumerate()
            gen_idx = g.generator_indices
            trans = [None] * self.size
            for orbit in self.orbits():
                rep = orbit[0]
                trans[rep] = 0
                frontier = [rep]
                while frontier:
                    nxt = []
                    for p in frontier:
                        for i, row in enumerate(self.action):
                            q = row[p]
                            if trans[q] is None:
                                trans[q] = g.mul_index(gen_idx[i], trans[p])
                                nxt.append(q)
                    frontier = nxt
            self._transversal = tuple(trans)
        return self._transversal

    def transporter_indices(self, x: int, y: int):
        "Indices of all group elements g with g . x = y (may be empty)."
        key = (x, y)
        if key not in self._transporter_cache:
            if self.orbit_of(x) != self.orbit_of(y):
                self._transporter_cache[key] = ()
            else:
                g = self.group
                trans = self.transversal()
                rep = self.orbits()[self.orbit_of(x)][0]
                ux_inv = g.inv_index(trans[x])
                uy = trans[y]
                out = []
                for s in self.stabilizer_indices(rep):
                    out.append(g.mul_index(g.mul_index(uy, s), ux_inv))
                self._transporter_cache[key] = tuple(sorted(out))
        return self._transporter_cache[key]

    def stabilizer(self, p: int) -> PermGroup:
        "The stabilizer subgroup of a point, fully enumerated."
        if not self.group.is_enumerated:
            self.group.enumerate()
        elems = [self.group.elements[i] for i in self.stabilizer_indices(p)]
        return PermGroup.from_elements(self.group.degree, elems)

    # -- constructors -------------------------------------------------------

    @classmethod
    def one_point(cls, group: PermGroup) -> "GSet":
        return cls(group, 1, [[0]] * len(group.generators), labels=("*",))

    @classmethod
    def natural(cls, group: PermGroup) -> "GSet":
        "The defining action on {0..degree-1}."
        return cls(group, group.degree, group.generators)

    @classmethod
    def trivial_action(cls, group: PermGroup, size: int) -> "GSet":
        return cls(group, size, [list(range(size))] * len(group.generators))

    @classmethod
    def regular(cls, group: PermGroup) -> "GSet":
        "Left multiplication action on the enumerated element list."
        group.enumerate()
        n = group.order
        action = []
        for g in group.generators:
            action.append([group.element_index(perm_mul(g, e)) for e in group.elements])
        return cls(group, n, action, labels=tuple(group.elements))

    @classmethod
    def coset_action(cls, group: PermGroup, subgroup_element_indices) -> "GSet":
        "Left multiplication on left cosets gH; points labelled by min coset reps."
        group.enumerate()
        sub = sorted(set(subgroup_element_indices))
        assert 0 in sub, "subgroup must contain the identity"
        coset_of = {}
        reps = []
        for i in range(group.order):
            if i in coset_of:
                continue
            members = sorted(group.mul_index(i, s) for s in sub)
            idx = len(reps)
            for m in members:
                coset_of[m] = idx
            reps.append(members[0])
        n = len(reps)
        action = []
        for gi in group.generator_indices:
            action.append([coset_of[group.mul_index(gi, reps[p])] for p in range(n)])
        return cls(group, n, action, labels=tuple(reps))


def product_gset(x: GSet, y: GSet) -> GSet:
    "Diagonal action on pairs, lexicographic point order, pair labels."
    if x.group != y.group:
        raise GroupMismatchError("product of G-sets over different groups")
    n, m = x.size, y.size
    action = []
    for rx, ry in zip(x.action, y.action):
        action.append([rx[p] * m + ry[q] for p in range(n) for q in range(m)])
    labels = tuple((x.label(p), y.label(q)) for p in range(n) for q in range(m))
    out = GSet(x.group, n * m, action, labels=labels, check=False)
    out.factors = (x, y)
    return out


def disjoint_union_gsets(parts) -> GSet:
    parts = list(parts)
    group = parts[0].group
    for p in parts:
        if p.group != group:
            raise GroupMismatchError("disjoint union over different groups")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.size
    action = []
    for gi in range(len(group.generators)):
        row = []
        for off, p in zip(offsets, parts):
            row.extend(off + q for q in p.action[gi])
        action.append(row)
    labels = tuple((k, p.label(q)) for k, p in enumerate(parts) for q in range(p.size))
    return GSet(group, total, action, labels=labels, check=False)


def sub_gset(x: GSet, points) -> GSet:
    "The induced action on a union of orbits (must be generator-closed)."
    points = sorted(points)
    where = {p: i for i, p in enumerate(points)}
    action = []
    for row in x.action:
        new_row = []
        for p in points:
            q = row[p]
            if q not in where:
                raise ValueError("point set is not closed under the action")
            new_row.append(where[q])
        action.append(new_row)
    labels = tuple(x.label(p) for p in points)
    return GSet(x.group, len(points), action, labels=labels, check=False)


class EquivariantMap:
    "A G-map between G-sets; commuting with every generator is checked."

    def __init__(self, source: GSet, target: GSet, images, check: bool = True):
        if source.group != target.group:
            raise GroupMismatchError("equivariant map between different groups")
        self.source = source
        self.target = target
        self.images = tuple(images)
        if len(self.images) != source.size:
            raise ValueError("images length mismatch")
        if check:
            for i in range(len(source.group.generators)):
                srow = source.action[i]
                trow = target.action[i]
                for p in range(source.size):
                    if self.images[srow[p]] != trow[self.images[p]]:
                        raise ValueError(
                            "map is not equivariant at generator %d, point %d" % (i, p))

    def __call__(self, p: int) -> int:
        return self.images[p]

    def __eq__(self, other):
        return (isinstance(other, EquivariantMap) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __repr__(self):
        return "EquivariantMap(%d -> %d points)" % (self.source.size, self.target.size)

    @classmethod
    def identity(cls, x: GSet) -> "EquivariantMap":
        return cls(x, x, range(x.size), check=False)

    def compose(self, other: "EquivariantMap") -> "EquivariantMap":
        "self after other."
        assert other.target == self.source
        return EquivariantMap(other.source, self.target,
                              (self.images[p] for p in other.images), check=False)


def orbit_counting_check(x: GSet) -> bool:
    "Orbit-stabilizer sanity: |orbit(p)| * |stab(p)| = |G| for every point."
    g = x.group.enumerate()
    for orbit in x.orbits():
        for p in orbit:
            if len(orbit) * len(x.stabilizer_indices(p)) != g.order:
                return False
    return True
