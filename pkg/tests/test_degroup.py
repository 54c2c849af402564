import random
from fractions import Fraction

from qspan.exactnum import QMatrix, QVector, nullspace
from qspan.groups import GSet, product_gset
from qspan.groupoids import (GroupoidFunctor, action_groupoid, disjoint_union,
                             terminal_groupoid)
from qspan.degroup import (Basis, GroupoidOver, basis_vector_functors,
                           check_functoriality, check_monoidal,
                           degroupoidify_groupoid, degroupoidify_span,
                           denominators_divide, vector_of)
from qspan.spans import (GroupoidSpan, gset_span_to_groupoid_span,
                         identity_span, product_span)
from qspan.randgen import (random_composable_groupoid_spans, random_gset,
                           random_group, random_span)


def test_basis_dimensions(s3):
    assert degroupoidify_groupoid(terminal_groupoid()).dim == 1
    x = GSet.regular(s3)
    hom = action_groupoid(product_gset(x, x))
    assert degroupoidify_groupoid(hom).dim == 6


def test_identity_span_on_terminal():
    t = terminal_groupoid()
    assert degroupoidify_span(GroupoidSpan.identity(t)) == QMatrix.identity(1)


def test_point_mod_z2_span_to_terminal(z2):
    w = action_groupoid(GSet.one_point(z2))
    f = GroupoidFunctor.constant(w, terminal_groupoid(), 0)
    span = GroupoidSpan(w, f, f)
    assert degroupoidify_span(span) == QMatrix(1, 1, [Fraction(1, 2)])


def test_identity_projection_vector(z2):
    w = action_groupoid(GSet.one_point(z2))
    v = vector_of(GroupoidOver(w, GroupoidFunctor.identity(w)))
    assert v == QVector([Fraction(1, 2)])


def test_action_identity_span_degroupoidifies_to_identity():
    rng = random.Random(5)
    for _ in range(6):
        g = random_group(rng, max_order=24)
        x = random_gset(rng, g, max_size=6)
        span = gset_span_to_groupoid_span(identity_span(x))
        assert degroupoidify_span(span) == QMatrix.identity(len(x.orbits()))


def test_basis_functor_vectors_are_standard_basis(z2):
    # on pt u pt//Z2: the terminal-groupoid functors give e_[x] exactly,
    # hence a linearly independent spanning set
    du = disjoint_union(terminal_groupoid(), action_groupoid(GSet.one_point(z2)))
    functors = basis_vector_functors(du)
    vectors = [vector_of(GroupoidOver(f.source, f)) for f in functors]
    dim = Basis(du).dim
    assert len(vectors) == dim == 2
    for i, v in enumerate(vectors):
        assert v == QVector([1 if j == i else 0 for j in range(dim)])
    stacked = QMatrix(dim, dim, [e for v in vectors for e in v.entries])
    assert nullspace(stacked) == []


def test_functoriality_randomized():
    rng = random.Random(101)
    for _ in range(20):
        t, s = random_composable_groupoid_spans(rng, max_order=20, max_size=6)
        assert check_functoriality(t, s)


def test_monoidality_randomized():
    rng = random.Random(103)
    for _ in range(8):
        g = random_group(rng, max_order=16)
        x = random_gset(rng, g, max_size=4)
        y = random_gset(rng, g, max_size=4)
        s = gset_span_to_groupoid_span(random_span(rng, x, y))
        t = gset_span_to_groupoid_span(random_span(rng, x, y))
        assert check_monoidal(s, t)


def test_monoidal_with_terminal_identity(z2):
    x = GSet.natural(z2)
    s = gset_span_to_groupoid_span(identity_span(x))
    unit = GroupoidSpan.identity(terminal_groupoid())
    r = check_monoidal(s, unit)
    assert r.ok
    assert r.lhs == degroupoidify_span(s)


def test_two_point_mod_z2_tensor(z2):
    w = action_groupoid(GSet.one_point(z2))
    f = GroupoidFunctor.constant(w, terminal_groupoid(), 0)
    span = GroupoidSpan(w, f, f)
    r = check_monoidal(span, span)
    assert r.ok
    assert r.lhs == QMatrix(1, 1, [Fraction(1, 4)])


def test_denominators_divide_group_order():
    rng = random.Random(107)
    for _ in range(6):
        t, s = random_composable_groupoid_spans(rng, max_order=20, max_size=5)
        d = degroupoidify_span(s)
        order = s.apex.group.order
        assert denominators_divide(d, order)


def test_a2_projection_vector(a2_ctx):
    x = a2_ctx.fc.gset
    hom = action_groupoid(product_gset(x, x))
    pt = action_groupoid(GSet.one_point(x.group))
    n = hom.gset.size

    def mor(m):
        g, p = hom.morphism_label(m)
        return pt.morphism_id(g, 0)

    proj = GroupoidFunctor(hom, pt, lambda p: 0, mor)
    v = vector_of(GroupoidOver(hom, proj))
    assert v == QVector([Fraction(21, 8)])
