import random
from fractions import Fraction

import pytest

from qspan.exactnum import QMatrix, kronecker, mat_mul
from qspan.groups import GSet, PermGroup, product_gset
from qspan.spans import (FootMismatchError, SpanMap, compose_gset_spans,
                         compose_word, coproduct, decompose_irreducible,
                         gset_span_to_groupoid_span, identity_span,
                         product_span, scalar_multiple, span_iso,
                         span_iso_obstruction)
from qspan.randgen import random_gset, random_group, random_span


def test_identity_span_fiber(s3):
    x = GSet.natural(s3)
    assert identity_span(x).fiber_matrix() == QMatrix.identity(3)


def test_compose_with_identity_preserves_fibers(s3):
    rng = random.Random(2)
    x = random_gset(rng, s3, max_size=6)
    y = random_gset(rng, s3, max_size=6)
    s = random_span(rng, x, y)
    left = compose_gset_spans(identity_span(y), s)
    right = compose_gset_spans(s, identity_span(x))
    assert left.fiber_matrix() == s.fiber_matrix() == right.fiber_matrix()
    assert left.apex.size == s.apex.size == right.apex.size


def test_composite_fibers_multiply():
    rng = random.Random(31)
    for _ in range(12):
        g = random_group(rng, max_order=24)
        x = random_gset(rng, g, max_size=6)
        y = random_gset(rng, g, max_size=6)
        z = random_gset(rng, g, max_size=6)
        s = random_span(rng, x, y)
        t = random_span(rng, y, z)
        c = compose_gset_spans(t, s)
        assert c.fiber_matrix() == mat_mul(t.fiber_matrix(), s.fiber_matrix())


def test_composite_fibers_multiply_plain_sets():
    # trivial group: spans of plain finite sets
    rng = random.Random(43)
    g = PermGroup.trivial(1)
    for _ in range(10):
        x = GSet.trivial_action(g, rng.randint(1, 4))
        y = GSet.trivial_action(g, rng.randint(1, 4))
        z = GSet.trivial_action(g, rng.randint(1, 4))
        s = random_span(rng, x, y)
        t = random_span(rng, y, z)
        c = compose_gset_spans(t, s)
        assert c.fiber_matrix() == mat_mul(t.fiber_matrix(), s.fiber_matrix())


def test_strict_associativity_identical_points():
    rng = random.Random(47)
    g = random_group(rng, max_order=12)
    x = random_gset(rng, g, max_size=5)
    s = random_span(rng, x, x)
    t = random_span(rng, x, x)
    u = random_span(rng, x, x)
    a = compose_gset_spans(u, compose_gset_spans(t, s))
    b = compose_gset_spans(compose_gset_spans(u, t), s)
    assert a.apex.labels == b.apex.labels
    assert a.left.images == b.left.images
    assert a.right.images == b.right.images
    assert a.path_arity == b.path_arity


def test_foot_mismatch():
    g = PermGroup.trivial(1)
    x = GSet.trivial_action(g, 2)
    y = GSet.trivial_action(g, 3)
    with pytest.raises(FootMismatchError):
        compose_gset_spans(identity_span(x), identity_span(y))
    with pytest.raises(FootMismatchError):
        coproduct([identity_span(x), identity_span(y)])


def test_coproduct_fibers_add(s3):
    rng = random.Random(3)
    x = random_gset(rng, s3, max_size=5)
    y = random_gset(rng, s3, max_size=5)
    s = random_span(rng, x, y)
    t = random_span(rng, x, y)
    c = coproduct([s, t])
    assert c.fiber_matrix() == s.fiber_matrix() + t.fiber_matrix()
    assert c.apex.size == s.apex.size + t.apex.size


def test_scalar_multiple_one_is_isomorphic(s3):
    rng = random.Random(8)
    x = random_gset(rng, s3, max_size=5)
    s = random_span(rng, x, x)
    m = span_iso(scalar_multiple(1, s), s)
    assert m is not None and m.is_bijective


def test_decompose_then_coproduct_round_trip():
    rng = random.Random(71)
    for _ in range(8):
        g = random_group(rng, max_order=24)
        x = random_gset(rng, g, max_size=6)
        s = random_span(rng, x, x)
        parts = decompose_irreducible(s)
        for part in parts:
            assert len(part.apex.orbits()) == 1
        rebuilt = coproduct(parts)
        m = span_iso(s, rebuilt)
        assert m is not None and m.is_bijective


def test_span_iso_self_is_identity(s3):
    rng = random.Random(4)
    x = random_gset(rng, s3, max_size=6)
    s = random_span(rng, x, x)
    m = span_iso(s, s)
    assert m is not None
    assert m.images == tuple(range(s.apex.size))


def test_span_iso_necessary_conditions():
    rng = random.Random(83)
    for _ in range(10):
        g = random_group(rng, max_order=24)
        x = random_gset(rng, g, max_size=6)
        s = random_span(rng, x, x)
        t = random_span(rng, x, x)
        m = span_iso(s, t)
        if m is not None:
            assert s.fiber_matrix() == t.fiber_matrix()
            obs = span_iso_obstruction(s, t)
            assert obs["left_orbit_types"] == obs["right_orbit_types"]


def test_span_map_validation(s3):
    x = GSet.natural(s3)
    s = identity_span(x)
    SpanMap(s, s, range(3))
    with pytest.raises(AssertionError):
        SpanMap(s, s, [0, 0, 0])


def test_product_span_fiber_is_kronecker():
    rng = random.Random(6)
    g = random_group(rng, max_order=12)
    x = random_gset(rng, g, max_size=4)
    y = random_gset(rng, g, max_size=4)
    s = random_span(rng, x, y)
    t = random_span(rng, x, y)
    prod = product_span(s, t)
    assert prod.fiber_matrix() == kronecker(s.fiber_matrix(), t.fiber_matrix())


def test_relation_span_composition_counts_multiplicity(s3):
    # for relation spans, composite fibers count middle points
    x = GSet.natural(s3)
    rng = random.Random(10)
    s = random_span(rng, x, x)
    if not s.is_relation():
        s = decompose_irreducible(s)[0]
    c = compose_gset_spans(s, s)
    m = c.fiber_matrix()
    ms = s.fiber_matrix()
    for yi in range(3):
        for xi in range(3):
            count = sum(1 for mid in range(3)
                        if ms[yi, mid] and ms[mid, xi])
            assert m[yi, xi] == Fraction(count)


def test_path_views(s3):
    x = GSet.natural(s3)
    s = identity_span(x)
    c = compose_word([s, s, s])
    assert c.path_arity == 3
    for p in range(c.apex.size):
        fp = c.foot_path(p)
        assert len(fp) == 4
        assert fp[0] == c.right(p) and fp[-1] == c.left(p)


def test_groupoid_span_composition_cardinality(z2):
    from qspan.groupoids import groupoid_cardinality
    from qspan.spans import GroupoidSpan, compose_groupoid_spans
    x = GSet.natural(z2)
    s = gset_span_to_groupoid_span(identity_span(x))
    c = compose_groupoid_spans(s, s)
    assert groupoid_cardinality(c.apex) == groupoid_cardinality(s.apex)
