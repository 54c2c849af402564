import random

import pytest

from qspan.groups import GSet, product_gset, sub_gset, EquivariantMap
from qspan.groupoids import GroupoidFunctor, action_groupoid, terminal_groupoid
from qspan.presheaves import (Presheaf, PresheafBaseError, check_natural_iso,
                              constant_presheaf, coproduct_presheaf,
                              empty_presheaf, enumerate_nat_trans,
                              left_pushforward, linearize_span,
                              presheaf_roundtrip, presheaf_to_span,
                              pullback_presheaf, span_roundtrip,
                              span_to_presheaf)
from qspan.spans import (GSetSpan, compose_gset_spans, gset_span_to_groupoid_span,
                         identity_span, span_iso)
from qspan.randgen import random_gset, random_span


def z2_regular_presheaf(z2):
    "The free 2-point Z2-set as a presheaf on pt//Z2."
    w = action_groupoid(GSet.one_point(z2))
    return w, Presheaf(w, [(0, 1)],
                       lambda m: (0, 1) if divmod(m, 1)[0] == 0 else (1, 0))


def test_pullback_identity(z2):
    w, p = z2_regular_presheaf(z2)
    q = pullback_presheaf(GroupoidFunctor.identity(w), p)
    assert q.sets == p.sets
    for m in w.morphisms():
        assert q.action(m) == p.action(m)


def test_pullback_constant(s3):
    grpd = action_groupoid(GSet.natural(s3))
    c = constant_presheaf(grpd, 3)
    t = terminal_groupoid()
    f = GroupoidFunctor.constant(grpd, t, 0)
    pulled = pullback_presheaf(f, constant_presheaf(t, 3))
    assert pulled.sets == c.sets


def test_pullback_along_basis_functor(z2):
    w, p = z2_regular_presheaf(z2)
    b = GroupoidFunctor.basis(w, 0)
    pulled = pullback_presheaf(b, p)
    assert pulled.sets == (p.sets[0],)


def test_pushforward_identity_is_isomorphic(z2):
    w, p = z2_regular_presheaf(z2)
    pushed = left_pushforward(GroupoidFunctor.identity(w), p)
    pushed.validate_sampled()
    assert [len(s) for s in pushed.sets] == [len(s) for s in p.sets]


def test_pushforward_quotients_free_orbit(z2):
    w, p = z2_regular_presheaf(z2)
    f = GroupoidFunctor.constant(w, terminal_groupoid(), 0)
    pushed = left_pushforward(f, p)
    assert [len(s) for s in pushed.sets] == [1]


def test_adjunction_hom_counts(z2, s3):
    rng = random.Random(11)
    for group in (z2, s3):
        x = random_gset(rng, group, max_size=3, parts=1)
        w = action_groupoid(x)
        t = terminal_groupoid()
        f = GroupoidFunctor.constant(w, t, 0)
        # a small presheaf on w via a span fiber construction
        base = action_groupoid(product_gset(x, x))
        s = random_span(rng, x, x)
        p_pairs = span_to_presheaf(s, base)
        diag = GroupoidFunctor(
            w, base, lambda o: o * x.size + o,
            lambda m: base.morphism_id(w.morphism_label(m)[0],
                                       w.morphism_label(m)[1] * x.size
                                       + w.morphism_label(m)[1]))
        p = pullback_presheaf(diag, p_pairs)
        r = constant_presheaf(t, 2)
        lhs = len(list(enumerate_nat_trans(left_pushforward(f, p), r)))
        rhs = len(list(enumerate_nat_trans(p, pullback_presheaf(f, r))))
        assert lhs == rhs


def test_linearize_identity_span(z2):
    x = GSet.natural(z2)
    gs = gset_span_to_groupoid_span(identity_span(x))
    w = gs.source_foot
    p = constant_presheaf(w, 2)
    out = linearize_span(gs, p)
    out.validate_sampled()
    assert [len(s) for s in out.sets] == [len(s) for s in p.sets]


def test_linearize_preserves_coproducts(z2):
    x = GSet.natural(z2)
    gs = gset_span_to_groupoid_span(identity_span(x))
    w = gs.source_foot
    p = constant_presheaf(w, 1)
    q = constant_presheaf(w, 2)
    both = linearize_span(gs, coproduct_presheaf(p, q))
    separate = [linearize_span(gs, p), linearize_span(gs, q)]
    for obj in range(w.n_objects):
        assert len(both.sets[obj]) == sum(len(s.sets[obj]) for s in separate)


def test_span_to_presheaf_fiber_counts(s3):
    x = GSet.natural(s3)
    base = action_groupoid(product_gset(x, x))
    rng = random.Random(3)
    s = random_span(rng, x, x)
    p = span_to_presheaf(s, base)
    p.validate_sampled()
    m = s.fiber_matrix()
    for obj in range(base.n_objects):
        xi, yi = divmod(obj, x.size)
        assert len(p.sets[obj]) == m[yi, xi]


def test_identity_span_presheaf_is_diagonal(a2_ctx):
    x = a2_ctx.fc.gset
    base = action_groupoid(product_gset(x, x))
    p = span_to_presheaf(identity_span(x), base)
    for obj in range(base.n_objects):
        xi, yi = divmod(obj, x.size)
        assert len(p.sets[obj]) == (1 if xi == yi else 0)


def test_empty_roundtrip(s3):
    x = GSet.natural(s3)
    base = action_groupoid(product_gset(x, x))
    p = empty_presheaf(base)
    s, p2, ok = presheaf_roundtrip(p)
    assert ok and s.apex.size == 0
    assert [len(t) for t in p2.sets] == [0] * base.n_objects


def test_roundtrips_random(s3):
    rng = random.Random(7)
    x = GSet.natural(s3)
    y = GSet.regular(s3)
    base = action_groupoid(product_gset(x, y))
    for _ in range(8):
        s = random_span(rng, x, y)
        p, s2, witness = span_roundtrip(s, base)
        assert witness.is_bijective
        _, _, nat_ok = presheaf_roundtrip(p)
        assert nat_ok


def test_roundtrip_requires_product_base(s3):
    x = GSet.natural(s3)
    w = action_groupoid(x)
    with pytest.raises(PresheafBaseError):
        presheaf_to_span(constant_presheaf(w, 1))


def test_pushforward_functoriality_on_composable_pair(z2):
    # (g o f)_! p pointwise-iso to g_!(f_! p) on a small instance
    w, p = z2_regular_presheaf(z2)
    t = terminal_groupoid()
    f = GroupoidFunctor.identity(w)
    g = GroupoidFunctor.constant(w, t, 0)
    lhs = left_pushforward(f.then(g), p)
    rhs = left_pushforward(g, left_pushforward(f, p))
    assert [len(a) for a in lhs.sets] == [len(a) for a in rhs.sets]


def test_hecke_hom_composition_through_correspondence(s3):
    """Composition of spans of G-sets agrees with the push-pull composite
    through the fiber correspondence (sizes classwise on a small case)."""
    x = GSet.natural(s3)
    rng = random.Random(17)
    s = random_span(rng, x, x)
    t = random_span(rng, x, x)
    comp = compose_gset_spans(t, s)
    base = action_groupoid(product_gset(x, x))
    p_comp = span_to_presheaf(comp, base)
    # push-pull along the composition span of groupoids
    from qspan.hecke import hecke_composition_span
    span3 = hecke_composition_span(x, x, x, base, base, base)
    # exterior product of the two fiber presheaves on hom x hom
    ps = span_to_presheaf(s, base)
    pt_ = span_to_presheaf(t, base)
    prod = span3.right.target

    def sets_for(obj):
        a, b = prod.obj_split(obj)
        return [(u, v) for u in ps.sets[a] for v in pt_.sets[b]]

    def action(m):
        m1, m2 = prod.mor_split(m)
        a1 = ps.action(m1)
        a2 = pt_.action(m2)
        src_sets = sets_for(prod.src(m))
        tgt_sets = sets_for(prod.tgt(m))
        look = {el: i for i, el in enumerate(src_sets)}
        na, nb = len(ps.sets[prod.obj_split(prod.src(m))[0]]), None
        out = []
        for (u, v) in tgt_sets:
            iu = ps.sets[prod.obj_split(prod.tgt(m))[0]].index(u)
            iv = pt_.sets[prod.obj_split(prod.tgt(m))[1]].index(v)
            u2 = ps.sets[prod.obj_split(prod.src(m))[0]][a1[iu]]
            v2 = pt_.sets[prod.obj_split(prod.src(m))[1]][a2[iv]]
            out.append(look[(u2, v2)])
        return out

    exterior = Presheaf(prod, [sets_for(o) for o in range(prod.n_objects)],
                        action, check=False)
    pushed = linearize_span(span3, exterior)
    assert [len(a) for a in pushed.sets] == [len(a) for a in p_comp.sets]
