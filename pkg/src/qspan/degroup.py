"""
Degroupoidification: groupoids to bases, spans of groupoids to exact
rational matrices.

A groupoid goes to the free vector space on its isomorphism classes (in
canonical minimal-representative order).  A span goes to a matrix column
by column: the column at a class [x] of the source foot is the vector of
the weak pullback of the right leg against the basis functor at x,
projected to the target foot.  This is the constructive recipe; no
closed-form entry formula is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import QMatrix, QVector, kronecker, mat_mul
from .groupoids import (Groupoid, GroupoidFunctor, full_inverse_image,
                        weak_pullback)
from .spans import GroupoidSpan, compose_groupoid_spans, product_span


class Basis:
    "Iso classes of a groupoid, in canonical order, as a vector-space basis."

    def __init__(self, groupoid: Groupoid):
        self.groupoid = groupoid
        self.classes = groupoid.components()
        self.reps = tuple(c[0] for c in self.classes)

    @property
    def dim(self) -> int:
        return len(self.classes)

    def labels(self):
        return [self.groupoid.object_label(r) for r in self.reps]


def degroupoidify_groupoid(g: Groupoid) -> Basis:
    return Basis(g)


class GroupoidOver:
    "A groupoid over a base: a total groupoid with a projection functor."

    def __init__(self, total: Groupoid, projection: GroupoidFunctor):
        assert projection.source is total
        self.total = total
        self.projection = projection


def vector_of(over: GroupoidOver) -> QVector:
    "Entry at [x]: groupoid cardinality of the full inverse image over x."
    base = over.projection.target
    basis = Basis(base)
    entries = []
    for rep in basis.reps:
        fii = full_inverse_image(over.projection, rep)
        entries.append(fii.cardinality())
    return QVector(entries)


def basis_vector_functors(g: Groupoid):
    "One functor from the terminal groupoid per iso class, in basis order."
    return [GroupoidFunctor.basis(g, rep) for rep in Basis(g).reps]


def degroupoidify_span(s: GroupoidSpan) -> QMatrix:
    """The exact rational matrix of a span of finite groupoids.

    Rows are classes of the target foot, columns classes of the source
    foot, both in canonical order.
    """
    src_basis = Basis(s.source_foot)
    tgt_basis = Basis(s.target_foot)
    columns = []
    for x in src_basis.reps:
        b = GroupoidFunctor.basis(s.source_foot, x)
        wp = weak_pullback(s.right, b)
        over = GroupoidOver(wp.apex, wp.right_proj.then(s.left))
        columns.append(vector_of(over))
    entries = []
    for i in range(tgt_basis.dim):
        for col in columns:
            entries.append(col[i])
    return QMatrix(tgt_basis.dim, src_basis.dim, entries)


class CheckReport:
    "Outcome of an exact equality check, with both sides kept for reporting."

    def __init__(self, name, ok, lhs, rhs):
        self.name = name
        self.ok = ok
        self.lhs = lhs
        self.rhs = rhs

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "CheckReport(%s: %s)" % (self.name, "pass" if self.ok else "FAIL")


def check_functoriality(t: GroupoidSpan, s: GroupoidSpan) -> CheckReport:
    "D(t o s) = D(t) . D(s), exactly."
    composite = compose_groupoid_spans(t, s)
    lhs = degroupoidify_span(composite)
    rhs = mat_mul(degroupoidify_span(t), degroupoidify_span(s))
    return CheckReport("functoriality", lhs == rhs, lhs, rhs)


def check_monoidal(s: GroupoidSpan, t: GroupoidSpan) -> CheckReport:
    """D(s x t) = D(s) (x) D(t) under the canonical class bijection.

    Classes of a product groupoid sort by minimal object index, which is
    exactly row-major over the factor class orders, so the Kronecker
    layout lines up with no extra permutation.
    """
    prod = product_span(s, t)
    lhs = degroupoidify_span(prod)
    rhs = kronecker(degroupoidify_span(s), degroupoidify_span(t))
    return CheckReport("monoidality", lhs == rhs, lhs, rhs)


def denominators_divide(m: QMatrix, order: int) -> bool:
    "Every denominator divides the group order (sanity bound for action spans)."
    return all(e >= 0 and order % e.denominator == 0 for e in m.entries)
