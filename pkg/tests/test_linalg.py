"""Exact linear algebra: spans, membership, intersections, quotients.

Derived expectations are checked against independent oracles: rank by
minor expansion, intersections by the kernel of the stacked system, and
quotients by the project/inject roundtrip.
"""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidalg.errors import ContainmentError, DimensionMismatch
from groupoidalg.linalg import (
    GF,
    QQ,
    Field,
    Subspace,
    quotient,
    right_kernel,
    span,
)

GF3 = GF(3)
GF5 = GF(5)


# -- independent oracles -----------------------------------------------------


def det_oracle(rows, field):
    """Determinant by cofactor expansion; exponential, used only on small minors."""
    n = len(rows)
    if n == 0:
        return field.one()
    if n == 1:
        return rows[0][0]
    total = field.zero()
    sign = field.one()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = field.mul(rows[0][j], det_oracle(minor, field))
        total = field.add(total, field.mul(sign, term))
        sign = field.neg(sign)
    return total


def rank_oracle(rows, field):
    """Rank as the largest size of a square minor with nonzero determinant."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    for size in range(min(len(rows), ncols), 0, -1):
        for rsel in itertools.combinations(range(len(rows)), size):
            for csel in itertools.combinations(range(ncols), size):
                minor = [tuple(rows[i][j] for j in csel) for i in rsel]
                if det_oracle(minor, field) != 0:
                    return size
    return 0


def intersection_oracle(S, T):
    """S intersect T through the kernel of the stacked coefficient system."""
    field = S.field
    stacked = list(S.basis) + list(T.basis)
    cols = len(stacked)
    transposed = [
        tuple(stacked[j][i] for j in range(cols)) for i in range(S.ambient_dim)
    ]
    combos = right_kernel(transposed, cols, field)
    vectors = []
    for combo in combos:
        v = [field.zero()] * S.ambient_dim
        for c, row in zip(combo[: S.dim], S.basis):
            for j, a in enumerate(row):
                v[j] = field.add(v[j], field.mul(c, a))
        vectors.append(tuple(v))
    return Subspace.span(vectors, S.ambient_dim, field)


def random_vector(rng, n, field):
    if field.p is None:
        return tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n))
    return tuple(rng.randrange(field.p) for _ in range(n))


# -- span ---------------------------------------------------------------------


def test_span_empty_is_zero():
    s = span([], 3, QQ)
    assert s.dim == 0
    assert s.basis == ()


def test_span_dependent_rows():
    s = span([(Fraction(1), Fraction(1)), (Fraction(2), Fraction(2))], 2, QQ)
    assert s.dim == 1
    assert s.basis == ((Fraction(1), Fraction(1)),)


def test_span_matches_minor_rank_oracle():
    rng = random.Random(31)
    for _ in range(30):
        vectors = [random_vector(rng, 4, GF3) for _ in range(4)]
        assert span(vectors, 4, GF3).dim == rank_oracle(vectors, GF3)


def test_span_length_mismatch():
    with pytest.raises(DimensionMismatch):
        span([(1, 0), (1, 0, 0)], 2, GF3)


def test_span_idempotent_on_basis():
    rng = random.Random(7)
    vectors = [random_vector(rng, 5, QQ) for _ in range(3)]
    s = span(vectors, 5, QQ)
    assert span(s.basis, 5, QQ) == s


def test_rref_canonical_under_recombination():
    rng = random.Random(11)
    vectors = [random_vector(rng, 4, GF5) for _ in range(3)]
    s = span(vectors, 4, GF5)
    # recombine generators: same span, identical basis
    mixed = [
        tuple(GF5.add(a, GF5.mul(2, b)) for a, b in zip(vectors[0], vectors[1])),
        vectors[2],
        vectors[1],
        vectors[0],
    ]
    assert span(mixed, 4, GF5).basis == s.basis


# -- membership ----------------------------------------------------------------


def test_membership_zero_vector():
    s = span([(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))], 2, QQ)
    coords = s.membership((Fraction(0), Fraction(0)))
    assert coords == (Fraction(0), Fraction(0))


def test_membership_negative():
    s = span([(Fraction(0), Fraction(1))], 2, QQ)
    assert s.membership((Fraction(1), Fraction(0))) is None


def test_membership_construct_then_test():
    rng = random.Random(23)
    for _ in range(25):
        vectors = [random_vector(rng, 5, GF5) for _ in range(3)]
        s = span(vectors, 5, GF5)
        combo = [rng.randrange(5) for _ in range(s.dim)]
        v = [GF5.zero()] * 5
        for c, row in zip(combo, s.basis):
            for j, a in enumerate(row):
                v[j] = GF5.add(v[j], GF5.mul(c, a))
        coords = s.membership(tuple(v))
        assert coords == tuple(combo)


def test_membership_dimension_mismatch():
    s = span([(1, 0)], 2, GF3)
    with pytest.raises(DimensionMismatch):
        s.membership((1, 0, 0))


# -- intersection ----------------------------------------------------------------


def test_intersect_idempotent():
    rng = random.Random(5)
    s = span([random_vector(rng, 4, QQ) for _ in range(2)], 4, QQ)
    assert s.intersect(s) == s


def test_intersect_with_zero():
    s = span([(1, 2, 0)], 3, GF3)
    zero = Subspace.zero(3, GF3)
    assert s.intersect(zero) == zero


def test_intersect_matches_stacked_kernel_oracle():
    rng = random.Random(17)
    for _ in range(25):
        s = span([random_vector(rng, 3, QQ) for _ in range(2)], 3, QQ)
        t = span([random_vector(rng, 3, QQ) for _ in range(2)], 3, QQ)
        inter = s.intersect(t)
        assert inter == intersection_oracle(s, t)
        if s.dim == 2 and t.dim == 2:
            assert inter.dim >= 1


def test_dimension_formula():
    rng = random.Random(41)
    for _ in range(40):
        s = span([random_vector(rng, 5, GF5) for _ in range(rng.randint(0, 4))], 5, GF5)
        t = span([random_vector(rng, 5, GF5) for _ in range(rng.randint(0, 4))], 5, GF5)
        assert s.add(t).dim + s.intersect(t).dim == s.dim + t.dim


# -- quotient ----------------------------------------------------------------------


def test_quotient_by_self_is_zero():
    s = span([(1, 0, 0), (0, 1, 0)], 3, GF3)
    q = quotient(s, s)
    assert q.dim == 0


def test_quotient_by_zero_keeps_basis():
    s = span([(1, 0, 0), (0, 1, 0)], 3, GF3)
    q = quotient(s, Subspace.zero(3, GF3))
    assert q.dim == s.dim
    assert q.section_basis == s.basis


def test_quotient_project_inject_roundtrip():
    rng = random.Random(3)
    numerator = Subspace.full(4, QQ)
    kernel = span([random_vector(rng, 4, QQ) for _ in range(2)], 4, QQ)
    assert kernel.dim == 2
    q = quotient(numerator, kernel)
    assert q.dim == 2
    for _ in range(20):
        coords = tuple(Fraction(rng.randint(-5, 5)) for _ in range(q.dim))
        assert q.project(q.inject(coords)) == coords


def test_quotient_exactness():
    rng = random.Random(9)
    numerator = Subspace.full(4, GF5)
    kernel = span([random_vector(rng, 4, GF5) for _ in range(2)], 4, GF5)
    q = quotient(numerator, kernel)
    for _ in range(20):
        v = random_vector(rng, 4, GF5)
        w = q.inject(q.project(v))
        resid = tuple(GF5.sub(a, b) for a, b in zip(w, v))
        assert resid in kernel


def test_quotient_containment_error():
    s = span([(1, 0)], 2, GF3)
    t = span([(0, 1)], 2, GF3)
    with pytest.raises(ContainmentError):
        quotient(s, t)


def test_quotient_section_zero_on_kernel_pivots():
    kernel = span([(1, 2, 0, 1), (0, 0, 1, 2)], 4, GF3)
    q = quotient(Subspace.full(4, GF3), kernel)
    for rep in q.section_basis:
        for pc in kernel.pivots:
            assert rep[pc] == 0


# -- field arithmetic ---------------------------------------------------------------


def test_gfp_matches_integer_arithmetic():
    rng = random.Random(1234)
    p = 7
    f = GF(p)
    for _ in range(1000):
        a, b = rng.randrange(100), rng.randrange(100)
        fa, fb = f.of(a), f.of(b)
        assert f.add(fa, fb) == (a + b) % p
        assert f.mul(fa, fb) == (a * b) % p
        if fa != 0:
            assert f.mul(fa, f.inv(fa)) == 1


def test_field_parse_format():
    assert QQ.parse("3/4") == Fraction(3, 4)
    assert QQ.format(Fraction(-1, 2)) == "-1/2"
    assert GF5.parse("7") == 2
    with pytest.raises(ValueError):
        Field(6)


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_gf5_ring_laws(a, b, c):
    f = GF5
    x, y, z = f.of(a), f.of(b), f.of(c)
    assert f.add(x, f.add(y, z)) == f.add(f.add(x, y), z)
    assert f.mul(x, f.mul(y, z)) == f.mul(f.mul(x, y), z)
    assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=0, max_size=4
    )
)
def test_span_idempotence_property(rows):
    s = span(rows, 3, GF5)
    assert span(s.basis, 3, GF5) == s
    assert s.add(s) == s
