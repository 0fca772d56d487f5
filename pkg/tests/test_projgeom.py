"""Projective-space primitives: normal forms, spans, duals, dense tables."""

import pytest
from hypothesis import given, settings, strategies as st

from quadcover.gf2n import FieldCtx
from quadcover.projgeom import (PointTable, Subspace, enumerate_points,
                                line_points, mat_inv, mat_mul, mat_vec,
                                normalize, normalize_tuple, null_space, rref,
                                span, subspace_intersection, subspace_points,
                                vec_add, vec_scale)

CTX = FieldCtx(2)
CTX8 = FieldCtx(3)


def _vec_strategy(q=4, dim=6):
    return st.lists(st.integers(0, q - 1), min_size=dim, max_size=dim)


@settings(max_examples=60, deadline=None)
@given(_vec_strategy(), st.integers(1, 3))
def test_normalize_is_scale_invariant(v, c):
    if not any(v):
        return
    assert normalize_tuple(CTX, vec_scale(CTX, c, v)) == normalize_tuple(CTX, v)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize_tuple(CTX, (0,) * 6)


def test_point_counts_by_dimension():
    for n, q in ((1, 2), (2, 4)):
        ctx = FieldCtx(n)
        for dim in (2, 3, 6):
            pts = enumerate_points(ctx, dim)
            assert len(pts) == (q ** dim - 1) // (q - 1)
            assert len(set(pts)) == len(pts)
            assert all(p == normalize_tuple(ctx, p) for p in pts)


def test_line_through_two_points():
    a = (1, 0, 0, 0, 0, 0)
    b = (0, 1, 0, 0, 0, 0)
    pts = line_points(CTX, a, b)
    assert len(pts) == CTX.q + 1
    assert normalize_tuple(CTX, vec_add(a, b)) in pts


def test_rref_is_canonical_under_row_scrambling():
    rows = [(1, 2, 0, 3, 0, 1), (0, 1, 1, 0, 2, 0), (1, 3, 1, 3, 2, 1)]
    base = rref(CTX, rows)
    scrambled = [vec_add(rows[0], rows[1]), rows[2], vec_scale(CTX, 3, rows[1])]
    assert rref(CTX, scrambled) == base


def test_span_and_membership():
    s = span(CTX, [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)])
    assert s.rank == 2
    assert len(subspace_points(CTX, s)) == CTX.q + 1


def test_null_space_dimensions():
    rows = [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)]
    ns = null_space(CTX, rows)
    assert len(ns) == 4
    for v in ns:
        assert v[0] == 0 and v[1] == 0


def test_null_space_annihilates():
    rows = [(1, 2, 3, 0, 1, 0), (0, 1, 0, 2, 0, 3)]
    for v in null_space(CTX, rows):
        for r in rows:
            acc = 0
            for a, b in zip(r, v):
                acc ^= CTX.mul(a, b)
            assert acc == 0


def test_subspace_intersection_of_planes():
    a = span(CTX, [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)])
    b = span(CTX, [(0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0), (1, 0, 0, 0, 0, 0)])
    inter = subspace_intersection(CTX, a, b)
    assert inter.rank == 2
    assert inter == span(CTX, [(1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)])


def test_matrix_inverse_roundtrip():
    m = [(2, 1, 0, 3, 1, 2), (0, 1, 2, 0, 0, 1), (0, 0, 3, 1, 2, 0),
         (0, 0, 0, 1, 3, 1), (0, 0, 0, 0, 2, 3), (0, 0, 0, 0, 0, 1)]
    mi = mat_inv(CTX, m)
    prod = mat_mul(CTX, m, mi)
    ident = tuple(tuple(1 if i == j else 0 for j in range(6)) for i in range(6))
    assert prod == ident
    v = (1, 3, 2, 0, 1, 2)
    assert mat_vec(CTX, m, mat_vec(CTX, mi, v)) == v


def test_matrix_inverse_rejects_singular():
    m = [(1, 0, 0, 0, 0, 0)] * 6
    with pytest.raises(ValueError):
        mat_inv(CTX, m)


def test_point_table_roundtrip():
    pts = enumerate_points(CTX8, 3)
    table = PointTable(pts)
    assert len(table) == len(pts)
    for i in (0, 1, len(pts) // 2, len(pts) - 1):
        assert table.index(table.point(i)) == i


def test_point_table_rejects_duplicates():
    with pytest.raises(ValueError):
        PointTable([(1, 0, 0), (1, 0, 0)])
