"""Points and subspaces of PG(5, q): canonical forms, spans, lines, membership.

Projective points are normalized 6-tuples of field bit masks whose first
nonzero coordinate is 1, so point equality is tuple equality.  Subspaces are
kept in reduced row echelon form, the canonical representative of their row
space.  Heavy consumers intern normalized tuples through PointTable and speak
in dense integer indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .gf2n import FieldCtx

Vec = Tuple[int, ...]


@dataclass(frozen=True)
class ProjectivePoint:
    """A normalized projective point (first nonzero coordinate equals 1)."""

    coords: Vec

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class Subspace:
    """A projective subspace as the reduced row echelon basis of its row space."""

    basis: Tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


# -- vector helpers -----------------------------------------------------------


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a ^ b for a, b in zip(u, v))


def vec_scale(ctx: FieldCtx, c: int, v: Sequence[int]) -> Vec:
    return tuple(ctx.mul(c, a) for a in v)


def normalize_tuple(ctx: FieldCtx, raw: Sequence[int]) -> Vec:
    """Scale `raw` so its first nonzero coordinate is 1; rejects the zero vector."""
    for a in raw:
        if a:
            if a == 1:
                return tuple(raw)
            inv = ctx.inv(a)
            return tuple(ctx.mul(inv, b) for b in raw)
    raise ValueError("cannot normalize the zero vector")


def normalize(ctx: FieldCtx, raw: Sequence[int]) -> ProjectivePoint:
    """Canonical representative of the projective point spanned by `raw`."""
    return ProjectivePoint(normalize_tuple(ctx, raw))


def line_points(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> List[Vec]:
    """The q+1 normalized points of the line through distinct points a, b."""
    an = normalize_tuple(ctx, a)
    bn = normalize_tuple(ctx, b)
    if an == bn:
        raise ValueError("line through a single point is undefined")
    pts = [an, bn]
    for t in ctx.nonzero():
        pts.append(normalize_tuple(ctx, vec_add(an, vec_scale(ctx, t, bn))))
    out = sorted(set(pts))
    if len(out) != ctx.q + 1:
        raise AssertionError("line does not have q+1 distinct points")
    return out


# -- Gaussian elimination -----------------------------------------------------


def rref(ctx: FieldCtx, rows: Iterable[Sequence[int]]) -> Tuple[Vec, ...]:
    """Reduced row echelon form over GF(2^n); the canonical basis of the row space."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot_row = 0
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, len(mat)):
            if mat[r][col]:
                sel = r
                break
        if sel is None:
            continue
        mat[pivot_row], mat[sel] = mat[sel], mat[pivot_row]
        inv = ctx.inv(mat[pivot_row][col])
        mat[pivot_row] = [ctx.mul(inv, x) for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col]:
                c = mat[r][col]
                mat[r] = [x ^ ctx.mul(c, y) for x, y in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(r) for r in mat[:pivot_row] if any(r))


def span(ctx: FieldCtx, points: Iterable[Sequence[int]]) -> Subspace:
    """Projective span of the given points as a canonical subspace."""
    rows = [tuple(p.coords) if isinstance(p, ProjectivePoint) else tuple(p) for p in points]
    if not rows:
        raise ValueError("span of an empty point list is undefined")
    return Subspace(rref(ctx, rows))


def subspace_contains(ctx: FieldCtx, sub: Subspace, vec: Sequence[int]) -> bool:
    """Membership test by reducing `vec` against the echelon basis."""
    v = list(vec.coords if isinstance(vec, ProjectivePoint) else vec)
    for row in sub.basis:
        lead = next(i for i, x in enumerate(row) if x)
        if v[lead]:
            c = v[lead]
            v = [x ^ ctx.mul(c, y) for x, y in zip(v, row)]
    return not any(v)


def subspace_points(ctx: FieldCtx, sub: Subspace) -> List[Vec]:
    """All normalized points of the subspace (enumerates q^rank combinations)."""
    pts = set()
    combos = [()]  # coefficient tuples built up per basis row
    for _ in sub.basis:
        combos = [c + (t,) for c in combos for t in ctx.elements()]
    for coeffs in combos:
        v = [0] * len(sub.basis[0]) if sub.basis else []
        for c, row in zip(coeffs, sub.basis):
            if c:
                v = [x ^ ctx.mul(c, y) for x, y in zip(v, row)]
        if any(v):
            pts.add(normalize_tuple(ctx, v))
    return sorted(pts)


def null_space(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> Tuple[Vec, ...]:
    """Canonical basis of {v : M v = 0} for the matrix with the given rows."""
    if not rows:
        return ()
    reduced = rref(ctx, rows)
    ncols = len(rows[0])
    pivots = []
    for row in reduced:
        pivots.append(next(i for i, x in enumerate(row) if x))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for prow, pcol in zip(reduced, pivots):
            v[pcol] = prow[fc]
        basis.append(tuple(v))
    return rref(ctx, basis) if basis else ()


def subspace_intersection(ctx: FieldCtx, a: Subspace, b: Subspace) -> Subspace:
    """Intersection of row spaces by the doubled-matrix (Zassenhaus) method."""
    ncols = len(a.basis[0])
    rows = [list(r) + list(r) for r in a.basis] + [list(r) + [0] * ncols for r in b.basis]
    reduced = rref(ctx, rows)
    inter = [r[ncols:] for r in reduced if not any(r[:ncols]) and any(r[ncols:])]
    return Subspace(rref(ctx, inter))


# -- dense 6x6 linear algebra for the frame-change solvers --------------------


def mat_vec(ctx: FieldCtx, m: Sequence[Sequence[int]], v: Sequence[int]) -> Vec:
    out = []
    for row in m:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc ^= ctx.mul(a, b)
        out.append(acc)
    return tuple(out)


def mat_mul(ctx: FieldCtx, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Tuple[Vec, ...]:
    bt = list(zip(*b))
    return tuple(tuple(_dot(ctx, row, col) for col in bt) for row in a)


def _dot(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc ^= ctx.mul(a, b)
    return acc


def mat_inv(ctx: FieldCtx, m: Sequence[Sequence[int]]) -> Tuple[Vec, ...]:
    """Inverse by Gauss-Jordan; raises on singular input."""
    size = len(m)
    aug = [list(row) + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(m)]
    for col in range(size):
        sel = next((r for r in range(col, size) if aug[r][col]), None)
        if sel is None:
            raise ValueError("matrix is singular")
        aug[col], aug[sel] = aug[sel], aug[col]
        inv = ctx.inv(aug[col][col])
        aug[col] = [ctx.mul(inv, x) for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x ^ ctx.mul(c, y) for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


# -- point interning ----------------------------------------------------------


class PointTable:
    """Sorted intern table mapping normalized coordinate tuples to dense indices."""

    def __init__(self, points: Iterable[Vec]):
        self._points: List[Vec] = sorted(points)
        self._index: Dict[Vec, int] = {p: i for i, p in enumerate(self._points)}
        if len(self._index) != len(self._points):
            raise ValueError("duplicate points in table")

    def __len__(self) -> int:
        return len(self._points)

    def index(self, p: Vec) -> int:
        return self._index[p]

    def get(self, p: Vec) -> Optional[int]:
        return self._index.get(p)

    def point(self, i: int) -> Vec:
        return self._points[i]

    def __contains__(self, p: Vec) -> bool:
        return p in self._index

    def __iter__(self):
        return iter(self._points)


def enumerate_points(ctx: FieldCtx, dim: int = 6) -> List[Vec]:
    """All normalized points of PG(dim-1, q), sorted lexicographically by bit mask."""
    pts: List[Vec] = []
    for lead in range(dim):
        head = (0,) * lead + (1,)
        tail_len = dim - lead - 1
        stack = [head]
        for _ in range(tail_len):
            stack = [t + (c,) for t in stack for c in ctx.elements()]
        pts.extend(stack)
    pts.sort()
    expected = (ctx.q ** dim - 1) // (ctx.q - 1)
    if len(pts) != expected:
        raise AssertionError("projective point count mismatch")
    return pts
