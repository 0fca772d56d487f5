"""The elliptic quadric in PG(5, q), its lines, hyperplane section, nucleus, elation.

The model is built by brute enumeration: evaluate the quadratic form on every
point of PG(5, q), collect the zeros, and recover all structure (lines,
nucleus, elation) from the form itself.  Everything downstream speaks in dense
quadric point indices; the pairwise bilinear-form matrix (``gram``) is the
single numpy artifact that makes the censuses fast.

Coordinates: f(x) = x1*x2 + x3*x4 + x5^2 + x5*x6 + lam*x6^2 with trace(lam) = 1,
polarized to alpha(u, v) = u1*v2 + u2*v1 + u3*v4 + u4*v3 + u5*v6 + u6*v5.
The distinguished hyperplane is {x6 = 0}; its parabolic quadric section, the
radical point of alpha restricted to it (the nucleus), and the central
elation fixing it pointwise are computed, not assumed.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gf2n import FieldCtx, trace
from .projgeom import (
    PointTable,
    ProjectivePoint,
    Subspace,
    Vec,
    enumerate_points,
    line_points,
    normalize_tuple,
    null_space,
    span,
    vec_add,
    vec_scale,
)

MAX_BUILD_DEGREE = 3  # model enumeration is desk-scale only through q = 8


class QuadricModel:
    """Full incidence model of the elliptic quadric and its parabolic section.

    Attributes
    ----------
    ctx, lam : field context and the trace-1 form parameter.
    q_table : PointTable over the quadric points (dense, lexicographically sorted).
    coords : (|Q|, 6) int16 array of the same points.
    lines : sorted list of (q+1)-tuples of point indices, one per quadric line.
    lines_through : per-point list of line ids.
    gram : (|Q|, |Q|) uint8 array of pairwise bilinear-form values.
    in_section : boolean mask of points lying in the hyperplane {x6 = 0}.
    section_points / affine_points : index lists for the two sides of the split.
    nucleus : coordinates of the radical point of the restricted form (off Q).
    elation_perm : involutive permutation of point indices with axis {x6 = 0}.
    """

    def __init__(self, ctx: FieldCtx, lam: int):
        self.ctx = ctx
        self.lam = lam
        self.q_table: PointTable
        self.coords: np.ndarray
        self.lines: List[Tuple[int, ...]]
        self.lines_through: List[List[int]]
        self.gram: np.ndarray
        self.in_section: np.ndarray
        self.section_points: List[int]
        self.affine_points: List[int]
        self.section_index: Dict[int, int]
        self.affine_index: Dict[int, int]
        self.nucleus: Vec
        self.elation_perm: np.ndarray

    # -- scalar form evaluation ----------------------------------------------

    def f_scalar(self, v: Sequence[int]) -> int:
        m = self.ctx.mul
        x1, x2, x3, x4, x5, x6 = v
        return m(x1, x2) ^ m(x3, x4) ^ m(x5, x5) ^ m(x5, x6) ^ m(self.lam, m(x6, x6))

    def alpha_scalar(self, u: Sequence[int], v: Sequence[int]) -> int:
        m = self.ctx.mul
        return (
            m(u[0], v[1]) ^ m(u[1], v[0])
            ^ m(u[2], v[3]) ^ m(u[3], v[2])
            ^ m(u[4], v[5]) ^ m(u[5], v[4])
        )

    def is_on_quadric(self, v: Sequence[int]) -> bool:
        return self.f_scalar(v) == 0

    def index_of(self, v: Sequence[int]) -> Optional[int]:
        """Dense index of a quadric point given by any representative, else None."""
        return self.q_table.get(normalize_tuple(self.ctx, v))

    def point(self, i: int) -> Vec:
        return self.q_table.point(i)

    @property
    def n_points(self) -> int:
        return len(self.q_table)


def f_eval(model: QuadricModel, p) -> int:
    """Value of the quadratic form at the given representative (0 iff on Q)."""
    v = p.coords if isinstance(p, ProjectivePoint) else tuple(p)
    return model.f_scalar(v)


def bilinear(model: QuadricModel, a, b) -> int:
    """Polarized bilinear form; zero iff the two points are perpendicular."""
    u = a.coords if isinstance(a, ProjectivePoint) else tuple(a)
    v = b.coords if isinstance(b, ProjectivePoint) else tuple(b)
    return model.alpha_scalar(u, v)


def _f_vectorized(ctx: FieldCtx, lam: int, coords: np.ndarray) -> np.ndarray:
    M = ctx.mul_table
    c = coords
    out = M[c[:, 0], c[:, 1]] ^ M[c[:, 2], c[:, 3]] ^ M[c[:, 4], c[:, 4]] ^ M[c[:, 4], c[:, 5]]
    out ^= M[np.full(len(c), lam), M[c[:, 5], c[:, 5]]]
    return out


def build_model(ctx: FieldCtx, lam=None) -> QuadricModel:
    """Enumerate the quadric and all derived structure; verifies counts as it goes."""
    if ctx.n > MAX_BUILD_DEGREE:
        raise ValueError(f"model enumeration supported for n <= {MAX_BUILD_DEGREE}")
    if lam is None:
        lam = ctx.default_form_parameter()
    lam = int(lam)
    if trace(ctx, lam) != 1:
        raise ValueError("form parameter must have trace 1")
    q = ctx.q
    model = QuadricModel(ctx, lam)

    pg = enumerate_points(ctx, 6)
    pg_arr = np.array(pg, dtype=np.int16)
    fvals = _f_vectorized(ctx, lam, pg_arr)
    q_pts = [pg[i] for i in np.nonzero(fvals == 0)[0]]
    model.q_table = PointTable(q_pts)
    nq = len(model.q_table)
    if nq != (q + 1) * (q**3 + 1):
        raise AssertionError(f"|Q| = {nq}, expected {(q + 1) * (q**3 + 1)}")
    model.coords = np.array(list(model.q_table), dtype=np.int16)

    model.gram = _gram_matrix(ctx, model.coords)
    _build_lines(model)

    model.in_section = model.coords[:, 5] == 0
    model.section_points = [int(i) for i in np.nonzero(model.in_section)[0]]
    model.affine_points = [int(i) for i in np.nonzero(~model.in_section)[0]]
    model.section_index = {p: i for i, p in enumerate(model.section_points)}
    model.affine_index = {p: i for i, p in enumerate(model.affine_points)}
    if len(model.section_points) != (q + 1) * (q**2 + 1):
        raise AssertionError("hyperplane section point count mismatch")

    _find_nucleus(model)
    _build_elation(model)
    return model


def _gram_matrix(ctx: FieldCtx, coords: np.ndarray) -> np.ndarray:
    M = ctx.mul_table
    n = len(coords)
    gram = np.empty((n, n), dtype=np.uint8)
    pairs = ((0, 1), (1, 0), (2, 3), (3, 2), (4, 5), (5, 4))
    block = 1024
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        acc = np.zeros((hi - lo, n), dtype=np.uint8)
        for i, j in pairs:
            acc ^= M[coords[lo:hi, i][:, None], coords[None, :, j]].astype(np.uint8)
        gram[lo:hi] = acc
    return gram


def _build_lines(model: QuadricModel) -> None:
    """Collect the totally singular lines by scanning perpendicular point pairs.

    In characteristic 2 the line joining two quadric points lies on the
    quadric exactly when the points are perpendicular, so each zero entry of
    the gram matrix above the diagonal witnesses a line; seen pairs are
    remembered to emit every line once.
    """
    ctx, q = model.ctx, model.ctx.q
    nq = model.n_points
    covered = set()
    lines: List[Tuple[int, ...]] = []
    gram = model.gram
    for x in range(nq):
        partners = np.nonzero(gram[x, x + 1:] == 0)[0] + x + 1
        for y in partners:
            key = x * nq + int(y)
            if key in covered:
                continue
            pts = line_points(ctx, model.point(x), model.point(int(y)))
            idxs = []
            for p in pts:
                i = model.q_table.get(p)
                if i is None:
                    raise AssertionError("line through perpendicular quadric points left Q")
                idxs.append(i)
            idxs.sort()
            for a in range(len(idxs)):
                for b in range(a + 1, len(idxs)):
                    covered.add(idxs[a] * nq + idxs[b])
            lines.append(tuple(idxs))
    lines.sort()
    model.lines = lines
    expected = nq * (q * q + 1) // (q + 1)
    if len(lines) != expected:
        raise AssertionError(f"{len(lines)} lines, expected {expected}")
    through: List[List[int]] = [[] for _ in range(nq)]
    for li, ln in enumerate(lines):
        for p in ln:
            through[p].append(li)
    if any(len(t) != q * q + 1 for t in through):
        raise AssertionError("some point is not on q^2+1 lines")
    model.lines_through = through


def _find_nucleus(model: QuadricModel) -> None:
    """Radical of the bilinear form restricted to {x6 = 0}, as a projective point."""
    ctx = model.ctx
    basis = [tuple(1 if j == i else 0 for j in range(6)) for i in range(5)]
    restricted = [
        [model.alpha_scalar(bi, bj) for bj in basis] for bi in basis
    ]
    kernel = null_space(ctx, restricted)
    if len(kernel) != 1:
        raise AssertionError("restricted form does not have a 1-dimensional radical")
    nucleus = normalize_tuple(ctx, tuple(kernel[0]) + (0,))
    if model.f_scalar(nucleus) == 0:
        raise AssertionError("nucleus unexpectedly lies on the quadric")
    model.nucleus = nucleus


def _build_elation(model: QuadricModel) -> None:
    """Pair each point off the axis with the second quadric point toward the nucleus."""
    ctx = model.ctx
    nq = model.n_points
    perm = np.arange(nq, dtype=np.int32)
    for x in np.nonzero(~model.in_section)[0]:
        x = int(x)
        hits = [
            p for p in line_points(ctx, model.point(x), model.nucleus)
            if model.f_scalar(p) == 0
        ]
        if len(hits) != 2:
            raise AssertionError("nucleus line is not a secant")
        other = hits[0] if hits[1] == model.point(x) else hits[1]
        perm[x] = model.q_table.index(other)
    if not np.array_equal(perm[perm], np.arange(nq)):
        raise AssertionError("elation is not an involution")
    if (perm[model.affine_points] == model.affine_points).any():
        raise AssertionError("elation fixes a point off its axis")
    model.elation_perm = perm


# -- perpendicular sections and 3-space classification ------------------------


def perp_section(model: QuadricModel, x: int) -> List[int]:
    """Section-point indices perpendicular to an affine point x (an elliptic ovoid)."""
    if bool(model.in_section[x]):
        raise ValueError("perp section is only taken at points off the hyperplane")
    sect = np.array(model.section_points)
    row = model.gram[x, sect] == 0
    out = [int(i) for i in sect[row]]
    if len(out) != model.ctx.q**2 + 1:
        raise AssertionError("perp section has the wrong size")
    return out


def _section_dual_functional(model: QuadricModel, s: Subspace) -> Vec:
    """The hyperplane-of-{x6=0} functional cutting out the rank-4 subspace s."""
    if s.rank != 4:
        raise ValueError("section classification expects a rank-4 subspace")
    if any(row[5] != 0 for row in s.basis):
        raise ValueError("subspace is not inside the hyperplane {x6 = 0}")
    kernel = null_space(model.ctx, [row[:5] for row in s.basis])
    if len(kernel) != 1:
        raise AssertionError("rank-4 subspace has no unique dual functional")
    return kernel[0]


def _classify_functional(model: QuadricModel, w: Sequence[int], sect_coords: np.ndarray,
                         sect_qidx: np.ndarray) -> Tuple[str, List[int]]:
    M = model.ctx.mul_table
    q = model.ctx.q
    vals = np.zeros(len(sect_coords), dtype=np.uint16)
    for j in range(5):
        if w[j]:
            vals ^= M[np.full(len(sect_coords), w[j]), sect_coords[:, j]]
    hit = sect_qidx[vals == 0]
    count = len(hit)
    if count == q * q + 2 * q + 1:
        return "hyperbolic", [int(i) for i in hit]
    if count == q * q + q + 1:
        return "cone", [int(i) for i in hit]
    if count == q * q + 1:
        sub = model.gram[np.ix_(hit, hit)]
        off_diag_perp = (sub == 0).sum() - count
        if off_diag_perp == 0:
            return "elliptic", [int(i) for i in hit]
        return "cone", [int(i) for i in hit]
    raise AssertionError(f"unexpected section size {count}")


def section_type(model: QuadricModel, s: Subspace) -> str:
    """Classify a 3-space of {x6=0} by its quadric section: elliptic, hyperbolic, cone."""
    w = _section_dual_functional(model, s)
    sect_coords = model.coords[model.section_points][:, :5].astype(np.int64)
    sect_qidx = np.array(model.section_points)
    kind, _ = _classify_functional(model, w, sect_coords, sect_qidx)
    return kind


def solid_section_census(model: QuadricModel):
    """Classify every 3-space of the hyperplane; the independent ovoid oracle.

    Returns (counts, elliptic_sections) where elliptic_sections is the list of
    section-point index tuples of all elliptic 3-space sections.
    """
    ctx = model.ctx
    duals = enumerate_points(ctx, 5)
    sect_coords = model.coords[model.section_points][:, :5].astype(np.int64)
    sect_qidx = np.array(model.section_points)
    counts = {"elliptic": 0, "hyperbolic": 0, "cone": 0}
    elliptic: List[Tuple[int, ...]] = []
    for w in duals:
        kind, pts = _classify_functional(model, w, sect_coords, sect_qidx)
        counts[kind] += 1
        if kind == "elliptic":
            elliptic.append(tuple(pts))
    return counts, elliptic


def alpha_perp(model: QuadricModel, s: Subspace) -> Subspace:
    """Perpendicular subspace of s under the bilinear form, canonical basis."""
    rows = [(b[1], b[0], b[3], b[2], b[5], b[4]) for b in s.basis]
    return span(model.ctx, null_space(model.ctx, rows))


def verify_gq_axioms(model: QuadricModel, sample: Optional[int] = None, seed: int = 0) -> dict:
    """Point/line axioms of a generalized quadrangle, checked on the full model
    or on a seeded sample of (point, line) antiflags."""
    rng = np.random.default_rng(seed)
    nq = model.n_points
    q = model.ctx.q
    line_arr = np.array(model.lines)
    checked = 0
    if sample is None:
        line_ids = range(len(model.lines))
    else:
        line_ids = [int(i) for i in rng.integers(0, len(model.lines), size=sample)]
    for li in line_ids:
        ln = line_arr[li]
        perp_counts = (model.gram[:, ln] == 0).sum(axis=1)
        on_line = np.zeros(nq, dtype=bool)
        on_line[ln] = True
        ok = np.where(on_line, perp_counts == q + 1, perp_counts == 1)
        if not ok.all():
            bad = int(np.nonzero(~ok)[0][0])
            return {
                "pass": False,
                "counterexample": {"line": [int(p) for p in ln], "point": bad},
            }
        checked += 1
    return {"pass": True, "lines_checked": checked}


def nucleus_tangency_check(model: QuadricModel) -> bool:
    """Every line of the hyperplane through the nucleus meets the section at
    most once; equivalently no two section points differ only in the nucleus
    direction."""
    seen = set()
    nuc = model.nucleus
    dirs = [j for j, c in enumerate(nuc) if c]
    drop = dirs[0] if len(dirs) == 1 else None
    for i in model.section_points:
        p = model.point(i)
        if drop is not None:
            key = tuple(c for j, c in enumerate(p) if j != drop)
        else:  # general position: reduce modulo the nucleus direction
            key = _mod_nucleus_key(model, p)
        if key in seen:
            return False
        seen.add(key)
    return True


def _mod_nucleus_key(model: QuadricModel, p: Vec) -> Vec:
    ctx = model.ctx
    nuc = model.nucleus
    lead = next(j for j, c in enumerate(nuc) if c)
    if p[lead]:
        p = vec_add(p, vec_scale(ctx, ctx.div(p[lead], nuc[lead]), nuc))
    return normalize_tuple(ctx, p) if any(p) else p
