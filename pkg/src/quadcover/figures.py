"""Centric point configurations on the elliptic quadric.

A *centric figure* is a set of 2m quadric points split into m opposite pairs,
together with a center point off the quadric, such that

* every pair spans a line through the center, and
* the collinearity graph induced on the 2m points is the complement of the
  m-by-2 rook grid (equivalently: two points are collinear exactly when they
  lie in different pairs and in different halves of the bipartition).

For m = 3,4,5,6 these are called hexagons, cubes, decades and dodecades.
Hexagons and cubes with center at the quadric nucleus are exactly the lifts
of non-linear 3- and 4-cliques of the tangency graph; this module provides
the lift, parametric solvers that extend a hexagon to its cubes and a cube
to its decades/dodecade, and brute-force enumerations used to cross-check
every solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .gf2n import FieldCtx, conic_solution_set
from .projgeom import Vec, enumerate_points, mat_inv, mat_vec, normalize_tuple, rref
from .quadric import QuadricModel
from .covering import CoveringMap

KIND_BY_SIZE = {3: "hexagon", 4: "cube", 5: "decade", 6: "dodecade"}
SIZE_BY_KIND = {v: k for k, v in KIND_BY_SIZE.items()}


@dataclass(frozen=True)
class CubeParams:
    """Parameters (u, v, r, s) of a cube on the standard frame.

    The center is [u, 1/u, v, 1/v, r, s]; validity needs u, v nonzero and
    r^2 + r*s + lam*s^2 = 1.
    """

    u: int
    v: int
    r: int
    s: int


@dataclass(frozen=True)
class CentricFigure:
    """2m quadric points in m opposite pairs concurrent through a center.

    Attributes
    ----------
    kind : str
        One of "hexagon", "cube", "decade", "dodecade".
    pairs : tuple of (int, int)
        Opposite pairs as quadric point indices.
    center : Vec
        Normalized coordinates of the center (not on the quadric).
    """

    kind: str
    pairs: Tuple[Tuple[int, int], ...]
    center: Vec

    def key(self) -> Tuple[str, frozenset, Vec]:
        """Canonical identity, independent of pair order and orientation."""
        return (self.kind, frozenset(frozenset(p) for p in self.pairs), self.center)

    def point_indices(self) -> List[int]:
        return sorted(i for p in self.pairs for i in p)


def make_figure(model: QuadricModel, pairs: Sequence[Tuple[int, int]],
                center: Sequence[int]) -> CentricFigure:
    m = len(pairs)
    if m not in KIND_BY_SIZE:
        raise ValueError(f"no figure kind with {m} pairs")
    cen = normalize_tuple(model.ctx, tuple(center))
    return CentricFigure(kind=KIND_BY_SIZE[m],
                         pairs=tuple((int(a), int(b)) for a, b in pairs),
                         center=cen)


# -- line helpers --------------------------------------------------------------


def second_intersection(model: QuadricModel, x: Sequence[int],
                        c: Sequence[int]) -> Optional[Vec]:
    """Second quadric point on the line through x (on Q) and c (off Q).

    Returns None when the line is tangent at x.  On the affine parametrisation
    c + t*x the quadric condition reads f(c) + t*alpha(c, x) = 0.
    """
    a = model.alpha_scalar(c, x)
    if a == 0:
        return None
    t = model.ctx.mul(model.f_scalar(c), model.ctx.inv(a))
    y = tuple(ci ^ model.ctx.mul(t, xi) for ci, xi in zip(c, x))
    return normalize_tuple(model.ctx, y)


def _collinear_with(ctx: FieldCtx, a: Sequence[int], b: Sequence[int],
                    c: Sequence[int]) -> bool:
    return len(rref(ctx, [a, b, c])) == 2


# -- structure verification ----------------------------------------------------


def verify_centric_figure(model: QuadricModel, fig: CentricFigure) -> dict:
    """Check the full centric-figure axioms; returns a pass/fail report.

    The report carries the derived bipartition as ``rows`` (two tuples of
    quadric point indices) when the check passes, and a ``reason`` string
    when it does not.
    """
    m = len(fig.pairs)
    out: dict = {"pass": False, "kind": fig.kind, "m": m}
    if SIZE_BY_KIND.get(fig.kind) != m:
        out["reason"] = "kind does not match number of pairs"
        return out
    pts = [i for p in fig.pairs for i in p]
    if len(set(pts)) != 2 * m:
        out["reason"] = "repeated point"
        return out
    if model.f_scalar(fig.center) == 0:
        out["reason"] = "center lies on the quadric"
        return out
    vecs = {i: model.point(i) for i in pts}
    for a, b in fig.pairs:
        if not _collinear_with(model.ctx, vecs[a], vecs[b], fig.center):
            out["reason"] = f"pair ({a},{b}) not concurrent with the center"
            return out

    pair_of = {}
    for k, (a, b) in enumerate(fig.pairs):
        pair_of[a] = k
        pair_of[b] = k
    adj = {(u, v): model.alpha_scalar(vecs[u], vecs[v]) == 0
           for u in pts for v in pts if u != v}

    # Two-colour against the reference pair, then check the full relation:
    # collinear <=> different pair and different row.
    row = {fig.pairs[0][0]: 0, fig.pairs[0][1]: 1}
    ra, rb = fig.pairs[0]
    for a, b in fig.pairs[1:]:
        for x in (a, b):
            hits = adj[(x, ra)], adj[(x, rb)]
            if hits == (True, False):
                row[x] = 1
            elif hits == (False, True):
                row[x] = 0
            else:
                out["reason"] = f"point {x} sees the reference pair {hits}"
                return out
        if row[a] == row[b]:
            out["reason"] = f"pair ({a},{b}) landed in one row"
            return out
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            want = pair_of[u] != pair_of[v] and row[u] != row[v]
            if adj[(u, v)] != want:
                out["reason"] = f"adjacency mismatch at ({u},{v})"
                return out

    out["pass"] = True
    out["rows"] = (tuple(sorted(x for x in pts if row[x] == 0)),
                   tuple(sorted(x for x in pts if row[x] == 1)))
    return out


# -- lifting cliques -----------------------------------------------------------


def lift_clique_to_figure(cov: CoveringMap, clique: Sequence[int]) -> CentricFigure:
    """Lift a non-linear tangency clique to the centric figure over the nucleus.

    The preimage of each clique vertex is a fiber pair of affine quadric
    points; the union of fibers is returned as a centric figure centered at
    the nucleus.  Linear cliques do not lift to figures and are rejected.
    """
    gx = cov.geom
    model = gx.model
    if len(clique) != len(set(clique)):
        raise ValueError("repeated clique vertex")
    for i, a in enumerate(clique):
        for b in clique[i + 1:]:
            if not gx.adjacency[a, b]:
                raise ValueError(f"ovoids {a} and {b} are not tangent")
    tps = {int(gx.tangency_point[a, b])
           for i, a in enumerate(clique) for b in clique[i + 1:]}
    if len(clique) >= 3 and len(tps) == 1:
        raise ValueError("linear clique: all tangencies share one point")
    fig = make_figure(model, [cov.point_fiber[a] for a in clique], model.nucleus)
    rep = verify_centric_figure(model, fig)
    if not rep["pass"]:
        raise AssertionError(f"lift is not a centric figure: {rep['reason']}")
    return fig


def figure_to_clique(cov: CoveringMap, fig: CentricFigure) -> Tuple[int, ...]:
    """Project a figure's opposite pairs back to tangency-graph vertices."""
    out = []
    for a, b in fig.pairs:
        oa, ob = int(cov.point_image[a]), int(cov.point_image[b])
        if oa < 0 or oa != ob:
            raise ValueError(f"pair ({a},{b}) is not a point fiber")
        out.append(oa)
    return tuple(sorted(out))


# -- the standard cube family --------------------------------------------------


def fundamental_quadrangle(model: QuadricModel) -> Tuple[int, int, int, int]:
    """Indices of the standard quadrangle e1, e3, e2, e4 (a 4-cycle)."""
    e = [tuple(1 if j == i else 0 for j in range(6)) for i in range(4)]
    a1, c1, b1, d1 = (model.index_of(v) for v in e)
    return a1, b1, c1, d1  # type: ignore[return-value]


def cube_center(model: QuadricModel, par: CubeParams) -> Vec:
    ctx = model.ctx
    c = (par.u, ctx.inv(par.u), par.v, ctx.inv(par.v), par.r, par.s)
    return normalize_tuple(ctx, c)


def fundamental_cube(model: QuadricModel, par: CubeParams) -> CentricFigure:
    """The unique cube on the standard quadrangle with the given center.

    Vertices are rational functions of (u, v, r, s); the returned figure is
    checked structurally before being handed back.
    """
    ctx = model.ctx
    u, v, r, s = par.u, par.v, par.r, par.s
    if u == 0 or v == 0:
        raise ValueError("cube parameters need u, v nonzero")
    lhs = ctx.mul(r, r) ^ ctx.mul(r, s) ^ ctx.mul(model.lam, ctx.mul(s, s))
    if lhs != 1:
        raise ValueError("cube parameters must satisfy the center conic")
    ui, vi = ctx.inv(u), ctx.inv(v)
    mu = ctx.mul

    a1 = (1, 0, 0, 0, 0, 0)
    b1 = (0, 0, 1, 0, 0, 0)
    c1 = (0, 1, 0, 0, 0, 0)
    d1 = (0, 0, 0, 1, 0, 0)
    a2 = (0, mu(ui, ui), mu(v, ui), mu(ui, vi), mu(r, ui), mu(s, ui))
    b2 = (mu(u, vi), mu(ui, vi), 0, mu(vi, vi), mu(r, vi), mu(s, vi))
    c2 = (mu(u, u), 0, mu(u, v), mu(u, vi), mu(u, r), mu(u, s))
    d2 = (mu(u, v), mu(v, ui), mu(v, v), 0, mu(v, r), mu(v, s))

    pairs = []
    for x, y in ((a1, a2), (b1, b2), (c1, c2), (d1, d2)):
        ix, iy = model.index_of(normalize_tuple(ctx, x)), model.index_of(normalize_tuple(ctx, y))
        if ix is None or iy is None:
            raise AssertionError("cube vertex fell off the quadric")
        pairs.append((ix, iy))
    fig = make_figure(model, pairs, cube_center(model, par))
    rep = verify_centric_figure(model, fig)
    if not rep["pass"]:
        raise AssertionError(f"fundamental cube failed check: {rep['reason']}")
    return fig


def enumerate_cube_centers(model: QuadricModel) -> Set[Vec]:
    """Centers of cubes on the standard quadrangle, parametrically.

    These are the points [u, 1/u, v, 1/v, r, s] with u, v nonzero and (r, s)
    on the conic r^2 + r*s + lam*s^2 = 1; there are (q-1)^2 (q+1) of them.
    """
    ctx = model.ctx
    conic = conic_solution_set(ctx, model.lam, 0)
    out: Set[Vec] = set()
    for u in range(1, ctx.q):
        for v in range(1, ctx.q):
            for r, s in conic:
                out.add(cube_center(model, CubeParams(u, v, r, s)))
    expect = (ctx.q - 1) ** 2 * (ctx.q + 1)
    if len(out) != expect:
        raise AssertionError("parametric center count off")
    return out


def enumerate_cube_centers_bruteforce(model: QuadricModel) -> Set[Vec]:
    """Scan all of PG(5,q) off Q for points that center a cube on the
    standard quadrangle; definitional cross-check for the parametric set."""
    ctx = model.ctx
    a1, b1, c1, d1 = fundamental_quadrangle(model)
    frame = [model.point(i) for i in (a1, b1, c1, d1)]
    out: Set[Vec] = set()
    for p in enumerate_points(ctx, 6):
        if model.f_scalar(p) == 0:
            continue
        # the center must be perp-free on the frame
        if any(model.alpha_scalar(p, x) == 0 for x in frame):
            continue
        pairs = []
        ok = True
        for x in frame:
            y = second_intersection(model, x, p)
            iy = model.index_of(y) if y is not None else None
            ix = model.index_of(x)
            if iy is None or iy == ix:
                ok = False
                break
            pairs.append((ix, iy))
        if not ok:
            continue
        fig = make_figure(model, pairs, p)
        if verify_centric_figure(model, fig)["pass"]:
            out.add(fig.center)
    return out


# -- adapted frames ------------------------------------------------------------


class FrameMap:
    """Coordinate change carrying an adapted basis to the standard frame.

    Rows v1..v6 satisfy f(v1)=..=f(v4)=0, f(v5)=1, f(v6)=lam and the only
    nonzero polarization values are alpha(v1,v2)=alpha(v3,v4)=alpha(v5,v6)=1,
    so the quadric polynomial has the same expression in both coordinate
    systems.
    """

    def __init__(self, model: QuadricModel, rows: Sequence[Vec]):
        self.model = model
        self.ctx = model.ctx
        self._t = tuple(tuple(col) for col in zip(*rows))  # columns are v_i
        self._tinv = mat_inv(self.ctx, self._t)

    def to_frame(self, x: Sequence[int]) -> Vec:
        return mat_vec(self.ctx, self._tinv, x)

    def from_frame(self, y: Sequence[int]) -> Vec:
        return mat_vec(self.ctx, self._t, y)


def build_adapted_frame(model: QuadricModel, a1: int, c1: int, b1: int,
                        d1: Optional[int] = None) -> FrameMap:
    """Frame sending a1 -> e1, c1 -> e2, b1 -> e3 (and d1 -> e4 if given).

    Needs alpha(a1, c1) != 0 and b1 (resp. d1) collinear with both a1 and c1;
    when d1 is omitted a quadric point with the right incidences is found by
    scanning.  The remaining two basis vectors come from the perp of the
    first four, normalized against the quadric polynomial.
    """
    ctx = model.ctx
    v1 = model.point(a1)
    v2r = model.point(c1)
    t = model.alpha_scalar(v1, v2r)
    if t == 0:
        raise ValueError("frame points a1, c1 must be non-collinear")
    ti = ctx.inv(t)
    v2 = tuple(ctx.mul(ti, x) for x in v2r)
    v3 = model.point(b1)
    if model.alpha_scalar(v1, v3) or model.alpha_scalar(v2, v3):
        raise ValueError("frame point b1 must be collinear with a1 and c1")

    if d1 is not None:
        v4r = model.point(d1)
    else:
        v4r = None
        for i in range(model.n_points):
            w = model.point(i)
            if (model.alpha_scalar(v1, w) == 0 and model.alpha_scalar(v2, w) == 0
                    and model.alpha_scalar(v3, w) != 0):
                v4r = w
                break
        if v4r is None:
            raise AssertionError("no fourth frame point found")
    s = model.alpha_scalar(v3, v4r)
    if s == 0 or model.alpha_scalar(v1, v4r) or model.alpha_scalar(v2, v4r):
        raise ValueError("fourth frame point has wrong incidences")
    si = ctx.inv(s)
    v4 = tuple(ctx.mul(si, x) for x in v4r)

    # perp of v1..v4 is a plane on which f is anisotropic
    brows = [_alpha_row(model, v) for v in (v1, v2, v3, v4)]
    w1, w2 = null_basis2(model.ctx, brows)
    v5 = None
    for a in range(ctx.q):
        for b in range(ctx.q):
            if a == 0 and b == 0:
                continue
            x = tuple(ctx.mul(a, p) ^ ctx.mul(b, q) for p, q in zip(w1, w2))
            if model.f_scalar(x) == 1:
                v5 = x
                break
        if v5 is not None:
            break
    if v5 is None:
        raise AssertionError("no unit vector in the perp plane")
    v6 = None
    for a in range(ctx.q):
        for b in range(ctx.q):
            if a == 0 and b == 0:
                continue
            x = tuple(ctx.mul(a, p) ^ ctx.mul(b, q) for p, q in zip(w1, w2))
            if model.alpha_scalar(v5, x) == 1 and model.f_scalar(x) == model.lam:
                v6 = x
                break
        if v6 is not None:
            break
    if v6 is None:
        raise AssertionError("frame completion failed")
    return FrameMap(model, (v1, v2, v3, v4, v5, v6))


def _alpha_row(model: QuadricModel, v: Sequence[int]) -> Vec:
    """Functional x -> alpha(v, x) as a coordinate row (swap within pairs)."""
    return (v[1], v[0], v[3], v[2], v[5], v[4])


def null_basis2(ctx: FieldCtx, rows: Sequence[Vec]) -> Tuple[Vec, Vec]:
    from .projgeom import null_space

    basis = null_space(ctx, rows)
    if len(basis) != 2:
        raise AssertionError(f"perp space has dimension {len(basis)}, wanted 2")
    return basis[0], basis[1]


# -- hexagon -> cubes ----------------------------------------------------------


def hexagon_labels(model: QuadricModel, fig: CentricFigure) -> Dict[str, int]:
    """Walk the 6-cycle of a hexagon into labels a1-b1-c1-a2-b2-c2."""
    rep = verify_centric_figure(model, fig)
    if not rep["pass"] or fig.kind != "hexagon":
        raise ValueError("not a centric hexagon")
    partner = {}
    for x, y in fig.pairs:
        partner[x] = y
        partner[y] = x
    vecs = {i: model.point(i) for i in fig.point_indices()}
    a1 = fig.pairs[0][0]
    nbrs = [x for x in vecs if x != a1 and x != partner[a1]
            and model.alpha_scalar(vecs[a1], vecs[x]) == 0]
    if len(nbrs) != 2:
        raise AssertionError("hexagon vertex degree is not 2")
    b1 = nbrs[0]
    c2 = nbrs[1]
    return {"a1": a1, "b1": b1, "c1": partner[c2], "a2": partner[a1],
            "b2": partner[b1], "c2": c2}


def extend_hexagon_to_cubes(model: QuadricModel, fig: CentricFigure) -> List[CentricFigure]:
    """All cubes containing a given centric hexagon (exactly q+1 of them).

    The hexagon frame (a1, c1, b1) is carried to the standard frame and the
    center scaled to f = 1; candidate fourth pairs then live on a conic with
    parameter mu = 1 + p1*p2/p4^2, giving q+1 solutions.  Every candidate is
    rebuilt in the original coordinates and fully re-verified.
    """
    ctx = model.ctx
    lab = hexagon_labels(model, fig)
    fm = build_adapted_frame(model, lab["a1"], lab["c1"], lab["b1"])
    p = fm.to_frame(fig.center)
    fp = model.f_scalar(p)  # the form has the standard expression in-frame
    if fp == 0:
        raise AssertionError("center moved onto the quadric")
    sc = ctx.inv(ctx.sqrt(fp))
    p = tuple(ctx.mul(sc, x) for x in p)
    p1, p2, p3, p4, p5, p6 = p
    if p1 == 0 or p2 == 0 or p4 == 0:
        raise AssertionError("hexagon center misses a frame incidence")

    p4i = ctx.inv(p4)
    mu = 1 ^ ctx.mul(ctx.mul(p1, p2), ctx.mul(p4i, p4i))
    shift5 = ctx.mul(p5, p4i)
    shift6 = ctx.mul(p6, p4i)
    out: List[CentricFigure] = []
    for x, y in sorted(conic_solution_set(ctx, model.lam, mu)):
        d5, d6 = x ^ shift5, y ^ shift6
        d3 = ctx.mul(d5, d5) ^ ctx.mul(d5, d6) ^ ctx.mul(model.lam, ctx.mul(d6, d6))
        dd1 = (0, 0, d3, 1, d5, d6)
        dd2 = tuple(ctx.mul(p4, a) ^ b for a, b in zip(dd1, p))
        i1 = model.index_of(normalize_tuple(ctx, fm.from_frame(dd1)))
        i2 = model.index_of(normalize_tuple(ctx, fm.from_frame(dd2)))
        if i1 is None or i2 is None:
            raise AssertionError("solved pair fell off the quadric")
        cube = make_figure(model, list(fig.pairs) + [(i1, i2)], fig.center)
        rep = verify_centric_figure(model, cube)
        if not rep["pass"]:
            raise AssertionError(f"candidate cube failed check: {rep['reason']}")
        out.append(cube)
    if len({c.key() for c in out}) != ctx.q + 1:
        raise AssertionError("hexagon extension count is not q+1")
    return out


def extend_hexagon_to_cubes_bruteforce(model: QuadricModel,
                                       fig: CentricFigure) -> List[CentricFigure]:
    """Scan all quadric points for fourth pairs completing the hexagon.

    Candidates d must be collinear with a1, c1, b2 and not with b1, a2, c2;
    the opposite point is the second intersection of line(d, center).  Kept
    independent of the frame solver for cross-checking.
    """
    import numpy as np

    lab = hexagon_labels(model, fig)
    g = model.gram
    mask = ((g[lab["a1"]] == 0) & (g[lab["c1"]] == 0) & (g[lab["b2"]] == 0)
            & (g[lab["b1"]] != 0) & (g[lab["a2"]] != 0) & (g[lab["c2"]] != 0))
    out: List[CentricFigure] = []
    seen = set()
    for i in np.nonzero(mask)[0]:
        x = model.point(int(i))
        y = second_intersection(model, x, fig.center)
        if y is None:
            continue
        j = model.index_of(y)
        if j is None or j == int(i):
            continue
        cube = make_figure(model, list(fig.pairs) + [(int(i), j)], fig.center)
        if cube.key() in seen:
            continue
        if verify_centric_figure(model, cube)["pass"]:
            seen.add(cube.key())
            out.append(cube)
    return out


# -- cube -> decades and dodecade ----------------------------------------------


def cube_labels(model: QuadricModel, fig: CentricFigure) -> Dict[str, int]:
    """Label a cube so that (a1, b1, c1, d1) is a face 4-cycle."""
    rep = verify_centric_figure(model, fig)
    if not rep["pass"] or fig.kind != "cube":
        raise ValueError("not a centric cube")
    row0, row1 = rep["rows"]
    pair_of = {}
    for k, (a, b) in enumerate(fig.pairs):
        pair_of[a] = k
        pair_of[b] = k

    def in_row(pair_idx: int, row: Sequence[int]) -> int:
        a, b = fig.pairs[pair_idx]
        return a if a in row else b

    a1 = in_row(0, row0)
    b1 = in_row(1, row1)
    c1 = in_row(2, row0)
    d1 = in_row(3, row1)
    partner = {}
    for x, y in fig.pairs:
        partner[x] = y
        partner[y] = x
    return {"a1": a1, "b1": b1, "c1": c1, "d1": d1,
            "a2": partner[a1], "b2": partner[b1],
            "c2": partner[c1], "d2": partner[d1]}


def cube_params(model: QuadricModel, fig: CentricFigure) -> Tuple[CubeParams, FrameMap]:
    """Carry a cube to the standard frame and read off its parameters.

    Asserts that the transported cube equals the parametric cube on those
    parameters, which pins down the normalization.
    """
    ctx = model.ctx
    lab = cube_labels(model, fig)
    fm = build_adapted_frame(model, lab["a1"], lab["c1"], lab["b1"], lab["d1"])
    p = fm.to_frame(fig.center)
    fp = model.f_scalar(p)
    if fp == 0:
        raise AssertionError("center moved onto the quadric")
    sc = ctx.inv(ctx.sqrt(fp))
    p = tuple(ctx.mul(sc, x) for x in p)
    if p[0] == 0 or p[2] == 0:
        raise AssertionError("cube center has a zero frame parameter")
    if p[1] != ctx.inv(p[0]) or p[3] != ctx.inv(p[2]):
        raise AssertionError("cube center is not in parametric form")
    par = CubeParams(u=p[0], v=p[2], r=p[4], s=p[5])
    ref = fundamental_cube(model, par)
    moved = {normalize_tuple(ctx, fm.to_frame(model.point(i)))
             for i in fig.point_indices()}
    want = {model.point(i) for i in ref.point_indices()}
    if moved != want:
        raise AssertionError("transported cube disagrees with parametric cube")
    return par, fm


def extend_cube(model: QuadricModel, fig: CentricFigure) -> dict:
    """Decades and the dodecade over a cube.

    In the standard frame the fifth pairs are parametrized by the conic
    e5^2 (s^2+1) + e5 e6 + e6^2 (r^2+lam) = 0, which has two projective
    solutions when the field degree is odd and none when it is even; the two
    decades then merge into a single dodecade.  Returns a dict with keys
    ``decades`` (list) and ``dodecade`` (figure or None).
    """
    ctx = model.ctx
    par, fm = cube_params(model, fig)
    u, v, r, s = par.u, par.v, par.r, par.s
    mu = ctx.mul
    A = mu(s, s) ^ 1
    C = mu(r, r) ^ model.lam

    sols: List[Tuple[int, int]] = []
    if A == 0:
        sols = [(1, 0), (C, 1)]
    else:
        from .gf2n import solve_artin_schreier

        roots = solve_artin_schreier(ctx, mu(A, C))
        sols = [(mu(ctx.inv(A), t), 1) for t in sorted(roots)]
    if ctx.n % 2 == 0 and sols:
        raise AssertionError("even-degree field admitted a fifth pair")
    if ctx.n % 2 == 1 and len(sols) != 2:
        raise AssertionError("odd-degree field did not yield two fifth pairs")

    ui, vi = ctx.inv(u), ctx.inv(v)
    rs1 = mu(r, s) ^ 1
    pairs_new: List[Tuple[int, int]] = []
    for e5, e6 in sols:
        p1v = (mu(mu(u, s), e5) ^ mu(mu(u, r), e6),
               mu(mu(ui, s), e5) ^ mu(mu(ui, r), e6), 0, 0, e5, e6)
        p2v = (0, 0, mu(mu(v, s), e5) ^ mu(mu(v, r), e6),
               mu(mu(vi, s), e5) ^ mu(mu(vi, r), e6),
               mu(rs1, e5) ^ mu(mu(r, r), e6),
               mu(mu(s, s), e5) ^ mu(rs1, e6))
        i1 = model.index_of(normalize_tuple(ctx, fm.from_frame(p1v)))
        i2 = model.index_of(normalize_tuple(ctx, fm.from_frame(p2v)))
        if i1 is None or i2 is None:
            raise AssertionError("fifth pair fell off the quadric")
        pairs_new.append((i1, i2))

    decades = []
    for pr in pairs_new:
        dec = make_figure(model, list(fig.pairs) + [pr], fig.center)
        rep = verify_centric_figure(model, dec)
        if not rep["pass"]:
            raise AssertionError(f"decade failed check: {rep['reason']}")
        decades.append(dec)
    dodecade = None
    if pairs_new:
        dodecade = make_figure(model, list(fig.pairs) + pairs_new, fig.center)
        rep = verify_centric_figure(model, dodecade)
        if not rep["pass"]:
            raise AssertionError(f"dodecade failed check: {rep['reason']}")
    return {"decades": decades, "dodecade": dodecade}


def extend_cube_bruteforce(model: QuadricModel, fig: CentricFigure) -> dict:
    """Scan the quadric for fifth pairs over a cube; definitional oracle."""
    import numpy as np

    rep = verify_centric_figure(model, fig)
    if not rep["pass"]:
        raise ValueError("not a centric cube")
    row0, row1 = rep["rows"]
    g = model.gram
    cands = np.ones(model.n_points, dtype=bool)
    m0 = np.ones_like(cands)
    m1 = np.ones_like(cands)
    for x in row0:
        m0 &= g[x] == 0
        m1 &= g[x] != 0
    for x in row1:
        m0 &= g[x] != 0
        m1 &= g[x] == 0
    seen = set()
    decades = []
    for i in np.nonzero(m0 | m1)[0]:
        x = model.point(int(i))
        y = second_intersection(model, x, fig.center)
        if y is None:
            continue
        j = model.index_of(y)
        if j is None or j == int(i):
            continue
        dec = make_figure(model, list(fig.pairs) + [(int(i), j)], fig.center)
        if dec.key() in seen:
            continue
        if verify_centric_figure(model, dec)["pass"]:
            seen.add(dec.key())
            decades.append(dec)
    dodecade = None
    if decades:
        extra = [pr for d in decades for pr in d.pairs[4:]]
        dodecade = make_figure(model, list(fig.pairs) + extra, fig.center)
        if not verify_centric_figure(model, dodecade)["pass"]:
            raise AssertionError("brute-force fifth pairs do not merge")
    return {"decades": decades, "dodecade": dodecade}


# -- quadrangle counting -------------------------------------------------------


def count_quadrangles_formula(q: int) -> int:
    """Number of unordered quadrangles on the quadric:
    (q^3+1)(q^2+1)(q+1) q^6 / 8."""
    num = (q ** 3 + 1) * (q ** 2 + 1) * (q + 1) * q ** 6
    if num % 8:
        raise AssertionError("quadrangle formula is not integral")
    return num // 8


def count_quadrangles_exhaustive(model: QuadricModel) -> int:
    """Count quadrangles by scanning diagonals; refuses fields beyond q = 4.

    For each non-collinear pair {a, c} the common neighbours form a coclique
    of size q^2 + 1 (asserted), so each such pair carries C(q^2+1, 2)
    quadrangles and every quadrangle is counted once per diagonal.
    """
    import numpy as np

    q = model.ctx.q
    if q > 4:
        raise ValueError("exhaustive quadrangle count supported only for q <= 4")
    g0 = model.gram == 0
    np.fill_diagonal(g0, False)
    total = 0
    n = model.n_points
    for a in range(n):
        for c in range(a + 1, n):
            if g0[a, c]:
                continue
            common = g0[a] & g0[c]
            k = int(common.sum())
            if k != q * q + 1:
                raise AssertionError("perp-pair neighbourhood has wrong size")
            sub = g0[np.ix_(np.nonzero(common)[0], np.nonzero(common)[0])]
            if sub.any():
                raise AssertionError("common neighbourhood is not a coclique")
            total += k * (k - 1) // 2
    if total % 2:
        raise AssertionError("diagonal double-count is odd")
    return total // 2


def formula_n6_bar(q: int) -> int:
    """Centric-dodecade count over all centers:
    (q^3+1)(q^4-1)(q^2-1) q^6 / 720."""
    num = (q ** 3 + 1) * (q ** 4 - 1) * (q ** 2 - 1) * q ** 6
    if num % 720:
        raise AssertionError("dodecade formula is not integral")
    return num // 720
