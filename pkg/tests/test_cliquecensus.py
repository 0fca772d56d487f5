"""Tangency graph census: strong regularity, clique counts, spectra."""

import numpy as np
import pytest

from quadcover.cliquecensus import (
    bk_neighborhood_spectrum,
    bk_spectrum,
    build_tangency_graph,
    census,
    classify_clique,
    export_edges_csv,
    formula_n3,
    formula_n4,
    formula_n5,
    formula_n6,
    formula_srg_params,
    maximal_cliques,
    rosette_maximality,
    verify_srg,
)


def test_formula_values():
    assert [formula_n3(q) for q in (2, 4, 8)] == [20, 16320, 9784320]
    assert [formula_n4(q) for q in (2, 4, 8)] == [15, 20400, 22014720]
    assert formula_n5(2) == 6 and formula_n5(8) == 8805888
    assert formula_n6(2) == 1 and formula_n6(8) == 1467648
    assert formula_srg_params(2) == (6, 5, 4, 4)
    assert formula_srg_params(4) == (120, 51, 18, 24)
    assert formula_srg_params(8) == (2016, 455, 70, 112)


@pytest.mark.parametrize("name,q", [("tg_q2", 2), ("tg_q4", 4), ("tg_q8", 8)])
def test_tangency_graph_shape(request, name, q):
    g = request.getfixturevalue(name)
    v, k, _, _ = formula_srg_params(q)
    assert g.n_vertices == v
    assert g.n_edges == v * k // 2
    assert (g.vertex_ovoid == np.arange(v)).all()


@pytest.mark.parametrize("name,q", [("tg_q4", 4), ("tg_q8", 8)])
def test_strong_regularity_exhaustive(request, name, q):
    rep = verify_srg(request.getfixturevalue(name))
    assert rep["pass"]
    v, k, lam, mu = formula_srg_params(q)
    assert (rep["v"], rep["k"], rep["lambda"], rep["mu"]) == (v, k, lam, mu)
    assert rep["feasibility_ok"]
    assert not rep["mu_vacuous"]


def test_srg_degenerates_to_complete_graph_at_q2(tg_q2):
    rep = verify_srg(tg_q2)
    assert rep["pass"]
    assert rep["mu_vacuous"]
    assert (rep["v"], rep["k"], rep["lambda"]) == (6, 5, 4)


@pytest.mark.parametrize("cname", ["census_q2", "census_q4"])
def test_triangle_total_matches_matrix_trace(request, cname):
    rep = request.getfixturevalue(cname)
    g = request.getfixturevalue({"census_q2": "tg_q2", "census_q4": "tg_q4"}[cname])
    af = g.adjacency.astype(np.float64)
    assert int(np.trace(af @ af @ af)) == 6 * (rep.linear_triangles + rep.n3)


def test_triangle_classification_matches_brute_force(geom_q4, census_q4):
    A, tp = geom_q4.adjacency, geom_q4.tangency_point
    lin = nl = 0
    for a in range(geom_q4.n_ovoids):
        for b in np.nonzero(A[a])[0]:
            if b <= a:
                continue
            cs = np.nonzero(A[a] & A[b])[0]
            for c in cs[cs > b]:
                if tp[a, b] == tp[a, c] == tp[b, c]:
                    lin += 1
                else:
                    nl += 1
    assert (lin, nl) == (census_q4.linear_triangles, census_q4.n3)


def _bits(x):
    while x:
        lsb = x & -x
        yield lsb.bit_length() - 1
        x ^= lsb


def _count_k4_bitmask(adj):
    n = len(adj)
    rows = [int.from_bytes(np.packbits(adj[i], bitorder="little").tobytes(), "little")
            for i in range(n)]
    total = 0
    for a in range(n):
        above_a = rows[a] >> (a + 1) << (a + 1)
        for b in _bits(above_a):
            mab = rows[b] & above_a
            for c in _bits(mab >> (b + 1) << (b + 1)):
                total += ((mab & rows[c]) >> (c + 1)).bit_count()
    return total


@pytest.mark.parametrize("cname,gname", [("census_q2", "tg_q2"), ("census_q4", "tg_q4")])
def test_four_clique_totals_match_bitmask_brute_force(request, cname, gname):
    rep = request.getfixturevalue(cname)
    g = request.getfixturevalue(gname)
    q = rep.q
    n_linear_k4 = len(request.getfixturevalue(
        {"census_q2": "geom_q2", "census_q4": "geom_q4"}[cname]).rosettes) \
        * (1 if q >= 4 else 0)  # C(q, 4) pencil subsets: 1 at q=4, 0 at q=2
    assert _count_k4_bitmask(g.adjacency) == rep.n4 + n_linear_k4


def test_census_values_q2(census_q2):
    rep = census_q2
    assert (rep.linear_triangles, rep.n3, rep.n4, rep.n5, rep.n6) == (0, 20, 15, 6, 1)
    assert rep.spectrum == [6]
    assert rep.spectrum_by_kind == {"linear": [], "nonlinear": [6]}
    assert rep.linear_max_cliques == 0
    assert rep.extension_counts == {"3to4": [3], "4to5": [2], "4to6": [1]}
    assert rep.no_mixed and rep.ok
    assert all(rep.identities.values())


def test_census_values_q4(census_q4):
    rep = census_q4
    assert (rep.linear_triangles, rep.n3, rep.n4) == (2040, 16320, 20400)
    assert (rep.n5, rep.n6) == (0, 0)
    assert rep.spectrum == [4]
    assert rep.spectrum_by_kind == {"linear": [4], "nonlinear": [4]}
    assert rep.linear_max_cliques == 510
    assert rep.extension_counts == {"3to4": [5], "4to5": [0], "4to6": [0]}
    assert rep.no_mixed and rep.ok
    assert all(rep.identities.values())
    assert rep.identities["n4_from_n3"]
    assert "n5_formula" not in rep.identities  # even-degree field has no 5-cliques


def test_census_report_dict(census_q4):
    d = census_q4.to_dict()
    assert d["pass"] is True
    assert "counterexample" not in d
    for key in ("q", "n", "mode", "srg", "formulas", "identities", "spectrum"):
        assert key in d


def test_collected_triangles_and_four_cliques(geom_q4, census_q4):
    tris, quads = census_q4.triangles, census_q4.cliques4
    assert tris.shape == (16320, 3)
    assert (np.diff(tris, axis=1) > 0).all()
    assert len({tuple(r) for r in tris.tolist()}) == len(tris)
    assert quads.shape == (20400, 4)
    assert (np.diff(quads, axis=1) > 0).all()
    assert len({tuple(r) for r in quads.tolist()}) == len(quads)
    rng = np.random.default_rng(0)
    for row in tris[rng.choice(len(tris), size=20, replace=False)]:
        rec = classify_clique(geom_q4, row)
        assert rec.kind == "nonlinear" and not rec.maximal
    for row in quads[rng.choice(len(quads), size=20, replace=False)]:
        rec = classify_clique(geom_q4, row)
        assert rec.kind == "nonlinear" and rec.maximal


def test_classify_clique_linear_and_errors(geom_q4):
    r = geom_q4.rosettes[0]
    rec = classify_clique(geom_q4, r.members)
    assert rec.kind == "linear"
    assert rec.base == r.base
    assert rec.maximal
    with pytest.raises(ValueError):
        classify_clique(geom_q4, [0])
    non_adj = next((a, b) for a in range(geom_q4.n_ovoids)
                   for b in range(a + 1, geom_q4.n_ovoids)
                   if not geom_q4.adjacency[a, b])
    with pytest.raises(ValueError):
        classify_clique(geom_q4, non_adj)


def test_sampled_census_is_deterministic(tg_q4, geom_q4):
    r1 = census(tg_q4, geom_q4, mode="sampled", seed=7, n_samples=400)
    r2 = census(tg_q4, geom_q4, mode="sampled", seed=7, n_samples=400)
    assert r1.to_dict() == r2.to_dict()
    assert r1.ok
    assert r1.edges_checked == 400
    assert r1.n3 is None  # sampled mode checks laws, not totals


def test_sampled_census_q8(census_q8_sampled):
    rep = census_q8_sampled
    assert rep.mode == "sampled" and rep.ok
    assert rep.counterexample is None
    assert rep.extension_counts == {"3to4": [9], "4to5": [2], "4to6": [1]}
    assert rep.srg["pass"]


def test_census_input_validation(tg_q2, geom_q2):
    with pytest.raises(ValueError):
        census(tg_q2, geom_q2, mode="sampled")
    with pytest.raises(ValueError):
        census(tg_q2, geom_q2, mode="everything")


def test_rosette_maximality(tg_q2, geom_q2, tg_q4, geom_q4):
    assert rosette_maximality(tg_q2, geom_q2) == (0, 15)
    assert rosette_maximality(tg_q4, geom_q4) == (510, 510)


def test_maximal_cliques_on_small_graphs():
    cycle4 = np.array([[0, 1, 0, 1],
                       [1, 0, 1, 0],
                       [0, 1, 0, 1],
                       [1, 0, 1, 0]], dtype=bool)
    found = sorted(tuple(sorted(c)) for c in maximal_cliques(cycle4))
    assert found == [(0, 1), (0, 3), (1, 2), (2, 3)]
    tri_pendant = np.zeros((4, 4), dtype=bool)
    for a, b in [(0, 1), (0, 2), (1, 2), (2, 3)]:
        tri_pendant[a, b] = tri_pendant[b, a] = True
    found = sorted(tuple(sorted(c)) for c in maximal_cliques(tri_pendant))
    assert found == [(0, 1, 2), (2, 3)]


def test_independent_maximal_clique_spectra(tg_q2, tg_q4):
    assert bk_spectrum(tg_q2.adjacency) == {6: 1}
    assert bk_spectrum(tg_q4.adjacency) == {4: 20910}  # 20400 nonlinear + 510 pencils


def test_neighborhood_spectrum_q8(tg_q8):
    # through one ovoid: 65 pencils of size 8 and 1467648 * 6 / 2016 six-cliques
    assert bk_neighborhood_spectrum(tg_q8, 0) == {6: 4368, 8: 65}


def test_edges_csv_round_trip(tmp_path, tg_q2):
    import csv

    path = tmp_path / "edges.csv"
    export_edges_csv(tg_q2, str(path))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["ovoid_a", "ovoid_b"]
    assert len(rows) - 1 == tg_q2.n_edges
    for a, b in rows[1:]:
        assert tg_q2.adjacency[int(a), int(b)]
