from collections import Counter

import pytest

from bierpoly.bier import (
    BierVertex,
    OrientationError,
    PseudomanifoldError,
    RidgeKind,
    bier_sphere,
    euler_characteristic,
    f_vector,
    format_bier,
    orient,
    orient_facets,
    parse_bier,
    retriangulate,
    ridge_facets,
    ridges,
    sphere_canonical_form,
)
from bierpoly.complex import FormatError, alexander_dual, build, from_faces, members, popcount

from conftest import bier_by_definition, labeled_complexes

V = BierVertex


def test_vertex_tokens():
    assert str(V(3)) == "3" and str(V(3, True)) == "3~"
    assert V.parse("12~") == V(12, True)


def test_pentagon_sphere(pentagon):
    B = bier_sphere(pentagon)
    assert len(B.facets) == 25
    assert f_vector(B) == (10, 35, 50, 25)
    assert len(B.vertices) == 10


def test_three_points_give_a_hexagon(three_points):
    B = bier_sphere(three_points)
    assert f_vector(B) == (6, 6)
    assert Counter(r.kind for r in ridges(B)) == {RidgeKind.LAMBDA: 3, RidgeKind.V: 3}


def test_small_ridge_census():
    K = build(3, [(1, 2), (3,)])
    B = bier_sphere(K)
    assert f_vector(B) == (5, 5)
    assert Counter(r.kind for r in ridges(B)) == {RidgeKind.LAMBDA: 2, RidgeKind.X: 2, RidgeKind.V: 1}


def test_two_points_have_no_ridges():
    B = bier_sphere(build(2, [(1,), (2,)]))
    assert ridges(B) == [] and f_vector(B) == (2,)


def test_ghosts_rejected_unless_allowed():
    K = build(3, [(1, 2)])
    with pytest.raises(ValueError):
        bier_sphere(K)
    assert len(bier_sphere(K, allow_ghosts=True).facets) > 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_facets_match_deleted_join_definition(n):
    for K in labeled_complexes(n, ghosts=True):
        B = bier_sphere(K, allow_ghosts=True)
        assert set(B.facet_sets) == bier_by_definition(K)
        assert len(B.facet_sets) == len(set(B.facet_sets))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_euler_characteristic_and_orientability(n):
    complexes = labeled_complexes(n) if n < 5 else labeled_complexes(n)[::37]
    for K in complexes:
        B = bier_sphere(K)
        assert euler_characteristic(f_vector(B)) == 1 + (-1) ** (n - 2)
        of = orient(B)
        # every ridge cancels in the boundary of the fundamental class
        total = Counter()
        for f, s in of:
            for i in range(len(f)):
                total[f[:i] + f[i + 1:]] += s * (-1) ** (i + 1)
        assert all(v == 0 for v in total.values())


def _ridges_by_brute_force(B):
    out = Counter()
    for f in B.facet_sets:
        for v in f:
            out[f - {v}] += 1
    return out


@pytest.mark.parametrize("n", [3, 4])
def test_ridge_partition(n):
    for K in labeled_complexes(n):
        B = bier_sphere(K)
        rs = ridges(B)
        brute = _ridges_by_brute_force(B)
        assert all(c == 2 for c in brute.values())
        assert sorted(map(sorted, (r.vertices() for r in rs)), key=str) == sorted(map(sorted, brute), key=str)
        for r in rs:
            fs = ridge_facets(B, r)
            assert len(fs) == 2 and all(r.vertices() < f.vertices(n) for f in fs)
            x1 = r.X1
            in1 = (x1 | 1 << (r.c1 - 1)) in K.faces
            in2 = (x1 | 1 << (r.c2 - 1)) in K.faces
            kind = {(True, True): RidgeKind.LAMBDA, (False, False): RidgeKind.V}.get((in1, in2), RidgeKind.X)
            assert r.kind is kind
            if kind is RidgeKind.X:
                assert in2 and not in1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_duality_swaps_lambda_and_v(n):
    for K in labeled_complexes(n)[:: 1 if n < 5 else 23]:
        D = alexander_dual(K)
        if any((1 << i) not in D.faces for i in range(n)):
            continue
        a = Counter(r.kind for r in ridges(bier_sphere(K)))
        b = Counter(r.kind for r in ridges(bier_sphere(D)))
        assert a[RidgeKind.LAMBDA] == b[RidgeKind.V]
        assert a[RidgeKind.V] == b[RidgeKind.LAMBDA]
        assert a[RidgeKind.X] == b[RidgeKind.X]


@pytest.mark.parametrize("n", [3, 4])
def test_retriangulate_matches_direct_construction(n):
    checked = 0
    for K in labeled_complexes(n):
        B = bier_sphere(K)
        for a in range(1, (1 << n) - 1):
            if a in K.faces or popcount(a) < 2:
                continue
            if any((a & ~(1 << (i - 1))) not in K.faces for i in members(a)):
                continue
            new = retriangulate(B, a)
            direct = bier_sphere(from_faces(n, set(K.faces) | {a}))
            assert set(new.facets) == set(direct.facets)
            assert new.K == direct.K
            checked += 1
    assert checked > 0


def test_retriangulate_rejects_bad_faces(two_segments):
    B = bier_sphere(two_segments)
    with pytest.raises(ValueError):
        retriangulate(B, (1, 2))  # already a face
    with pytest.raises(ValueError):
        retriangulate(B, (1, 2, 3))  # 13 and 23 missing


def test_orientation_rejects_non_pseudomanifolds():
    with pytest.raises(PseudomanifoldError):
        orient_facets([{1, 2}, {2, 3}])
    with pytest.raises(PseudomanifoldError):
        orient_facets([{1, 2}, {1, 3}, {2, 3}, {4, 5}, {5, 6}, {4, 6}])


def test_orientation_rejects_non_orientable():
    # minimal triangulation of the real projective plane
    rp2 = [(1, 2, 4), (1, 2, 6), (1, 3, 4), (1, 3, 5), (1, 5, 6),
           (2, 3, 5), (2, 3, 6), (2, 4, 5), (3, 4, 6), (4, 5, 6)]
    with pytest.raises(OrientationError):
        orient_facets(rp2)


def test_sphere_canonical_form_collapses_isomorphic_spheres(pentagon, moebius):
    a = sphere_canonical_form(bier_sphere(pentagon).facet_sets)
    b = sphere_canonical_form(bier_sphere(moebius).facet_sets)
    c = sphere_canonical_form(bier_sphere(build(5, [(1, 2), (2, 3), (3, 4), (4, 5)])).facet_sets)
    assert a == b and a != c


def test_bier_text_roundtrip(pentagon):
    B = bier_sphere(pentagon)
    again = parse_bier(format_bier(B))
    assert set(again.facets) == set(B.facets) and again.K == pentagon


@pytest.mark.parametrize(
    "text",
    ["", "n 3\n1 2 3\n", "n 3\n1 1~\n", "n 3\n1 x\n", "n 3\n1 2~\n"],
)
def test_bier_parse_errors(text):
    with pytest.raises(FormatError):
        parse_bier(text)
