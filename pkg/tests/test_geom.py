import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bierpoly.bier import BierVertex, bier_sphere
from bierpoly.complex import FormatError, build, threshold_complex
from bierpoly.geom import (
    BOUNDARY,
    DegenerateConfigurationError,
    NonExtremalPointError,
    PointConfiguration,
    cone_coefficients,
    convex_hull,
    convex_hull_dd,
    default_circuit,
    det,
    fan_locate,
    fan_rays,
    format_real,
    int_det,
    is_minimal_circuit,
    lattice_isomorphism,
    orientation_sign,
    parse_real,
    rank,
    realizes,
    threshold_realization,
)

F = Fraction
V = BierVertex


def fraction_det(m):
    """Cofactor expansion, an independent check on the Bareiss routine."""
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * fraction_det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda k: st.lists(st.lists(st.integers(-9, 9), min_size=k, max_size=k), min_size=k, max_size=k)))
def test_int_det_matches_cofactor_expansion(m):
    assert int_det(m) == fraction_det(m)


def test_det_with_fractions():
    assert det([[F(1, 2), F(1, 3)], [F(1, 5), F(1, 7)]]) == F(1, 14) - F(1, 15)
    assert rank([[1, 2], [2, 4]]) == 1


def cube():
    return PointConfiguration.from_points([(i, p) for i, p in enumerate(product((0, 1), repeat=3))])


def test_cube_has_six_square_facets_and_twelve_edges():
    fl = convex_hull(cube())
    assert len(fl.facets) == 6 and all(len(f) == 4 for f in fl.facets)
    assert len(fl.edges) == 12
    assert fl == convex_hull_dd(cube())


def test_degenerate_and_non_extremal_inputs():
    flat = PointConfiguration.from_points([(0, (0, 0, 0)), (1, (1, 0, 0)), (2, (0, 1, 0)), (3, (1, 1, 0))])
    with pytest.raises(DegenerateConfigurationError):
        convex_hull(flat)
    inner = PointConfiguration.from_points(
        [(0, (0, 0)), (1, (4, 0)), (2, (0, 4)), (3, (1, 1))])
    with pytest.raises(NonExtremalPointError):
        convex_hull(inner)
    on_edge = PointConfiguration.from_points([(0, (0, 0)), (1, (2, 0)), (2, (0, 2)), (3, (1, 0))])
    with pytest.raises(NonExtremalPointError):
        convex_hull(on_edge)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(lambda d: st.lists(
    st.lists(st.integers(-20, 20), min_size=d, max_size=d), min_size=d + 2, max_size=d + 5, unique_by=tuple)))
def test_hull_agrees_with_double_description(points):
    cfg = PointConfiguration.from_points(list(enumerate(points)))
    try:
        a = convex_hull(cfg)
    except (DegenerateConfigurationError, NonExtremalPointError) as exc:
        with pytest.raises(type(exc)):
            convex_hull_dd(cfg)
        return
    assert a == convex_hull_dd(cfg)


def test_orientation_sign():
    cfg = PointConfiguration.from_points([("a", (0, 0)), ("b", (1, 0)), ("c", (0, 1))])
    assert orientation_sign(cfg, ["a", "b", "c"]) == 1
    assert orientation_sign(cfg, ["b", "a", "c"]) == -1


def test_minimal_circuits():
    assert is_minimal_circuit(default_circuit(4))
    assert not is_minimal_circuit([(1, 0), (0, 1), (-1, 0)])


def test_threshold_realization_rejects_bad_input():
    with pytest.raises(ValueError):
        threshold_realization([F(1, 2), F(1, 2)], F(1, 2))  # a coalition weighs exactly alpha
    with pytest.raises(ValueError):
        threshold_realization([F(1, 2), F(1, 4)], F(1, 3))
    with pytest.raises(ValueError):
        threshold_realization([F(1, 2), F(1, 2)], F(3, 2))


def test_two_segments_seed_matrix():
    cfg = threshold_realization([F(1, 3), F(1, 3), F(1, 6), F(1, 6)], F(5, 12))
    assert cfg.point(V(1)) == (3, 0, 0)
    assert cfg.point(V(4, True)) == (F(42, 5),) * 3
    L = build(4, [(1,), (2,), (3, 4)])
    assert realizes(cfg, bier_sphere(L)) is not None


def random_threshold_pair(rng, n):
    while True:
        w = [rng.randint(1, 30) for _ in range(n)]
        total = sum(w)
        mu = [F(x, total) for x in w]
        alpha = F(rng.randint(1, 2 * total - 1), 2 * total)
        weights = {sum(mu[i] for i in range(n) if m >> i & 1) for m in range(1 << n)}
        if alpha in weights:
            continue
        K = threshold_complex(mu, alpha)
        if all((1 << i) in K.faces for i in range(n)) and K.is_proper:
            return mu, alpha, K


def test_canonical_realizations_small_sample():
    rng = random.Random(7)
    for n in (3, 4, 5):
        for _ in range(4):
            mu, alpha, K = random_threshold_pair(rng, n)
            cfg = threshold_realization(mu, alpha)
            assert realizes(cfg, bier_sphere(K)) is not None


def test_lattice_isomorphism_fixed_and_failure(pentagon):
    B = bier_sphere(pentagon)
    path = bier_sphere(build(5, [(1, 2), (2, 3), (3, 4), (4, 5)]))
    assert lattice_isomorphism(B, path) is None
    iso = lattice_isomorphism(B, B, fixed={V(1): V(2)})
    assert iso[V(1)] == V(2)
    mapped = {frozenset(iso[v] for v in f) for f in B.facet_sets}
    assert mapped == set(B.facet_sets)
    assert lattice_isomorphism(B, B, fixed={V(1): V(1, True)}) is None  # degrees differ


def test_fan_rays_and_coefficients(pentagon):
    rays = fan_rays(5)
    assert sum(rays[V(1)]) == 0
    v = [F(3), F(-1), F(1), F(-5), F(2)]
    f = fan_locate(pentagon, v)
    assert f != BOUNDARY
    coeffs = cone_coefficients(5, f, v)
    assert all(c > 0 for c in coeffs.values())
    rebuilt = [sum(c * rays[u][k] for u, c in coeffs.items()) for k in range(5)]
    assert rebuilt == v


def test_fan_boundary_and_errors(pentagon):
    assert fan_locate(pentagon, [0, 0, 0, 0, 0]) == BOUNDARY
    with pytest.raises(ValueError):
        fan_locate(pentagon, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        fan_locate(pentagon, [1, 0, 0, 0, 0])


def float_cone_oracle(K, vectors):
    """Count, per vector, the cones containing it by a numeric least-squares solve."""
    B = bier_sphere(K)
    rays = fan_rays(K.n)
    counts = np.zeros(len(vectors), dtype=int)
    for fs in B.facet_sets:
        R = np.array([[float(x) for x in rays[u]] for u in fs]).T
        coef, *_ = np.linalg.lstsq(R, vectors.T, rcond=None)
        counts += (coef > 1e-9).all(axis=0)
    return counts


def test_fan_monte_carlo_pentagon(pentagon):
    rng = np.random.default_rng(3)
    vecs = rng.integers(-1000, 1000, size=(200, 5)).astype(float)
    vecs -= vecs.mean(axis=1, keepdims=True)
    assert (float_cone_oracle(pentagon, vecs) == 1).all()
    for row in vecs[:50]:
        exact = [F(x).limit_denominator(10**6) for x in row]
        exact[-1] = -sum(exact[:-1])
        assert fan_locate(pentagon, exact) != BOUNDARY


def test_real_roundtrip_and_errors():
    cfg = threshold_realization([F(1, 3), F(1, 3), F(1, 6), F(1, 6)], F(5, 12))
    assert parse_real(format_real(cfg)) == cfg
    for bad in ["", "n 2 d 1\n1 1 2\n", "n 2 d 1\n1 x\n", "n 1 d 1\n1 0\n1~ 1\n2 3\n", "n 2 d 1\n1 0\n1 1\n"]:
        with pytest.raises(FormatError):
            parse_real(bad)
    cfg = parse_real("n 2 d 1\n1 1/2\n1~ -0.25\n")
    assert cfg.point(V(1, True)) == (F(-1, 4),)
