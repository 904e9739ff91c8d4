from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bierpoly.complex import (
    FormatError,
    SimpleGame,
    alexander_dual,
    build,
    canonical_form,
    format_cmplx,
    from_faces,
    is_rough_pair,
    is_threshold_pair,
    members,
    parse_cmplx,
    require_ok,
    threshold_complex,
    to_mask,
    validate,
)

from conftest import dual_by_definition, labeled_complexes


def test_masks_roundtrip():
    assert to_mask([1, 3]) == 0b101
    assert members(0b101) == (1, 3)
    assert members(0) == ()


def test_build_drops_dominated_generators():
    K = build(4, [(1, 2), (1,), (2, 3), (1, 2)])
    assert set(K.facet_sets()) == {(1, 2), (2, 3)}
    assert (1, 2) in K and (1, 3) not in K


@pytest.mark.parametrize("bad", [0, -1, 25, "3"])
def test_build_rejects_bad_ground_set(bad):
    with pytest.raises(ValueError):
        build(bad, [])


def test_build_rejects_vertex_out_of_range():
    with pytest.raises(ValueError):
        build(3, [(1, 4)])


def test_from_faces_requires_downward_closure():
    with pytest.raises(ValueError):
        from_faces(3, {0, 0b011})


def test_pentagon_dual(pentagon):
    D = alexander_dual(pentagon)
    assert D.facet_sets() == [(1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5)]


def test_dual_of_full_simplex_is_an_error():
    with pytest.raises(ValueError):
        alexander_dual(from_faces(2, {0, 1, 2, 3}))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dual_matches_definition_and_is_involutive(n):
    for K in labeled_complexes(n, ghosts=True):
        D = alexander_dual(K)
        assert D.faces == frozenset(dual_by_definition(K))
        assert alexander_dual(D) == K


def test_validate_reports_ghosts_and_dual_ghosts():
    K = build(3, [(1, 2)])
    rep = validate(K)
    assert rep.ghost_vertices == {3}
    assert rep.dual_ghosts == {3}
    assert not rep.ok
    with pytest.raises(ValueError):
        require_ok(K)


def test_simple_game_minimal_winning(pentagon):
    G = SimpleGame(pentagon)
    assert G.is_winning(to_mask([1, 3]))
    assert not G.is_winning(to_mask([1, 2]))
    assert set(G.minimal_winning()) == {(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)}


def test_threshold_complex_and_pair_checks():
    K = threshold_complex([1, 1, 2], Fraction(5, 2))
    assert set(K.facet_sets()) == {(1, 2), (3,)}
    assert is_threshold_pair(K, [1, 1, 2], Fraction(5, 2))
    assert not is_threshold_pair(K, [1, 1, 1], Fraction(5, 2))


def test_rough_pair_allows_ties(pentagon):
    w = [Fraction(1, 5)] * 5
    assert is_rough_pair(pentagon, w, Fraction(2, 5))
    assert not is_threshold_pair(pentagon, w, Fraction(2, 5))


def test_canonical_form_is_an_isomorphism_invariant(pentagon):
    path = build(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    relabeled = pentagon.relabel({1: 3, 2: 1, 3: 5, 4: 2, 5: 4})
    assert canonical_form(relabeled) == canonical_form(pentagon)
    assert canonical_form(path) != canonical_form(pentagon)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_canonical_form_under_random_relabeling(data):
    n = data.draw(st.integers(2, 6))
    facets = data.draw(st.lists(st.sets(st.integers(1, n), min_size=1, max_size=n - 1), max_size=6))
    K = build(n, facets)
    perm = data.draw(st.permutations(list(range(1, n + 1))))
    assert canonical_form(K.relabel(dict(zip(range(1, n + 1), perm)))) == canonical_form(K)


def test_cmplx_roundtrip(pentagon):
    text = format_cmplx(pentagon, comment="five-cycle")
    assert text.startswith("# five-cycle\nn 5\n")
    assert parse_cmplx(text) == pentagon


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 0),
        ("m 3\n1 2\n", 1),
        ("n three\n", 1),
        ("n 3\n1 x\n", 2),
        ("n 3\n# ok\n1 4\n", 3),
    ],
)
def test_cmplx_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as exc:
        parse_cmplx(text)
    assert exc.value.line == line
