from fractions import Fraction
from pathlib import Path

import pytest

from bierpoly.bier import BierVertex
from bierpoly.complex import build, from_faces

DATA = Path(__file__).parent / "data"


def labeled_complexes(n, ghosts=False):
    """Every proper complex on [n] (all singletons present unless ``ghosts``)."""
    full = (1 << n) - 1
    order = sorted(range(1, full), key=lambda m: (bin(m).count("1"), m))
    out = []

    def rec(k, faces):
        if k == len(order):
            if ghosts or all((1 << i) in faces for i in range(n)):
                out.append(from_faces(n, faces))
            return
        s = order[k]
        rec(k + 1, faces)
        if all((s & ~(1 << i)) in faces for i in range(n) if s >> i & 1):
            faces.add(s)
            rec(k + 1, faces)
            faces.discard(s)

    rec(0, {0})
    return out


def dual_by_definition(K):
    """Faces of the Alexander dual: sets whose complements are non-faces."""
    full = K.full
    return {m for m in range(1 << K.n) if (full & ~m) not in K.faces}


def bier_by_definition(K):
    """Maximal simplices of the deleted join K *_Delta K°, by brute force."""
    n = K.n
    dual = dual_by_definition(K)
    out = set()
    for a in K.faces:
        for b in dual:
            if a & b or bin(a | b).count("1") != n - 1:
                continue
            out.add(frozenset(
                [BierVertex(i + 1) for i in range(n) if a >> i & 1]
                + [BierVertex(i + 1, True) for i in range(n) if b >> i & 1]
            ))
    return out


@pytest.fixture
def pentagon():
    return build(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])


@pytest.fixture
def moebius():
    """Dual of the pentagram cycle 13, 35, 52, 24, 41."""
    return build(5, [(3, 4, 5), (1, 4, 5), (1, 2, 5), (1, 2, 3), (2, 3, 4)])


@pytest.fixture
def two_segments():
    return build(4, [(1, 2), (3, 4)])


@pytest.fixture
def three_points():
    return build(3, [(1,), (2,), (3,)])


def frac_tuple(*xs):
    return tuple(Fraction(x) for x in xs)


# -- acceptance report ----------------------------------------------------

CRITERIA: dict[int, str] = {}


class criterion:
    """Record a PASS/FAIL line for an acceptance criterion; failures still raise."""

    def __init__(self, number, title):
        self.number, self.title = number, title

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            CRITERIA[self.number] = f"criterion {self.number}: PASS  {self.title}"
        else:
            reason = str(exc).splitlines()[0] if str(exc) else exc_type.__name__
            CRITERIA[self.number] = f"criterion {self.number}: FAIL  {self.title}  ({reason[:120]})"
        print(CRITERIA[self.number])
        return False


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])
