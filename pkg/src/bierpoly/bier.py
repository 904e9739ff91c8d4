"""Bier spheres Bier(K) = K *_Delta K°: facets, ridges, orientation, re-triangulation."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .canon import canonical_certificate
from .complex import (
    FormatError,
    SimplicialComplex,
    from_faces,
    members,
    popcount,
    to_mask,
    validate,
)


class BierVertex(NamedTuple):
    index: int
    barred: bool = False

    def __str__(self) -> str:
        return f"{self.index}~" if self.barred else str(self.index)

    @classmethod
    def parse(cls, token: str) -> "BierVertex":
        bar = token.endswith("~")
        return cls(int(token[:-1] if bar else token), bar)


def vertex_key(v):
    """Unbarred vertices first, then barred; plain labels by value."""
    if isinstance(v, BierVertex):
        return (0, v.barred, v.index)
    return (1, False, v)


class BierFacet(NamedTuple):
    """Facet in boundary-pair form: ``A`` in K, ``A + pivot`` not in K."""

    A: int
    pivot: int

    def barred_mask(self, n: int) -> int:
        return ((1 << n) - 1) & ~(self.A | (1 << (self.pivot - 1)))

    def vertices(self, n: int) -> frozenset[BierVertex]:
        return frozenset(
            [BierVertex(i) for i in members(self.A)]
            + [BierVertex(j, True) for j in members(self.barred_mask(n))]
        )

    def ordered(self, n: int) -> tuple[BierVertex, ...]:
        return tuple(sorted(self.vertices(n), key=vertex_key))


class RidgeKind(enum.Enum):
    LAMBDA = "Lambda"
    V = "V"
    X = "X"


@dataclass(frozen=True)
class Ridge:
    """Ridge ``X1 + {c1, c2} + X2 = [n]``; for kind X, ``X1 + c2`` is in K."""

    X1: int
    c1: int
    c2: int
    X2: int
    kind: RidgeKind

    def vertices(self) -> frozenset[BierVertex]:
        return frozenset(
            [BierVertex(i) for i in members(self.X1)]
            + [BierVertex(j, True) for j in members(self.X2)]
        )


class PseudomanifoldError(ValueError):
    pass


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class BierSphere:
    n: int
    K: SimplicialComplex
    facets: tuple[BierFacet, ...]

    @property
    def dim(self) -> int:
        return self.n - 2

    @cached_property
    def facet_sets(self) -> tuple[frozenset, ...]:
        return tuple(f.vertices(self.n) for f in self.facets)

    @cached_property
    def vertices(self) -> tuple[BierVertex, ...]:
        vs = set().union(*self.facet_sets) if self.facets else set()
        return tuple(sorted(vs, key=vertex_key))

    def ordered_facets(self) -> list[tuple[BierVertex, ...]]:
        return [f.ordered(self.n) for f in self.facets]


def _sorted_facets(facets: Iterable[BierFacet]) -> tuple[BierFacet, ...]:
    return tuple(sorted(set(facets)))


def boundary_pairs(K: SimplicialComplex) -> list[BierFacet]:
    faces = K.faces
    out = []
    for a in faces:
        for v in range(1, K.n + 1):
            bit = 1 << (v - 1)
            if not a & bit and (a | bit) not in faces:
                out.append(BierFacet(a, v))
    return out


def bier_sphere(K: SimplicialComplex, allow_ghosts: bool = False) -> BierSphere:
    rep = validate(K)
    if not rep.proper:
        raise ValueError("Bier sphere needs a proper complex")
    if rep.ghost_vertices and not allow_ghosts:
        raise ValueError(f"complex has ghost vertices {sorted(rep.ghost_vertices)}")
    return BierSphere(K.n, K, _sorted_facets(boundary_pairs(K)))


def ridges(B: BierSphere) -> list[Ridge]:
    K, n = B.K, B.n
    faces = K.faces
    full = K.full
    out = []
    for x1 in sorted(faces):
        rest = [v for v in range(1, n + 1) if not x1 >> (v - 1) & 1]
        for c1, c2 in combinations(rest, 2):
            b1, b2 = 1 << (c1 - 1), 1 << (c2 - 1)
            y = x1 | b1 | b2
            if y in faces:
                continue
            if x1 == 0 and y == full:
                continue
            in1, in2 = (x1 | b1) in faces, (x1 | b2) in faces
            if in1 and in2:
                kind = RidgeKind.LAMBDA
            elif not in1 and not in2:
                kind = RidgeKind.V
            else:
                kind = RidgeKind.X
                if in1:
                    c1, c2 = c2, c1
            out.append(Ridge(x1, c1, c2, full & ~y, kind))
    return out


def ridge_facets(B: BierSphere, r: Ridge) -> list[BierFacet]:
    """The facets of ``B`` containing ridge ``r``."""
    faces = B.K.faces
    b1, b2 = 1 << (r.c1 - 1), 1 << (r.c2 - 1)
    out = []
    for c, other, bit in ((r.c1, r.c2, b1), (r.c2, r.c1, b2)):
        if (r.X1 | bit) in faces:
            out.append(BierFacet(r.X1 | bit, other))
        else:
            out.append(BierFacet(r.X1, c))
    return out


def f_vector(B: BierSphere) -> tuple[int, ...]:
    faces: set[frozenset] = set()
    for f in B.facet_sets:
        fl = sorted(f, key=vertex_key)
        for k in range(1, len(fl) + 1):
            faces.update(frozenset(c) for c in combinations(fl, k))
    counts = [0] * (B.dim + 1)
    for f in faces:
        counts[len(f) - 1] += 1
    return tuple(counts)


def euler_characteristic(fvec: Sequence[int]) -> int:
    return sum((-1) ** i * f for i, f in enumerate(fvec))


@dataclass(frozen=True)
class OrientedFacets:
    facets: tuple[tuple, ...]
    signs: tuple[int, ...]

    def __iter__(self):
        return iter(zip(self.facets, self.signs))

    def sign_of(self, ordered: Sequence) -> int:
        """Sign of an arbitrarily ordered facet in this fundamental class."""
        key = frozenset(ordered)
        for f, s in self:
            if frozenset(f) == key:
                return s * permutation_sign(ordered, f)
        raise KeyError(f"{tuple(ordered)} is not a facet")


def permutation_sign(seq: Sequence, ref: Sequence) -> int:
    """Sign of the permutation taking ``ref`` to ``seq``."""
    pos = {v: i for i, v in enumerate(ref)}
    p = [pos[v] for v in seq]
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def orient_facets(facets: Sequence[Iterable], key=vertex_key) -> OrientedFacets:
    """Coherently orient a connected closed pseudomanifold.

    Facets are returned as ``key``-sorted tuples; the first facet gets sign +1.
    The boundary of ``(a_1, ..., a_k)`` is ``sum (-1)^i (..., a_i omitted, ...)``
    with 1-based ``i``; coherence means every ridge cancels.
    """
    tuples = [tuple(sorted(f, key=key)) for f in facets]
    by_ridge: dict[frozenset, list[tuple[int, int]]] = {}
    for idx, f in enumerate(tuples):
        for i in range(len(f)):
            r = frozenset(f[:i] + f[i + 1:])
            by_ridge.setdefault(r, []).append((idx, (-1) ** (i + 1)))
    for r, inc in by_ridge.items():
        if len(inc) != 2:
            shown = sorted(map(str, r))
            raise PseudomanifoldError(f"ridge {shown} lies in {len(inc)} facets")
    signs = [0] * len(tuples)
    if not tuples:
        return OrientedFacets((), ())
    adj: dict[int, list] = {i: [] for i in range(len(tuples))}
    for (a, ca), (b, cb) in by_ridge.values():
        adj[a].append((b, ca, cb))
        adj[b].append((a, cb, ca))
    signs[0] = 1
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b, ca, cb in adj[a]:
            want = -signs[a] * ca * cb
            if signs[b] == 0:
                signs[b] = want
                queue.append(b)
            elif signs[b] != want:
                raise OrientationError("facet orientations conflict: not orientable")
    if 0 in signs:
        raise PseudomanifoldError("facet adjacency graph is disconnected")
    return OrientedFacets(tuple(tuples), tuple(signs))


def orient(B: BierSphere) -> OrientedFacets:
    return orient_facets(B.facet_sets)


def retriangulate(B: BierSphere, A: Iterable[int] | int) -> BierSphere:
    """Bier sphere of ``L + {A}`` from that of ``L`` by the disk re-triangulation."""
    n, L = B.n, B.K
    a = A if isinstance(A, int) else to_mask(A)
    if a in L.faces:
        raise ValueError(f"{members(a)} is already a face")
    if popcount(a) < 2:
        raise ValueError("added face must have at least two vertices (no ghost vertices)")
    if a == L.full:
        raise ValueError("adding [n] makes the complex improper")
    for i in members(a):
        if (a & ~(1 << (i - 1))) not in L.faces:
            raise ValueError(f"L + {members(a)} is not downward closed")
    removed = {BierFacet(a & ~(1 << (i - 1)), i) for i in members(a)}
    added = {BierFacet(a, i) for i in range(1, n + 1) if not a >> (i - 1) & 1}
    current = set(B.facets)
    missing = removed - current
    if missing:
        raise ValueError("input is not the Bier sphere of L (disk facets missing)")
    new_K = from_faces(n, set(L.faces) | {a})
    return BierSphere(n, new_K, _sorted_facets((current - removed) | added))


def sphere_canonical_form(facet_sets: Iterable[Iterable]) -> bytes:
    facet_sets = [tuple(f) for f in facet_sets]
    verts = sorted(set().union(*map(set, facet_sets)), key=vertex_key)
    return canonical_certificate(verts, facet_sets)


# -- .bier text format ----------------------------------------------------

def format_bier(B: BierSphere) -> str:
    lines = [f"n {B.n}"]
    lines += [" ".join(map(str, f)) for f in B.ordered_facets()]
    return "\n".join(lines) + "\n"


def parse_bier(text: str) -> BierSphere:
    n = None
    facets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n is None:
            if toks[0] != "n" or len(toks) != 2 or not toks[1].isdigit():
                raise FormatError("expected header 'n <int>'", lineno)
            n = int(toks[1])
            continue
        try:
            verts = [BierVertex.parse(t) for t in toks]
        except ValueError:
            raise FormatError(f"bad vertex token in {line!r}", lineno) from None
        if any(not 1 <= v.index <= n for v in verts):
            raise FormatError(f"vertex index out of range 1..{n}", lineno)
        a = to_mask(v.index for v in verts if not v.barred)
        b = to_mask(v.index for v in verts if v.barred)
        rest = ((1 << n) - 1) & ~(a | b)
        if a & b or popcount(rest) != 1:
            raise FormatError("facet must leave exactly one pivot element", lineno)
        facets.append(BierFacet(a, members(rest)[0]))
    if n is None:
        raise FormatError("missing header 'n <int>'")
    faces = set()
    for f in facets:
        faces.add(f.A)
    closure = set()
    for a in faces:
        s = a
        while True:
            closure.add(s)
            if s == 0:
                break
            s = (s - 1) & a
    K = from_faces(n, closure)
    B = bier_sphere(K, allow_ghosts=True)
    if set(B.facets) != set(facets):
        raise FormatError("facet list is not the Bier sphere of any complex")
    return B
