"""Simplicial complexes (complexes of losing coalitions) on the ground set [n].

Faces are stored as bitmasks: vertex ``i`` (1-based) is bit ``i - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .canon import canonical_certificate

MAX_N = 24


class FormatError(ValueError):
    """Malformed input file; ``line`` is 1-based (0 when not line specific)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line
        self.message = message


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def _mask_key(mask: int):
    return (popcount(mask), members(mask))


@dataclass(frozen=True)
class SimplicialComplex:
    """A down-set of subsets of [n], stored by its facets (maximal faces)."""

    n: int
    facets: tuple[int, ...]

    @cached_property
    def faces(self) -> frozenset[int]:
        out = {0}
        for f in self.facets:
            out.update(submasks(f))
        return frozenset(out)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __contains__(self, face) -> bool:
        if not isinstance(face, int):
            face = to_mask(face)
        return face in self.faces

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def is_proper(self) -> bool:
        return self.full not in self.faces

    @cached_property
    def min_nonfaces(self) -> tuple[int, ...]:
        faces = self.faces
        found = set()
        for a in faces:
            for v in range(self.n):
                s = a | (1 << v)
                if s == a or s in faces or s in found:
                    continue
                if all((s & ~(1 << i)) in faces for i in range(self.n) if s >> i & 1):
                    found.add(s)
        return tuple(sorted(found, key=_mask_key))

    def facet_sets(self) -> list[tuple[int, ...]]:
        return [members(f) for f in self.facets]

    def sorted_faces(self) -> list[int]:
        return sorted(self.faces, key=_mask_key)

    def relabel(self, perm: dict[int, int]) -> "SimplicialComplex":
        """Image under the ground-set permutation ``i -> perm[i]``."""
        return build(self.n, [[perm[v] for v in members(f)] for f in self.facets])

    def __str__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, members(f))) + "}" for f in self.facets)
        return f"K(n={self.n}; {body})"


@dataclass(frozen=True)
class ComplexReport:
    proper: bool
    ghost_vertices: frozenset[int]
    dual_ghosts: frozenset[int]

    @property
    def ok(self) -> bool:
        return self.proper and not self.ghost_vertices


@dataclass(frozen=True)
class SimpleGame:
    """The simple game 2^[n] minus K, viewed through its losing complex."""

    K: SimplicialComplex

    @property
    def n(self) -> int:
        return self.K.n

    def is_winning(self, coalition) -> bool:
        return coalition not in self.K

    def minimal_winning(self) -> list[tuple[int, ...]]:
        return [members(s) for s in self.K.min_nonfaces]


def _antichain(masks: Iterable[int]) -> tuple[int, ...]:
    ms = sorted(set(masks), key=lambda m: -popcount(m))
    kept: list[int] = []
    for m in ms:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return tuple(sorted(kept, key=_mask_key))


def build(n: int, facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Complex on [n] generated by ``facets``; dominated generators are dropped."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"ground set size must be a positive integer, got {n!r}")
    if n > MAX_N:
        raise ValueError(f"n={n} exceeds supported maximum {MAX_N}")
    masks = []
    for f in facets:
        f = list(f)
        for v in f:
            if not isinstance(v, int) or not 1 <= v <= n:
                raise ValueError(f"vertex {v!r} out of range 1..{n}")
        masks.append(to_mask(f))
    return SimplicialComplex(n, _antichain(masks or [0]))


def from_faces(n: int, faces: Iterable[int]) -> SimplicialComplex:
    """Complex from a family of face bitmasks, which must be downward closed."""
    faces = set(faces) | {0}
    for f in faces:
        for i in range(n):
            if f >> i & 1 and (f & ~(1 << i)) not in faces:
                raise ValueError(f"face {members(f)} has missing subface")
    return SimplicialComplex(n, _antichain(faces))


def validate(K: SimplicialComplex) -> ComplexReport:
    full = K.full
    ghosts = frozenset(v for v in range(1, K.n + 1) if (1 << (v - 1)) not in K.faces)
    dual = frozenset(v for v in range(1, K.n + 1) if (full & ~(1 << (v - 1))) in K.faces)
    return ComplexReport(K.is_proper, ghosts, dual)


def require_ok(K: SimplicialComplex) -> None:
    rep = validate(K)
    if not rep.proper:
        raise ValueError("complex is not proper (it is the full power set)")
    if rep.ghost_vertices:
        raise ValueError(f"complex has ghost vertices {sorted(rep.ghost_vertices)}")


def alexander_dual(K: SimplicialComplex) -> SimplicialComplex:
    if not K.is_proper:
        raise ValueError("Alexander dual of the full simplex is not a complex")
    full = K.full
    return SimplicialComplex(K.n, _antichain(full & ~s for s in K.min_nonfaces))


def canonical_form(K: SimplicialComplex) -> bytes:
    verts = range(1, K.n + 1)
    return canonical_certificate(verts, K.facet_sets())


def threshold_complex(weights: Sequence, quota) -> SimplicialComplex:
    """``Tr_{w<q}``: all coalitions of total weight strictly below ``quota``."""
    n = len(weights)
    w = [Fraction(x) for x in weights]
    q = Fraction(quota)
    faces = []
    for m in range(1 << n):
        if sum(w[i] for i in range(n) if m >> i & 1) < q:
            faces.append(m)
    if not faces:
        raise ValueError("quota leaves no faces (empty set is winning)")
    return from_faces(n, faces)


def coalition_weight(weights: Sequence, mask: int):
    return sum((weights[i] for i in range(len(weights)) if mask >> i & 1), Fraction(0))


def is_threshold_pair(K: SimplicialComplex, weights: Sequence, quota) -> bool:
    """Check w(T) < q for T in K and w(S) > q otherwise, over all 2^n coalitions."""
    for m in range(1 << K.n):
        wm = coalition_weight(weights, m)
        if m in K.faces:
            if not wm < quota:
                return False
        elif not wm > quota:
            return False
    return True


def is_rough_pair(K: SimplicialComplex, weights: Sequence, quota) -> bool:
    """Check w(X) > q => X winning and w(X) < q => X losing, all coalitions."""
    for m in range(1 << K.n):
        wm = coalition_weight(weights, m)
        if wm > quota and m in K.faces:
            return False
        if wm < quota and m not in K.faces:
            return False
    return True


# -- .cmplx text format ---------------------------------------------------

def parse_cmplx(text: str) -> SimplicialComplex:
    n = None
    facets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n is None:
            if toks[0] != "n" or len(toks) != 2:
                raise FormatError("expected header 'n <int>'", lineno)
            try:
                n = int(toks[1])
            except ValueError:
                raise FormatError(f"bad ground set size {toks[1]!r}", lineno) from None
            if n < 1:
                raise FormatError("ground set size must be positive", lineno)
            continue
        try:
            face = [int(t) for t in toks]
        except ValueError:
            raise FormatError(f"non-integer vertex in {line!r}", lineno) from None
        bad = [v for v in face if not 1 <= v <= n]
        if bad:
            raise FormatError(f"vertex {bad[0]} out of range 1..{n}", lineno)
        facets.append(face)
    if n is None:
        raise FormatError("missing header 'n <int>'")
    return build(n, facets)


def format_cmplx(K: SimplicialComplex, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"n {K.n}")
    for f in K.facets:
        if f:
            lines.append(" ".join(map(str, members(f))))
    return "\n".join(lines) + "\n"


def all_subsets(n: int, size: int):
    for c in combinations(range(1, n + 1), size):
        yield to_mask(c)
