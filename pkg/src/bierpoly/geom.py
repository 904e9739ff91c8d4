"""Exact rational geometry for Bier sphere realizations.

Everything here is exact: points are ``Fraction`` vectors, orientation tests
use integer Bareiss determinants after clearing denominators row by row (a
positive row scaling never changes a sign).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Hashable, Mapping, Sequence

from .bier import BierFacet, BierSphere, BierVertex, bier_sphere, vertex_key
from .complex import FormatError, SimplicialComplex, coalition_weight, members

BOUNDARY = "boundary"


class DegenerateConfigurationError(ValueError):
    pass


class NonExtremalPointError(ValueError):
    pass


# -- exact linear algebra -------------------------------------------------

def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - a * rk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def _int_row(row: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    den = lcm(*(Fraction(c).denominator for c in row)) if row else 1
    return tuple(int(Fraction(c) * den) for c in row), den


def det(rows: Sequence[Sequence]) -> Fraction:
    ints, scale = [], 1
    for r in rows:
        ir, den = _int_row(r)
        ints.append(ir)
        scale *= den
    return Fraction(int_det(ints), scale)


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# -- point configurations -------------------------------------------------

@dataclass(frozen=True)
class PointConfiguration:
    d: int
    labels: tuple
    coords: tuple[tuple[Fraction, ...], ...]
    n: int | None = None

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("point labels must be unique")
        if len(self.labels) != len(self.coords):
            raise ValueError("labels and coordinates differ in length")
        for c in self.coords:
            if len(c) != self.d:
                raise ValueError(f"point {c} does not have dimension {self.d}")

    @classmethod
    def from_points(cls, points: Mapping[Hashable, Sequence] | Sequence[tuple], n=None):
        items = list(points.items()) if isinstance(points, Mapping) else list(points)
        labels = tuple(lab for lab, _ in items)
        coords = tuple(tuple(Fraction(x) for x in c) for _, c in items)
        d = len(coords[0]) if coords else 0
        return cls(d, labels, coords, n)

    @property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def point(self, label) -> tuple[Fraction, ...]:
        try:
            return self.coords[self.index[label]]
        except KeyError:
            raise KeyError(f"no point labeled {label}") from None

    def translated(self, shift: Sequence) -> "PointConfiguration":
        shift = [Fraction(s) for s in shift]
        return PointConfiguration(
            self.d, self.labels,
            tuple(tuple(a + b for a, b in zip(c, shift)) for c in self.coords), self.n,
        )

    def scaled(self, factors: Mapping) -> "PointConfiguration":
        """Radially scale the points named in ``factors`` about the origin."""
        coords = []
        for lab, c in zip(self.labels, self.coords):
            f = Fraction(factors.get(lab, 1))
            coords.append(tuple(f * x for x in c))
        return PointConfiguration(self.d, self.labels, tuple(coords), self.n)

    def homogeneous(self) -> list[tuple[int, ...]]:
        """Integer rows positively proportional to ``(coords, 1)``."""
        out = []
        for c in self.coords:
            ir, den = _int_row(list(c) + [Fraction(1)])
            out.append(ir)
        return out

    def as_float(self):
        import numpy as np

        return np.array([[float(x) for x in c] for c in self.coords], dtype=float)


@dataclass(frozen=True)
class FanRays:
    n: int
    rays: dict

    def __getitem__(self, v: BierVertex):
        return self.rays[v]


def fan_rays(n: int) -> FanRays:
    rays = {}
    for i in range(1, n + 1):
        delta = tuple(Fraction(int(k == i)) - Fraction(1, n) for k in range(1, n + 1))
        rays[BierVertex(i)] = delta
        rays[BierVertex(i, True)] = tuple(-x for x in delta)
    return FanRays(n, rays)


def cone_coefficients(n: int, facet: BierFacet, v: Sequence) -> dict:
    """Coefficients of ``v`` (in H_0) on the rays of ``Cone(facet)``.

    Writing ``v = sum l_i delta_i - sum m_j delta_j`` and reading off the pivot
    coordinate gives ``l_i = v_i - v_pivot`` and ``m_j = v_pivot - v_j``.
    """
    v = [Fraction(x) for x in v]
    p = v[facet.pivot - 1]
    out = {}
    for i in members(facet.A):
        out[BierVertex(i)] = v[i - 1] - p
    for j in members(facet.barred_mask(n)):
        out[BierVertex(j, True)] = p - v[j - 1]
    return out


def fan_locate(K: SimplicialComplex, v: Sequence):
    """Maximal cone of Fan(K) whose interior contains ``v``, else ``BOUNDARY``."""
    v = [Fraction(x) for x in v]
    if len(v) != K.n:
        raise ValueError(f"vector has length {len(v)}, expected {K.n}")
    if sum(v) != 0:
        raise ValueError("vector is not in the zero-sum hyperplane H_0")
    B = bier_sphere(K)
    interior, touching = [], []
    for f in B.facets:
        coeffs = cone_coefficients(K.n, f, v).values()
        if all(c > 0 for c in coeffs):
            interior.append(f)
        elif all(c >= 0 for c in coeffs):
            touching.append(f)
    if len(interior) > 1:
        raise AssertionError("cones of Fan(K) overlap in their interiors")
    if interior:
        return interior[0]
    if touching:
        return BOUNDARY
    raise AssertionError("vector lies in no cone: Fan(K) is not complete")


def is_minimal_circuit(b: Sequence[Sequence]) -> bool:
    n = len(b)
    if n < 2 or any(len(p) != n - 1 for p in b):
        return False
    if any(sum(Fraction(p[k]) for p in b) != 0 for k in range(n - 1)):
        return False
    return all(det([b[i] for i in range(n) if i != skip]) != 0 for skip in range(n))


def default_circuit(n: int) -> list[tuple[Fraction, ...]]:
    b = [tuple(Fraction(int(k == i)) for k in range(n - 1)) for i in range(n - 1)]
    b.append(tuple(Fraction(-1) for _ in range(n - 1)))
    return b


def threshold_realization(mu: Sequence, alpha, circuit: Sequence[Sequence] | None = None) -> PointConfiguration:
    """Canonical convex realization of Bier(Tr_{mu<alpha}) in R^{n-1}.

    ``x_i = b_i / mu_i`` and ``y_i = -((1 - alpha) / (alpha mu_i)) b_i``.  Only
    vertices actually present in the Bier sphere are emitted.
    """
    mu = [Fraction(m) for m in mu]
    alpha = Fraction(alpha)
    n = len(mu)
    if n < 2:
        raise ValueError("need at least two players")
    if any(m <= 0 for m in mu) or sum(mu) != 1:
        raise ValueError("mu must be a strictly positive probability vector")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha={alpha} outside (0, 1)")
    for m in range(1 << n):
        if coalition_weight(mu, m) == alpha:
            raise ValueError(f"coalition {members(m)} has weight exactly alpha")
    b = [tuple(Fraction(x) for x in p) for p in (circuit or default_circuit(n))]
    if not is_minimal_circuit(b):
        raise DegenerateConfigurationError("b is not a minimal circuit in R^(n-1)")
    full = sum(mu)
    pts = []
    for i in range(n):
        if mu[i] < alpha:
            pts.append((BierVertex(i + 1), tuple(x / mu[i] for x in b[i])))
    scale = (1 - alpha) / alpha
    for i in range(n):
        if full - mu[i] > alpha:
            pts.append((BierVertex(i + 1, True), tuple(-scale * x / mu[i] for x in b[i])))
    return PointConfiguration.from_points(pts, n=n)


def orientation_sign(config: PointConfiguration, labels: Sequence) -> int:
    """Sign of det[(p, 1)] over the ordered ``d + 1`` labeled points."""
    if len(labels) != config.d + 1:
        raise ValueError(f"need {config.d + 1} labels, got {len(labels)}")
    idx = config.index
    missing = [lab for lab in labels if lab not in idx]
    if missing:
        raise KeyError(f"no point labeled {missing[0]}")
    hom = config.homogeneous()
    return _sign(int_det([hom[idx[lab]] for lab in labels]))


# -- convex hulls ---------------------------------------------------------

@dataclass(frozen=True)
class FaceLattice:
    dim: int
    facets: tuple[frozenset, ...]
    edges: tuple[frozenset, ...]
    normals: tuple = field(default=(), compare=False)

    def facet_degrees(self) -> dict:
        out: dict = {}
        for f in self.facets:
            for v in f:
                out[v] = out.get(v, 0) + 1
        return out


def _cofactors(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Coefficients of the linear form ``y -> det(rows + [y])``."""
    k = len(rows) + 1
    out = []
    for c in range(k):
        minor = [[r[j] for j in range(k) if j != c] for r in rows]
        out.append((-1) ** (k - 1 + c) * int_det(minor))
    return tuple(out)


def _finish(config: PointConfiguration, facet_idx: set[frozenset], normals) -> FaceLattice:
    labels = config.labels
    m = len(labels)
    containing: list[list[frozenset]] = [[] for _ in range(m)]
    for f in facet_idx:
        for i in f:
            containing[i].append(f)
    for i in range(m):
        if not containing[i]:
            raise NonExtremalPointError(f"point {labels[i]} lies in the interior of the hull")
        common = frozenset.intersection(*containing[i])
        if common != {i}:
            raise NonExtremalPointError(f"point {labels[i]} is not a vertex of the hull")
    edges = set()
    for i, j in combinations(range(m), 2):
        shared = [f for f in containing[i] if j in f]
        if shared and frozenset.intersection(*shared) == {i, j}:
            edges.add(frozenset((labels[i], labels[j])))
    key = lambda s: sorted(map(vertex_key, s))  # noqa: E731
    facets = tuple(sorted((frozenset(labels[i] for i in f) for f in facet_idx), key=key))
    return FaceLattice(config.d, facets, tuple(sorted(edges, key=key)), tuple(normals))


def _check_full_dimensional(config: PointConfiguration) -> list[tuple[int, ...]]:
    hom = config.homogeneous()
    if rank(hom) != config.d + 1:
        raise DegenerateConfigurationError("points do not affinely span R^d")
    return hom


def convex_hull(config: PointConfiguration) -> FaceLattice:
    """Facets by exhaustive enumeration of ``d``-subsets with exact side tests."""
    hom = _check_full_dimensional(config)
    d, m = config.d, len(hom)
    found: dict[frozenset, tuple[int, ...]] = {}
    for sub in combinations(range(m), d):
        if any(set(sub) <= f for f in found):
            continue
        phi = _cofactors([hom[i] for i in sub])
        if not any(phi):
            continue
        vals = [sum(a * b for a, b in zip(phi, h)) for h in hom]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            face = frozenset(j for j, v in enumerate(vals) if v == 0)
            if all(v <= 0 for v in vals):
                phi = tuple(-a for a in phi)
            found.setdefault(face, phi)
    return _finish(config, set(found), found.values())


def convex_hull_dd(config: PointConfiguration) -> FaceLattice:
    """Facets as extreme rays of ``{a : a . (p, 1) >= 0}`` by double description."""
    hom = _check_full_dimensional(config)
    k = config.d + 1
    m = len(hom)
    # Greedy basis of k independent rows.
    basis: list[int] = []
    for i in range(m):
        if rank([hom[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
        if len(basis) == k:
            break
    B = [[Fraction(x) for x in hom[i]] for i in basis]
    # Columns of B^{-1}: ray r_c satisfies B r_c = e_c.
    inv = _inverse(B)
    rays = []
    for c in range(k):
        col = [inv[r][c] for r in range(k)]
        rays.append(_normalize([x for x in col]))
    processed = list(basis)
    zeros = [frozenset(processed[i] for i in range(k) if i != c) for c in range(k)]
    for i in range(m):
        if i in basis:
            continue
        h = hom[i]
        vals = [sum(a * b for a, b in zip(r, h)) for r in rays]
        pos = [t for t, v in enumerate(vals) if v > 0]
        neg = [t for t, v in enumerate(vals) if v < 0]
        zer = [t for t, v in enumerate(vals) if v == 0]
        new_rays = [rays[t] for t in pos + zer]
        new_zeros = [zeros[t] for t in pos] + [zeros[t] | {i} for t in zer]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if len(common) < k - 2:
                    continue
                if any(t not in (p, q) and common <= zeros[t] for t in range(len(rays))):
                    continue
                r = [vals[p] * b - vals[q] * a for a, b in zip(rays[p], rays[q])]
                new_rays.append(_normalize(r))
                new_zeros.append(common | {i})
        rays, zeros = new_rays, new_zeros
        processed.append(i)
    facets = {}
    for r in rays:
        face = frozenset(j for j, h in enumerate(hom) if sum(a * b for a, b in zip(r, h)) == 0)
        facets.setdefault(face, tuple(r))
    return _finish(config, set(facets), facets.values())


def _normalize(vec: Sequence) -> tuple[int, ...]:
    vec = [Fraction(x) for x in vec]
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(M)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(M)]
    for c in range(k):
        piv = next(i for i in range(c, k) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(k):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[k:] for row in aug]


# -- combinatorial isomorphism --------------------------------------------

@dataclass(frozen=True)
class LatticeIsomorphism:
    sigma: dict

    def __getitem__(self, v):
        return self.sigma[v]

    def lines(self) -> list[str]:
        return [f"{v} -> {self.sigma[v]}" for v in sorted(self.sigma, key=vertex_key)]


def _facet_family(obj) -> list[frozenset]:
    if isinstance(obj, BierSphere):
        return list(obj.facet_sets)
    if isinstance(obj, FaceLattice):
        return list(obj.facets)
    return [frozenset(f) for f in obj]


def lattice_isomorphism(source, target, fixed: Mapping | None = None) -> LatticeIsomorphism | None:
    """Vertex bijection mapping the facets of ``source`` exactly onto those of ``target``.

    Both arguments may be a ``BierSphere``, a ``FaceLattice`` or an iterable of
    facets.  ``fixed`` pins part of the bijection.  Returns ``None`` when no
    isomorphism exists.
    """
    src = _facet_family(source)
    dst = _facet_family(target)
    if len(src) != len(dst):
        return None
    sv = sorted(set().union(*src), key=vertex_key) if src else []
    dv = sorted(set().union(*dst), key=vertex_key) if dst else []
    if len(sv) != len(dv):
        return None
    dst_set = set(dst)

    def profile(facets, verts):
        deg = {v: 0 for v in verts}
        adj = {v: set() for v in verts}
        inc = {v: [] for v in verts}
        for f in facets:
            for v in f:
                deg[v] += 1
                inc[v].append(f)
                adj[v].update(f)
        for v in verts:
            adj[v].discard(v)
        return deg, adj, inc

    sdeg, sadj, sinc = profile(src, sv)
    ddeg, dadj, _ = profile(dst, dv)
    if sorted(sdeg.values()) != sorted(ddeg.values()):
        return None
    if sorted(len(f) for f in src) != sorted(len(f) for f in dst):
        return None

    # Breadth-first order keeps each new vertex adjacent to assigned ones.
    order: list = []
    seen: set = set()
    for start in sorted(sv, key=lambda v: (-sdeg[v], vertex_key(v))):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(sadj[v], key=vertex_key):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)

    sigma: dict = {}
    used: set = set()
    if fixed:
        for a, b in fixed.items():
            if a not in sdeg or b not in ddeg or sdeg[a] != ddeg[b] or b in used:
                return None
            sigma[a] = b
            used.add(b)

    def consistent(v, w) -> bool:
        if ddeg[w] != sdeg[v]:
            return False
        for u, x in sigma.items():
            if (u in sadj[v]) != (x in dadj[w]):
                return False
        sigma[v] = w
        try:
            for f in sinc[v]:
                if all(u in sigma for u in f):
                    if frozenset(sigma[u] for u in f) not in dst_set:
                        return False
        finally:
            del sigma[v]
        return True

    todo = [v for v in order if v not in sigma]

    def search(k: int) -> bool:
        if k == len(todo):
            return all(frozenset(sigma[u] for u in f) in dst_set for f in src)
        v = todo[k]
        for w in dv:
            if w in used or not consistent(v, w):
                continue
            sigma[v] = w
            used.add(w)
            if search(k + 1):
                return True
            del sigma[v]
            used.discard(w)
        return False

    if fixed:
        for f in src:
            if all(u in sigma for u in f) and frozenset(sigma[u] for u in f) not in dst_set:
                return None
    if search(0):
        return LatticeIsomorphism(dict(sigma))
    return None


def realizes(config: PointConfiguration, sphere, hull=convex_hull) -> LatticeIsomorphism | None:
    """Exact check that the hull of ``config`` is combinatorially ``sphere``."""
    try:
        fl = hull(config)
    except (DegenerateConfigurationError, NonExtremalPointError):
        return None
    return lattice_isomorphism(sphere, fl)


# -- .real text format ----------------------------------------------------

def format_real(config: PointConfiguration, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    n = config.n if config.n is not None else len(config.labels) // 2
    lines.append(f"n {n} d {config.d}")
    for lab, c in zip(config.labels, config.coords):
        lines.append(" ".join([str(lab)] + [str(x) for x in c]))
    return "\n".join(lines) + "\n"


def parse_real(text: str) -> PointConfiguration:
    n = d = None
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n is None:
            if len(toks) != 4 or toks[0] != "n" or toks[2] != "d":
                raise FormatError("expected header 'n <int> d <int>'", lineno)
            try:
                n, d = int(toks[1]), int(toks[3])
            except ValueError:
                raise FormatError("header sizes must be integers", lineno) from None
            continue
        if len(toks) != d + 1:
            raise FormatError(f"expected a label and {d} coordinates", lineno)
        try:
            lab = BierVertex.parse(toks[0])
        except ValueError:
            raise FormatError(f"bad label {toks[0]!r}", lineno) from None
        try:
            coords = tuple(Fraction(t) for t in toks[1:])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad coordinate in {line!r}", lineno) from None
        pts.append((lab, coords))
    if n is None:
        raise FormatError("missing header 'n <int> d <int>'")
    if len({lab for lab, _ in pts}) != len(pts):
        raise FormatError("duplicate point labels")
    if len(pts) > 2 * n:
        raise FormatError(f"more than 2n={2 * n} points")
    cfg = PointConfiguration.from_points(pts, n=n)
    if not pts:
        return PointConfiguration(d, (), (), n)
    return cfg
