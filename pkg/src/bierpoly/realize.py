"""Convex realizations of Bier spheres of non-threshold complexes.

Start from the canonical realization of a threshold subcomplex L of K, then add
the missing faces one at a time.  Each addition re-triangulates a disk of the
sphere; the new sphere is realized by scaling the disk vertices along rays from
an interior centre until every facet of the new sphere is a supporting simplex
(all determinant signs positive).  Numeric search proposes multipliers, exact
rational arithmetic decides.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .bier import (
    BierSphere,
    BierVertex,
    bier_sphere,
    orient_facets,
    retriangulate,
)
from .classify import threshold_certificate
from .complex import SimplicialComplex, from_faces, members, popcount, require_ok
from .geom import (
    PointConfiguration,
    convex_hull,
    det,
    lattice_isomorphism,
    threshold_realization,
)

log = logging.getLogger(__name__)

DEFAULT_RESTARTS = 64
DEFAULT_SWEEPS = 200
DEFAULT_MAX_DENOMINATOR = 10**6
MAX_DENOMINATOR_CAP = 10**12
STARTS_PER_TRANSLATION = 2
ORDER_PASSES = 4


# -- multilinear polynomials ----------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Multilinear polynomial: monomial (set of variable names) -> coefficient."""

    terms: tuple[tuple[frozenset, Fraction], ...]

    @classmethod
    def from_dict(cls, d: Mapping[frozenset, Fraction]) -> "Poly":
        items = [(m, Fraction(c)) for m, c in d.items() if c != 0]
        items.sort(key=lambda mc: (len(mc[0]), sorted(mc[0])))
        return cls(tuple(items))

    @property
    def variables(self) -> frozenset:
        return frozenset().union(*(m for m, _ in self.terms)) if self.terms else frozenset()

    def is_constant(self) -> bool:
        return all(not m for m, _ in self.terms)

    def constant(self) -> Fraction:
        return sum((c for m, c in self.terms if not m), Fraction(0))

    def __call__(self, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            p = c
            for v in m:
                p *= values[v]
            total += p
        return total

    def degree_in(self, var: str) -> int:
        return 1 if any(var in m for m, _ in self.terms) else 0

    def divide_monomial(self) -> "Poly":
        """Drop the variables common to every term (all variables are positive)."""
        if not self.terms:
            return self
        common = frozenset.intersection(*(m for m, _ in self.terms))
        if not common:
            return self
        return Poly(tuple((m - common, c) for m, c in self.terms))

    def primitive(self) -> "Poly":
        """Scale by a positive rational to coprime integer coefficients."""
        if not self.terms:
            return self
        den = math.lcm(*(c.denominator for _, c in self.terms))
        ints = [int(c * den) for _, c in self.terms]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        return Poly(tuple((m, Fraction(x // g)) for (m, _), x in zip(self.terms, ints)))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(sorted(self.terms, key=lambda mc: (-len(mc[0]), sorted(mc[0])))):
            mono = "*".join(sorted(m))
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


# -- variation problems ---------------------------------------------------

def variable_name(v: BierVertex) -> str:
    return f"s{v.index}" if v.barred else f"t{v.index}"


@dataclass(frozen=True)
class VariationProblem:
    base: PointConfiguration
    target: tuple[frozenset, ...]
    varied: tuple
    translation: tuple[Fraction, ...] | None = None

    def configuration(self) -> PointConfiguration:
        if self.translation is None:
            return self.base
        return self.base.translated(self.translation)

    def names(self) -> dict:
        return {lab: variable_name(lab) for lab in self.varied}


@dataclass(frozen=True)
class VariationSystem:
    variables: tuple[str, ...]
    polys: tuple[Poly, ...]
    sources: tuple = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.polys)

    def verify(self, values: Mapping[str, Fraction]) -> bool:
        if any(values[v] <= 0 for v in self.variables):
            return False
        return all(p(values) > 0 for p in self.polys)

    def dump(self) -> str:
        return "\n".join(f"{p} > 0" for p in self.polys) + ("\n" if self.polys else "")


@dataclass(frozen=True)
class VariationSolution:
    values: dict

    def multipliers(self, problem: VariationProblem) -> dict:
        names = problem.names()
        return {lab: self.values[names[lab]] for lab in problem.varied}


def _expand(rows: list[tuple[Sequence[Fraction], str | None]]) -> dict:
    """Multilinear expansion of det[(m_k p_k, 1)] with ``m_k`` a name or 1."""
    varied = [k for k, (_, name) in enumerate(rows) if name is not None]
    out: dict = {}

    def build(one_at: int | None):
        mat = []
        for k, (p, name) in enumerate(rows):
            if name is None:
                mat.append(list(p) + [Fraction(1)])
            elif k == one_at:
                mat.append([Fraction(0)] * len(p) + [Fraction(1)])
            else:
                mat.append(list(p) + [Fraction(0)])
        return det(mat)

    names = [rows[k][1] for k in varied]
    if varied:
        c = build(None)
        if c:
            out[frozenset(names)] = out.get(frozenset(names), 0) + c
        for k in varied:
            c = build(k)
            if c:
                mono = frozenset(rows[j][1] for j in varied if j != k)
                out[mono] = out.get(mono, 0) + c
    else:
        out[frozenset()] = build(None)
    return out


def variation_system(p: VariationProblem) -> VariationSystem:
    """One inequality ``[tv_{F*j}] > 0`` per oriented target facet F and vertex j outside F."""
    cfg = p.configuration()
    names = p.names()
    idx = cfg.index
    oriented = orient_facets(p.target)
    raw = []
    base_vals = []
    for facet, sign in oriented:
        for j in cfg.labels:
            if j in facet:
                continue
            seq = list(facet) + [j]
            rows = [(cfg.coords[idx[lab]], names.get(lab)) for lab in seq]
            poly = {m: sign * c for m, c in _expand(rows).items()}
            raw.append((poly, (tuple(facet), j)))
            base_vals.append(sum(poly.values(), Fraction(0)))
    pos = sum(1 for v in base_vals if v > 0)
    neg = sum(1 for v in base_vals if v < 0)
    flip = -1 if neg > pos else 1
    seen = set()
    polys, sources = [], []
    for poly, src in raw:
        P = Poly.from_dict({m: flip * c for m, c in poly.items()}).divide_monomial().primitive()
        if P.is_constant() and P.constant() > 0:
            continue
        if P.terms in seen:
            continue
        seen.add(P.terms)
        polys.append(P)
        sources.append(src)
    variables = tuple(sorted({v for P in polys for v in P.variables}, key=_var_key))
    return VariationSystem(variables, tuple(polys), tuple(sources))


def _var_key(name: str):
    return (name[0] != "t", int(name[1:]) if name[1:].isdigit() else name)


# -- numeric search -------------------------------------------------------

class _NumericSystem:
    """Float view of a system: normalized coefficient rows over its monomials."""

    def __init__(self, sys: VariationSystem):
        self.vars = list(sys.variables)
        vpos = {v: i for i, v in enumerate(self.vars)}
        monos = sorted({m for P in sys.polys for m, _ in P.terms}, key=lambda m: (len(m), sorted(m)))
        mpos = {m: i for i, m in enumerate(monos)}
        C = np.zeros((len(sys.polys), len(monos)))
        for r, P in enumerate(sys.polys):
            for m, c in P.terms:
                C[r, mpos[m]] = float(c)
        norms = np.linalg.norm(C, axis=1)
        norms[norms == 0] = 1.0
        self.C = C / norms[:, None]
        self.mono_vars = [[vpos[v] for v in m] for m in monos]
        self.contains = np.zeros((len(monos), len(self.vars)))
        for j, vs in enumerate(self.mono_vars):
            self.contains[j, vs] = 1.0

    def mono_values(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self.contains @ np.log(x))

    def margins(self, x: np.ndarray) -> np.ndarray:
        return self.C @ self.mono_values(x)

    def log_jacobian(self, x: np.ndarray) -> np.ndarray:
        """d margins / d log x (every monomial is multilinear)."""
        return self.C @ (self.mono_values(x)[:, None] * self.contains)


def _ascend(num: _NumericSystem, u: np.ndarray, lo: float, hi: float, iters: int, target: float):
    """Trust-region sequential LP on ``max min_i margin_i(exp(u))``."""
    nv = len(u)
    radius = 0.5
    m = num.margins(np.exp(u))
    cost = np.r_[np.zeros(nv), -1.0]
    for _ in range(iters):
        if m.min() > target or radius < 1e-9:
            break
        J = num.log_jacobian(np.exp(u))
        A = np.hstack([-J, np.ones((len(m), 1))])
        lower = np.maximum(-radius, lo - u)
        upper = np.minimum(radius, hi - u)
        res = linprog(cost, A_ub=A, b_ub=m, bounds=list(zip(lower, upper)) + [(None, None)], method="highs")
        if res.status != 0:
            break
        step = res.x[:nv]
        predicted = res.x[nv] - m.min()
        trial = num.margins(np.exp(u + step))
        gain = trial.min() - m.min()
        if gain > 0:
            u, m = u + step, trial
            if gain > 0.75 * predicted:
                radius = min(2 * radius, 2.0)
            elif gain < 0.25 * predicted:
                radius /= 2
        else:
            radius /= 2
    return u, float(m.min())


def _rationalize(x: np.ndarray, names: Sequence[str], bound: int) -> dict:
    return {n: Fraction(float(v)).limit_denominator(bound) for n, v in zip(names, x)}


def _denominator_schedule(max_denominator: int):
    d = 10
    while d < max_denominator:
        yield d
        d *= 10
    d = max_denominator
    while d <= MAX_DENOMINATOR_CAP:
        yield d
        d *= 2


def solve_variation(
    sys: VariationSystem,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    sweeps: int = DEFAULT_SWEEPS,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    bounds: tuple[float, float] = (1e-2, 1e2),
) -> VariationSolution | None:
    """Search multipliers satisfying every inequality; exact-verified or ``None``.

    Works in log coordinates (multipliers stay positive) and maximizes the
    smallest normalized row value by a trust-region sequential LP.  Start 0
    is the identity; later starts are seeded random perturbations.  Numeric
    candidates are rationalized with a growing denominator bound and accepted
    only after exact evaluation.  ``sweeps`` bounds the LP iterations per start.
    """
    if not sys.polys:
        return VariationSolution({v: Fraction(1) for v in sys.variables})
    if any(P.is_constant() for P in sys.polys):
        return None  # a constant row <= 0 can never hold
    num = _NumericSystem(sys)
    names = num.vars
    rng = np.random.default_rng(seed)
    lo, hi = math.log(bounds[0]), math.log(bounds[1])
    for attempt in range(restarts):
        u = np.zeros(len(names)) if attempt == 0 else rng.normal(0.0, 0.7, len(names))
        u = np.clip(u, lo, hi)
        u, best = _ascend(num, u, lo, hi, sweeps, 1e-3)
        if best <= 0:
            continue
        x = np.exp(u)
        for bound in _denominator_schedule(max_denominator):
            vals = _rationalize(x, names, bound)
            if sys.verify(vals):
                return VariationSolution(vals)
    return None


# -- threshold seeds ------------------------------------------------------

@dataclass(frozen=True)
class ThresholdSeed:
    L: SimplicialComplex
    mu: tuple[Fraction, ...]
    alpha: Fraction
    added_faces: tuple[int, ...]

    def chain(self) -> list[SimplicialComplex]:
        out = [self.L]
        faces = set(self.L.faces)
        for a in self.added_faces:
            faces.add(a)
            out.append(from_faces(self.L.n, faces))
        return out


def _complete(faces: frozenset, n: int) -> bool:
    """Desirability relation is total (necessary for thresholdness)."""
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            rest = ((1 << n) - 1) & ~(bi | bj)
            i_ge_j = j_ge_i = True
            s = rest
            while True:
                ai, aj = (s | bi) in faces, (s | bj) in faces
                if ai and not aj:
                    j_ge_i = False
                elif aj and not ai:
                    i_ge_j = False
                if not (i_ge_j or j_ge_i):
                    return False
                if s == 0:
                    break
                s = (s - 1) & rest
    return True


def _face_order(mask: int):
    return (-popcount(mask), members(mask))


def maximal_threshold_subcomplex(K: SimplicialComplex, max_removed: int | None = None) -> ThresholdSeed:
    """Threshold subcomplex with all singletons reached by the fewest face removals.

    Breadth-first over removal sets, each step deleting a current facet (top
    dimension first, then lexicographic); the first threshold candidate in
    that order wins, so the result is deterministic.
    """
    require_ok(K)
    if threshold_certificate(K) is not None:
        raise ValueError("complex is already threshold")
    n = K.n
    start = frozenset(K.faces)
    seen = {start}
    level = [start]
    removed_budget = max_removed if max_removed is not None else len(start)
    for depth in range(1, removed_budget + 1):
        nxt = []
        for faces in level:
            cur = from_faces(n, faces)
            for f in sorted(cur.facets, key=_face_order):
                if popcount(f) < 2:
                    continue
                child = faces - {f}
                if child in seen:
                    continue
                seen.add(child)
                nxt.append(child)
                if not _complete(child, n):
                    continue
                L = from_faces(n, child)
                cert = threshold_certificate(L)
                if cert is not None:
                    added = sorted(start - child, key=lambda m: (popcount(m), members(m)))
                    return ThresholdSeed(L, cert.weights, cert.quota, tuple(added))
        level = nxt
        if not level:
            break
    raise AssertionError("no threshold subcomplex containing all vertices found")


# -- pipeline -------------------------------------------------------------

@dataclass
class StepLog:
    step: int
    added_face: tuple[int, ...]
    translation: list[str] | None = None
    multipliers: dict | None = None
    attempts: int = 0
    verified: bool = False
    order_pass: int = 0

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "added_face": list(self.added_face),
            "translation": self.translation,
            "multipliers": self.multipliers,
            "attempts": self.attempts,
            "verified": self.verified,
            "pass": self.order_pass,
        }


@dataclass
class Realization:
    K: SimplicialComplex
    config: PointConfiguration | None
    steps: list[StepLog]
    seed: ThresholdSeed | None = None
    failure: dict | None = None
    isomorphism: dict | None = None

    @property
    def ok(self) -> bool:
        return self.config is not None

    def log_json(self) -> dict:
        out = {
            "complex": [list(members(f)) for f in self.K.facets],
            "n": self.K.n,
            "threshold_seed": None,
            "steps": [s.to_json() for s in self.steps],
            "verified": self.ok,
            "failure": self.failure,
        }
        if self.seed is not None:
            out["threshold_seed"] = {
                "L": [list(members(f)) for f in self.seed.L.facets],
                "mu": [str(m) for m in self.seed.mu],
                "alpha": str(self.seed.alpha),
                "added_faces": [list(members(a)) for a in self.seed.added_faces],
            }
        return out


def _identity_realizes(cfg: PointConfiguration, sphere: BierSphere) -> bool:
    try:
        fl = convex_hull(cfg)
    except ValueError:
        return False
    return set(fl.facets) == set(sphere.facet_sets)


def _interior(point: Sequence[Fraction], normals) -> bool:
    h = list(point) + [Fraction(1)]
    return all(sum(a * b for a, b in zip(nrm, h)) > 0 for nrm in normals)


def _round_vec(v, bound=100) -> tuple[Fraction, ...]:
    return tuple(Fraction(float(x)).limit_denominator(bound) for x in v)


def heuristic_translations(cfg: PointConfiguration, varied: Sequence, normals) -> list[tuple[Fraction, ...]]:
    """Shifts making the varied vertices point roughly the same way from the origin.

    Each shift is a multiple of the mean of the varied points, halved from 1
    while the new origin (old point ``-shift``) is strictly inside the polytope.
    """
    idx = cfg.index
    pts = [cfg.coords[idx[v]] for v in varied if v in idx]
    if not pts:
        return []
    mean = [sum(p[k] for p in pts) / len(pts) for k in range(cfg.d)]
    out = []
    lam = Fraction(1)
    for _ in range(8):
        shift = _round_vec([lam * x for x in mean])
        if shift not in out and _interior([-x for x in shift], normals):
            out.append(shift)
        lam /= 2
    return out


def _random_translation(cfg: PointConfiguration, rng: np.random.Generator, normals) -> tuple[Fraction, ...]:
    """Origin at a random interior point, biased towards vertices (sparse weights)."""
    P = cfg.as_float()
    for _ in range(50):
        w = rng.dirichlet(np.full(len(P), 0.3))
        shift = _round_vec(-(w @ P), 1000)
        if _interior([-x for x in shift], normals):
            return shift
    centroid = [sum(c[k] for c in cfg.coords) / len(cfg.coords) for k in range(cfg.d)]
    return tuple(-x for x in centroid)


def realization_step(
    cfg: PointConfiguration,
    target: BierSphere,
    added: int,
    rng: np.random.Generator,
    restarts: int,
    sweeps: int,
    max_denominator: int,
    heuristics: bool = True,
) -> tuple[PointConfiguration | None, StepLog]:
    """Realize ``target`` by translating ``cfg`` and radially scaling the disk vertices.

    ``restarts`` counts translations tried: the heuristic ones first, then
    seeded random interior points.
    """
    n = target.n
    a_members = set(members(added))
    varied = tuple(
        lab for lab in cfg.labels
        if (not lab.barred and lab.index in a_members) or (lab.barred and lab.index not in a_members)
    )
    normals = convex_hull(cfg).normals
    keep = set(target.vertices)
    heuristic = heuristic_translations(cfg, varied, normals) if heuristics else []
    entry = StepLog(0, members(added))
    for attempt in range(max(1, restarts)):
        if attempt < len(heuristic):
            shift = heuristic[attempt]
        else:
            shift = _random_translation(cfg, rng, normals)
        problem = VariationProblem(cfg, tuple(target.facet_sets), varied, shift)
        system = variation_system(problem)
        sol = solve_variation(
            system, seed=int(rng.integers(2**31)), restarts=STARTS_PER_TRANSLATION,
            sweeps=sweeps, max_denominator=max_denominator,
        )
        entry.attempts = attempt + 1
        if sol is None:
            continue
        mult = {lab: sol.values.get(variable_name(lab), Fraction(1)) for lab in varied}
        new = problem.configuration().scaled(mult)
        pts = [(lab, c) for lab, c in zip(new.labels, new.coords) if lab in keep]
        new = PointConfiguration.from_points(pts, n=n)
        entry.translation = [str(x) for x in shift]
        entry.multipliers = {variable_name(lab): str(v) for lab, v in mult.items()}
        entry.verified = _identity_realizes(new, target)
        if entry.verified:
            return new, entry
    return None, entry


def _face_order_for_pass(faces: tuple[int, ...], p: int, rng: np.random.Generator) -> list[int]:
    """Increasing dimension; ties are kept, reversed or shuffled on passes 0, 1 and later."""
    groups: dict[int, list[int]] = {}
    for a in faces:
        groups.setdefault(popcount(a), []).append(a)
    out: list[int] = []
    for dim in sorted(groups):
        g = groups[dim]
        if p == 1:
            g = g[::-1]
        elif p > 1:
            g = [g[i] for i in rng.permutation(len(g))]
        out.extend(g)
    return out


def realize_bier(
    K: SimplicialComplex,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    sweeps: int = DEFAULT_SWEEPS,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> Realization:
    """Exactly verified convex realization of Bier(K), or a failure report."""
    require_ok(K)
    target = bier_sphere(K)
    cert = threshold_certificate(K)
    if cert is not None:
        cfg = threshold_realization(cert.weights, cert.quota)
        iso = lattice_isomorphism(target, convex_hull(cfg))
        if iso is None:
            raise AssertionError("canonical realization of a threshold complex failed")
        return Realization(K, cfg, [], None, None, {str(k): str(v) for k, v in iso.sigma.items()})
    tseed = maximal_threshold_subcomplex(K)
    start = threshold_realization(tseed.mu, tseed.alpha)
    start_sphere = bier_sphere(tseed.L)
    if not _identity_realizes(start, start_sphere):
        raise AssertionError("canonical realization of the threshold seed failed")
    # a failed chain is retried: later passes reorder faces of equal dimension,
    # and from the third on the heuristic centres are skipped so that every
    # step sees fresh translations
    budget = max(1, restarts)
    failure = None
    steps: list[StepLog] = []
    for p in range(ORDER_PASSES):
        rng = np.random.default_rng([seed, p])
        order = _face_order_for_pass(tseed.added_faces, p, rng)
        cfg, sphere = start, start_sphere
        steps = []
        for k, a in enumerate(order, 1):
            nxt_sphere = retriangulate(sphere, a)
            new, entry = realization_step(
                cfg, nxt_sphere, a, rng, budget, sweeps, max_denominator, heuristics=p < 2,
            )
            entry.step = k
            entry.order_pass = p
            steps.append(entry)
            if new is None:
                failure = {
                    "step": k,
                    "added_face": list(members(a)),
                    "restarts": restarts,
                    "sweeps": sweeps,
                    "passes": p + 1,
                    "note": "search budget exhausted; no claim about polytopality",
                }
                break
            cfg, sphere = new, nxt_sphere
        else:
            failure = None
            break
    if failure is not None:
        log.info("realization of %s stalled at step %d", K, failure["step"])
        return Realization(K, None, steps, tseed, failure)
    iso = lattice_isomorphism(target, convex_hull(cfg))
    if iso is None:
        raise AssertionError("final configuration failed end-to-end verification")
    return Realization(K, cfg, steps, tseed, None, {str(k): str(v) for k, v in iso.sigma.items()})
