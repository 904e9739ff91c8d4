"""Weightedness and rough weightedness of simple games via wall-crossing systems."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bier import BierVertex, RidgeKind, bier_sphere, ridges
from .complex import (
    SimplicialComplex,
    is_rough_pair,
    is_threshold_pair,
    members,
    require_ok,
)
from .linfeas import GE, GT, LinearSystem, solve, verify

STRICT = "strict"
NONSTRICT = "nonstrict"

WEIGHTED = "weighted"
ROUGH = "roughly-weighted"
NEITHER = "neither"


def _check_mode(mode: str) -> None:
    if mode not in (STRICT, NONSTRICT):
        raise ValueError(f"mode must be {STRICT!r} or {NONSTRICT!r}, got {mode!r}")


@dataclass(frozen=True)
class WeightCertificate:
    weights: tuple[Fraction, ...]
    quota: Fraction

    def to_json(self, tag: str) -> dict:
        return {
            "tag": tag,
            "weights": [str(w) for w in self.weights],
            "quota": str(self.quota),
        }


@dataclass(frozen=True)
class GameClass:
    tag: str
    certificate: WeightCertificate | None = None

    def to_json(self) -> dict:
        if self.certificate is None:
            return {"tag": self.tag, "weights": None, "quota": None}
        return self.certificate.to_json(self.tag)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class KSubmodularFunction:
    """Values on Bier vertices: ``x[i-1] = f(i)``, ``y[i-1] = f(i~)``."""

    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]

    def __getitem__(self, v: BierVertex) -> Fraction:
        return (self.y if v.barred else self.x)[v.index - 1]

    def vector(self) -> list[Fraction]:
        return list(self.x) + list(self.y)


def ridge_system(K: SimplicialComplex, mode: str = STRICT) -> LinearSystem:
    """One row per ridge of Bier(K) over ``x_1..x_n, y_1..y_n``."""
    _check_mode(mode)
    require_ok(K)
    n = K.n
    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    S = LinearSystem(names)
    rel = GT if mode == STRICT else GE
    for r in ridges(bier_sphere(K)):
        x1, x2 = members(r.X1), members(r.X2)
        row: dict[str, int] = {}

        def bump(name, c):
            row[name] = row.get(name, 0) + c

        if r.kind is RidgeKind.LAMBDA:
            bump(f"x{r.c1}", 1)
            bump(f"x{r.c2}", 1)
            for i in x1:
                bump(f"x{i}", 1)
            for j in x2:
                bump(f"y{j}", -1)
            S.add(row, rel)
        elif r.kind is RidgeKind.V:
            bump(f"y{r.c1}", 1)
            bump(f"y{r.c2}", 1)
            for j in x2:
                bump(f"y{j}", 1)
            for i in x1:
                bump(f"x{i}", -1)
            S.add(row, rel)
        elif mode == STRICT:
            S.add({f"x{r.c2}": 1, f"y{r.c2}": 1}, GT)
        else:
            S.add({f"x{r.c2}": 1}, GT)
            S.add({f"y{r.c2}": 1}, GT)
    return S


def reduced_system(K: SimplicialComplex, mode: str = STRICT) -> LinearSystem:
    """Weights ``z_1..z_n`` and quota ``Q`` separating faces from non-faces."""
    _check_mode(mode)
    require_ok(K)
    n = K.n
    names = [f"z{i}" for i in range(1, n + 1)] + ["Q"]
    S = LinearSystem(names)
    rel = GT if mode == STRICT else GE
    for s in K.min_nonfaces:
        row = {f"z{i}": 1 for i in members(s)}
        row["Q"] = -1
        S.add(row, rel)
    for t in K.facets:
        row = {f"z{i}": -1 for i in members(t)}
        row["Q"] = 1
        S.add(row, rel)
    for i in range(1, n + 1):
        S.add({f"z{i}": 1}, GT)
    return S


def _normalized(witness: Sequence[Fraction], n: int) -> WeightCertificate:
    z = list(witness[:n])
    total = sum(z, Fraction(0))
    return WeightCertificate(tuple(v / total for v in z), witness[n] / total)


def is_threshold(K: SimplicialComplex) -> bool:
    return solve(reduced_system(K, STRICT)).feasible


def threshold_certificate(K: SimplicialComplex) -> WeightCertificate | None:
    res = solve(reduced_system(K, STRICT))
    if not res.feasible:
        return None
    cert = _normalized(res.witness, K.n)
    if not is_threshold_pair(K, cert.weights, cert.quota):
        raise AssertionError("LP threshold certificate failed the definition check")
    return cert


def classify_game(K: SimplicialComplex) -> GameClass:
    require_ok(K)
    cert = threshold_certificate(K)
    if cert is not None:
        return GameClass(WEIGHTED, cert)
    res = solve(reduced_system(K, NONSTRICT))
    if not res.feasible:
        return GameClass(NEITHER)
    cert = _normalized(res.witness, K.n)
    if not is_rough_pair(K, cert.weights, cert.quota):
        raise AssertionError("LP rough certificate failed the definition check")
    return GameClass(ROUGH, cert)


def submodular_from_weights(
    cert: WeightCertificate,
    mode: str = NONSTRICT,
    K: SimplicialComplex | None = None,
) -> KSubmodularFunction:
    """``f(i) = (1 - q) w_i``, ``f(i~) = q w_i`` for a certificate with ``w([n]) = 1``."""
    _check_mode(mode)
    w, q = cert.weights, cert.quota
    if sum(w, Fraction(0)) != 1:
        raise ValueError("certificate must be normalized to total weight 1")
    if not 0 < q < 1:
        raise ValueError(f"quota {q} outside (0, 1)")
    if any(v <= 0 for v in w):
        raise ValueError("weights must be strictly positive")
    if K is not None:
        ok = is_threshold_pair if mode == STRICT else is_rough_pair
        if not ok(K, w, q):
            raise ValueError("certificate is not valid for this complex")
    return KSubmodularFunction(
        tuple((1 - q) * v for v in w), tuple(q * v for v in w)
    )


def check_submodular(K: SimplicialComplex, f: KSubmodularFunction, mode: str = STRICT) -> bool:
    return verify(ridge_system(K, mode), f.vector())
