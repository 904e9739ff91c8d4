"""Exact feasibility of homogeneous systems of strict and non-strict linear inequalities.

Every row reads ``a . x > 0`` or ``a . x >= 0``.  ``solve`` uses a dense
phase-1 simplex over ``Fraction`` with Bland's rule; strict rows are replaced by
``a . x >= 1``, which for a homogeneous system preserves feasibility (scale any
solution).  ``fourier_motzkin_feasible`` is an independent, slow oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

GT = ">"
GE = ">="


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    relation: str = GT

    @property
    def strict(self) -> bool:
        return self.relation == GT


@dataclass
class LinearSystem:
    variables: list[str]
    rows: list[Row] = field(default_factory=list)
    homogeneous: bool = True

    def add(self, coeffs: dict[str, object] | Sequence, relation: str = GT) -> None:
        if relation not in (GT, GE):
            raise ValueError(f"unknown relation {relation!r}")
        if isinstance(coeffs, dict):
            vec = [Fraction(0)] * len(self.variables)
            index = {v: i for i, v in enumerate(self.variables)}
            for name, c in coeffs.items():
                vec[index[name]] += Fraction(c)
        else:
            vec = [Fraction(c) for c in coeffs]
            if len(vec) != len(self.variables):
                raise ValueError("row width does not match variable count")
        self.rows.append(Row(tuple(vec), relation))

    def __len__(self) -> int:
        return len(self.rows)

    def row_text(self, row: Row) -> str:
        terms = []
        for c, name in zip(row.coeffs, self.variables):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = name if mag == 1 else f"{mag}*{name}"
            terms.append((sign, body))
        if not terms:
            lhs = "0"
        else:
            lhs = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            lhs += "".join(f" {s} {b}" for s, b in terms[1:])
        return f"{lhs} {row.relation} 0"

    def dump(self) -> str:
        return "\n".join(self.row_text(r) for r in self.rows) + ("\n" if self.rows else "")


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None

    def as_dict(self, variables: Sequence[str]) -> dict[str, Fraction]:
        if self.witness is None:
            return {}
        return dict(zip(variables, self.witness))


def verify(S: LinearSystem, w: Sequence) -> bool:
    if len(w) != len(S.variables):
        raise ValueError(f"witness width {len(w)} != {len(S.variables)} variables")
    w = [Fraction(x) for x in w]
    for row in S.rows:
        val = sum((c * x for c, x in zip(row.coeffs, w) if c), Fraction(0))
        if row.strict and not val > 0:
            return False
        if not row.strict and not val >= 0:
            return False
    return True


def _phase_one(rows: list[list[Fraction]], rhs: list[Fraction], nvars: int):
    """Find x >= 0 with ``rows . x >= rhs`` (rhs in {0, 1}) or return None."""
    m = len(rows)
    # Columns: structural (nvars), slack (m), artificial (one per rhs=1 row).
    art_rows = [i for i in range(m) if rhs[i] != 0]
    ncols = nvars + m + len(art_rows)
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    zero = Fraction(0)
    for i in range(m):
        line = [zero] * (ncols + 1)
        if rhs[i] == 0:
            for j, c in enumerate(rows[i]):
                line[j] = -c
            line[nvars + i] = Fraction(1)
            basis.append(nvars + i)
        else:
            for j, c in enumerate(rows[i]):
                line[j] = c
            line[nvars + i] = Fraction(-1)
            k = nvars + m + art_rows.index(i)
            line[k] = Fraction(1)
            line[ncols] = rhs[i]
            basis.append(k)
        tab.append(line)
    # Reduced costs for minimizing the sum of artificials.
    obj = [zero] * (ncols + 1)
    for k in range(nvars + m, ncols):
        obj[k] = Fraction(1)
    for i in art_rows:
        line = tab[i]
        obj = [o - v for o, v in zip(obj, line)]

    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][ncols] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded direction cannot occur for phase 1
            break
        r = best[1]
        prow = tab[r]
        piv = prow[enter]
        if piv != 1:
            prow = [v / piv for v in prow]
            tab[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(m):
            if i == r:
                continue
            f = tab[i][enter]
            if f:
                line = tab[i]
                for j in nz:
                    line[j] -= f * prow[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * prow[j]
        basis[r] = enter
    if -obj[ncols] != 0:
        return None
    x = [zero] * ncols
    for i, b in enumerate(basis):
        x[b] = tab[i][ncols]
    return x[:nvars]


def solve(S: LinearSystem) -> FeasibilityResult:
    if not S.homogeneous:
        raise ValueError("only homogeneous systems are supported")
    nv = len(S.variables)
    if not any(r.strict for r in S.rows):
        return FeasibilityResult(True, tuple(Fraction(0) for _ in range(nv)))
    # Free variables split as x = p - q.
    rows = [list(r.coeffs) + [-c for c in r.coeffs] for r in S.rows]
    rhs = [Fraction(1) if r.strict else Fraction(0) for r in S.rows]
    x = _phase_one(rows, rhs, 2 * nv)
    if x is None:
        return FeasibilityResult(False)
    w = tuple(x[i] - x[nv + i] for i in range(nv))
    assert verify(S, w), "simplex witness failed exact verification"
    return FeasibilityResult(True, w)


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    den = lcm(*(c.denominator for c in vec)) if vec else 1
    ints = [int(c * den) for c in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def fourier_motzkin_feasible(S: LinearSystem) -> bool:
    """Decide feasibility by Fourier-Motzkin elimination with Chernikov pruning.

    Strict rows ``a . x > 0`` become ``a . x - t >= 0`` with one extra
    variable ``t``; the system is feasible iff the projection onto ``t``
    allows ``t > 0``.  Every row is then non-strict, which is what keeps the
    history-size pruning sound.
    """
    nv = len(S.variables)
    current: dict[tuple[int, ...], frozenset] = {}

    def insert(store, vec, hist):
        if not any(vec):
            return
        old = store.get(vec)
        if old is None or len(hist) < len(old):
            store[vec] = hist

    for i, r in enumerate(S.rows):
        t = -1 if r.strict else 0
        insert(current, _primitive(list(r.coeffs) + [Fraction(t)]), frozenset([i]))
    remaining = list(range(nv))
    eliminated = 0
    while remaining:
        def cost(k):
            pos = sum(1 for v in current if v[k] > 0)
            neg = sum(1 for v in current if v[k] < 0)
            return pos * neg - pos - neg
        k = min(remaining, key=cost)
        remaining.remove(k)
        eliminated += 1
        nxt: dict[tuple[int, ...], frozenset] = {}
        pos, neg = [], []
        for vec, hist in current.items():
            if vec[k] > 0:
                pos.append((vec, hist))
            elif vec[k] < 0:
                neg.append((vec, hist))
            else:
                insert(nxt, vec, hist)
        for pv, ph in pos:
            for nv_, nh in neg:
                hist = ph | nh
                if len(hist) > eliminated + 1:
                    continue
                a, b = -nv_[k], pv[k]
                vec = tuple(a * x + b * y for x, y in zip(pv, nv_))
                g = 0
                for v in vec:
                    g = gcd(g, v)
                if g > 1:
                    vec = tuple(v // g for v in vec)
                insert(nxt, vec, hist)
        current = nxt
    # only multiples of t remain: c t >= 0 with c < 0 rules out t > 0
    return all(vec[nv] > 0 for vec in current)
