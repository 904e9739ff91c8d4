"""Census of complexes on a small ground set: classify, collapse Bier spheres, realize."""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .bier import bier_sphere, format_bier, sphere_canonical_form
from .classify import WEIGHTED, classify_game
from .complex import SimplicialComplex, canonical_form, format_cmplx, from_faces, members
from .geom import format_real
from .realize import DEFAULT_MAX_DENOMINATOR, DEFAULT_RESTARTS, realize_bier

log = logging.getLogger(__name__)

MAX_SURVEY_N = 6


def _addable(faces: frozenset, n: int) -> list[int]:
    """Non-faces all of whose facets are faces (excluding the full set)."""
    full = (1 << n) - 1
    out = []
    for m in range(1, full):
        if m in faces:
            continue
        if all((m & ~(1 << i)) in faces for i in range(n) if m >> i & 1):
            out.append(m)
    return out


def enumerate_complexes(n: int, ambient: int | None = None) -> list[SimplicialComplex]:
    """Proper complexes on [n] containing every singleton, one per isomorphism class.

    Classes are grown one face at a time from the vertex set; each layer is
    deduplicated by canonical form, so every class is reached from some
    representative of the previous layer.  Order: by face count, then by
    canonical form.
    """
    if not 1 <= n <= MAX_SURVEY_N:
        raise ValueError(f"exhaustive enumeration supports 1 <= n <= {MAX_SURVEY_N}, got {n}")
    start = frozenset([0] + [1 << i for i in range(n)])
    layer = {canonical_form(from_faces(n, start)): start}
    out: list[SimplicialComplex] = []
    while layer:
        keys = sorted(layer)
        out.extend(from_faces(n, layer[k]) for k in keys)
        nxt: dict[bytes, frozenset] = {}
        for k in keys:
            faces = layer[k]
            for m in _addable(faces, n):
                child = faces | {m}
                K = from_faces(n, child)
                c = canonical_form(K)
                if c not in nxt:
                    nxt[c] = child
        layer = nxt
    if ambient is not None and ambient != n:
        out = [embed(K, ambient) for K in out]
    return out


def embed(K: SimplicialComplex, ambient: int) -> SimplicialComplex:
    """Place K in ``[ambient]``: each new element e turns K into ``2^[e-1] + (K * e)``.

    The new element is a vertex (never a ghost) and, since ``[e-1]`` becomes a
    face, its barred copy is absent from the Bier sphere.
    """
    if ambient < K.n:
        raise ValueError(f"ambient {ambient} smaller than n={K.n}")
    while K.n < ambient:
        n = K.n
        bit = 1 << n
        faces = set(range(1 << n)) | {a | bit for a in K.faces}
        K = from_faces(n + 1, faces)
    return K


@dataclass
class SurveyReport:
    n: int
    ambient: int
    seed: int
    total: int = 0
    threshold: int = 0
    non_threshold: int = 0
    distinct_spheres: int = 0
    realized: int = 0
    failed: int = 0
    vertex_counts: dict = field(default_factory=dict)
    sphere_classes: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ambient": self.ambient,
            "seed": self.seed,
            "counts": {
                "total": self.total,
                "threshold": self.threshold,
                "non_threshold": self.non_threshold,
                "distinct_spheres": self.distinct_spheres,
                "realized": self.realized,
                "failed": self.failed,
            },
            "sphere_vertex_counts": {str(k): v for k, v in sorted(self.vertex_counts.items())},
            "sphere_classes": self.sphere_classes,
            "artifacts": self.artifacts,
            "seconds": round(self.seconds, 3),
        }


def _realize_job(args):
    K, seed, restarts, max_denominator = args
    return realize_bier(K, seed=seed, restarts=restarts, max_denominator=max_denominator)


def survey(
    n: int,
    ambient: int | None = None,
    seed: int = 0,
    out_dir: str | Path | None = None,
    jobs: int = 1,
    restarts: int = DEFAULT_RESTARTS,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> SurveyReport:
    ambient = n if ambient is None else ambient
    if ambient < n:
        raise ValueError("ambient must be at least n")
    t0 = time.perf_counter()
    report = SurveyReport(n, ambient, seed)
    classes = enumerate_complexes(n)
    report.total = len(classes)
    groups: dict[bytes, list[int]] = {}
    embedded: dict[int, SimplicialComplex] = {}
    for idx, K in enumerate(classes):
        if classify_game(K).tag == WEIGHTED:
            report.threshold += 1
            continue
        report.non_threshold += 1
        E = embed(K, ambient)
        embedded[idx] = E
        groups.setdefault(sphere_canonical_form(bier_sphere(E).facet_sets), []).append(idx)
    report.distinct_spheres = len(groups)
    reps = [members_[0] for members_ in groups.values()]
    reps.sort()

    work = [(embedded[i], seed + i, restarts, max_denominator) for i in reps]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_realize_job, work))
    else:
        results = [_realize_job(w) for w in work]

    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        for sub in ("complexes", "spheres", "realizations", "logs"):
            (out / sub).mkdir(parents=True, exist_ok=True)
    for k, (idx, res) in enumerate(zip(reps, results)):
        E = embedded[idx]
        B = bier_sphere(E)
        nv = len(B.vertices)
        report.vertex_counts[nv] = report.vertex_counts.get(nv, 0) + 1
        if res.ok:
            report.realized += 1
        else:
            report.failed += 1
        name = f"s{k + 1:03d}"
        entry = {
            "name": name,
            "complex_index": idx,
            "members": groups_for(groups, idx),
            "facets": [list(members(f)) for f in E.facets],
            "vertices": nv,
            "realized": res.ok,
        }
        report.sphere_classes.append(entry)
        if out is not None:
            (out / "complexes" / f"{name}.cmplx").write_text(format_cmplx(E))
            (out / "spheres" / f"{name}.bier").write_text(format_bier(B))
            (out / "logs" / f"{name}.json").write_text(json.dumps(res.log_json(), indent=1) + "\n")
            if res.ok:
                (out / "realizations" / f"{name}.real").write_text(format_real(res.config))
    report.seconds = time.perf_counter() - t0
    if out is not None:
        report.artifacts = {
            "complexes": "complexes/",
            "spheres": "spheres/",
            "realizations": "realizations/",
            "logs": "logs/",
        }
        (out / "report.json").write_text(json.dumps(report.to_json(), indent=1) + "\n")
    log.info("survey n=%d ambient=%d: %s", n, ambient, report.to_json()["counts"])
    return report


def groups_for(groups: dict, idx: int) -> list[int]:
    for g in groups.values():
        if idx in g:
            return list(g)
    return [idx]
