"""Command-line interface: ``bierpoly <command> ...``.

Exit status: 0 on success, 1 when a verification or realization fails,
2 on usage errors and malformed input files.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .bier import bier_sphere, format_bier, parse_bier
from .classify import classify_game
from .complex import FormatError, alexander_dual, format_cmplx, parse_cmplx
from .geom import (
    DegenerateConfigurationError,
    NonExtremalPointError,
    convex_hull,
    format_real,
    lattice_isomorphism,
    parse_real,
)
from .realize import DEFAULT_MAX_DENOMINATOR, DEFAULT_RESTARTS, realize_bier
from .survey import survey

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    max_denominator: int = DEFAULT_MAX_DENOMINATOR
    jobs: int = 1
    n: int | None = None
    ambient: int | None = None
    sphere: str | None = None
    points: str | None = None
    log: str | None = None


def _read(path: str | None) -> tuple[str, str]:
    if path is None or path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        return Path(path).read_text(), path
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse(parser, path):
    text, name = _read(path)
    try:
        return parser(text)
    except FormatError as exc:
        where = f"{name}:{exc.line}" if exc.line else name
        raise UsageError(f"{where}: {exc.message}") from None


def _complex(cfg: RunConfig):
    K = _parse(parse_cmplx, cfg.input)
    if not K.is_proper:
        raise UsageError("complex contains the full ground set (not proper)")
    return K


def cmd_dual(cfg: RunConfig) -> int:
    _write(cfg.output, format_cmplx(alexander_dual(_complex(cfg))))
    return EXIT_OK


def cmd_sphere(cfg: RunConfig) -> int:
    K = _complex(cfg)
    try:
        B = bier_sphere(K)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(cfg.output, format_bier(B))
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    _write(cfg.output, classify_game(_complex(cfg)).dumps() + "\n")
    return EXIT_OK


def cmd_realize(cfg: RunConfig) -> int:
    K = _complex(cfg)
    try:
        res = realize_bier(K, seed=cfg.seed, restarts=cfg.restarts, max_denominator=cfg.max_denominator)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log_path = cfg.log
    if log_path is None and cfg.output not in (None, "-"):
        log_path = str(Path(cfg.output).with_suffix(".log.json"))
    if log_path is not None:
        Path(log_path).write_text(json.dumps(res.log_json(), indent=1) + "\n")
    if not res.ok:
        print(f"realization failed: {json.dumps(res.failure)}", file=sys.stderr)
        return EXIT_FAILED
    _write(cfg.output, format_real(res.config))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.sphere is None or cfg.points is None:
        raise UsageError("verify needs --sphere and --points")
    B = _parse(parse_bier, cfg.sphere)
    P = _parse(parse_real, cfg.points)
    try:
        iso = lattice_isomorphism(B, convex_hull(P))
    except (DegenerateConfigurationError, NonExtremalPointError) as exc:
        print(f"NOT ISOMORPHIC ({exc})")
        return EXIT_FAILED
    if iso is None:
        print("NOT ISOMORPHIC")
        return EXIT_FAILED
    print("\n".join(iso.lines()))
    return EXIT_OK


def cmd_survey(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise UsageError("survey needs -n")
    try:
        rep = survey(
            cfg.n, ambient=cfg.ambient, seed=cfg.seed, out_dir=cfg.output, jobs=cfg.jobs,
            restarts=cfg.restarts, max_denominator=cfg.max_denominator,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(json.dumps(rep.to_json()["counts"]))
    return EXIT_OK if rep.failed == 0 else EXIT_FAILED


COMMANDS = {
    "dual": cmd_dual,
    "sphere": cmd_sphere,
    "classify": cmd_classify,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "survey": cmd_survey,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bierpoly", description="Bier spheres, weighted games and polytopal realizations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def io(sp, out_help="output file (default: stdout)"):
        sp.add_argument("--in", dest="input", help="input .cmplx file (default: stdin)")
        sp.add_argument("--out", dest="output", help=out_help)

    def search(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="translations tried per step")
        sp.add_argument("--max-denominator", type=int, default=DEFAULT_MAX_DENOMINATOR)

    io(sub.add_parser("dual", help="write the Alexander dual"))
    io(sub.add_parser("sphere", help="write the Bier sphere (.bier)"))
    io(sub.add_parser("classify", help="weighted / roughly-weighted / neither, as JSON"))
    sp = sub.add_parser("realize", help="convex realization (.real) plus JSON step log")
    io(sp, "output .real file (log goes next to it as .log.json)")
    sp.add_argument("--log", help="step log path")
    search(sp)
    sp = sub.add_parser("verify", help="check that a point set realizes a sphere")
    sp.add_argument("--sphere", required=True)
    sp.add_argument("--points", required=True)
    sp = sub.add_parser("survey", help="census of all complexes on [n]")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--ambient", type=int)
    sp.add_argument("--out", dest="output", help="report directory")
    sp.add_argument("--jobs", type=int, default=1)
    search(sp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    try:
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"bierpoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
