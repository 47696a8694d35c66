"""Command line front end.

    s1resolve expand --r 7 --a 3
    s1resolve atlas5 --r 7 --a 3 -o atlas5.json
    s1resolve atlas4 --r 7 --a 3
    s1resolve verify --r 7 --a 3 --seed 42 [--format markdown]
    s1resolve report --r 7 --a 3            # verify, markdown by default

Exit codes: 0 pass, 1 verification failure, 2 invalid input.
Data goes to stdout (or ``--output``), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import hjarith
from .hjarith import InvalidFiberTypeError
from .resolve4d import build_atlas4
from .resolve5d import NothingToResolveError, build_atlas5
from .serialize import canonical_json
from .verifykit import CheckConfig, run_suite

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

DEFAULTS = {"seed": 0, "samples": 1000, "group_samples": 100, "tol": 1e-9}
CONFIG_KEYS = {"seed": int, "samples": int, "group_samples": int, "tol": float, "format": str}


def load_config(path: str) -> dict:
    """Read ``seed``/``samples``/``group_samples``/``tol``/``format`` from TOML or INI."""
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".toml":
        data = tomllib.loads(text)
        data = data.get("s1resolve", data)
    else:
        cp = configparser.ConfigParser()
        cp.read_string(text)
        section = "s1resolve" if cp.has_section("s1resolve") else cp.default_section
        data = dict(cp[section])
    out = {}
    for key, value in data.items():
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r} in {path}")
        out[key] = CONFIG_KEYS[key](value)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, required=True, help="order of the stabilizer Z_r")
    common.add_argument("--a", type=int, required=True, help="second rotation weight")
    common.add_argument("-o", "--output", help="write data here instead of stdout")
    common.add_argument("--config", help="TOML or INI file with defaults")

    checks = argparse.ArgumentParser(add_help=False)
    checks.add_argument("--format", choices=("json", "markdown"))
    checks.add_argument("--seed", type=int)
    checks.add_argument("--samples", type=int, help="points per check")
    checks.add_argument("--group-samples", type=int, help="circle elements per equivariance check")
    checks.add_argument("--tol", type=float)

    parser = argparse.ArgumentParser(prog="s1resolve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("expand", parents=[common], help="continued fraction and remainders")
    sub.add_parser("atlas5", parents=[common], help="5-dimensional equivariant atlas as JSON")
    sub.add_parser("atlas4", parents=[common], help="Reid's 4-dimensional atlas as JSON")
    sub.add_parser("verify", parents=[common, checks], help="run the verification suite")
    sub.add_parser("report", parents=[common, checks], help="verification suite, markdown output")
    return parser


def _settings(args) -> dict:
    merged = dict(DEFAULTS)
    merged["format"] = "markdown" if args.command == "report" else "json"
    if args.config:
        merged.update(load_config(args.config))
    for key in ("seed", "samples", "group_samples", "tol", "format"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_PASS

    try:
        fiber = hjarith.canonicalize(args.r, args.a)
        settings = _settings(args)
        if args.command == "expand":
            if fiber.is_regular:
                _emit("[] remainders 1 (regular fiber, length 0)\n", args.output)
            else:
                _emit(f"{hjarith.hj_expand(fiber)}\n", args.output)
            return EXIT_PASS
        if args.command == "atlas5":
            _emit(canonical_json(build_atlas5(fiber).to_json()), args.output)
            return EXIT_PASS
        if args.command == "atlas4":
            _emit(canonical_json(build_atlas4(fiber).to_json()), args.output)
            return EXIT_PASS
        cfg = CheckConfig(seed=settings["seed"], samples_per_check=settings["samples"],
                          group_samples=settings["group_samples"], tol=settings["tol"])
    except (InvalidFiberTypeError, NothingToResolveError, ValueError, OSError) as exc:
        print(f"s1resolve: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    report = run_suite(fiber, cfg)
    if settings["format"] == "markdown":
        _emit(report.to_markdown(), args.output)
    else:
        _emit(canonical_json(report.to_json()), args.output)
    verdict = "pass" if report.passed else f"FAIL ({len(report.failures())} checks)"
    print(f"s1resolve: {fiber}: {verdict}", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def entry() -> None:
    sys.exit(main())
