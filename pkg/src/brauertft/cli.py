"""Command-line front end: ``brauertft <command> [options]``.

Global options fall back to ``BRAUERTFT_TRUNC``, ``BRAUERTFT_KEYING``,
``BRAUERTFT_DUALITY``, ``BRAUERTFT_FORMAT`` and ``BRAUERTFT_SEED``.
Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import brauer, funmod, qsemiring, rep, tft
from .brauer import BrauerMorphism
from .qsemiring import DEFAULT_TRUNC
from .report import Report

ENV_PREFIX = "BRAUERTFT_"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    trunc: int = DEFAULT_TRUNC
    keying: str = "diagram"
    duality: str = "example"
    format: str = "text"
    seed: int = 0

    def structure(self) -> rep.DualityStructure:
        if self.duality == "example":
            return rep.example_structure()
        try:
            with open(self.duality, encoding="utf-8") as fh:
                return rep.parse_duality(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read duality file: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"invalid duality file: {exc}") from None


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name, default)


def _build_config(args: argparse.Namespace) -> Config:
    try:
        trunc = int(args.trunc if args.trunc is not None else _env("TRUNC", DEFAULT_TRUNC))
        seed = int(args.seed if args.seed is not None else _env("SEED", 0))
    except ValueError:
        raise UsageError("--trunc and --seed must be integers") from None
    if trunc < 8:
        raise UsageError("--trunc must be at least 8")
    keying = args.keying or _env("KEYING", "diagram")
    fmt = args.format or _env("FORMAT", "text")
    if keying not in ("diagram", "matrix"):
        raise UsageError("--keying must be diagram or matrix")
    if fmt not in ("text", "structured"):
        raise UsageError("--format must be text or structured")
    return Config(trunc, keying, args.duality or _env("DUALITY", "example"), fmt, seed)


_ALIAS = re.compile(r"^(e|i|b|id|loop)(\d*)$")


def parse_morphism(text: str) -> BrauerMorphism:
    """A text encoding, or one of the aliases ``eN``, ``iN``, ``bMN``, ``idN``, ``loop``."""
    m = _ALIAS.match(text)
    if m:
        name, num = m.groups()
        if name == "loop" and not num:
            return brauer.loop()
        if name == "e" and num:
            return brauer.counit(int(num))
        if name == "i" and num:
            return brauer.unit(int(num))
        if name == "id" and num:
            return brauer.identity(int(num))
        if name == "b" and len(num) == 2:
            return brauer.braiding(int(num[0]), int(num[1]))
    return BrauerMorphism.from_text(text)


def _emit(cfg: Config, text: str, data) -> None:
    if cfg.format == "structured":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)


def _emit_report(cfg: Config, report: Report) -> int:
    _emit(cfg, report.to_text(), report.to_dict())
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(cfg: Config, args) -> int:
    m, n = args.m, args.n
    if m < 0 or n < 0:
        raise UsageError("m and n must be non-negative")
    if (m + n) % 2:
        raise UsageError(f"no morphisms [{m}] -> [{n}]: m + n is odd")
    if m + n > 16:
        raise UsageError("m + n above 16 is too large to list")
    items = brauer.enumerate_loop_free(m, n)
    text = "\n".join([f.to_text() for f in items] + [f"count={len(items)}"])
    _emit(cfg, text, {"m": m, "n": n, "count": len(items), "morphisms": [f.to_dict() for f in items]})
    return 0


def cmd_matrix(cfg: Config, args) -> int:
    try:
        f = parse_morphism(args.morphism)
    except ValueError as exc:
        raise UsageError(f"cannot parse morphism: {exc}") from None
    D = cfg.structure()
    try:
        y = rep.rep(D, f)
    except rep.MatrixTooLarge as exc:
        raise UsageError(str(exc)) from None
    text = "\n".join(" ".join(str(x) for x in row) for row in y.entries)
    _emit(cfg, text, y.to_dict())
    return 0


def _verify_relations(cfg: Config) -> Report:
    report = Report("presentation relations")
    report.extend(brauer.verify_relations(), "diagram: ")
    report.extend(rep.verify_relation_images(cfg.structure()), "matrix: ")
    return report


def _verify_semiring(cfg: Config) -> Report:
    rng = random.Random(cfg.seed)
    D = cfg.structure() if cfg.keying == "matrix" else None
    return qsemiring.verify_laws(rng, 100, cfg.trunc, D)


def _verify_gluing(cfg: Config) -> Report:
    rng = random.Random(cfg.seed)
    reports = [tft.verify_gluing(*tft.random_gluable_pair(rng), cfg.trunc) for _ in range(20)]
    return tft.combined_report(f"gluing law (seed={cfg.seed}, 20 pairs)", reports)


def _verify_disjoint(cfg: Config) -> Report:
    rng = random.Random(cfg.seed)
    reports = [tft.verify_disjoint(*tft.random_disjoint_pair(rng), cfg.trunc) for _ in range(20)]
    return tft.combined_report(f"disjoint union law (seed={cfg.seed}, 20 pairs)", reports)


def _verify_rationality(cfg: Config) -> Report:
    rng = random.Random(cfg.seed)
    depth = max(0, min(20, (cfg.trunc - 4) // 2))
    W, _ = tft.random_gluable_pair(rng, max_keys=3, max_fields=10)
    return tft.verify_rationality(W, depth, cfg.trunc)


def _verify_tensor_iso(cfg: Config) -> Report:
    rng = random.Random(cfg.seed)
    report = Report(f"tensor isomorphism (seed={cfg.seed})")
    pool = [qsemiring.q_from_morphism(f, cfg.trunc) for f in brauer.enumerate_morphisms(2, 1)]
    keys = ["x", "y", "z"]
    bad_rt, bad_assoc = 0, 0
    for _ in range(30):
        maps = []
        for _ in range(3):
            values = {(a, b): rng.choice(pool) for a in keys for b in keys if rng.random() < 0.5}
            maps.append(funmod.FunMap([keys, keys], values))
        f, g, h = maps
        for H in maps:
            for semi in (qsemiring.QC, qsemiring.QM):
                bad_rt += not funmod.tensor_beta_roundtrip(H, 1, semi)
        lhs = funmod.contract(funmod.contract(f, g), h)
        rhs = funmod.contract(f, funmod.contract(g, h))
        bad_assoc += lhs != rhs
    report.add("alpha(beta(H)) == H", bad_rt == 0, f"{bad_rt} failures" if bad_rt else "")
    report.add("contraction associativity", bad_assoc == 0, f"{bad_assoc} failures" if bad_assoc else "")
    return report


VERIFIERS = {
    "relations": _verify_relations,
    "semiring": _verify_semiring,
    "gluing": _verify_gluing,
    "disjoint": _verify_disjoint,
    "rationality": _verify_rationality,
    "tensor-iso": _verify_tensor_iso,
}


def cmd_verify(cfg: Config, args) -> int:
    return _emit_report(cfg, VERIFIERS[args.which](cfg))


def cmd_exotic_demo(cfg: Config, args) -> int:
    report = tft.exotic_demo(cfg.seed, cfg.trunc, cfg.structure())
    verdict = "distinct" if report.ok else "undecided"
    if cfg.format == "structured":
        data = report.to_dict()
        data["verdict"] = verdict
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(report.to_text())
        print(f"verdict: {verdict}")
    return 0 if report.ok else 1


def cmd_statesum(cfg: Config, args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            W = tft.DiscreteCobordism.from_text(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read scenario file: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"invalid scenario file: {exc}") from None
    D = cfg.structure() if cfg.keying == "matrix" else None
    z = tft.state_sum(W, cfg.trunc, D)
    _emit(cfg, z.to_text(), z.to_dict())
    return 0


def _add_globals(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--trunc", type=int, default=default, help="truncation degree N (>= 8)")
    p.add_argument("--keying", choices=["diagram", "matrix"], default=default)
    p.add_argument("--duality", default=default, help="duality file, or 'example'")
    p.add_argument("--format", choices=["text", "structured"], default=default)
    p.add_argument("--seed", type=int, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brauertft", description=__doc__.splitlines()[0])
    _add_globals(parser, None)
    # the same options are accepted after the subcommand; SUPPRESS keeps
    # the subparser from overwriting values given before it
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list loop-free morphisms [m] -> [n]")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("matrix", parents=[common], help="matrix of a morphism under a duality structure")
    p.add_argument("morphism", help="text encoding, or e1/i1/b11/loop/idN")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("which", choices=sorted(VERIFIERS))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exotic-demo", parents=[common], help="compare the two model sphere aggregates")
    p.set_defaults(func=cmd_exotic_demo)

    p = sub.add_parser("statesum", parents=[common], help="state sum of a scenario file")
    p.add_argument("file")
    p.set_defaults(func=cmd_statesum)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = _build_config(args)
        return args.func(cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
