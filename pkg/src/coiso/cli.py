"""Command-line front end.

Exit codes: 0 solved or unobstructed, 2 usage error, 3 obstructed (the JSON
``status`` field tells resonance, zero-mode and divergence apart), 4 precision
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .arithmetic import (
    AlphaSpec,
    DecimalAlpha,
    LiouvilleSeries,
    QuadraticIrrational,
    Rational,
    classify,
)
from .errors import ArgumentError, CoisoError, PrecisionError
from .foliation import Connection, FoliatedForm
from .fourier import RadialGrid
from .haefliger import coboundary_test, regular_cover_reduce
from .obstruction import first_obstruction, mc_continue
from .sampling import random_closed_one_form
from .solver import witness_liouville, witness_rational

SCHEMA = "coiso/1"
OUTPUT_ENV = "COISO_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_OBSTRUCTED, EXIT_PRECISION = 0, 2, 3, 4


@dataclass
class RunConfig:
    alpha: AlphaSpec
    truncation: int = 64
    nodes: int = 128
    tol: float = 1e-10
    order: int = 4
    output_dir: Path | None = None
    seed: int = 0

    def __post_init__(self):
        if self.truncation < 8 or self.nodes < 8:
            raise ArgumentError("truncation and radial nodes must be at least 8")
        if self.tol <= 0:
            raise ArgumentError("tolerance must be positive")

    @property
    def grid(self) -> RadialGrid:
        return RadialGrid(n=self.nodes)


def parse_alpha(ns: argparse.Namespace) -> AlphaSpec:
    if ns.rational is not None:
        try:
            frac = Fraction(ns.rational)
        except (ValueError, ZeroDivisionError) as exc:
            raise ArgumentError(f"bad rational {ns.rational!r}") from exc
        return Rational(frac.numerator, frac.denominator)
    if ns.quadratic is not None:
        return QuadraticIrrational(*ns.quadratic)
    if ns.liouville is not None:
        return LiouvilleSeries(*ns.liouville)
    return DecimalAlpha(ns.decimal)


def _add_alpha(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rational", metavar="P/Q")
    g.add_argument("--quadratic", nargs=3, type=int, metavar=("A", "B", "C"), help="(A + sqrt(B)) / C")
    g.add_argument("--liouville", nargs=2, type=int, metavar=("BASE", "TERMS"))
    g.add_argument("--decimal", metavar="DIGITS")


def _add_common(p: argparse.ArgumentParser):
    _add_alpha(p)
    p.add_argument("--truncation", type=int, default=64)
    p.add_argument("--nodes", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coiso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify alpha as rational, diophantine or Liouville-like")
    _add_common(p)
    p.add_argument("--depth", type=int, default=20)

    for name, helptext in (
        ("obstruction", "first obstruction of a witness deformation"),
        ("continue", "order-by-order Maurer-Cartan continuation"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument("--witness", choices=["auto", "random", "zero"], default="auto")
        p.add_argument("--connection", choices=["flat", "tau"], default="flat")
        if name == "continue":
            p.add_argument("--order", "-K", type=int, default=4)

    p = sub.add_parser("reduce", help="integrate a top-degree form over the leaves and test the class")
    _add_common(p)
    p.add_argument("--form", type=Path, required=True, help="JSON file holding a degree-2 foliated form")
    return parser


def _config(ns) -> RunConfig:
    out = ns.output_dir or (Path(os.environ[OUTPUT_ENV]) if os.environ.get(OUTPUT_ENV) else None)
    return RunConfig(
        alpha=parse_alpha(ns),
        truncation=ns.truncation,
        nodes=ns.nodes,
        tol=ns.tol,
        order=getattr(ns, "order", 4),
        output_dir=out,
        seed=ns.seed,
    )


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _write(cfg: RunConfig, name: str, text: str):
    if cfg.output_dir is None:
        return
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / name).write_text(text)


def _envelope(cfg: RunConfig, command: str, payload: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "alpha": cfg.alpha.to_json(), **payload}


def _witness(cfg: RunConfig, kind: str, rng: np.random.Generator) -> tuple[FoliatedForm, str]:
    alpha, grid = cfg.alpha, cfg.grid
    if kind == "zero":
        return FoliatedForm.zero(1, grid), "zero"
    if kind == "auto" and isinstance(alpha, Rational):
        return witness_rational(alpha.p, alpha.q, grid).gamma, "RationalWitness"
    if kind == "auto" and isinstance(alpha, LiouvilleSeries):
        n_max = min(max(alpha.terms, 2), alpha.max_level)
        return witness_liouville(alpha, n_max, grid).gamma, "LiouvilleWitness"
    return random_closed_one_form(rng, alpha, grid), "random"


def _connection(cfg: RunConfig, kind: str) -> Connection:
    if kind == "tau":
        return Connection.cutoff(cfg.alpha, cfg.grid)
    return Connection.flat(cfg.alpha, cfg.grid)


def cmd_classify(cfg: RunConfig, ns) -> int:
    c = classify(cfg.alpha, depth=ns.depth)
    print(c)
    _write(cfg, "classification.json", _dump(_envelope(cfg, "classify", {"classification": c.to_json()})))
    return EXIT_OK


def cmd_obstruction(cfg: RunConfig, ns) -> int:
    rng = np.random.default_rng(cfg.seed)
    gamma, tag = _witness(cfg, ns.witness, rng)
    result = first_obstruction(gamma, cfg.alpha, _connection(cfg, ns.connection), tol=cfg.tol)
    report = result.report
    print(report.status)
    payload = {"witness": tag, "report": report.to_json()}
    _write(cfg, "report.json", _dump(_envelope(cfg, "obstruction", payload)))
    _write(cfg, "decay.csv", report.to_csv())
    _write(cfg, "bracket.json", _dump(result.bracket.to_json()))
    return EXIT_OK if report.solved else EXIT_OBSTRUCTED


def cmd_continue(cfg: RunConfig, ns) -> int:
    rng = np.random.default_rng(cfg.seed)
    gamma, tag = _witness(cfg, ns.witness, rng)
    cont = mc_continue(gamma, cfg.alpha, _connection(cfg, ns.connection), K=cfg.order, tol=cfg.tol)
    if not cont.succeeded:
        print(f"obstructed at order {cont.failed_order}: {cont.report.status}")
        payload = {"witness": tag, "failed_order": cont.failed_order, "report": cont.report.to_json()}
        _write(cfg, "continuation.json", _dump(_envelope(cfg, "continue", payload)))
        return EXIT_OBSTRUCTED
    print(f"solved to order {cfg.order}; max residual {max(cont.residuals):.3e}")
    for i, g in enumerate(cont.solution.coefficients, start=1):
        _write(cfg, f"gamma_{i}.json", _dump(g.to_json()))
    rows = "order,residual\n" + "".join(f"{i},{r!r}\n" for i, r in enumerate(cont.residuals, start=1))
    _write(cfg, "residuals.csv", rows)
    payload = {"witness": tag, "order": cfg.order, "residuals": cont.residuals, "status": "Solved"}
    _write(cfg, "continuation.json", _dump(_envelope(cfg, "continue", payload)))
    return EXIT_OK


def cmd_reduce(cfg: RunConfig, ns) -> int:
    try:
        form = FoliatedForm.from_json(json.loads(ns.form.read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise ArgumentError(f"cannot read form from {ns.form}: {exc}") from exc
    cls = regular_cover_reduce(form, cfg.alpha)
    verdict = coboundary_test(cls, cfg.tol)
    print(verdict.label, verdict.report.status)
    payload = {"class": cls.to_json(), "verdict": verdict.label, "report": verdict.report.to_json()}
    _write(cfg, "class.json", _dump(_envelope(cfg, "reduce", payload)))
    return EXIT_OK if verdict.in_span else EXIT_OBSTRUCTED


COMMANDS = {
    "classify": cmd_classify,
    "obstruction": cmd_obstruction,
    "continue": cmd_continue,
    "reduce": cmd_reduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        return COMMANDS[ns.command](cfg, ns)
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ArgumentError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoisoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
