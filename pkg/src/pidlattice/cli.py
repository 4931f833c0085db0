"""Command-line front end.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
2 malformed input or usage, 3 pmf invariant violation, 4 internal
consistency failure, 5 I/O failure while writing examples.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import distribution as dist
from .interaction import interaction_decomposition_report
from .lattice import LatticeError, build_lattice
from .pid import DEFAULT_ZERO_TOL, ConsistencyError, decompose, decompose_pruned
from .systems import BUNDLED

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_INVARIANT = 3
EXIT_CONSISTENCY = 4
EXIT_IO = 5

COMMANDS = ("decompose", "lattice", "interaction", "examples")
FORMATS = {
    "decompose": ("table", "json"),
    "interaction": ("table", "json"),
    "lattice": ("dot", "json"),
    "examples": ("json",),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    path: str | None = None
    target: str | None = None
    format: str | None = None
    prune: bool = False
    nats: bool = False
    predictors: int | None = None
    annotate: str | None = None
    out: str = "."
    zero_tol: float = DEFAULT_ZERO_TOL
    sum_tol: float = dist.SUM_TOL

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format is None:
            self.format = FORMATS[self.command][0]
        if self.format not in FORMATS[self.command]:
            raise UsageError(
                f"--format {self.format} is not available for {self.command} "
                f"(choose from {', '.join(FORMATS[self.command])})"
            )
        if not self.zero_tol > 0 or not self.sum_tol > 0:
            raise UsageError("tolerances must be positive")

    @property
    def scale(self) -> float:
        return math.log(2) if self.nats else 1.0

    @property
    def unit(self) -> str:
        return "nats" if self.nats else "bits"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pid",
        description="Partial information decomposition over the redundancy lattice.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("path", nargs="?", help="distribution file (.json or .csv)")
    p.add_argument("--target", help="variable to treat as the target (default: first)")
    p.add_argument("--format", choices=("table", "json", "dot"))
    p.add_argument("--prune", action="store_true", help="skip nodes below a zero I_min")
    p.add_argument("--nats", action="store_true", help="report values in nats")
    p.add_argument("--predictors", type=int, help="lattice size for the lattice command")
    p.add_argument("--annotate", metavar="PATH", help="distribution whose values label the lattice")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory for examples")
    p.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
    p.add_argument("--sum-tol", type=float, default=dist.SUM_TOL)
    return p


def _load(path: str | None, cfg: RunConfig) -> dist.JointDistribution:
    if path is None:
        raise UsageError(f"{cfg.command} needs a distribution file")
    d = dist.load(path, sum_tol=cfg.sum_tol)
    if cfg.target is not None:
        try:
            d = d.with_target(cfg.target)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
    return d


def _num(x: float, cfg: RunConfig) -> str:
    return f"{round(x * cfg.scale, 6) + 0.0:.6f}"


def _signed(x: float, cfg: RunConfig) -> str:
    return f"{round(x * cfg.scale, 6) + 0.0:+.6f}"


def cmd_decompose(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    d = _load(cfg.path, cfg)
    result = decompose_pruned(d, cfg.zero_tol) if cfg.prune else decompose(d)
    if cfg.format == "json":
        doc = result.to_json_dict(scale=cfg.scale)
        if cfg.nats:
            doc = {k.replace("_bits", "_nats"): v for k, v in doc.items()}
            doc["units"] = "nats"
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    out.write(f"# target: {result.target}\n")
    out.write(f"# total_{cfg.unit}: {_num(result.total, cfg)}\n")
    if cfg.prune:
        out.write(f"# imin_evaluations: {result.evaluations} skipped: {result.skipped}\n")
    out.write("# node atom imin\n")
    for alpha, atom, imin in zip(result.lattice.nodes, result.atom_values, result.imin_values):
        out.write(f"{alpha.label} {_num(atom, cfg)} {_num(imin, cfg)}\n")
    return EXIT_OK


def cmd_lattice(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    annotated = None
    k = cfg.predictors
    if cfg.annotate is not None:
        d = _load(cfg.annotate, cfg)
        if k is not None and k != d.num_predictors:
            raise UsageError(
                f"--predictors {k} does not match the {d.num_predictors} predictors "
                f"in {cfg.annotate}"
            )
        k = d.num_predictors
        annotated = decompose_pruned(d, cfg.zero_tol) if cfg.prune else decompose(d)
    if k is None:
        raise UsageError("lattice needs --predictors K or --annotate PATH")
    lattice = build_lattice(k)
    if cfg.format == "json":
        doc = lattice.to_json_dict()
        if annotated is not None:
            values = annotated.to_json_dict(scale=cfg.scale)
            doc["atoms"] = values["atoms"]
            doc["imin"] = values["imin"]
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    notes = None
    if annotated is not None:
        notes = {
            alpha: f"Π={_num(atom, cfg)} I_min={_num(imin, cfg)}"
            for alpha, atom, imin in zip(lattice.nodes, annotated.atom_values, annotated.imin_values)
        }
    out.write(lattice.to_dot(notes))
    return EXIT_OK


def cmd_interaction(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    d = _load(cfg.path, cfg)
    try:
        report = interaction_decomposition_report(d)
    except ValueError as exc:
        if isinstance(exc, (LatticeError, dist.DistributionError)):
            raise
        raise UsageError(str(exc)) from None
    if cfg.format == "json":
        doc = report.to_json_dict(scale=cfg.scale)
        if cfg.nats:
            doc = {k.replace("_bits", "_nats"): v for k, v in doc.items()}
            doc["units"] = "nats"
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    u = cfg.unit
    out.write(f"# target: {report.decomposition.target}\n")
    out.write(f"interaction_{u}: {_signed(report.interaction_bits, cfg)}\n")
    out.write(f"synergy_{u}: {_num(report.synergy_bits, cfg)}\n")
    out.write(f"redundancy_{u}: {_num(report.redundancy_bits, cfg)}\n")
    if report.balance_bits is not None:
        out.write(f"balance_{u}: {_signed(report.balance_bits, cfg)}\n")
    out.write("# node coefficient atom signed\n")
    atoms = report.decomposition
    for alpha, c in report.signature.coefficients.items():
        if c:
            a = atoms.atom(alpha)
            out.write(f"{alpha.label} {c:+d} {_num(a, cfg)} {_signed(c * a, cfg)}\n")
    return EXIT_OK


def cmd_examples(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    target_dir = Path(cfg.out)
    try:
        target_dir.mkdir(parents=True, exist_ok=True)
        for name, (factory, comment) in BUNDLED.items():
            path = target_dir / f"{name}.json"
            path.write_text(json.dumps(factory().to_json_dict(comment), indent=2) + "\n")
            out.write(f"{path}\n")
    except OSError as exc:
        print(f"pid: cannot write examples: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


HANDLERS = {
    "decompose": cmd_decompose,
    "lattice": cmd_lattice,
    "interaction": cmd_interaction,
    "examples": cmd_examples,
}


def run(cfg: RunConfig, out=None) -> int:
    try:
        return HANDLERS[cfg.command](cfg, out)
    except dist.PMFInvariantError as exc:
        print(f"pid: invalid distribution: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ConsistencyError as exc:
        print(f"pid: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (UsageError, LatticeError, dist.DistributionError) as exc:
        print(f"pid: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            path=args.path,
            target=args.target,
            format=args.format,
            prune=args.prune,
            nats=args.nats,
            predictors=args.predictors,
            annotate=args.annotate,
            out=args.out,
            zero_tol=args.zero_tol,
            sum_tol=args.sum_tol,
        )
    except UsageError as exc:
        print(f"pid: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
