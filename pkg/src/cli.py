"""Command-line interface for the separated dgL engine."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Sequence, TextIO

from . import config
from .dgl import DgLPresentation, PresentationError, homology
from .modelfile import ModelFile, ModelFileError, dump, dumps, from_presentation, load, to_presentation
from .separation import (
    NotSeparated,
    SeparationError,
    hat_table,
    is_separated,
    verify_sep_then,
)
from .separator import ExtensionError, separate
from .series import GradedDims, SeriesError, anick_chain, pbw_series, series_inverse
from .utils import parse_int_list
from .zoo import (
    ZooError,
    connected_sum,
    cp_infty,
    cpn,
    crafted_nonseparated,
    product_spheres_cone,
    wedge,
)

__all__ = ["EXIT_OK", "EXIT_FALSE", "EXIT_INPUT", "build_parser", "run"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2

INPUT_ERRORS = (ModelFileError, PresentationError, ZooError, SeriesError, ValueError)


def _read(args: argparse.Namespace) -> DgLPresentation:
    return to_presentation(load(args.path), args.trunc)


def _dims_lines(dims: GradedDims, max_dim: int | None, machine: bool) -> list[str]:
    rows = [(n, r) for n, r in dims.table() if max_dim is None or n <= max_dim]
    if machine:
        return [f"{n}\t{r}" for n, r in rows]
    return ["dim  rank"] + [f"{n:>3}  {r:>4}" for n, r in rows]


def _write(out: TextIO, lines: Sequence[str]) -> None:
    for line in lines:
        out.write(line + "\n")


def _emit(model: ModelFile, output: str | None, out: TextIO) -> None:
    if output is None or output == "-":
        out.write(dumps(model))
    else:
        dump(model, output)


def cmd_validate(args: argparse.Namespace, out: TextIO) -> int:
    L = _read(args)
    _write(out, [f"OK {len(L.gens)} generators, truncation {L.trunc}, max degree {L.max_degree}"])
    return EXIT_OK


def cmd_homology(args: argparse.Namespace, out: TextIO) -> int:
    H = homology(_read(args))
    if not args.machine:
        _write(out, [f"# exact through dimension {H.horizon}"])
    _write(out, _dims_lines(H.dims, args.max_dim, args.machine))
    return EXIT_OK


def cmd_hilbert(args: argparse.Namespace, out: TextIO) -> int:
    H = homology(_read(args))
    series = pbw_series(H.dims)
    upper = H.horizon if args.max_dim is None else min(args.max_dim, H.horizon)
    coeffs = series.coefficients(upper)
    if args.machine:
        _write(out, [f"{n}\t{c}" for n, c in enumerate(coeffs)])
    else:
        _write(out, [f"UHL(z) = {series.truncate(upper).render_text()}"])
    return EXIT_OK


def cmd_separated(args: argparse.Namespace, out: TextIO) -> int:
    report = is_separated(_read(args))
    lines = []
    for row in report.degrees:
        if args.machine:
            for n in range(1, report.horizon + 1):
                if row.minus[n] or row.plus[n]:
                    lines.append(f"{row.degree}\t{n}\t{row.minus[n]}\t{row.plus[n]}\t{row.intersection[n]}")
        else:
            lines.append(
                f"degree {row.degree}: minus {row.minus.table()} plus {row.plus.table()}"
                f" intersection {row.intersection.table()}"
            )
    lines.append("separated" if report.separated else f"not separated at (n, k) {report.failures()}")
    _write(out, lines)
    return EXIT_OK if report.separated else EXIT_FALSE


def cmd_separate(args: argparse.Namespace, out: TextIO) -> int:
    outcome = separate(_read(args))
    for record in outcome.steps:
        logger.info("Added %s at (k=%d, n=%d)", record.added, record.degree, record.dim)
    _emit(from_presentation(outcome.presentation), args.output, out)
    if outcome.pending:
        logger.warning("Model is still not separated at %s through %d", outcome.pending, outcome.target)
        return EXIT_FALSE
    return EXIT_OK


def cmd_hat(args: argparse.Namespace, out: TextIO) -> int:
    table = hat_table(_read(args))
    lines = []
    for row in table.rows:
        if args.machine:
            lines.extend(f"{row.degree}\t{n}\t{r}" for n, r in row.free_side.table())
        else:
            status = "ok" if row.agree else f"MISMATCH semidirect {row.semidirect.table()}"
            lines.append(f"L^_{row.degree}: {row.free_side.table()} {status}")
    if not args.machine:
        lines.append(f"sum {table.total.table()} vs HL {table.homology.table()}")
        lines.append(f"HL^-_N = HL: {table.surjective_top}; (HE_N)_1: {table.top_length1.table()}")
    _write(out, lines)
    return EXIT_OK if table.passed else EXIT_FALSE


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    L = _read(args)
    degrees = [args.degree] if args.degree else range(1, L.max_degree + 1)
    passed = True
    lines = []
    for i in degrees:
        report = verify_sep_then(L, i)
        passed &= report.passed
        for name, value in report.checks.items():
            lines.append(f"{i}\t{name}\t{'ok' if value else 'FAIL'}" if args.machine else f"degree {i} {name}: {value}")
    _write(out, lines)
    return EXIT_OK if passed else EXIT_FALSE


def _model_from_args(args: argparse.Namespace) -> DgLPresentation:
    family = args.family
    params = args.params
    if family == "cpn":
        if len(params) != 1:
            raise ValueError("cpn takes exactly one argument N.")
        return cpn(int(params[0]), args.trunc)
    if family == "cp-infty":
        return cp_infty(args.trunc)
    if family == "wedge":
        return wedge(parse_int_list(_one(params, family)), args.trunc)
    if family == "product":
        return product_spheres_cone(parse_int_list(_one(params, family)), args.k, args.trunc)
    if family == "connected-sum":
        factors = [parse_int_list(part) for part in _one(params, family).split(";")]
        return connected_sum(factors, args.trunc)
    if family == "crafted":
        return crafted_nonseparated(args.trunc)
    raise ValueError(f"Unknown model family {family!r}.")


def _one(params: Sequence[str], family: str) -> str:
    if len(params) != 1:
        raise ValueError(f"{family} takes exactly one argument.")
    return params[0]


def cmd_model(args: argparse.Namespace, out: TextIO) -> int:
    _emit(from_presentation(_model_from_args(args)), args.output, out)
    return EXIT_OK


def cmd_compare_anick(args: argparse.Namespace, out: TextIO) -> int:
    spheres = parse_int_list(args.spheres)
    k = args.k if args.k is not None else len(spheres)
    L = product_spheres_cone(spheres, k, args.trunc)
    H = homology(L)
    order = H.horizon
    computed = series_inverse(pbw_series(H.dims), order)
    expected = anick_chain(spheres, k).truncate(order)
    match = computed.agrees_with(expected)
    _write(
        out,
        [
            "MATCH" if match else "MISMATCH",
            f"computed\t{computed.render_machine()}",
            f"expected\t{expected.render_machine()}",
        ],
    )
    return EXIT_OK if match else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepdgl", description="Exact computations with separated dgL models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(
        name: str, handler: Callable, help_text: str, reads: bool = True, bounded: bool = False
    ) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text)
        command.set_defaults(handler=handler)
        if reads:
            command.add_argument("path", nargs="?", default=None, help="Model file, '-' or omitted for stdin")
        command.add_argument("--trunc", type=int, default=None, help="Override the truncation")
        command.add_argument("--machine", action="store_true", help="Tab separated output")
        if bounded:
            command.add_argument("--max-dim", type=int, default=None, help="Only print dimensions up to this one")
        return command

    add("validate", cmd_validate, "Check a model file")
    add("homology", cmd_homology, "Homology ranks of the model", bounded=True)
    add("hilbert", cmd_hilbert, "Hilbert series of the enveloping algebra of the homology", bounded=True)
    add("separated", cmd_separated, "Report HL_i^-, HL_i^+ and their intersections")
    add("separate", cmd_separate, "Write a separated extension of the model").add_argument(
        "-o", "--output", default=None, help="Output file (stdout by default)"
    )
    add("hat", cmd_hat, "Summands L^_i of the homology")
    add("verify", cmd_verify, "Structure checks on each HL_i").add_argument(
        "--degree", type=int, default=None, help="Only check this degree"
    )

    model = add("model", cmd_model, "Emit a built-in model", reads=False)
    model.add_argument("family", choices=["cpn", "cp-infty", "wedge", "product", "connected-sum", "crafted"])
    model.add_argument("params", nargs="*")
    model.add_argument("--k", type=int, default=None, help="Stage of the product-of-spheres model")
    model.add_argument("-o", "--output", default=None, help="Output file (stdout by default)")

    anick = add("compare-anick", cmd_compare_anick, "Compare homology with the product-of-spheres recursion", reads=False)
    anick.add_argument("spheres", help="Sphere dimensions, e.g. 2,2,2")
    anick.add_argument("--k", type=int, default=None, help="Stage (all spheres by default)")
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Parse *argv*, run the command and return its exit code."""
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "trunc", None) is None and args.command in ("model", "compare-anick"):
        args.trunc = config.DEFAULT_TRUNC
    out = out or sys.stdout
    try:
        return args.handler(args, out)
    except NotSeparated as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FALSE
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (SeparationError, ExtensionError) as exc:
        logger.error("Command %s failed: %s", args.command, exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
