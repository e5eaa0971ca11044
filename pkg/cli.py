#!/usr/bin/env python3
"""
CLI for the randomness desk: granularity tables, level-n tests, the two
constructions and the invariant suites.

Usage:
    python cli.py table --measure lebesgue --depth 8              # h, ĥ, g, ĝ
    python cli.py test build-cover --oracle alt --level 2 --m 6    # cover a computable real
    python cli.py test check-nesting --test cover.json --down-to 1 # nest a stored test
    python cli.py rea demo --oracle ones --imax 4                  # Construction 1 table
    python cli.py rea lift --oracle random:7 --m 12 --depth 64     # lift a level-2n test
    python cli.py selfmod build --modulus '{"kind":"exp"}' --blocks 2
    python cli.py selfmod tk --sigma-len 10 --depth 64             # T_k partial sums
    python cli.py selfmod failures --modulus '{"kind":"exp"}' --blocks 2 --depth 64
    python cli.py selfmod generic --sets all suffix:0110 --blocks 3
    python cli.py nscr classify --bits 110010
    python cli.py verify --suite all --depth 12                    # every invariant

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError
from tabulate import tabulate

from config import DEFAULT_OPERATOR, DEPTH_CAP, LOG_LEVEL, SEED, SETTLING_CAP
from core.dyadic import Dyadic
from core.errors import DeskError, ParseError, ValidationError, VerificationFailure
from granularity.table import build_table
from measures.loader import ALIASES, load_measure
from rea.operators import load_operator
from selfmod.modulus import load_modulus
from services import CoverService, NscrService, ReaService, SelfModService, TableService, streamspec_parse
from solovay.level_tests import DEFAULT_BUDGET, load_level_test

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "csv", "pretty")
SUITE_CHOICES = ("all", "core", "measures", "granularity", "solovay", "rea", "selfmod")
DEFAULT_MODULUS = '{"kind":"poly","degree":1}'


class DeskArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage errors as ParseError instead of exiting"""

    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


class RunConfig(BaseModel):
    """The options every command shares, validated before anything runs"""
    model_config = ConfigDict(extra="forbid")

    command: str
    measure: str = "lebesgue"
    oracle: Optional[str] = None
    depth: int = Field(DEPTH_CAP, gt=0)
    level: Optional[int] = Field(None, ge=1)
    out: Literal["json", "csv", "pretty"] = "json"
    seed: int = SEED
    cap: int = Field(SETTLING_CAP, gt=0)
    m: Optional[int] = Field(None, ge=0)
    blocks: Optional[int] = Field(None, ge=0)


def build_config(args: argparse.Namespace) -> RunConfig:
    fields = {name: getattr(args, name) for name in RunConfig.model_fields if getattr(args, name, None) is not None}
    try:
        return RunConfig.model_validate(fields)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ValidationError(f"bad option --{where}: {first['msg']}", invariant="run config")


# ═══════════════════════════════════════════════════════════════════════════════
# INPUT HELPERS
# ═══════════════════════════════════════════════════════════════════════════════

def read_spec(text: str) -> str:
    """Inline JSON, a shorthand name, or a path to a JSON file"""
    stripped = text.strip()
    if stripped.startswith("{") or stripped in ALIASES:
        return stripped
    path = Path(stripped)
    if not path.exists():
        raise ParseError(f"spec is neither JSON nor an existing file: {text!r}", position=0)
    return path.read_text()


def measure_from(args):
    return load_measure(read_spec(args.measure))


def modulus_from(args):
    try:
        spec = json.loads(read_spec(args.modulus))
    except json.JSONDecodeError as e:
        raise ParseError(f"modulus spec is not valid JSON: {e.msg}", position=e.pos)
    return load_modulus(spec)


def level_of(args, default: int) -> int:
    return args.level if args.level is not None else default


def write_artifact(path: str, text: str):
    Path(path).write_text(text)
    logger.info(f"Wrote {len(text)} characters to {path}")


# ═══════════════════════════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════════════════════════
# Each command returns (report, rows); rows feed --out pretty and --out csv.

def cmd_table(args):
    """Tabulate h, ĥ, g and ĝ"""
    service = TableService(measure_from(args), args.depth, args.n_max, method=args.method)
    if args.out == "csv":
        return service.report(), service.frame()
    return service.report(), service.table.to_rows()


def cmd_build_cover(args):
    """Level-n cover of a computable real"""
    mu = measure_from(args)
    stream = streamspec_parse(args.oracle)
    service = CoverService(mu, build_table(mu, args.depth))
    budget = Dyadic.parse(args.budget) if args.budget else DEFAULT_BUDGET
    report = service.cover_report(stream, level_of(args, 1), 8 if args.m is None else args.m, budget)
    if args.emit:
        keys = ("level", "measure", "elements", "weight_sum", "budget")
        write_artifact(args.emit, json.dumps({k: report[k] for k in keys}, indent=2))
    rows = [{"i": i, "length": len(e), "element": e} for i, e in enumerate(report["elements"])]
    return report, rows


def cmd_check_nesting(args):
    """Walk a stored test down the levels"""
    mu = measure_from(args)
    table = build_table(mu, args.depth)
    try:
        payload = json.loads(Path(args.test).read_text())
    except FileNotFoundError:
        raise ParseError(f"test file not found: {args.test}", position=0)
    except json.JSONDecodeError as e:
        raise ParseError(f"test file is not valid JSON: {e.msg}", position=e.pos)
    test = load_level_test(payload, table)
    report = CoverService(mu, table).nesting_report(test, args.down_to)
    rows = [
        {"from": s["from_level"], "to": s["to_level"], "passed": s["passed"], "violations": s["violations"]}
        for s in report["steps"]
    ]
    return report, rows


def cmd_rea_demo(args):
    """Construction 1 in the worked-table layout"""
    service = ReaService(load_operator(args.op), args.cap)
    oracle = streamspec_parse(args.oracle)
    report = service.demo_report(oracle, args.imax)
    if args.emit_c:
        write_artifact(args.emit_c, report["C"])
    if args.emit_b:
        write_artifact(args.emit_b, report["B"])
    return report, report["layout"]


def cmd_rea_lift(args):
    """Lift a level-2n cover of A to a level-n test that C fails"""
    mu = measure_from(args)
    service = ReaService(load_operator(args.op), args.cap)
    report = service.lift_report(streamspec_parse(args.oracle), mu, build_table(mu, args.depth),
                                 level_of(args, 2), 12 if args.m is None else args.m)
    rows = [
        {"sigma": e["sigma"], "k": e["k"], "family": len(e["family"]), "verdict": e["verdict"]}
        for e in report["elements"]
    ]
    return report, rows


def cmd_selfmod_build(args):
    """Construction 2"""
    run = SelfModService(modulus_from(args)).build(streamspec_parse(args.oracle), args.blocks)
    if args.emit_b:
        write_artifact(args.emit_b, str(run.B.materialize()))
    report = run.to_dict()
    rows = [{"n": n, "a": a, "l": l} for n, (a, l) in enumerate(zip(run.a, report["lengths"]))]
    return report, rows


def cmd_selfmod_tk(args):
    """T_k partial sums against the majorant"""
    mu = measure_from(args)
    report = SelfModService(modulus_from(args)).tk_report(
        mu, build_table(mu, args.depth), level_of(args, 1), args.sigma_len, args.g_source,
    )
    rows = [
        {"i": p["i"], "padded_length": p["padded_length"], "lo": p["sum"]["lo"], "hi": p["sum"]["hi"]}
        for p in report.get("partial_sums", [])
    ]
    return report, rows


def cmd_selfmod_failures(args):
    """Indices where B fails T_k"""
    mu = measure_from(args)
    report = SelfModService(modulus_from(args)).failures_report(
        streamspec_parse(args.oracle), args.blocks, mu, build_table(mu, args.depth),
        level_of(args, 1), args.g_source, args.n0,
    )
    return report, report["witnesses"]


def cmd_selfmod_generic(args):
    """Construction 2 interleaved with dense sets"""
    report = SelfModService(modulus_from(args)).generic_report(streamspec_parse(args.oracle), args.sets, args.blocks)
    return report, report["choices"]


def cmd_nscr_classify(args):
    """Place a word on the S-tree"""
    service = NscrService(modulus_from(args))
    report = service.classify(args.bits)
    if args.boundaries:
        report["boundaries"] = service.boundaries(args.boundaries)
    return report, [report]


def cmd_verify(args):
    """Run invariant suites"""
    # imported here so plain commands do not pay for registering every check
    from checks import run_suite

    report = run_suite(args.suite, args.depth, args.seed).to_dict()
    rows = [
        {"suite": c["suite"], "check": c["name"], "checked": c["checked"], "violations": c["violations"]}
        for c in report["checks"]
    ]
    return report, rows


# ═══════════════════════════════════════════════════════════════════════════════
# OUTPUT
# ═══════════════════════════════════════════════════════════════════════════════

def render(report: Dict[str, Any], rows, out: str) -> str:
    if out == "json":
        return json.dumps(report, indent=2)
    if out == "csv":
        import pandas as pd

        frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(rows)
        return frame.to_csv(index=False)
    if hasattr(rows, "to_dict"):
        rows = rows.to_dict("records")
    return tabulate(rows, headers="keys", missingval="-")


# ═══════════════════════════════════════════════════════════════════════════════
# PARSER
# ═══════════════════════════════════════════════════════════════════════════════

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--measure', default='lebesgue', help='Measure spec: JSON, shorthand or file')
    common.add_argument('--depth', type=int, default=DEPTH_CAP, help='Table depth D')
    common.add_argument('--level', type=int, help='Test level n (k for T_k)')
    common.add_argument('--out', choices=OUTPUT_FORMATS, default='json', help='Output format')
    common.add_argument('--seed', type=int, default=SEED, help='Seed for generated corpora')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = DeskArgumentParser(
        description="Desk-scale continuous-measure randomness toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest='command', help='Commands')

    # table
    parser_table = subparsers.add_parser('table', parents=[common], help='Granularity table')
    parser_table.add_argument('--n-max', type=int, help='Largest n for g and ĝ')
    parser_table.add_argument('--method', choices=['auto', 'exhaustive', 'closed'], default='auto')
    parser_table.set_defaults(func=cmd_table)

    # test
    parser_test = subparsers.add_parser('test', help='Level-n tests')
    test_sub = parser_test.add_subparsers(dest='action')
    parser_cover = test_sub.add_parser('build-cover', parents=[common], help='Cover a computable real')
    parser_cover.add_argument('--oracle', default='alt', help='Stream spec of the real')
    parser_cover.add_argument('--m', type=int, help='Number of elements')
    parser_cover.add_argument('--budget', help='Weight budget as m/2^k')
    parser_cover.add_argument('--emit', help='Write the test JSON here')
    parser_cover.set_defaults(func=cmd_build_cover)
    parser_nest = test_sub.add_parser('check-nesting', parents=[common], help='Nest a stored test')
    parser_nest.add_argument('--test', required=True, help='Test JSON file')
    parser_nest.add_argument('--down-to', type=int, default=1, help='Lowest level to reach')
    parser_nest.set_defaults(func=cmd_check_nesting)

    # rea
    parser_rea = subparsers.add_parser('rea', help='Construction 1')
    rea_sub = parser_rea.add_subparsers(dest='action')
    for name, func, help_text in (('demo', cmd_rea_demo, 'Run Construction 1'),
                                  ('lift', cmd_rea_lift, 'Lift a level-2n test')):
        p = rea_sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('--op', default=DEFAULT_OPERATOR, help='Operator JSON file or inline JSON')
        p.add_argument('--oracle', default='ones', help='Stream spec of A')
        p.add_argument('--cap', type=int, default=SETTLING_CAP, help='Settling cap')
        p.set_defaults(func=func)
        if name == 'demo':
            p.add_argument('--imax', type=int, default=4, help='Last block index')
            p.add_argument('--emit-c', help='Write C here')
            p.add_argument('--emit-b', help='Write B here')
        else:
            p.add_argument('--m', type=int, help='Elements in the level-2n cover')

    # selfmod
    parser_selfmod = subparsers.add_parser('selfmod', help='Construction 2 and T_k')
    selfmod_sub = parser_selfmod.add_subparsers(dest='action')
    parser_build = selfmod_sub.add_parser('build', parents=[common], help='Run Construction 2')
    parser_tk = selfmod_sub.add_parser('tk', parents=[common], help='Enumerate T_k')
    parser_failures = selfmod_sub.add_parser('failures', parents=[common], help='Where B fails T_k')
    parser_generic = selfmod_sub.add_parser('generic', parents=[common], help='Weakly generic variant')
    for p in (parser_build, parser_tk, parser_failures, parser_generic):
        p.add_argument('--modulus', default=DEFAULT_MODULUS, help='Modulus JSON or file')
    for p in (parser_build, parser_failures, parser_generic):
        p.add_argument('--oracle', default='alt', help='Stream spec of A')
        p.add_argument('--blocks', type=int, default=4, help='Index of the last block')
    for p in (parser_tk, parser_failures):
        p.add_argument('--g-source', choices=['approx', 'exact'], default='approx')
    parser_build.add_argument('--emit-b', help='Write B here')
    parser_build.set_defaults(func=cmd_selfmod_build)
    parser_tk.add_argument('--sigma-len', type=int, default=10, help='Longest σ')
    parser_tk.set_defaults(func=cmd_selfmod_tk)
    parser_failures.add_argument('--n0', type=int, help='Replay the domination from this block')
    parser_failures.set_defaults(func=cmd_selfmod_failures)
    parser_generic.add_argument('--sets', nargs='*', default=[], help='Dense sets W_0, W_1, …')
    parser_generic.set_defaults(func=cmd_selfmod_generic)

    # nscr
    parser_nscr = subparsers.add_parser('nscr', help='The S-tree')
    nscr_sub = parser_nscr.add_subparsers(dest='action')
    parser_classify = nscr_sub.add_parser('classify', parents=[common], help='Classify a word')
    parser_classify.add_argument('--modulus', default=DEFAULT_MODULUS, help='Modulus JSON or file')
    parser_classify.add_argument('--bits', required=True, help='The word σ')
    parser_classify.add_argument('--boundaries', type=int, help='Also list the first N level ends')
    parser_classify.set_defaults(func=cmd_nscr_classify)

    # verify
    parser_verify = subparsers.add_parser('verify', parents=[common], help='Run invariant suites')
    parser_verify.add_argument('--suite', choices=SUITE_CHOICES, default='all')
    parser_verify.set_defaults(func=cmd_verify)

    return parser


def _fail(error: DeskError) -> int:
    print(json.dumps({"error": {"code": error.code, "message": error.message}}), file=sys.stderr)
    return 1 if isinstance(error, VerificationFailure) else 2


def run(argv: List[str]) -> int:
    """
    Parse argv, run one command and print its output.

    Returns:
        0 on success, 1 when a report has violations, 2 on bad input
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, 'func', None) is None:
            parser.print_help(sys.stderr)
            return 2
        build_config(args)
        report, rows = args.func(args)
        if args.out == "csv" and not len(rows):
            raise ValidationError(f"'{args.command}' has no rows to write as CSV", invariant="csv needs rows")
        print(render(report, rows, args.out))
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    except DeskError as e:
        logger.debug(f"{type(e).__name__}: {e.message}")
        return _fail(e)

    violations = report.get("violations", 0) if isinstance(report, dict) else 0
    if violations:
        logger.error(f"{violations} violations")
        return 1
    return 0


def main():
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
