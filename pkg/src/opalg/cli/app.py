"""
opalg command line.

    opalg check FILE              run a .oad script
    opalg derive --case ID        replay a built-in derivation (or `all`)
    opalg numeric --case ID       one grid level of a numeric case
    opalg converge --case ID      nested-grid convergence study

Exit codes: 0 everything passed, 1 something was checked and failed,
2 the run could not be carried out (parse error, bad grid, unknown case,
unreadable or non-UTF-8 file, self-feeding relation). Reports go to stdout; logs go to stderr.
"""

from __future__ import annotations

import functools
import json as _json_mod
import logging
from dataclasses import dataclass
from pathlib import Path

import click
from pydantic import ValidationError

from opalg import __version__, config
from opalg.cli.records import RunRecord, assert_record, derivation_record, numeric_records
from opalg.dsl import print_expr, run_text
from opalg.engine import BUILTIN_AXIOM_SETS, CheckResult, replay
from opalg.errors import OpalgError, ParseError, SourceSpan
from opalg.numeric import GridSpec, ResidualReport, case_ids, convergence, residual_case

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_UNRUNNABLE = 0, 1, 2

# CLI names of the built-in derivations
DERIVE_CASES = {
    "eq3": "eq3",
    "eq5": "eq5",
    "eq6": "eq6",
    "sectionA-I": "sectionA_I",
    "sectionA-II": "sectionA_II",
    "dsquare": "dsquare",
}


# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------


class _JSONFormatter(logging.Formatter):
    """Emit log records as single-line JSON."""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "ts": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        if record.exc_info and record.exc_info[0] is not None:
            log_entry["exc"] = self.formatException(record.exc_info)
        return _json_mod.dumps(log_entry, default=str)


_handler: logging.Handler | None = None


def _configure_logging() -> None:
    """Route opalg logs to the current stderr, formatted per OPALG_LOG_FORMAT."""
    global _handler
    root = logging.getLogger()
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = logging.StreamHandler()
    if config.LOG_FORMAT == "json":
        _handler.setFormatter(_JSONFormatter())
    else:
        _handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)-8s %(name)s: %(message)s"))
    root.addHandler(_handler)
    root.setLevel(config.LOG_LEVEL)


# ---------------------------------------------------------------------------
# Shared options
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Options:
    as_json: bool
    seed: int


def _output_options(fn):
    """--json / --seed on a subcommand; they override the group-level flags."""

    @click.option("--json", "sub_json", is_flag=True, default=False, help="One JSON record per line.")
    @click.option("--seed", "sub_seed", type=int, default=None, help="Seed for the test-function family.")
    @click.pass_context
    @functools.wraps(fn)
    def wrapper(ctx: click.Context, sub_json: bool, sub_seed: int | None, **kwargs):
        group: Options = ctx.obj
        opts = Options(as_json=group.as_json or sub_json, seed=group.seed if sub_seed is None else sub_seed)
        try:
            code = fn(opts, **kwargs)
        except ParseError as exc:
            code = _unrunnable(f"{kwargs.get('file', '<input>')}:{exc}")
        except (OpalgError, ValidationError, OSError) as exc:
            code = _unrunnable(str(exc))
        except RecursionError:
            code = _unrunnable("input nested too deeply to evaluate")
        ctx.exit(code)

    return wrapper


def _unrunnable(message: str) -> int:
    click.echo(f"error: {message}", err=True)
    return EXIT_UNRUNNABLE


def _read_script(file: Path) -> str:
    """Script text; bytes that are not UTF-8 are a parse error at their position."""
    data = file.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_start = data.rfind(b"\n", 0, exc.start) + 1
        line = data.count(b"\n", 0, exc.start) + 1
        column = len(data[line_start : exc.start].decode("utf-8")) + 1
        raise ParseError(SourceSpan(line, column), "UTF-8 text", f"byte 0x{data[exc.start]:02x}") from None


def _parse_center(ctx, param, value: str) -> tuple[float, float, float]:
    try:
        parts = [float(p) for p in value.split(",")]
    except ValueError:
        raise click.BadParameter("expected three comma-separated numbers") from None
    if len(parts) != 3:
        raise click.BadParameter("expected three comma-separated numbers")
    return (parts[0], parts[1], parts[2])


def _grid_options(fn):
    fn = click.option("--family-size", type=click.IntRange(min=1), default=config.FAMILY_SIZE, show_default=True)(fn)
    fn = click.option("--sigma", type=float, default=config.SIGMA, show_default=True, help="Gaussian width.")(fn)
    fn = click.option("--half-width", type=float, default=config.GRID_HALF_WIDTH, show_default=True)(fn)
    fn = click.option(
        "--center",
        default=",".join(f"{x:g}" for x in config.GRID_CENTER),
        show_default=True,
        callback=_parse_center,
        help="Box center p1,p2,p3.",
    )(fn)
    fn = click.option("--n", "n", type=int, default=config.GRID_N, show_default=True, help="Points per axis.")(fn)
    fn = click.option("--case", "case_id", type=click.Choice(case_ids()), required=True)(fn)
    return fn


def _emit(records: list[RunRecord]) -> None:
    for record in records:
        click.echo(record.to_line())


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@click.group()
@click.version_option(__version__, prog_name="opalg")
@click.option("--json", "as_json", is_flag=True, default=False, help="One JSON record per line.")
@click.option("--seed", type=int, default=config.DEFAULT_SEED, show_default=True)
@click.pass_context
def cli(ctx: click.Context, as_json: bool, seed: int) -> None:
    """Exact operator algebra and momentum-space checks for massless position operators."""
    _configure_logging()
    ctx.obj = Options(as_json=as_json, seed=seed)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_output_options
def check(opts: Options, file: Path) -> int:
    """Run every assertion of a .oad script."""
    report = run_text(_read_script(file))
    script_id = file.name
    if opts.as_json:
        _emit([assert_record(script_id, o) for o in report.outcomes])
    else:
        for o in report.outcomes:
            where = f"{script_id}:{o.span}"
            index = "" if o.index is None else f" {list(o.index)}"
            click.echo(f"{o.status.upper():5} {where}{index}  {o.text}")
            if o.status == "fail":
                click.echo(f"      lhs: {o.lhs}")
                click.echo(f"      rhs: {o.rhs}")
            elif o.status == "error":
                click.echo(f"      {o.message}")
        click.echo(report.summary)
    if any(o.status == "error" for o in report.outcomes):
        return EXIT_UNRUNNABLE
    return EXIT_OK if report.ok else EXIT_FAILED


@cli.command()
@click.option("--case", "case_id", type=click.Choice([*DERIVE_CASES, "all"]), required=True)
@click.option(
    "--axioms",
    "axiom_name",
    type=click.Choice(sorted(BUILTIN_AXIOM_SETS)),
    default=None,
    help="Replace every step's axioms by a built-in set.",
)
@_output_options
def derive(opts: Options, case_id: str, axiom_name: str | None) -> int:
    """Replay a built-in derivation over every index tuple."""
    names = list(DERIVE_CASES) if case_id == "all" else [case_id]
    override = BUILTIN_AXIOM_SETS[axiom_name] if axiom_name else None
    results = [(name, replay(DERIVE_CASES[name], axioms=override)) for name in names]
    if opts.as_json:
        _emit([derivation_record(name, o, print_expr) for name, result in results for o in result.outcomes])
    else:
        for name, result in results:
            _print_derivation(name, result)
        if len(results) > 1:
            passed = sum(1 for _, r in results if r.passed)
            click.echo(f"{passed}/{len(results)} derivations passed")
    return EXIT_OK if all(r.passed for _, r in results) else EXIT_FAILED


def _print_derivation(name: str, result: CheckResult) -> None:
    click.echo(f"{name} under {result.axioms}")
    for o in result.outcomes:
        head = f"  {list(o.index)} {'pass' if o.passed else 'FAIL'}"
        failure = o.first_failure
        if failure is None:
            for step in o.steps:
                click.echo(f"{head}  {step.label}: {print_expr(step.lhs)}")
                head = " " * len(head)
        else:
            click.echo(f"{head}  {failure.label}: {print_expr(failure.lhs)}")
            click.echo(f"{' ' * len(head)}  expected: {print_expr(failure.rhs)}")
    click.echo(f"{name}: {result.summary} index tuples passed")


@cli.command()
@_grid_options
@_output_options
def numeric(opts: Options, case_id: str, n: int, center, half_width: float, sigma: float, family_size: int) -> int:
    """Residual of one numeric case on a single grid."""
    spec = GridSpec(n=n, center=center, half_width=half_width)
    report = residual_case(case_id, spec, seed=opts.seed, sigma=sigma, family_size=family_size)
    return _report(opts, report, spec, sigma)


@cli.command()
@_grid_options
@click.option("--levels", type=click.IntRange(min=3), default=3, show_default=True)
@_output_options
def converge(
    opts: Options, case_id: str, n: int, center, half_width: float, sigma: float, family_size: int, levels: int
) -> int:
    """Fitted convergence orders over nested grids n, 2n-1, 4n-3, ..."""
    spec = GridSpec(n=n, center=center, half_width=half_width)
    report = convergence(case_id, levels=levels, base_spec=spec, seed=opts.seed, sigma=sigma, family_size=family_size)
    return _report(opts, report, spec, sigma)


def _fmt(x: float | None, spec: str = ".3e") -> str:
    return "-" if x is None else format(x, spec)


def _report(opts: Options, report: ResidualReport, spec: GridSpec, sigma: float) -> int:
    if opts.as_json:
        _emit(numeric_records(report, spec, sigma))
    else:
        click.echo(f"case {report.case} ({report.kind}), seed {report.seed}")
        click.echo(f"{'n':>6} {'h':>10} {'residual':>11} {'order':>7} {'limit':>11} {'bound':>11}  status")
        for row in report.rows:
            click.echo(
                f"{row.n:>6} {row.h:>10.4g} {_fmt(row.residual):>11} {_fmt(row.order, '.2f'):>7} "
                f"{_fmt(row.limit):>11} {_fmt(row.bound):>11}  {'pass' if row.passed else 'fail'}"
            )
            if row.index_pair and not row.passed:
                click.echo(f"{'':>6} worst index {list(row.index_pair)}")
        status = "pass" if report.passed else "fail"
        label = f"{report.detail}: {status}" if report.detail else status
        if report.note:
            click.echo(f"note: {report.note}")
        click.echo(f"{report.case}: {label}")
    return EXIT_OK if report.passed else EXIT_FAILED


def main() -> None:
    cli(prog_name="opalg")


if __name__ == "__main__":
    main()
