import functools
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.status import Status

from .errors import CnsLabError
from .settings import InvalidSettings

### WARNING: keep module-level imports light
# Everything imported here runs for every cli command, including --help. numpy, pandas
# and sympy come in through the cnslab modules, so those are imported inside commands.
##############

logger = logging.getLogger("cnslab")

DEFAULT_KP_N_MAX = 10_000


class State:
    def __init__(self):
        self.no_cache: bool = False
        self.verbose: int = 0


state = State()

app = typer.Typer(add_completion=False, no_args_is_help=True)
err_console = Console(stderr=True)


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    root = logging.getLogger("cnslab")
    root.handlers.clear()
    handler = RichHandler(console=err_console, show_path=verbose > 1, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False


def domain_errors(fn):
    """Report CnsLabError on stderr and exit with status 2; bad settings become usage errors."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CnsLabError as e:
            err_console.print(f"[red]{type(e).__name__}:[/red] {e}", highlight=False)
            raise typer.Exit(2)
        except (ValidationError, InvalidSettings) as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def _check_c1(value: float) -> float:
    if not value > 1:
        raise typer.BadParameter("c1 must be greater than 1")
    return value


def _emit(obj) -> None:
    from .utils.json import dumps

    typer.echo(dumps(obj))


def _quadint(text: str, d: int):
    from .ring import make_field, parse_quadint

    make_field(d)
    return parse_quadint(text, d)


def _base(text: str, d: int):
    from .cns import make_base

    return make_base(_quadint(text, d))


def _cache():
    from .file_cache import FileCache

    return FileCache(enabled=not state.no_cache)


def _kp_constants(base, n_max: int, workers: Optional[int]):
    from .digitstat import kp_empirical_constants

    key = f"kp-{base.field.d}-{base.alpha.a}-{base.alpha.b}-{n_max}"
    with Status(f"[bold green]Estimating defect envelope of {base} up to norm {n_max}...", console=err_console):
        return _cache().get(key, lambda: kp_empirical_constants(base, n_max, workers=workers))


def _sweep_frame(field, base_a, base_b, n_max: int, workers: Optional[int]):
    from .theorem_lab import sweep_frame

    a, b = base_a.alpha, base_b.alpha
    key = f"sweep-{field.d}-{a.a}-{a.b}-{b.a}-{b.b}-{n_max}"
    with Status(f"[bold green]Sweeping {base_a} and {base_b} up to norm {n_max}...", console=err_console):
        return _cache().get(key, lambda: sweep_frame(field, base_a, base_b, n_max, workers=workers))


@app.callback()
def main_callback(
    no_cache: bool = typer.Option(False, "--nocache", help="Recompute instead of reading the sweep cache"),
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v for progress, -vv for debug"),
):
    """
    Canonical number systems over imaginary quadratic rings: expansions, digit statistics,
    multiplicative dependence, bound calculators and the two-base digit-count experiments.
    """
    state.no_cache = no_cache
    state.verbose = verbose
    _configure_logging(verbose)


@app.command()
@domain_errors
def validate(
    d: int = typer.Option(..., "--d", help="Field Q(sqrt(-d))"),
    alpha: str = typer.Option(..., "--alpha", help="Candidate base as a+b*w[d]"),
):
    """Check the CNS criterion and the ring match for alpha"""
    from .cns import is_cns

    _emit(is_cns(_quadint(alpha, d)))


@app.command()
@domain_errors
def expand(
    d: int = typer.Option(..., "--d"),
    alpha: str = typer.Option(..., "--alpha"),
    gamma: str = typer.Option(..., "--gamma"),
    format: str = typer.Option("json", "--format", click_type=click.Choice(["json", "text"])),
):
    """alpha-adic expansion of gamma"""
    from .cns import expand as expand_gamma

    ds = expand_gamma(_quadint(gamma, d), _base(alpha, d))
    if format == "text":
        typer.echo(str(ds))
    else:
        _emit(ds)


@app.command()
@domain_errors
def evaluate(
    digits_json: str = typer.Option("-", "--json", help="DigitString JSON as printed by expand; '-' reads stdin"),
):
    """Evaluate a digit string back to a+b*w[d]"""
    import json

    from .cns import digit_string_from_json, evaluate as evaluate_digits
    from .errors import ParseError
    from .ring import format_quadint

    text = sys.stdin.read() if digits_json == "-" else digits_json
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Not JSON: {e}") from e
    if not isinstance(data, dict):
        raise ParseError("Expected a JSON object with base, d and digits")
    typer.echo(format_quadint(evaluate_digits(digit_string_from_json(data))))


@app.command()
@domain_errors
def stats(
    d: int = typer.Option(..., "--d"),
    alpha: str = typer.Option(..., "--alpha"),
    gamma: Optional[str] = typer.Option(None, "--gamma", help="Statistics of a single element"),
    n_max: Optional[int] = typer.Option(None, "--n-max", min=1, help="Defect envelope over norm <= n-max"),
    checkpoints: Optional[List[int]] = typer.Option(None, "--checkpoint", help="Extra envelope checkpoints"),
    record: bool = typer.Option(False, "--record", help="Store or re-check the envelope as a regression fixture"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
):
    """Digit statistics of gamma, or the empirical length-defect envelope"""
    from . import digitstat

    base = _base(alpha, d)
    if gamma is not None:
        _emit(digitstat.stats(_quadint(gamma, d), base))
        return
    if n_max is None:
        raise typer.BadParameter("give --gamma or --n-max")
    if checkpoints:
        series = digitstat.kp_envelope_series(base, [*checkpoints, n_max], workers=workers)
        _emit(series)
        return
    constants = _kp_constants(base, n_max, workers)
    if record:
        from .settings import FixtureStore

        FixtureStore().record(
            f"kp/{base}/{n_max}", {"e1_hat": constants.e1_hat, "e2_hat": constants.e2_hat}
        )
    _emit(constants)


@app.command()
@domain_errors
def multdep(
    d: int = typer.Option(..., "--d"),
    alpha: str = typer.Option(..., "--alpha"),
    beta: str = typer.Option(..., "--beta"),
):
    """Decide multiplicative dependence of alpha and beta"""
    from .multdep import mult_dep

    _emit(mult_dep(_quadint(alpha, d), _quadint(beta, d)))


@app.command()
@domain_errors
def sweep(
    d: int = typer.Option(..., "--d"),
    alpha: str = typer.Option(..., "--alpha"),
    beta: str = typer.Option(..., "--beta"),
    n_max: int = typer.Option(..., "--n-max", min=1),
    out: Optional[Path] = typer.Option(None, "--out", help="CSV path; stdout when omitted"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
):
    """Digit counts of every gamma with norm <= n-max in both bases, as CSV"""
    from .ring import make_field
    from .theorem_lab import write_sweep_csv

    frame = _sweep_frame(make_field(d), _base(alpha, d), _base(beta, d), n_max, workers)
    if out is None:
        write_sweep_csv(frame, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            write_sweep_csv(frame, f)
        err_console.print(f"✓ {len(frame)} records written to {out}", style="green")


@app.command()
@domain_errors
def bound(
    x: float = typer.Option(..., "--x", help="|gamma|"),
    C: float = typer.Option(0.0, "--C"),
):
    """log log x / (log log log x + C)"""
    from .bounds import theorem_bound

    typer.echo(repr(theorem_bound(x, C)))


@app.command()
@domain_errors
def lab(
    d: int = typer.Option(1, "--d"),
    alpha: Optional[str] = typer.Option(None, "--alpha"),
    beta: Optional[str] = typer.Option(None, "--beta"),
    gamma: Optional[str] = typer.Option(None, "--gamma"),
    case_split: bool = typer.Option(False, "--case-split", help="Interval case analysis for gamma"),
    split_check: bool = typer.Option(False, "--split-check", help="Every gadget for gamma"),
    empirical_c: bool = typer.Option(False, "--empirical-c", help="Sweep and estimate C"),
    counterexample: bool = typer.Option(False, "--counterexample", help="Single-digit powers of dependent bases"),
    c1: float = typer.Option(2.0, "--c1", callback=_check_c1),
    n_max: int = typer.Option(10_000, "--n-max", min=1),
    kp_n_max: int = typer.Option(DEFAULT_KP_N_MAX, "--kp-n-max", min=1, help="Norm range for e1, e2 estimates"),
    statistic: str = typer.Option("Z", "--statistic", click_type=click.Choice(["Z", "S"])),
    u: int = typer.Option(1, "--u", min=1),
    v: int = typer.Option(1, "--v", min=1),
    m_max: int = typer.Option(8, "--m-max", min=1),
    record: bool = typer.Option(False, "--record", help="Store or re-check C_emp as a regression fixture"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
):
    """Theorem experiments: gadgets for one gamma, empirical C, the dependent-base counterexample"""
    from . import theorem_lab

    modes = [case_split, split_check, empirical_c, counterexample]
    if sum(modes) != 1:
        raise typer.BadParameter("choose exactly one of --case-split, --split-check, --empirical-c, --counterexample")
    if alpha is None or beta is None:
        raise typer.BadParameter("--alpha and --beta are required")

    if counterexample:
        ok = theorem_lab.dependent_counterexample_check(_quadint(alpha, d), _quadint(beta, d), u, v, m_max)
        _emit({"holds": ok, "u": u, "v": v, "m_max": m_max})
        if not ok:
            raise typer.Exit(3)
        return

    from .ring import make_field

    base_a, base_b = _base(alpha, d), _base(beta, d)
    if empirical_c:
        frame = _sweep_frame(make_field(d), base_a, base_b, n_max, workers)
        result = theorem_lab.empirical_C(frame, statistic)
        if record:
            from .settings import FixtureStore

            FixtureStore().record(f"C_emp/{statistic}/{base_a}/{base_b}/{n_max}", result.C_emp)
        _emit({"C_emp": result.C_emp, "n_max": result.n_max, "argmax_gamma": result.argmax_gamma})
        if not result.verified:
            raise typer.Exit(3)
        return

    if gamma is None:
        raise typer.BadParameter("--gamma is required")
    kp = (_kp_constants(base_a, kp_n_max, workers), _kp_constants(base_b, kp_n_max, workers))
    g = _quadint(gamma, d)
    if case_split:
        _emit(theorem_lab.case_split(g, base_a, base_b, c1, kp))
    else:
        report = theorem_lab.analyze_gamma(g, base_a, base_b, kp, c1)
        _emit(report)
        if not report.all_hold:
            raise typer.Exit(3)


@app.command()
@domain_errors
def scan(
    katai_szabo: bool = typer.Option(False, "--katai-szabo", help="CNS bases of Z[i] by the criterion"),
    lebesgue: bool = typer.Option(False, "--lebesgue", help="Perfect powers a^2+1 = x^v, v >= 3"),
    qi_pairs: bool = typer.Option(False, "--qi-pairs", help="Dependent pairs among -a+-i"),
    a_max: int = typer.Option(..., "--a-max", min=1),
):
    """Scans over Z[i]"""
    from .ring import format_quadint

    if sum([katai_szabo, lebesgue, qi_pairs]) != 1:
        raise typer.BadParameter("choose exactly one of --katai-szabo, --lebesgue, --qi-pairs")
    if katai_szabo:
        from .cns import katai_szabo_scan

        _emit([{"alpha": format_quadint(b.alpha), "E": b.E, "F": b.F} for b in katai_szabo_scan(a_max)])
    elif lebesgue:
        from .multdep import lebesgue_scan

        _emit([{"a": a, "x": x, "v": v} for a, x, v in lebesgue_scan(a_max)])
    else:
        from .multdep import qi_scan

        _emit([[format_quadint(x), format_quadint(y)] for x, y in qi_scan(a_max)])


@app.command()
@domain_errors
def fixtures(
    delete: Optional[List[str]] = typer.Option(None, "--delete", help="Forget a recorded fixture"),
):
    """List recorded regression fixtures, or delete some so the next --record run stores afresh"""
    from .settings import FixtureStore

    store = FixtureStore()
    if delete:
        known = set(store.list_fixtures())
        for name in delete:
            if name not in known:
                raise typer.BadParameter(f"no fixture named {name}")
            store.delete_fixture(name)
            err_console.print(f"Deleted fixture {name}", style="yellow")
        return
    _emit({name: store.get(name) for name in store.list_fixtures()})


@app.command("clear-cache")
def clear_cache():
    """Remove every cached sweep and envelope"""
    removed = _cache().clear()
    err_console.print(f"✓ Removed {removed} cached result(s)", style="green")


def run(argv: Optional[List[str]] = None) -> int:
    """Exit code: 0 success, 1 usage error, 2 domain error."""
    try:
        rv = app(args=list(argv) if argv is not None else None, standalone_mode=False, prog_name="cnslab")
    except click.UsageError as e:
        e.show()
        return 1
    except click.Abort:
        err_console.print("Aborted!")
        return 1
    except CnsLabError as e:
        err_console.print(f"[red]{type(e).__name__}:[/red] {e}", highlight=False)
        return 2
    return rv if isinstance(rv, int) else 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
