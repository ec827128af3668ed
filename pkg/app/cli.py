"""Command line front end: ``hpoly <subcommand>``.

Every computing subcommand takes ``--format {plain,latex,json}``, ``--poincare`` and ``--out``.
Exit codes: 0 success, 1 internal error, 2 invalid input, 3 not combinatorially smooth,
4 enumeration cap exceeded.
"""

import functools
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Optional

import click
from sqlmodel import SQLModel

from app.config import configure_logging, load_settings, use_settings
from app.descent import build_descent_system, describe, nu_stats
from app.errors import HPolyError, InvalidInputError
from app.hpoly import (
    eulerian,
    length_poly,
    permutahedron_h,
    poly_report,
    rank2_h,
    rank2_n,
    simple_embedding_h,
    toric_poincare,
    wonderful_h,
)
from app.models import HPolyReport, PolyPayload, PolyReport, QuotientReport
from app.oracle import DEFAULT_QS, oracle_report
from app.poly import IntPoly, IntPoly2
from app.rootsys import build_root_system, format_subset, parse_subset, subset_names
from app.smooth import is_combinatorially_smooth, smooth_list_report
from app.weyl import enumerate_WJ

logger = logging.getLogger(__name__)

FORMATS = ("plain", "latex", "json")
EXIT_NOT_SMOOTH = 3


def handle_errors(func: Callable) -> Callable:
    """Log a library error and turn it into the matching exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except HPolyError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"error: {e}", err=True)
            raise click.exceptions.Exit(e.exit_code) from e
        except OSError as e:
            logger.error(f"I/O failure: {e}")
            click.echo(f"error: {e}", err=True)
            raise click.exceptions.Exit(1) from e

    return wrapper


def output_options(func: Callable) -> Callable:
    func = click.option(
        "--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the output to a file."
    )(func)
    func = click.option("--poincare", is_flag=True, help="Emit polynomials at t^2 (Poincare form).")(func)
    func = click.option("--format", "fmt", type=click.Choice(FORMATS), default="plain", show_default=True)(func)
    return func


def _render(p: IntPoly, fmt: str) -> str:
    return p.to_latex() if fmt == "latex" else p.to_plain()


def _payload_poly(payload: PolyPayload) -> IntPoly:
    return IntPoly.from_payload(payload)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text)
        return
    out.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Wrote {out}")


def _emit_report(report: SQLModel, fmt: str, text: Callable[[], str], out: Optional[Path]) -> None:
    _emit(report.model_dump_json(indent=2) if fmt == "json" else text(), out)


def _poly_text(report: PolyReport, fmt: str) -> str:
    return _render(_payload_poly(report.poly), fmt)


def _hpoly_text(report: HPolyReport, fmt: str, poincare: bool) -> str:
    factors = [_payload_poly(f) for f in report.factors]
    if poincare:
        factors = [f.substitute_square() for f in factors]
        total = _payload_poly(report.poincare)
    else:
        total = _payload_poly(report.h)
    if fmt == "latex":
        product = "".join(f"\\left[{f.to_latex()}\\right]" for f in factors)
        return f"{product} = {total.to_latex()}"
    lines = [" * ".join(f"[{f.to_plain()}]" for f in factors), f"= {total.to_plain()}"]
    lines.append(f"H(1) = {report.euler_characteristic}, deg = {report.dimension}, palindromic = {report.palindromic}")
    lines.extend(f"warning: {w}" for w in report.warnings)
    return "\n".join(lines)


@click.group(name="hpoly")
@click.option("--config", "config_file", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--log-level", default=None, help="Logging level (default from HPOLY_LOG_LEVEL).")
@handle_errors
def cli(config_file: Optional[Path], log_level: Optional[str]) -> None:
    """Length polynomials, descent systems and H-polynomials of group embeddings."""
    settings = load_settings(config_file)
    use_settings(settings)
    configure_logging(log_level or settings.log_level)


@cli.command(name="length-poly")
@click.option("--type", "type_text", required=True, help="Cartan type, e.g. A3 or E6.")
@click.option("--j", "j_text", default="", help="Comma-separated nodes of J, e.g. s1,s2.")
@output_options
@handle_errors
def length_poly_cmd(type_text: str, j_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Sum over W^J of t^l(w)."""
    rs = build_root_system(type_text)
    J = parse_subset(j_text, rs.rank)
    report = poly_report("length_poly", length_poly(rs, J), rs.cartan_type, J, poincare=poincare)
    _emit_report(report, fmt, lambda: _poly_text(report, fmt), out)


@cli.command(name="eulerian")
@click.option("--n", "n", type=int, required=True)
@output_options
@handle_errors
def eulerian_cmd(n: int, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Eulerian polynomial E_n(t)."""
    report = poly_report("eulerian", eulerian(n), parameters={"n": n}, poincare=poincare)
    _emit_report(report, fmt, lambda: _poly_text(report, fmt), out)


@cli.command(name="permutahedron-h")
@click.option("--n", "n", type=int, required=True)
@output_options
@handle_errors
def permutahedron_h_cmd(n: int, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """h-polynomial of the permutahedron from its face lattice."""
    report = poly_report("permutahedron_h", permutahedron_h(n), parameters={"n": n}, poincare=poincare)
    _emit_report(report, fmt, lambda: _poly_text(report, fmt), out)


@cli.command(name="toric-poincare")
@click.option("--type", "type_text", required=True)
@click.option("--j", "j_text", default="")
@output_options
@handle_errors
def toric_poincare_cmd(type_text: str, j_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Poincare polynomial of the toric variety X(J); already in t^2, so --poincare changes nothing."""
    rs = build_root_system(type_text)
    J = parse_subset(j_text, rs.rank)
    report = poly_report("toric_poincare", toric_poincare(rs, J), rs.cartan_type, J)
    _emit_report(report, fmt, lambda: _poly_text(report, fmt), out)


@cli.command(name="wj")
@click.option("--type", "type_text", required=True)
@click.option("--j", "j_text", default="")
@output_options
@handle_errors
def wj_cmd(type_text: str, j_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Minimal coset representatives W^J with reduced words and lengths."""
    rs = build_root_system(type_text)
    quotient = enumerate_WJ(rs, parse_subset(j_text, rs.rank))
    poly = quotient.length_poly()
    if poincare:
        poly = poly.substitute_square()
    report = QuotientReport(
        cartan_type=str(rs.cartan_type),
        J=subset_names(quotient.J),
        size=len(quotient),
        longest=quotient.longest.to_payload(),
        length_poly=poly.to_payload(),
        elements=[w.to_payload() for w in quotient.elements],
    )

    def text() -> str:
        lines = [f"{e.length}\t{e.word}" for e in report.elements]
        lines.append(f"|W^J| = {report.size}, longest = {report.longest.word}, P = {_render(poly, fmt)}")
        return "\n".join(lines)

    _emit_report(report, fmt, text, out)


@cli.command(name="descent")
@click.option("--type", "type_text", required=True)
@click.option("--j", "j_text", default="")
@output_options
@handle_errors
def descent_cmd(type_text: str, j_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Dump the descent system and augmented poset of J."""
    rs = build_root_system(type_text)
    J = parse_subset(j_text, rs.rank)
    ds = build_descent_system(rs, J, strict=False)
    poset = nu_stats(ds)
    report = describe(ds, poset)

    def text() -> str:
        lines = [f"S^J_{s} = {{{', '.join(words)}}}  delta = {report.delta[s]}" for s, words in report.classes.items()]
        names = list(report.classes)
        lines.append("\t".join(["l(w)", "w", *[f"nu_{s}" for s in names], "nu", "nu_weighted"]))
        for e in report.entries:
            weighted = "-" if e.nu_weighted is None else str(e.nu_weighted)
            cells = [str(e.element.length), e.element.word, *[str(e.nu[s]) for s in names], str(e.nu_plain), weighted]
            lines.append("\t".join(cells))
        if report.two_variable_euler is not None:
            lines.append(f"H(t1, t2) = {IntPoly2.from_payload(report.two_variable_euler).to_plain()}")
        plain_poly = poset.plain_poly()
        lines.append(f"sum t^nu = {_render(plain_poly.substitute_square() if poincare else plain_poly, fmt)}")
        return "\n".join(lines)

    _emit_report(report, fmt, text, out)


@cli.command(name="smooth-check")
@click.option("--type", "type_text", required=True)
@click.option("--j", "j_text", default="")
@output_options
@handle_errors
def smooth_check_cmd(type_text: str, j_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Decide whether J is combinatorially smooth; exits 3 when it is not."""
    rs = build_root_system(type_text)
    J = parse_subset(j_text, rs.rank)
    verdict = is_combinatorially_smooth(rs, J)

    def text() -> str:
        head = f"{rs.cartan_type}, J={{{format_subset(J)}}}: {'smooth' if verdict.smooth else 'not smooth'}"
        return "\n".join([head, *[f"  {v.kind}: {v.message}" for v in verdict.violations]])

    _emit_report(verdict, fmt, text, out)
    if not verdict.smooth:
        raise click.exceptions.Exit(EXIT_NOT_SMOOTH)


@cli.command(name="smooth-list")
@click.option("--type", "type_text", required=True)
@output_options
@handle_errors
def smooth_list_cmd(type_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """All combinatorially smooth J, grouped like the published list."""
    rs = build_root_system(type_text)
    report = smooth_list_report(rs)

    def text() -> str:
        lines = [f"{report.cartan_type}: {len(report.subsets)} combinatorially smooth subset(s)"]
        for row in report.subsets:
            item = f"({row.item})" if row.item else "(--)"
            name = "{" + ",".join(row.J) + "}" if row.J else "{}"
            lines.append(f"{item}\t{name}\t{' x '.join(row.components) or '-'}\t|W^J| = {row.quotient_size}")
        cmp = report.comparison
        if not cmp.matches:
            kind = "informative" if cmp.informative else "mismatch"
            lines.append(f"{kind}: only in table {cmp.only_in_table}; only in classifier {cmp.only_in_classifier}")
        return "\n".join(lines)

    _emit_report(report, fmt, text, out)


@cli.group(name="hpoly")
def hpoly_group() -> None:
    """H-polynomials of simple, wonderful and rank-two embeddings."""


@hpoly_group.command(name="simple")
@click.option("--type", "type_text", required=True)
@click.option("--j", "j_text", default="")
@output_options
@handle_errors
def hpoly_simple_cmd(type_text: str, j_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Simple embedding of type J (J combinatorially smooth)."""
    rs = build_root_system(type_text)
    report = simple_embedding_h(rs, parse_subset(j_text, rs.rank))
    _emit_report(report, fmt, lambda: _hpoly_text(report, fmt, poincare), out)


@hpoly_group.command(name="wonderful")
@click.option("--type", "type_text", required=True)
@output_options
@handle_errors
def hpoly_wonderful_cmd(type_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """Wonderful embedding (J empty)."""
    report = wonderful_h(build_root_system(type_text))
    _emit_report(report, fmt, lambda: _hpoly_text(report, fmt, poincare), out)


@hpoly_group.command(name="rank2")
@click.option("--case", "case", required=True, help="I, II or III.")
@click.option("--n-long", "n_long", type=int, default=None, help="N = l(w0): 3, 4 or 6.")
@click.option("--type", "type_text", default=None, help="Derive N from A2, B2, C2 or G2.")
@click.option("--k", "k", type=int, required=True)
@output_options
@handle_errors
def hpoly_rank2_cmd(
    case: str, n_long: Optional[int], type_text: Optional[str], k: int, fmt: str, poincare: bool, out: Optional[Path]
) -> None:
    """Rank-two embeddings."""
    if n_long is None:
        if type_text is None:
            raise InvalidInputError("Give --n-long or --type.")
        n_long = rank2_n(type_text)
    report = rank2_h(case, n_long, k)
    _emit_report(report, fmt, lambda: _hpoly_text(report, fmt, poincare), out)


@cli.group(name="oracle")
def oracle_group() -> None:
    """Brute-force orbit counts over finite fields."""


@oracle_group.command(name="mn")
@click.option("--n", "n", type=int, required=True)
@click.option("--q", "q_text", default=",".join(str(q) for q in DEFAULT_QS), show_default=True)
@output_options
@handle_errors
def oracle_mn_cmd(n: int, q_text: str, fmt: str, poincare: bool, out: Optional[Path]) -> None:
    """B x B orbits of M_n: representatives, sizes, fitted (a, b) and the assembled H."""
    try:
        qs = [int(q) for q in q_text.split(",") if q.strip()]
    except ValueError as e:
        raise InvalidInputError(f"--q must be a comma-separated list of primes; got {q_text!r}.") from e
    report = oracle_report(n, qs)

    def text() -> str:
        lines = ["\t".join(["rep", "sizes", "a", "b", "term"])]
        for row in report.rows:
            sizes = ",".join(f"{q}:{s}" for q, s in row.sizes.items())
            lines.append(f"{row.label}\t{sizes}\t{row.a}\t{row.b}\t{_render(_payload_poly(row.term), fmt)}")
        h = _payload_poly(report.h)
        lines.append(f"H = {_render(h.substitute_square() if poincare else h, fmt)}")
        return "\n".join(lines)

    _emit_report(report, fmt, text, out)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="hpoly", standalone_mode=False)
    except click.ClickException as e:
        logger.warning(f"Usage error: {e.format_message()}")
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        logger.warning("Aborted by the user")
        click.echo("Aborted.", err=True)
        return 1
    except Exception as e:
        logger.exception(f"Internal error: {e}")
        click.echo(f"error: internal: {e}", err=True)
        return 1
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(run())
