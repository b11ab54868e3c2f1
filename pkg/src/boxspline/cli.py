"""Command-line front end.

Exit codes: 0 success or passing check, 1 failed verification, 2 usage,
parse or precondition error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Sequence

import click

from .arrangement import (
    Configuration,
    admissible_subspaces,
    cocircuits,
    is_regular,
    random_regular_points,
    subspace_spanned,
    zonotope_volume,
)
from .bernoulli import w_quotient, w_series
from .boxspline import box_eval, BoxEvaluator
from .dm import dm_basis
from .errors import BoxSplineError
from .identity import (
    continuous_conv_poly,
    dm_corollary_check,
    parse_character,
    semidiscrete_eval,
    theorem1_check,
    theorem2_check_1d,
    toric_vertices,
    twisted_corollary_check,
    x_of_g,
)
from .poly import PolySyntaxError, format_poly, parse_poly

DEFAULT_SEED = 0
GRID_FUNCTIONS = ("box", "w", "w-quotient", "semidiscrete", "theorem1-diff")


# -- parsing helpers ----------------------------------------------------------


class ConfigError(click.ClickException):
    exit_code = 2


def parse_config_text(text: str, source: str = "<config>") -> Configuration:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be an object with keys 'dim' and 'X'")
    for key in ("dim", "X"):
        if key not in data:
            raise ConfigError(f"{source}: missing field '{key}'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ConfigError(f"{source}: field 'dim' must be a positive integer")
    X = data["X"]
    if not isinstance(X, list) or not X:
        raise ConfigError(f"{source}: field 'X' must be a non-empty list of integer vectors")
    for i, a in enumerate(X):
        if not isinstance(a, list) or len(a) != dim:
            raise ConfigError(f"{source}: X[{i}] must be a list of {dim} integers")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in a):
            raise ConfigError(f"{source}: X[{i}] has a non-integer coordinate")
    try:
        return Configuration(dim, tuple(tuple(a) for a in X))
    except (BoxSplineError, ValueError) as exc:
        raise ConfigError(f"{source}: {type(exc).__name__}: {exc}") from exc


def load_config(path: str) -> Configuration:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_config_text(text, path)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"{text!r} is not a rational number") from exc


def parse_point(text: str, n: int) -> tuple[Fraction, ...]:
    parts = [parse_rational(x) for x in text.split(",")]
    if len(parts) != n:
        raise click.BadParameter(f"expected {n} comma-separated coordinates, got {len(parts)}")
    return tuple(parts)


def parse_indices(text: str | None, c: Configuration) -> tuple[int, ...] | None:
    if text is None:
        return None
    if not text.strip():
        return ()
    try:
        idx = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"{text!r} is not a list of indices") from exc
    if any(not 0 <= i < c.N for i in idx):
        raise click.BadParameter(f"indices must lie in 0..{c.N - 1}")
    return idx


def parse_poly_option(text: str, n: int):
    try:
        return parse_poly(text, n)
    except PolySyntaxError as exc:
        raise click.BadParameter(str(exc)) from exc


def fail(exc: Exception) -> click.ClickException:
    err = click.ClickException(f"{type(exc).__name__}: {exc}")
    err.exit_code = 2
    return err


# -- number formatting --------------------------------------------------------


def format_decimal(x) -> str:
    """12 significant digits, canonical so that re-formatting is the identity."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(x.numerator) / Decimal(x.denominator)
        if d == 0:
            return "0"
        return format(d.normalize(), "g")


def reformat_decimal(text: str) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        d = +Decimal(text)
        return "0" if d == 0 else format(d.normalize(), "g")


def emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


# -- commands -----------------------------------------------------------------


@click.group()
def main() -> None:
    """Exact box splines, Bernoulli series and convolution identities."""


@main.command()
@click.argument("config")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
def describe(config: str, as_json: bool) -> None:
    """Summarise the arrangement of a configuration."""
    c = load_config(config)
    R, _ = admissible_subspaces(c)
    info = {
        "n": c.n,
        "N": c.N,
        "X": [list(a) for a in c.X],
        "hyperplanes": [{"normal": list(h.normal), "generators": list(h.generators)} for h in c.hyperplanes],
        "admissible_subspaces": len(R),
        "cocircuits": [list(Y) for Y in cocircuits(c)],
        "zonotope_volume": str(zonotope_volume(c)),
        "bases": len(c.bases),
        "dm_dimension": dm_basis(c).dim,
    }
    if as_json:
        emit(info, None)
        return
    click.echo(f"n = {c.n}, N = {c.N}")
    click.echo(f"X = {info['X']}")
    click.echo(f"admissible hyperplanes: {len(c.hyperplanes)}")
    for h in c.hyperplanes:
        click.echo(f"  normal {list(h.normal)}  generators {list(h.generators)}")
    click.echo(f"admissible subspaces |R| = {len(R)}")
    click.echo(f"cocircuits: {info['cocircuits']}")
    click.echo(f"zonotope volume: {info['zonotope_volume']}")
    click.echo(f"bases: {info['bases']}")
    click.echo(f"dim D(X): {info['dm_dimension']}")


@main.command("eval-box")
@click.argument("config")
@click.option("--at", "at", required=True, help="Point as comma-separated rationals.")
@click.option("--subset", default=None, help="Indices of a spanning sublist Y (default: all of X).")
def eval_box(config: str, at: str, subset: str | None) -> None:
    """Exact value of the box spline B(Y) at a regular point."""
    c = load_config(config)
    v = parse_point(at, c.n)
    Y = parse_indices(subset, c)
    try:
        click.echo(str(box_eval(c, Y if Y is not None else range(c.N), v)))
    except BoxSplineError as exc:
        raise fail(exc) from exc


@main.command("eval-w")
@click.argument("config")
@click.option("--at", "at", default=None, help="Point as comma-separated rationals.")
@click.option("--s", "s_idx", default=None, help="Indices spanning s for W(X/s) (default: s = 0).")
@click.option("--closed-form", is_flag=True, help="Print the symbolic expression.")
def eval_w(config: str, at: str | None, s_idx: str | None, closed_form: bool) -> None:
    """Multiple Bernoulli series W(X) or W(X/s)."""
    c = load_config(config)
    idx = parse_indices(s_idx, c)
    try:
        expr = w_series(c) if not idx else w_quotient(c, subspace_spanned(c, idx))
        if closed_form:
            click.echo(expr.format())
        if at is not None:
            v = parse_point(at, c.n)
            if not is_regular(c, v):
                raise BoxSplineError("point is not affine-regular")
            click.echo(str(expr(v)))
    except BoxSplineError as exc:
        raise fail(exc) from exc
    if not closed_form and at is None:
        raise click.UsageError("give --at, --closed-form, or both")


@main.command("dm-basis")
@click.argument("config")
def dm_basis_cmd(config: str) -> None:
    """Canonical basis of the Dahmen-Micchelli space, one polynomial per line."""
    c = load_config(config)
    for p in dm_basis(c).basis:
        click.echo(format_poly(p))


@main.command("toric-vertices")
@click.argument("config")
def toric_vertices_cmd(config: str) -> None:
    """Toric vertices g (mod the dual lattice) and the index sets X(g)."""
    c = load_config(config)
    for g in toric_vertices(c):
        click.echo(f"{g}\tX(g) = {list(x_of_g(c, g))}")


@main.command()
@click.argument("kind", type=click.Choice(["theorem1", "dm-corollary", "twisted-corollary", "theorem2-1d"]))
@click.argument("config")
@click.option("--poly", "poly_text", default="1", show_default=True, help="Polynomial f, p or h.")
@click.option("--points", "count", default=20, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
@click.option("--g", "g_text", default=None, help="Character G as comma-separated rationals, e.g. 1/2,1/2.")
@click.option("--out", default=None, help="Write the JSON report here instead of stdout.")
def verify(kind: str, config: str, poly_text: str, count: int, seed: int, g_text: str | None, out: str | None) -> None:
    """Check an identity exactly at seeded random regular points."""
    c = load_config(config)
    f = parse_poly_option(poly_text, c.n)
    points = random_regular_points(c, count, seed=seed)
    try:
        if kind == "theorem1":
            report = theorem1_check(c, f, points)
        elif kind == "dm-corollary":
            report = dm_corollary_check(c, points)
        else:
            if g_text is None:
                raise click.UsageError(f"{kind} needs --g")
            try:
                g = parse_character(g_text)
            except ValueError as exc:
                raise click.BadParameter(str(exc), param_hint="--g") from exc
            if g.n != c.n:
                raise click.BadParameter(f"expected {c.n} coordinates", param_hint="--g")
            if kind == "twisted-corollary":
                report = twisted_corollary_check(c, g, f, points)
            else:
                report = theorem2_check_1d(c, g, f, points)
    except BoxSplineError as exc:
        raise fail(exc) from exc
    report.meta["seed"] = seed
    emit(report.to_dict(), out)
    click.echo(f"seed={seed} points={count} pass={report.passed}", err=True)
    sys.exit(0 if report.passed else 1)


# -- grid export --------------------------------------------------------------


def grid_axis(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def write_grid_csv(n: int, rows: Sequence[tuple[Sequence[Fraction], Fraction]], skipped: int, exact: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"v{i + 1}" for i in range(n)] + ["value"] + (["exact"] if exact else []))
    for v, val in rows:
        w.writerow([str(x) for x in v] + [format_decimal(val)] + ([str(val)] if exact else []))
    buf.write(f"# skipped={skipped}\n")
    return buf.getvalue()


def read_grid_csv(text: str) -> tuple[list[str], list[list[str]], int]:
    lines = text.splitlines()
    footer = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    rows = list(csv.reader(body))
    skipped = 0
    for ln in footer:
        if ln.startswith("# skipped="):
            skipped = int(ln.split("=", 1)[1])
    return rows[0], rows[1:], skipped


def reemit_grid_csv(text: str) -> str:
    """Parse a grid file and write it back in canonical form."""
    header, rows, skipped = read_grid_csv(text)
    n = header.index("value")
    exact = "exact" in header
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        coords = [str(Fraction(x)) for x in r[:n]]
        tail = [str(Fraction(r[n + 1]))] if exact else []
        w.writerow(coords + [reformat_decimal(r[n])] + tail)
    buf.write(f"# skipped={skipped}\n")
    return buf.getvalue()


def grid_function(c: Configuration, fn: str, f, s_idx):
    if fn == "box":
        ev = BoxEvaluator(c)
        return lambda v: ev(range(c.N), v)
    if fn == "w":
        return w_series(c)
    if fn == "w-quotient":
        if s_idx is None:
            raise click.UsageError("w-quotient needs --s")
        return w_quotient(c, subspace_spanned(c, s_idx))
    if fn == "semidiscrete":
        ev = BoxEvaluator(c)
        return lambda v: semidiscrete_eval(c, f, v, ev)
    cont = continuous_conv_poly(c, f)
    ev = BoxEvaluator(c)
    return lambda v: semidiscrete_eval(c, f, v, ev) - cont(v)


@main.command()
@click.argument("config")
@click.option("--fn", "fn", type=click.Choice(GRID_FUNCTIONS), required=True)
@click.option("--lo", required=True, help="Lower corner, comma-separated rationals.")
@click.option("--hi", required=True, help="Upper corner, comma-separated rationals.")
@click.option("--step", required=True, help="Grid step (rational, > 0).")
@click.option("--poly", "poly_text", default="1", show_default=True)
@click.option("--s", "s_idx", default=None, help="Indices spanning s, for w-quotient.")
@click.option("--exact", is_flag=True, help="Add an exact p/q column.")
@click.option("--out", default=None, help="Output CSV path (default stdout).")
def grid(config, fn, lo, hi, step, poly_text, s_idx, exact, out) -> None:
    """Sample a function on a rectangular grid of regular points."""
    c = load_config(config)
    lo_v, hi_v = parse_point(lo, c.n), parse_point(hi, c.n)
    h = parse_rational(step)
    if h <= 0:
        raise click.BadParameter("step must be positive", param_hint="--step")
    f = parse_poly_option(poly_text, c.n)
    try:
        func = grid_function(c, fn, f, parse_indices(s_idx, c))
    except BoxSplineError as exc:
        raise fail(exc) from exc
    axes = [grid_axis(a, b, h) for a, b in zip(lo_v, hi_v)]
    rows, skipped = [], 0
    for v in product(*axes):
        if not is_regular(c, v):
            skipped += 1
            continue
        rows.append((v, func(v)))
    text = write_grid_csv(c.n, rows, skipped, exact)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise click.ClickException(f"cannot write {out}: {exc.strerror}") from exc
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
