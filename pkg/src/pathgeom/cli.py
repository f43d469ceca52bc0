"""Command line entry point: ``pathgeom SPEC [options]``.

Exit codes: 0 when every check is PASS, SKIP or UNSUPPORTED, 1 when any
check FAILs, 2 on usage errors or an unreadable or invalid spec file.
"""

from __future__ import annotations

import sys

import click

from .expr import GCD_MODES
from .runner import run
from .specfile import SUITES, SpecError, expand_suites, load_spec


def _suites(ctx, param, value):
    if not value:
        return None
    names = [part.strip() for v in value for part in v.split(",") if part.strip()]
    try:
        return expand_suites(names)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("spec_path", metavar="SPEC", type=click.Path(dir_okay=False))
@click.option(
    "--suite",
    "suites",
    multiple=True,
    callback=_suites,
    help=f"Suites to run, repeatable or comma separated: {', '.join(SUITES)}, all. "
    "Defaults to the spec's [checks] suites, which default to all.",
)
@click.option("--mode", type=click.Choice(["exact", "randomized"]), default="exact", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized zero tests and samples.")
@click.option("--trials", type=click.IntRange(min=1), default=32, show_default=True)
@click.option("--bound", type=click.IntRange(min=1), default=100, show_default=True, help="Sample points from [-bound, bound].")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write JSON lines records here.")
@click.option(
    "--gcd",
    type=click.Choice(GCD_MODES),
    default="full",
    show_default=True,
    help="Fraction reduction: full polynomial GCD, or content and common monomials only.",
)
def main(spec_path, suites, mode, seed, trials, bound, out, gcd):
    """Verify the identities of a path geometry given by SPEC."""
    try:
        spec = load_spec(spec_path)
    except SpecError as exc:
        click.echo(f"{spec_path}: {exc}", err=True)
        sys.exit(2)
    except OSError as exc:
        click.echo(f"{spec_path}: {exc.strerror or exc}", err=True)
        sys.exit(2)
    report = run(spec, suites, mode=mode, seed=seed, trials=trials, bound=bound, gcd=gcd)
    click.echo(report.table())
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(report.json_lines())
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
