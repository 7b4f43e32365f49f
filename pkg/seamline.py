"""Seamline — numerical experiments on boundary decompositions of analytic functions.

Splits boundary data on circles and polynomial Jordan curves into interior
and exterior analytic parts, checks them against Cauchy-transform
quadrature, and runs the packaged experiments (split-projection norm
growth, tangent-circle probes, smoothness sweeps, welding and
quasi-symmetry estimates).
"""

from __future__ import annotations

import functools
import logging
import sys
from pathlib import Path

import click
from rich.console import Console

from core import Command, PhiVariant
from core.runner import run_command

console = Console(stderr=True)


def _common_options(fn):
    """--n, --seed, --in, --out and --config, shared by every command."""
    options = [
        click.option("--n", "n", type=int, default=None,
                     help="Grid size N, a power of two in [16, 65536] (default: 256)."),
        click.option("--seed", type=int, default=None, help="Random seed (default: 0)."),
        click.option("--in", "in_path", type=click.Path(path_type=Path), default=None,
                     help="Input file (samples, spectrum, or a directory for classify)."),
        click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
                     help="Output file; stdout when omitted."),
        click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
                     default=None, help="YAML file with option defaults."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _command(command: Command):
    """Register a subcommand whose keyword options become the config params."""

    def decorator(fn):
        @cli.command(name=command.value, help=fn.__doc__)
        @_common_options
        @functools.wraps(fn)
        def wrapper(n, seed, in_path, out_path, config_path, **params):
            options = {"n": n, "seed": seed, "in": in_path, "out": out_path}
            options.update(params)
            sys.exit(run_command(command.value, options, config_path, console=console))

        return wrapper

    return decorator


@click.group()
@click.option("--debug", is_flag=True, hidden=True, help="Enable debug logging.")
def cli(debug: bool) -> None:
    """Boundary decompositions, Cauchy transforms and their experiments."""
    if debug:
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")


@_command(Command.SPLIT)
def split(**params):
    """Split boundary samples into disc and exterior parts."""


@_command(Command.CONJ_SPLIT)
def conj_split(**params):
    """Write boundary samples as g + conj(h) with g, h analytic and h(0) = 0."""


@click.option("--inverse", is_flag=True, default=None, help="Apply the inverse map.")
@click.option(
    "--variant",
    type=click.Choice([v.value for v in PhiVariant]),
    default=None,
    help="Which version of the map (default: circle).",
)
@_command(Command.PHI)
def phi(**params):
    """Apply the smoothing isomorphism to a spectrum file."""


@_command(Command.CLASSIFY)
def classify(**params):
    """Classify coefficient decay of a spectrum file, or sweep a directory."""


@click.option("--domain", default=None, help="Domain file; the unit circle when omitted.")
@click.option("--points", default=None, help="Comma-separated complex points, e.g. 0.3,0.5j,2.")
@click.option("--coeffs", default=None, help="Spectrum file to use as boundary data instead of --in.")
@_command(Command.CAUCHY)
def cauchy(**params):
    """Evaluate the Cauchy transform of boundary samples at points off the curve."""


@_command(Command.JUMP_CHECK)
def jump_check(**params):
    """Compare the Cauchy transform with the split parts inside and outside D."""


@click.option("--radius", type=float, default=None, help="Inner circle radius (default: 0.25).")
@click.option("--inner", type=click.Path(path_type=Path), default=None,
              help="Samples on the inner circle.")
@_command(Command.TANGENT_SPLIT)
def tangent_split(**params):
    """Decompose data on two internally tangent circles."""


@click.option("--region", type=click.Choice(["disc", "omega", "exterior"]), default=None,
              help="Approach inside D, through the region between the circles, or from outside D.")
@click.option("--curve", type=click.Choice(["outer", "inner"]), default=None,
              help="Integrate over the unit circle or the inner circle (default: outer).")
@click.option("--target", default=None, help="Approach this complex point instead of a region.")
@click.option("--direction", default=None, help="Unit complex direction; points are target - r·direction.")
@click.option("--coeffs", default=None, help="Spectrum file to use as boundary data instead of --in.")
@click.option("--radius", type=float, default=None, help="Inner circle radius (default: 0.25).")
@click.option("--radii", default=None, help="Comma-separated decreasing approach distances.")
@_command(Command.PROBE_TANGENT)
def probe_tangent(**params):
    """Probe the Cauchy transform approaching the tangency point."""


@click.option("--workers", type=click.IntRange(1, 64), default=None,
              help="Degrees estimated concurrently (default: 4).")
@click.option("--trials", type=click.IntRange(0, 100_000), default=None,
              help="Random witnesses per degree (default: 200).")
@click.option("--degrees", default=None, help="Comma-separated grid sizes (default: 8..1024).")
@_command(Command.RIESZ_NORM)
def riesz_norm(**params):
    """Estimate the sup-norm of the split projection for growing degrees."""


@click.option("--homeo", default=None,
              help="Homeomorphism file, or identity / reflection / mobius:<a>.")
@click.option("--domain", default=None, help="Domain file (default: the unit disc).")
@_command(Command.WELDING_CHECK)
def welding_check(**params):
    """Compose γ^{-1}∘δ for a domain and check the round trip."""


@click.option("--budget", type=click.IntRange(1, 10**6), default=None,
              help="Maximum number of triples examined (default: 100000).")
@click.option("--homeo", default=None,
              help="Homeomorphism file, or identity / reflection / mobius:<a>.")
@_command(Command.QS_ESTIMATE)
def qs_estimate(**params):
    """Estimate the quasi-symmetry gauge of a circle homeomorphism."""


if __name__ == "__main__":
    cli()
