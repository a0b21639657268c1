import gc
import os

import click

from config import logger
from app.exceptions import GalerkinError
from app.utils import canonical_json
from .runs import run_check, run_converge, run_exponents, run_solve

# Exit codes
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# Parse "2,4,8" into a strictly increasing list of positive levels
def _parse_levels(ctx, param, value):
    try:
        levels = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers such as 2,4,8")
    if not levels or min(levels) < 1:
        raise click.BadParameter("levels must be positive integers")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise click.BadParameter(f"levels must be strictly increasing, got {value}")
    return levels


# Run one subcommand and turn its outcome into the process exit code
def _finish(action, *args):
    try:
        code = action(*args)
    except GalerkinError as e:
        logger.error(f"{type(e).__name__}: {e}")
        click.echo(f"Error: {e}", err=True)
        code = EXIT_USAGE
    except Exception:
        logger.exception("Unexpected failure")
        code = EXIT_FAILED
    finally:
        gc.collect()
    click.get_current_context().exit(code)


_config_option = click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Problem file (JSON).",
)


def init_commands(cli):
    @cli.command()
    @_config_option
    @click.option("--level", type=click.IntRange(min=1), default=None, help="Override the level.")
    @click.option(
        "--out",
        default=os.path.join("runs", "solve"),
        show_default=True,
        type=click.Path(file_okay=False),
    )
    def solve(config_path, level, out):
        """
        Solve the Galerkin system and audit the discrete trajectory.
        """
        _finish(run_solve, config_path, level, out)

    @cli.command()
    @_config_option
    @click.option("--seed", type=int, default=None, help="Override checks.seed.")
    @click.option(
        "--out",
        default=None,
        type=click.Path(file_okay=False),
        help="Write report.json here instead of printing it.",
    )
    def check(config_path, seed, out):
        """
        Sample the structural hypotheses of the operator family.
        """

        def action(path, seed, out):
            code, bundle = run_check(path, seed, out)
            if out is None:
                click.echo(canonical_json(bundle), nl=False)
            return code

        _finish(action, config_path, seed, out)

    @cli.command()
    @_config_option
    @click.option("--levels", required=True, callback=_parse_levels, help="For example 2,4,8.")
    @click.option(
        "--out",
        default=os.path.join("runs", "converge"),
        show_default=True,
        type=click.Path(file_okay=False),
    )
    def converge(config_path, levels, out):
        """
        Measure Cauchy errors across a ladder of levels.
        """
        _finish(run_converge, config_path, levels, out)

    @cli.command()
    @click.argument("d", type=int)
    @click.argument("p")
    def exponents(d, p):
        """
        Print the exponent report for dimension D and growth exponent P (e.g. 11/5).
        """

        def action(d, p):
            click.echo(canonical_json(run_exponents(d, p)), nl=False)
            return EXIT_OK

        _finish(action, d, p)
