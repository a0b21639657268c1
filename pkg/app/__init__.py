import click

from config import config
from .commands import init_commands


def create_cli():
    """
    Build and return the command group
    - solve, check, converge, exponents
    """

    @click.group(help="Galerkin approximation toolkit for monotone evolution problems.")
    @click.version_option(config.VERSION)
    def cli():
        pass

    # Register subcommands
    init_commands(cli)
    return cli
