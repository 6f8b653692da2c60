"""irqa — Subcommand aggregator."""

import argparse

from irqa.commands import difficult, eval, eval_ext, index, mine, pipeline, report, retrieve, rf

COMMANDS = [index, retrieve, eval, difficult, mine, eval_ext, rf, report, pipeline]


def register_all(parser: argparse.ArgumentParser) -> None:
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for module in COMMANDS:
        module.register(subparsers)
