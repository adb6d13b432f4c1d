"""Command-line interface (`osctorch <command> ...`)."""

from ._main import main, run, build_parser, RunOptions
