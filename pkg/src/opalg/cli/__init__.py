"""
Command-line front end: check, derive, numeric, converge.
"""

from opalg.cli.app import cli, main
from opalg.cli.records import RunRecord

__all__ = ["RunRecord", "cli", "main"]
