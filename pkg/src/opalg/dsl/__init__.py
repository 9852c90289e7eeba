"""
Operator-algebra script language (.oad): parser, printer and runner.
"""

from opalg.dsl.parser import parse, parse_expression
from opalg.dsl.printer import print_expr, print_node, print_script
from opalg.dsl.runner import AssertOutcome, RunReport, read_expr, run, run_text

__all__ = [
    "AssertOutcome",
    "RunReport",
    "parse",
    "parse_expression",
    "print_expr",
    "print_node",
    "print_script",
    "read_expr",
    "run",
    "run_text",
]
