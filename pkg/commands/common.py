"""
Command Helpers - Exit codes and shared plumbing for the command modules
"""

import sys
from typing import Iterable, List, Tuple

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Bad command-line input discovered after parsing"""


def group_key(ctx) -> Tuple[str, int]:
    """Lookup key into the golden tables"""
    return ctx.cox_type.value, ctx.m or ctx.rank


def status_lines(results: Iterable[Tuple[bool, str]], ok: str = "PASS", bad: str = "FAIL") -> List[Tuple[str, str]]:
    return [(ok if passed else bad, message) for passed, message in results]


def log_status(status: str, message: str):
    print(f"[{status}] {message}", file=sys.stderr)
