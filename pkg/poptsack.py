"""
Pop-Tsack Torsing - Command-line runner
Depth tables, orbits, normal forms and verification suites for finite Coxeter groups
"""

import argparse
import importlib
import os
import sys
import traceback
from typing import Callable, List, Optional

from dotenv import load_dotenv

# Ensure the repo root is importable when run from elsewhere
_root_dir = os.path.dirname(os.path.abspath(__file__))
if _root_dir not in sys.path:
    sys.path.insert(0, _root_dir)

from commands.common import EXIT_OK, EXIT_USAGE, UsageError  # noqa: E402
from utils.errors import BudgetExceededError  # noqa: E402
from utils.export_manager import FORMATS, ExportManager  # noqa: E402
from utils.run_config import RunConfig, apply_env_overrides, load_config_file  # noqa: E402
from utils.session import Session  # noqa: E402

COMMAND_MODULES = (
    "commands.table_commands",
    "commands.orbit_commands",
    "commands.verify_commands",
)


class PopTsackRunner:
    """Parses arguments, merges configuration and dispatches to command handlers"""

    def __init__(self, config_path: str = "config.json"):
        load_dotenv()
        self.config_path = config_path
        self.config = self._load_config()
        self.parser = argparse.ArgumentParser(
            prog="poptsack",
            description="Pop-tsack torsing on finite Coxeter groups",
        )
        self.subparsers = self.parser.add_subparsers(dest="command", metavar="COMMAND")
        self.subparsers.required = True
        self.export_manager = ExportManager(self.config.get("export_dir", "exports"))
        self.load_commands()

    def _load_config(self) -> dict:
        """config.json with environment overrides applied"""
        return apply_env_overrides(load_config_file(self.config_path))

    def load_commands(self):
        for module_name in COMMAND_MODULES:
            try:
                module = importlib.import_module(module_name)
                module.setup(self)
            except Exception as e:
                print(f"[ERROR] Failed to load {module_name}: {e}", file=sys.stderr)
                traceback.print_exc()

    def add_command(self, name: str, handler: Callable, help_text: str, group: bool = True) -> argparse.ArgumentParser:
        """
        Register a subcommand with the shared flags

        Args:
            name: Subcommand name
            handler: Called as handler(runner, session, args) and returns an exit code
            help_text: One-line description
            group: Whether the command takes a Coxeter type and rank
        """
        sub = self.subparsers.add_parser(name, help=help_text, description=help_text)
        if group:
            sub.add_argument("type", nargs="?", help="Coxeter type: A B D E F H I2")
            sub.add_argument("rank", nargs="?", type=int, help="Rank, or m for I2(m)")
            sub.add_argument("--type", dest="type_flag", help="Coxeter type (alternative to the positional)")
            sub.add_argument("--rank", dest="rank_flag", type=int, help="Rank (alternative to the positional)")
            sub.add_argument("--cox", default=None,
                             help='Coxeter element: "standard", "bipartite" or a word such as "1 3 2"')
        sub.add_argument("--format", dest="output_format", choices=FORMATS, default=None)
        sub.add_argument("--out", default=None, help="Write the payload to this file instead of stdout")
        sub.add_argument("--cache-dir", dest="cache_dir", default=None)
        sub.add_argument("--no-cache", dest="cache_enabled", action="store_false", default=None)
        sub.add_argument("--jobs", type=int, default=None)
        sub.add_argument("--budget-order", dest="max_group_order", type=int, default=None)
        sub.add_argument("--allow-large", dest="allow_large", action="store_true", default=None)
        sub.add_argument("--convention", dest="product_convention",
                         choices=("left_to_right", "right_to_left"), default=None)
        sub.add_argument("--projection-mode", dest="projection_mode",
                         choices=("lattice", "closure", "auto"), default=None)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--debug-checks", dest="debug_checks", action="store_true", default=None)
        sub.set_defaults(handler=handler)
        return sub

    @staticmethod
    def group_of(args) -> tuple:
        """(type, rank) from positionals or flags"""
        cox_type = args.type_flag or args.type
        rank = args.rank_flag if args.rank_flag is not None else args.rank
        if cox_type is None or rank is None:
            raise UsageError("A Coxeter type and rank are required, e.g. `table A 4`")
        return cox_type, rank

    def run_config(self, args) -> RunConfig:
        overrides = {
            key: getattr(args, key, None)
            for key in ("output_format", "out", "cache_dir", "cache_enabled", "jobs", "max_group_order",
                        "allow_large", "product_convention", "projection_mode", "seed", "debug_checks")
        }
        overrides["coxeter"] = getattr(args, "cox", None)
        return RunConfig.from_mapping(self.config, overrides)

    def emit(self, text: str, config: RunConfig):
        """Send the payload to --out or stdout"""
        if config.out:
            path = self.export_manager.write(text, config.out)
            print(f"[OK] Wrote {path}", file=sys.stderr)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_USAGE

        try:
            config = self.run_config(args)
            session = Session(config)
            return args.handler(self, session, args)
        except BudgetExceededError as e:
            print(f"[ERROR] {e}", file=sys.stderr)
            return EXIT_USAGE
        except ValueError as e:
            # domain errors, parse errors and bad configuration
            print(f"[ERROR] {e}", file=sys.stderr)
            return EXIT_USAGE
        except KeyboardInterrupt:
            print("[WARNING] Interrupted", file=sys.stderr)
            return EXIT_USAGE
        except Exception as e:
            print(f"[ERROR] Unexpected failure: {e}", file=sys.stderr)
            traceback.print_exc()
            return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    return PopTsackRunner().run(argv)


if __name__ == "__main__":
    sys.exit(main())
