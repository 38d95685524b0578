"""
Toolkit Entry Point

ADR Note: Allows running the toolkit as module: python -m src.cli <command>
Exit codes follow documentation/ADR-003-reports-and-exit-codes.md.
"""

import sys

from .runner import main as run_main


def main():
    """Main entry point"""
    try:
        sys.exit(run_main())
    except KeyboardInterrupt:
        print("Stopped by user", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
