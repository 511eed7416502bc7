# main.py - Entry point for the colombeau-lab executable

import sys

from cli import app
from utils import status


def main():
    """Run the command line; unexpected errors end as one status line, never a traceback."""
    try:
        app(prog_name="colombeau-lab")
    except SystemExit:
        raise
    except KeyboardInterrupt:
        status("warn", "Interrupted")
        sys.exit(130)
    except Exception as e:
        status("fail", f"Unexpected error: {type(e).__name__}: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
