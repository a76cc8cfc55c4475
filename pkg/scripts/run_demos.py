"""Replay every CLI demo followed by the full verification run."""

import sys

from wittkit.cli import main

if __name__ == "__main__":
    code = 0
    for argv in (["demo", "deformation"], ["demo", "heitmann"], ["demo", "dvr"],
                 ["verify", "--suite", "all"]):
        print(f"$ wittkit {' '.join(argv)}")
        code = max(code, main(argv))
        print()
    sys.exit(code)
