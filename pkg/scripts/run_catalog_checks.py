#!/usr/bin/env python3
"""Run every invariant suite on every catalog model and print the report.

Exit status 0 iff all checks pass.  Equivalent to `pointaffine check`,
kept as a script for batch runs.
"""

import sys

from pointaffine import catalog, models
from pointaffine.cli import run_suite


def main() -> int:
    lines = []
    ok = True
    for spec in catalog.default_specs():
        assert not models.validate(spec)
        ok &= run_suite(spec, "all", lines)
    for line in lines:
        print(line)
    print("ALL PASS" if ok else "FAILURES PRESENT")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
