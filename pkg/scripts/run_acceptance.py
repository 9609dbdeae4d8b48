#!/usr/bin/env python3
"""Run the acceptance suite and show one PASS/FAIL line per criterion.

Exit status is pytest's.  C4b is a documented expected failure: the
simulated Grain-128a pre-init step total is 245,894 while the published
figure (245,830) is below the provable minimum for a polarity-correct plan.
"""

import subprocess
import sys
from pathlib import Path


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-q", "-s"],
        cwd=root,
        capture_output=True,
        text=True,
    )
    shown = False
    for line in proc.stdout.splitlines():
        idx = line.find("ACCEPTANCE")
        if idx >= 0:
            print(line[idx:])
            shown = True
    if not shown:
        print(proc.stdout)
    tail = [ln for ln in proc.stdout.splitlines() if "passed" in ln or "failed" in ln]
    if tail:
        print(tail[-1].strip("= "))
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
