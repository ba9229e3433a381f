#!/usr/bin/env python3
"""Run every bundled experiment config and summarize the verdicts.

Reports land under reports/<config-name>/ as set by each config's out_dir.
The constant-symbol kernel run is expected to exit 2 (Unbounded verdict);
everything else should exit 0.
"""

import json
import sys
from pathlib import Path

from discop.config import parse_config
from discop.harness import emit_reports, run

EXPECTED_EXIT = {"kernel_sup_constant": 2}


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    failures = []
    for path in sorted((root / "configs").glob("*.json")):
        config = parse_config(json.loads(path.read_text()))
        outcome = run(config)
        out_dir = root / (config.out_dir or f"reports/{path.stem}")
        emit_reports(outcome, out_dir)
        expected = EXPECTED_EXIT.get(path.stem, 0)
        status = "ok" if outcome.exit_code == expected else "UNEXPECTED"
        if status != "ok":
            failures.append(path.stem)
        print(f"{path.stem}: exit {outcome.exit_code} (expected {expected}) -> {out_dir} [{status}]")
    if failures:
        print(f"unexpected exits: {failures}", file=sys.stderr)
        return 1
    print("all experiments completed with expected exit codes")
    return 0


if __name__ == "__main__":
    sys.exit(main())
