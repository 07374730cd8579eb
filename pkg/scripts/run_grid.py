#!/usr/bin/env python3
"""Run the full verification grid from Python (no configs needed) and
print one line per model plus the overall verdict.  Exit code mirrors the
CLI convention: 0 pass, 1 any failure."""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from mlg import comparison, harness  # noqa: E402


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    models = harness.grid_models(seed=seed)
    entries = [{"name": m.name, "base_points": list(m.base_points)}
               for m in models]
    report = comparison.verify_comparison_suite(entries)
    for m in report["models"]:
        bad = [k for k, v in m["checks"].items() if not v["ok"]]
        print("%-24s %7.2fs  %s" % (m["name"], m["elapsed_seconds"],
                                    "OK" if not bad else
                                    "FAIL " + ",".join(bad)))
        for k in bad:
            cex = m["checks"][k].get("counterexample")
            if cex is not None:
                print("    %s: %s" % (k, json.dumps(cex, sort_keys=True)))
    print("grid:", "PASS" if report["ok"] else "FAIL")
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
