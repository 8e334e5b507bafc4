#!/usr/bin/env python3
"""Run the full verification suite and write JSON + CSV reports.

Usage: python scripts/run_verification.py [config.toml] [--out-dir reports]
"""

import argparse
import pathlib
import sys

from superweyl.harness import SuiteConfig, emit_report, gating_failures, load_config, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("config", nargs="?", default=None, help="TOML config (defaults built in)")
    parser.add_argument("--out-dir", default="reports")
    args = parser.parse_args()

    cfg = load_config(args.config) if args.config else SuiteConfig()
    report = run_suite(cfg)

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_report(report, str(out / "verification.json"), "json")
    emit_report(report, str(out / "verification.csv"), "csv")

    width = max(len(r.id) for r in report.checks)
    for r in report.checks:
        mark = "pass" if r.passed else "FAIL"
        print(f"{mark}  {r.id:<{width}}  residual={r.residual:12.3e}  tol={r.tol:8.1e}  {r.ms:9.2f} ms")
    failures = gating_failures(report)
    total_ms = sum(r.ms for r in report.checks)
    print(f"\n{len(report.checks)} checks, {len(failures)} gating failures, {total_ms/1000:.1f} s")
    print(f"reports written to {out}/verification.{{json,csv}}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
