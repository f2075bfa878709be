#!/usr/bin/env python3
"""End-to-end checks for the eigenchaos command-line tool.

Usage: cli_checks.py /path/to/eigenchaos

Runs the binary against small fixtures in a temp directory and checks exit
codes, output files, and the documented stdout shapes. Prints one line per
check and exits nonzero on the first mismatch.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
CHECKS = 0


def run(args, expect=0, contains=None, stderr_contains=None):
    """Run the CLI with args, assert the exit code and optional substrings."""
    global CHECKS
    CHECKS += 1
    proc = subprocess.run([BIN] + args, capture_output=True, text=True, timeout=300)
    label = " ".join(args)
    if proc.returncode != expect:
        print(f"FAIL [{label}]: exit {proc.returncode}, expected {expect}")
        print(proc.stdout)
        print(proc.stderr)
        sys.exit(1)
    if contains is not None and contains not in proc.stdout:
        print(f"FAIL [{label}]: stdout missing {contains!r}")
        print(proc.stdout)
        sys.exit(1)
    if stderr_contains is not None and stderr_contains not in proc.stderr:
        print(f"FAIL [{label}]: stderr missing {stderr_contains!r}")
        print(proc.stderr)
        sys.exit(1)
    print(f"ok [{label}] -> {proc.returncode}")
    return proc


def main():
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="eigenchaos_cli_"))

    # --- version and oracle gate -------------------------------------------
    run(["version"], contains="eigenchaos")
    run(["oracle-suite", "--seed", "1"], contains="[PASS]")
    run(["--help"])
    run(["--definitely-not-a-flag"], expect=1)
    run(["no-such-verb"], expect=1)

    # --- partition validation ------------------------------------------------
    good = tmp / "entries2.txt"
    good.write_text("2 3 2\n1,1\n1,2 2,1\n2,2\n")
    run(["validate-partition", "--file", str(good)], contains="partition ok")

    uncovered = tmp / "uncovered.txt"
    uncovered.write_text("2 2 2\n1,1\n2,2\n")
    run(["validate-partition", "--file", str(uncovered)], expect=3)

    run(["validate-partition", "--file", str(tmp / "missing.txt")], expect=1)

    garbage = tmp / "garbage.txt"
    garbage.write_text("not a partition\n")
    run(["validate-partition", "--file", str(garbage)], expect=1)

    run(["validate-partition"], expect=1)  # --file is required

    # --- path sweep -----------------------------------------------------------
    x = tmp / "x.txt"
    y = tmp / "y.txt"
    x.write_text("2\n1 2\n2 1\n")
    y.write_text("2\n1 2.1\n2.1 1\n")
    sweep_csv = tmp / "sweep.csv"
    run(["sweep-path", "--x", str(x), "--y", str(y), "--grid", "5",
         "--out", str(sweep_csv)])
    lines = sweep_csv.read_text().splitlines()
    assert lines[0] == "s,lambda_alpha,delta_alpha,s_alpha,m_infty", lines[0]
    assert len(lines) == 1 + 5, f"expected 5 grid rows, got {len(lines) - 1}"
    print("ok [sweep csv shape]")

    run(["sweep-path", "--x", str(x), "--y", str(tmp / "missing.txt")], expect=1)
    asym = tmp / "asym.txt"
    asym.write_text("2\n1 2\n3 1\n")
    run(["sweep-path", "--x", str(x), "--y", str(asym)], expect=1)

    # --- experiment runs -------------------------------------------------------
    cfg = {
        "kind": "ou_decorrelation",
        "n_list": [8],
        "alpha": {"index": 1},
        "params": {"u_list": [0.0, 0.8]},
        "trials": 100,
        "master_seed": 21,
    }
    cfg_path = tmp / "ou.json"
    cfg_path.write_text(json.dumps(cfg))
    proc = run(["run", "--config", str(cfg_path)],
               contains="kind,n,alpha,control_name,control_value,mean,std_error,trials,wall_ms")
    assert "ou_decorrelation,8,1,u,0" in proc.stdout, proc.stdout

    cfg["output"] = str(tmp / "ou.csv")
    cfg_file = tmp / "ou_file.json"
    cfg_file.write_text(json.dumps(cfg))
    run(["run", "--config", str(cfg_file)], contains="wrote")
    assert (tmp / "ou.csv").exists()
    meta = json.loads((tmp / "ou.csv.meta.json").read_text())
    assert meta["config"]["master_seed"] == 21, meta
    print("ok [run output + metadata sidecar]")

    run(["run", "--config", str(tmp / "missing.json")], expect=1)
    bad_json = tmp / "bad.json"
    bad_json.write_text("{ not json")
    run(["run", "--config", str(bad_json)], expect=1)
    bad_kind = tmp / "badkind.json"
    bad_kind.write_text(json.dumps({**cfg, "kind": "nonsense"}))
    run(["run", "--config", str(bad_kind)], expect=1)
    run(["run"], expect=1)  # --config is required

    # --- identity checks -------------------------------------------------------
    report = tmp / "ou_report.json"
    run(["check-identity", "ou", "--n", "2", "--trials", "2000", "--grid-points", "17",
         "--t-max", "8", "--z-max", "6", "--seed", "7", "--json", str(report)])
    rep = json.loads(report.read_text())
    assert "z" in rep and "lhs" in rep and "rhs" in rep, rep
    print("ok [ou identity report json]")

    run(["check-identity", "pdbr", "--n", "2", "--trials", "2000", "--z-max", "6"])
    run(["check-identity", "ladder", "--n", "2", "--trials", "3000"])
    run(["check-identity", "diff-cov", "--n", "3", "--kb", "1", "--trials", "5000",
         "--z-max", "6"])
    run(["check-identity", "dominance", "--n", "3", "--t", "0.4", "--trials", "2000"])
    run(["check-identity", "dominance", "--n", "3", "--t", "5.0", "--trials", "2000"],
        expect=1)  # beyond the dominance time cap
    run(["check-identity", "monotonicity", "--n", "8", "--trials", "500"])
    run(["check-identity", "ou", "--n", "2", "--trials", "2000", "--grid-points", "16",
         "--t-max", "8"], expect=1)  # even quadrature grid
    run(["check-identity"], expect=1)  # subcommand required

    # --threads is a global flag and must not change results.
    a = run(["--threads", "1", "check-identity", "diff-cov", "--n", "3", "--kb", "0",
             "--trials", "4000", "--z-max", "6"])
    b = run(["--threads", "4", "check-identity", "diff-cov", "--n", "3", "--kb", "0",
             "--trials", "4000", "--z-max", "6"])
    assert a.stdout == b.stdout, (a.stdout, b.stdout)
    print("ok [thread count does not change results]")

    print(f"cli checks: all {CHECKS} passed")


if __name__ == "__main__":
    main()
