#!/usr/bin/env python3
"""End-to-end checks of the rieszlab command-line interface.

Run as: run_cli_tests.py <path-to-binary>. Each case spawns the binary
and asserts on exit code and output shape; failures print the offending
command and its transcript.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

FAILURES = []


def run(binary, *args, stdin=None):
    return subprocess.run(
        [str(binary), *args],
        capture_output=True,
        text=True,
        input=stdin,
        timeout=300,
    )


def check(name, ok, proc=None, detail=""):
    status = "ok" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail and not ok else ""))
    if not ok:
        if proc is not None:
            print(f"  argv: {proc.args}")
            print(f"  exit: {proc.returncode}")
            print(f"  stdout: {proc.stdout[:2000]}")
            print(f"  stderr: {proc.stderr[:2000]}")
        FAILURES.append(name)


def main():
    if len(sys.argv) != 2:
        print("usage: run_cli_tests.py <binary>")
        return 2
    binary = Path(sys.argv[1])
    tmp = Path(tempfile.mkdtemp(prefix="rieszlab-cli-"))

    # --- experiment: conditions preset runs clean and emits valid JSON ---
    p = run(binary, "experiment", "--preset", "conditions-classical")
    rep = None
    try:
        rep = json.loads(p.stdout)
    except json.JSONDecodeError:
        pass
    check(
        "experiment conditions-classical exits 0 with JSON report",
        p.returncode == 0
        and rep is not None
        and rep.get("schema_version") == 1
        and rep.get("verdict") == "conditions-pass",
        p,
    )

    # --- experiment: reports are byte-identical across runs ---
    out_a = tmp / "rep_a.json"
    out_b = tmp / "rep_b.json"
    pa = run(binary, "experiment", "--preset", "conditions-classical", "--out", str(out_a))
    pb = run(binary, "experiment", "--preset", "conditions-classical", "--out", str(out_b))
    check(
        "experiment reports are byte-identical across runs",
        pa.returncode == 0
        and pb.returncode == 0
        and out_a.read_bytes() == out_b.read_bytes(),
        pb,
    )

    # --- experiment: endpoint shape fails its integral condition (exit 1) ---
    endpoint_cfg = tmp / "endpoint.json"
    endpoint_cfg.write_text(json.dumps({"preset": "spanne-endpoint", "functions": ["zero"]}))
    p = run(binary, "experiment", "--config", str(endpoint_cfg))
    check(
        "experiment spanne-endpoint reports conditions-fail (exit 1)",
        p.returncode == 1 and "conditions-fail" in p.stderr,
        p,
    )

    # --- config errors exit 2 ---
    p = run(binary, "experiment", "--config", str(tmp / "missing.json"))
    check("missing config file exits 2", p.returncode == 2, p)

    bad_cfg = tmp / "bad.json"
    bad_cfg.write_text(json.dumps({"preset": "conditions-classical", "wobble": 3}))
    p = run(binary, "experiment", "--config", str(bad_cfg))
    check("unknown config key exits 2", p.returncode == 2, p)

    p = run(binary, "experiment", "--preset", "conditions-classical", "--format", "xml")
    check("unsupported --format exits 2", p.returncode == 2, p)

    p = run(binary, "experiment", "--preset", "no-such-preset")
    check("unknown preset exits 2", p.returncode == 2, p)

    # --- check-kernel / check-weight on the classical preset ---
    p = run(binary, "check-kernel", "--preset", "spanne-classical")
    body = None
    try:
        body = json.loads(p.stdout)
    except json.JSONDecodeError:
        pass
    check(
        "check-kernel passes on the classical kernel",
        p.returncode == 0
        and body is not None
        and body.get("ok") is True
        and abs(body["tail_integral"]["value"] - 4.0 / 3.0) < 1e-8,
        p,
    )

    p = run(binary, "check-weight", "--preset", "spanne-classical")
    body = None
    try:
        body = json.loads(p.stdout)
    except json.JSONDecodeError:
        pass
    check(
        "check-weight passes on the constant weight",
        p.returncode == 0
        and body is not None
        and body.get("ok") is True
        and abs(body["apq"]["value"]["value"] - 1.0) < 1e-6,
        p,
    )

    # --- check-conditions writes the full report to --out ---
    cond_out = tmp / "conditions.json"
    p = run(binary, "check-conditions", "--preset", "conditions-classical", "--out", str(cond_out))
    body = json.loads(cond_out.read_text()) if cond_out.exists() else None
    conds = body.get("conditions", []) if body else []
    check(
        "check-conditions writes condition reports with id/holds",
        p.returncode == 0
        and len(conds) >= 4
        and all("id" in c and "holds" in c for c in conds)
        and any(c["id"] == "spanne-integral" and c["holds"] for c in conds),
        p,
    )

    # --- norm: classical shape gives unit norm for the unit indicator ---
    p = run(binary, "norm", "--preset", "spanne-classical", "--function", "indicator-unit")
    body = None
    try:
        body = json.loads(p.stdout)
    except json.JSONDecodeError:
        pass
    check(
        "norm of indicator-unit in the classical source space is 1",
        p.returncode == 0
        and body is not None
        and abs(body["result"]["value"] - 1.0) < 1e-3
        and body["result"]["stable"] is True,
        p,
    )

    # --- potential: CSV table with the closed-form center value 8 ---
    p = run(binary, "potential", "--preset", "spanne-classical", "--format", "csv")
    lines = p.stdout.strip().splitlines()
    center_value = None
    for line in lines[1:]:
        cols = line.split(",")
        if cols and abs(float(cols[0])) < 1e-12:
            center_value = float(cols[1])
    check(
        "potential CSV holds the closed-form center value 8",
        p.returncode == 0
        and lines
        and lines[0] == "x,value,est_error"
        and center_value is not None
        and abs(center_value - 8.0) < 1e-6,
        p,
    )

    # --- help and subcommand listing ---
    p = run(binary, "--help")
    check("--help exits 0", p.returncode == 0 and "experiment" in p.stdout, p)
    p = run(binary, "presets")
    names = p.stdout.split()
    check(
        "presets lists the built-in names",
        p.returncode == 0 and "spanne-classical" in names and "adams-classical" in names,
        p,
    )

    print(f"\n{len(FAILURES)} failure(s)")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
