"""CLI integration tests: exit-status discipline, report contents, artifacts.

Usage: cli_test.py <kaclab-binary> <workdir>
"""

import json
import pathlib
import subprocess
import sys

BINARY = sys.argv[1]
WORK = pathlib.Path(sys.argv[2])
CONFIGS = pathlib.Path(__file__).resolve().parent.parent.parent / "configs"

passed = 0


def run(subcommand, config, out, extra=None):
    out_dir = WORK / out
    cmd = [BINARY, subcommand, "--config", str(CONFIGS / config), "--out", str(out_dir), "--quiet"]
    cmd += extra or []
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc, out_dir


def check(cond, msg):
    global passed
    if not cond:
        print(f"FAIL: {msg}")
        sys.exit(1)
    passed += 1
    print(f"ok: {msg}")


def read_report(out_dir, name="report.json"):
    return json.loads((out_dir / name).read_text())


def main():
    WORK.mkdir(parents=True, exist_ok=True)

    # exact classical Kac: exit 0, LHS rendered as 1/1
    proc, out = run("verify-kac", "verify_kac_cyclic5.json", "kac1")
    check(proc.returncode == 0, "verify-kac cyclic(5) exits 0")
    rep = read_report(out)
    check(rep["body"]["exact"]["return_time_integral"] == "1/1", "report shows 1/1")
    check(rep["body"]["pass"] is True, "report body records the pass")

    # byte-identical body on a rerun (timestamp only in the header)
    proc2, out2 = run("verify-kac", "verify_kac_cyclic5.json", "kac1_rerun")
    rep2 = read_report(out2)
    check(json.dumps(rep["body"], sort_keys=True) == json.dumps(rep2["body"], sort_keys=True),
          "report bodies are byte-identical across reruns")

    # allocation identity with an explicit f
    proc, out = run("verify-allocation", "verify_allocation_cyclic5.json", "alloc1")
    check(proc.returncode == 0, "verify-allocation cyclic(5) exits 0")
    rep = read_report(out)
    check(rep["body"]["exact"]["f_kappa_integral"] == rep["body"]["exact"]["f_integral"],
          "transport identity holds exactly")

    # kac-function writes CSV artifacts
    proc, out = run("kac-function", "kac_function_cyclic5.json", "kf1")
    check(proc.returncode == 0, "kac-function exits 0")
    check((out / "tail_bounds.csv").exists(), "tail_bounds.csv written")
    check((out / "cell_sizes.csv").exists(), "cell_sizes.csv written")
    rep = read_report(out)
    check(rep["body"]["exact"]["cell_size_integral"] == "1/1", "cell-size integral is 1/1")

    # voronoi-cells: explicit W, SVG artifact, frozen cells
    proc, out = run("voronoi-cells", "voronoi_cells_w.json", "vor1")
    check(proc.returncode == 0, "voronoi-cells (explicit W) exits 0")
    rep = read_report(out)
    check(rep["body"]["exact"]["strict_cell"] == [[0, 0]], "strict cell is the origin")
    check(len(rep["body"]["exact"]["closed_cell"]) == 9, "closed cell has 9 points")
    svg = (out / "axis_cells.svg").read_text()
    check(svg.startswith("<svg"), "SVG diagram written")

    # voronoi-cells from a finite Z^2 system with the sandwich check
    proc, out = run("voronoi-cells", "voronoi_cells_system.json", "vor2")
    check(proc.returncode == 0, "voronoi-cells (system) exits 0")
    rep = read_report(out)
    verdicts = {v["check"]: v["pass"] for v in rep["body"]["verdicts"]}
    check(verdicts.get("voronoi_sandwich") is True, "sandwich verdict holds")
    check(verdicts.get("cell_almost_convex") is True, "cell is almost convex")

    # relation-check, worked example and bridge mode
    proc, out = run("relation-check", "relation_check_worked.json", "rel1")
    check(proc.returncode == 0, "relation-check exits 0")
    rep = read_report(out)
    check(rep["body"]["exact"]["preimage_integral"] == "1/1", "preimage expectation is 1/1")

    proc, out = run("relation-check", "relation_bridge_cyclic5.json", "rel2")
    check(proc.returncode == 0, "relation bridge exits 0")
    rep = read_report(out)
    verdicts = {v["check"]: v["pass"] for v in rep["body"]["verdicts"]}
    check(verdicts.get("bridge_coherent") is True, "bridge coherence verdict holds")

    # generator-demo, finite worked instance and rotation accounting
    proc, out = run("generator-demo", "generator_demo_cyclic5.json", "gen1")
    check(proc.returncode == 0, "generator-demo (finite) exits 0")
    rep = read_report(out)
    recon = rep["body"]["exact"]["reconstruction"]
    check(recon[0]["reconstructed"] == [0, 2], "E_1 = {0,2} reconstructed exactly")

    proc, out = run("generator-demo", "generator_demo_rotation.json", "gen2")
    check(proc.returncode == 0, "generator-demo (rotation) exits 0")
    rep = read_report(out)
    check(rep["body"]["exact"]["residual"] == "1/2097152", "residual = eps * 2^-20 exactly")

    proc, out = run("generator-demo", "generator_demo_odometer.json", "gen3")
    check(proc.returncode == 0, "generator-demo (odometer) exits 0")
    rep = read_report(out)
    check(rep["body"]["exact"]["residual"] == "1/2048", "odometer residual = eps * 2^-10 exactly")

    # census
    proc, out = run("census", "census_two_cycles.json", "cen1")
    check(proc.returncode == 0, "census exits 0")
    rep = read_report(out)
    check(len(rep["body"]["exact"]["orbits"]) == 2, "census lists both orbits")

    # exit-status discipline: config validation failure -> 3, names the field
    bad = WORK / "bad_config.json"
    doc = json.loads((CONFIGS / "verify_kac_cyclic5.json").read_text())
    doc["system"]["masses"][0] = "1/7"
    bad.write_text(json.dumps(doc))
    proc = subprocess.run([BINARY, "verify-kac", "--config", str(bad), "--out", str(WORK / "bad")],
                          capture_output=True, text=True)
    check(proc.returncode == 3, "mass-sum validation fails with exit 3")
    check("masses" in proc.stderr or "sum to 1" in proc.stderr, "diagnostic names the field")

    # command/subcommand mismatch -> 3
    proc = subprocess.run(
        [BINARY, "census", "--config", str(CONFIGS / "verify_kac_cyclic5.json"),
         "--out", str(WORK / "mismatch")],
        capture_output=True, text=True)
    check(proc.returncode == 3, "command mismatch fails with exit 3")

    # abstention -> 2: budget of one step leaves most return times unresolved
    proc, _ = run("verify-kac", "verify_kac_rotation.json", "abstain",
                  extra=["--budget", "1", "--samples", "2000"])
    check(proc.returncode == 2, "budget exhaustion exits 2 (abstention)")

    # usage error -> 3
    proc = subprocess.run([BINARY, "verify-kac"], capture_output=True, text=True)
    check(proc.returncode == 3, "missing --config is a usage error (exit 3)")

    # statistical commands still pass at reduced sample counts
    proc, out = run("verify-kac", "verify_kac_rotation.json", "mc1",
                    extra=["--samples", "200000"])
    check(proc.returncode == 0, "verify-kac rotation exits 0")
    rep = read_report(out)
    est = rep["body"]["estimated"]["return_time_integral"]
    check(abs(est["mean"] - 1.0) <= 3 * est["stderr"], "MC estimate within 3 sigma of 1")
    check(rep["body"]["inputs"]["samples"] == 200000, "overridden sample count echoed")

    proc, out = run("verify-allocation", "verify_allocation_rotation.json", "mc2")
    check(proc.returncode == 0, "verify-allocation rotation exits 0")

    print(f"cli integration: {passed} checks passed")


if __name__ == "__main__":
    main()
