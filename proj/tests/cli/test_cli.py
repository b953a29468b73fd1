"""End-to-end checks of the vrp2l command line: subcommands, artifacts, exit codes."""

import json
import pathlib
import subprocess
import sys
import tempfile

VRP2L = sys.argv[1] if len(sys.argv) > 1 else "vrp2l"


def run(*args, expect=0):
    proc = subprocess.run([VRP2L, *args], capture_output=True, text=True)
    assert proc.returncode == expect, (
        f"{args} -> exit {proc.returncode} (expected {expect})\n"
        f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
    )
    return proc


def main():
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="vrp2l_cli_"))
    inst = tmp / "instance.json"

    run("gen", "--seed", "5", "--suppliers", "4", "--warehouses", "2", "--shipments", "10",
        "--trucks", "6", "--cities", "2", "-o", str(inst))
    assert inst.exists()

    # deterministic generation
    inst2 = tmp / "instance2.json"
    run("gen", "--seed", "5", "--suppliers", "4", "--warehouses", "2", "--shipments", "10",
        "--trucks", "6", "--cities", "2", "-o", str(inst2))
    assert inst.read_bytes() == inst2.read_bytes()

    out = tmp / "run"
    run("solve", str(inst), "-o", str(out), "--iterations", "25", "--seed", "5")
    summary = json.loads((out / "summary.json").read_text())
    assert summary["feasible"] is True
    assert summary["postopt_mileage"] <= summary["tabu_mileage"] <= summary["initial_mileage"]
    assert (out / "solution.json").exists()
    assert (out / "run_config.json").exists()
    csv = (out / "convergence.csv").read_text().splitlines()
    assert csv[0] == "iteration,elapsed_ms,current_mileage,best_mileage"

    run("validate", str(inst), str(out / "solution.json"))

    # --no-postopt omits the post-opt column
    out2 = tmp / "run_nopost"
    run("solve", str(inst), "-o", str(out2), "--iterations", "5", "--no-postopt")
    summary2 = json.loads((out2 / "summary.json").read_text())
    assert "postopt_mileage" not in summary2

    # --no-bundle still solves
    out3 = tmp / "run_nb"
    run("solve", str(inst), "-o", str(out3), "--iterations", "5", "--no-bundle")

    # oracle on a tiny instance
    tiny = tmp / "tiny.json"
    run("gen", "--seed", "2", "--suppliers", "2", "--warehouses", "1", "--shipments", "3",
        "--trucks", "2", "--cities", "1", "-o", str(tiny))
    proc = run("oracle", str(tiny))
    assert "optimal mileage" in proc.stdout

    # bench with a small grid
    grid = tmp / "grid.json"
    grid.write_text(json.dumps([
        {"name": "wb", "tenure": 4},
        {"name": "nb", "no_bundle": True},
    ]))
    bench_out = tmp / "bench"
    run("bench", "--instance", str(inst), "-o", str(bench_out), "--iterations", "5",
        "--seeds", "1,2", "--grid", str(grid))
    ranked = (bench_out / "ranked.csv").read_text().splitlines()
    assert ranked[0] == "rank,combo,seed,initial_mileage,final_mileage,status"
    assert len(ranked) == 1 + 4  # 2 combos x 2 seeds

    # exit codes: input error
    run("solve", str(tmp / "missing.json"), expect=3)
    bad = tmp / "bad.json"
    bad.write_text("{ not json")
    run("solve", str(bad), expect=3)

    # exit codes: validation failure
    broken = json.loads((out / "solution.json").read_text())
    broken["total_mileage"] = 1.0
    bad_sol = tmp / "bad_solution.json"
    bad_sol.write_text(json.dumps(broken))
    run("validate", str(inst), str(bad_sol), expect=2)

    print("cli tests passed")


if __name__ == "__main__":
    main()
