# Copyright 2026 The oqss Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the oqss command line: outputs, exit codes, files."""

import json
import math
import os
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def run(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, cwd=cwd)


def check(name, cond, detail=""):
    print(("PASS " if cond else "FAIL ") + name + (f"  [{detail}]" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def read_fock(path):
    amps = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#")[0].split()
        if line:
            amps[int(line[0])] = complex(float(line[1]), float(line[2]))
    return amps


def results_dir(stdout):
    return Path(stdout.strip().splitlines()[-1].split(" ", 1)[1])


def without_wall(x):
    if isinstance(x, dict):
        return {k: without_wall(v) for k, v in x.items() if "wall" not in k}
    if isinstance(x, list):
        return [without_wall(v) for v in x]
    return x


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    env = {"OQSS_OUTPUT_DIR": str(tmp / "runs"), "OQSS_THREADS": "1"}

    # gkp-target
    r = run("gkp-target", "--db", "10", "--nmax", "32", env=env)
    tf = float(r.stdout.split("truncation_fidelity:")[1].split()[0]) if r.returncode == 0 else 0.0
    check("gkp-target 10 dB n_max 32 exits 0", r.returncode == 0, r.stderr)
    check("gkp-target prints truncation fidelity ~0.999", 0.9985 <= tf <= 0.9995, str(tf))
    target_path = Path(r.stdout.split("target:")[1].split()[0]) if r.returncode == 0 else None
    check("gkp-target writes into the run directory", target_path is not None and target_path.exists()
          and str(target_path).startswith(str(tmp / "runs")))

    r = run("gkp-target", "--db", "0", "--nmax", "4", "--out", str(tmp / "vac.txt"), env=env)
    amps = read_fock(tmp / "vac.txt") if r.returncode == 0 else {0: 0}
    check("gkp-target 0 dB is near vacuum", abs(amps[0]) ** 2 > 0.999, str(amps))
    r = run("gkp-target", "--db", "0", "--nmax", "4", "--out", str(tmp / "vac.txt"), env=env)
    check("explicit output file is never overwritten (I/O exit 5)", r.returncode == 5, str(r.returncode))
    r = run("gkp-target", "--nmax", "4", env=env)
    check("missing --db is a usage error (exit 2)", r.returncode == 2, str(r.returncode))

    # synthesize
    toy = tmp / "toy.txt"
    toy.write_text(f"0 {1 / math.sqrt(2)} 0\n4 {1 / math.sqrt(2)} 0\n")
    r = run("synthesize", "--target-file", str(toy), "--seed", "5", env=env)
    check("synthesize n_max=4 toy exits 0", r.returncode == 0, r.stdout + r.stderr)
    run_a = results_dir(r.stdout) if r.returncode == 0 else None
    r2 = run("synthesize", "--target-file", str(toy), "--seed", "5", env=env)
    run_b = results_dir(r2.stdout) if r2.returncode == 0 else None
    check("reruns get a fresh directory", run_a is not None and run_b is not None and run_a != run_b)
    if run_a and run_b:
        ja = json.loads((run_a / "result.json").read_text())
        jb = json.loads((run_b / "result.json").read_text())
        check("same seed reproduces every non-timing field", without_wall(ja) == without_wall(jb))
        check("report embeds the config", "[synthesize]" in (run_a / "report.txt").read_text())
        check("result records the config", "seed=5" in ja["config"])

    r = run("synthesize", "--db", "10", "--nmax", "32", "--layers", "2", env=env)
    check("infeasible plan is a planning error (exit 3)", r.returncode == 3, str(r.returncode) + r.stderr)
    check("planning error lists feasible budgets", "Feasible" in r.stderr, r.stderr)
    r = run("synthesize", "--nmax", "4", env=env)
    check("synthesize without a target is a usage error", r.returncode == 2, str(r.returncode))
    r = run("synthesize", "--db", "7", "--target-file", str(toy), env=env)
    check("two target specs are a usage error", r.returncode == 2, str(r.returncode))
    r = run("synthesize", "--target-file", str(toy), "--floor", "1.5", env=env)
    check("fidelity below --floor exits 7", r.returncode == 7, str(r.returncode))

    # config file
    if run_a:
        r = run("--config", str(run_a / "config.ini"), "synthesize", env=env)
        run_c = results_dir(r.stdout) if r.returncode == 0 else None
        same = run_c is not None and without_wall(json.loads((run_c / "result.json").read_text())) == without_wall(ja)
        check("stored config reproduces the run", same, r.stderr)

    # verify
    if run_a:
        res, tgt = run_a / "result.json", run_a / "target.txt"
        r = run("verify", "--result", str(res), "--target", str(tgt), env=env)
        fid = float(r.stdout.split("fidelity:")[1].split()[0]) if r.returncode == 0 else -1
        check("verify of a fresh result exits 0", r.returncode == 0, r.stdout + r.stderr)
        check("verify matches stored fidelity to 1e-9", abs(fid - ja["end_to_end_fidelity"]) <= 1e-9)
        bad = json.loads(res.read_text())
        bad["nodes"][0]["params"][0] += 0.05
        bad["nodes"][0]["circuit"] = None
        tampered = tmp / "tampered.json"
        tampered.write_text(json.dumps(bad))
        r = run("verify", "--result", str(tampered), "--target", str(tgt), env=env)
        check("tampered leaf parameter is detected (exit 6)", r.returncode == 6 and "FAILED" in r.stdout, r.stdout)
    r = run("synthesize", "--target-file", str(toy), "--layers", "2", "--seed", "5", env=env)
    check("two-layer synthesize exits 0", r.returncode == 0, r.stdout + r.stderr)
    if r.returncode == 0:
        run_d = results_dir(r.stdout)
        res, tgt = run_d / "result.json", run_d / "target.txt"
        r = run("verify", "--result", str(res), "--target", str(tgt), env=env)
        fid = float(r.stdout.split("fidelity:")[1].split()[0]) if r.returncode == 0 else -1
        check("verify of a two-layer result exits 0", r.returncode == 0, r.stdout + r.stderr)
        bad = json.loads(res.read_text())
        next(n for n in bad["nodes"] if "theta" in n)["theta"] += 0.05
        tampered = tmp / "tampered2.json"
        tampered.write_text(json.dumps(bad))
        r = run("verify", "--result", str(tampered), "--target", str(tgt), env=env)
        check("tampered angle is detected (exit 6)", r.returncode == 6 and "FAILED" in r.stdout, r.stdout)
        fid_t = float(r.stdout.split("fidelity:")[1].split()[0]) if "fidelity:" in r.stdout else 1.0
        check("tampered angle lowers the recomputed fidelity", fid_t < fid - 1e-4, f"{fid_t} vs {fid}")
    if run_a:
        r = run("verify", "--result", str(tmp / "missing.json"), "--target", str(tgt), env=env)
        check("missing result file is an I/O error (exit 5)", r.returncode == 5, str(r.returncode))
        (tmp / "garbage.json").write_text("{ not json")
        r = run("verify", "--result", str(tmp / "garbage.json"), "--target", str(tgt), env=env)
        check("malformed result file is a parse error (exit 5)", r.returncode == 5, str(r.returncode))

    # hafnian-bench
    r = run("hafnian-bench", "--dmin", "8", "--dmax", "12", "--batch-ms", "2", env=env)
    lines = r.stdout.strip().splitlines()
    check("hafnian-bench sweep emits header + one row per size",
          r.returncode == 0 and lines[0] == "D,l,pattern,predicted_steps,wall_time_ns" and len(lines) == 4)
    check("hafnian-bench reports the fitted slope", "slope" in r.stderr, r.stderr)
    r = run("hafnian-bench", "--dmin", "10", "--dmax", "10", "--batch-ms", "1", env=env)
    check("single size gives one row", r.returncode == 0 and len(r.stdout.strip().splitlines()) == 2)

    # wigner
    r = run("wigner", "--fock", str(tmp / "vac.txt"), "--q-range", "-1", "1", "--p-range", "-1", "1",
            "--nq", "3", "--np", "3", env=env)
    rows = [list(map(float, l.split(","))) for l in r.stdout.strip().splitlines()[1:]]
    check("wigner header", r.stdout.startswith("# -1 1 -1 1 3 3"), r.stdout[:40])
    check("near-vacuum Wigner peak is 1/pi", len(rows) == 3 and abs(rows[1][1] - 1 / math.pi) < 2e-3,
          str(rows))
    r = run("wigner", "--fock", str(target_path), "--q-range", "-4", "4", "--p-range", "0", "1", "--nq", "801",
            "--np", "2", env=env)
    w = [float(l.split(",")[0]) for l in r.stdout.strip().splitlines()[1:]]
    qs = [-4 + 8 * i / 800 for i in range(801)]
    peaks = [qs[i] for i in range(1, 800) if w[i] > w[i - 1] and w[i] >= w[i + 1] and w[i] > 0.05 * max(w)]
    gaps = [b - a for a, b in zip(peaks, peaks[1:])]
    check("GKP 10 dB Wigner has sqrt(pi)-spaced ridges along q",
          len(peaks) >= 3 and all(abs(g - math.sqrt(math.pi)) < 0.1 for g in gaps), str(peaks))
    r = run("wigner", "--fock", str(tmp / "vac.txt"), "--nq", "0", env=env)
    check("resolution 0 is a usage error (exit 2)", r.returncode == 2, str(r.returncode))
    r = run("wigner", "--fock", str(tmp / "none.txt"), env=env)
    check("missing Fock file is an I/O error (exit 5)", r.returncode == 5, str(r.returncode))

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
