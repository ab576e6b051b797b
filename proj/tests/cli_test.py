"""End-to-end checks of the cuspwind command-line tool: exit codes, CSV
schemas, manifests and determinism."""
import cmath
import csv
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

EXE = str(Path(sys.argv[1]).resolve())
failures = []


def run(*args, cwd):
    return subprocess.run([EXE, *map(str, args)], cwd=cwd, capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def synthetic_csv(path, s, c, alphas):
    with open(path, "w", newline="") as f:
        f.write("alpha,q,b,lyapunov,residual_p,residual_dq,n_used,L_used\n")
        for a in alphas:
            f.write(f"{a!r},{a ** -1.7!r},{s - a ** -c!r},5,0,0,6,256\n")


with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)

    r = run("--version", cwd=d)
    check(r.returncode == 0 and r.stdout.strip() == "0.1.0", "version")

    r = run("dimension", "--example", cwd=d)
    s = float(r.stdout.split()[2])
    check(r.returncode == 0 and 0.5 < s < 1.0, f"dimension --example -> s={s}")
    check('"command": "dimension"' in r.stderr, "dimension manifest on stderr")

    r = run("dimension", "--example", "--L", 5, cwd=d)
    check(r.returncode == 4 and "TruncationDominates" in r.stderr, "--L 5 -> exit 4")
    r = run("dimension", "--example", "--tol", -1, cwd=d)
    check(r.returncode == 2, "negative --tol -> exit 2")

    (d / "bad.json").write_text('{"schema_version": 1, "hyperbolic": [{"h": [[1, 0]]}]}')
    r = run("dimension", "--config", "bad.json", cwd=d)
    check(r.returncode == 2 and "hyperbolic[0].h" in r.stderr, "malformed config -> exit 2 naming field")
    (d / "notjson.json").write_text("{")
    check(run("dimension", "--config", "notjson.json", cwd=d).returncode == 2, "invalid JSON -> exit 2")

    r = run("config", "--example", "--out", "ex.json", cwd=d)
    check(r.returncode == 0, "config export")
    cfg = json.loads((d / "ex.json").read_text())
    # h_inv that is not the inverse of h: validation error.
    bad = json.loads((d / "ex.json").read_text())
    bad["hyperbolic"][0]["h_inv"] = bad["hyperbolic"][0]["h"]
    (d / "mismatch.json").write_text(json.dumps(bad))
    check(run("dimension", "--config", "mismatch.json", cwd=d).returncode == 3, "inverse mismatch -> exit 3")
    r = run("dimension", "--config", "ex.json", cwd=d)
    check(r.returncode == 0 and abs(float(r.stdout.split()[2]) - s) < 1e-12, "config round trip")

    r = run("spectrum", "--example", "--alpha-grid", "0:4:3:lin", cwd=d)
    check(r.returncode == 2, "alpha grid with 0 -> exit 2")
    r = run("spectrum", "--example", "--alpha-grid", "1:2:3", cwd=d)
    check(r.returncode == 2, "bad grid spec -> exit 2")

    r = run("spectrum", "--example", "--alpha-grid", "1:64:5:log", "--out", "spec.csv", cwd=d)
    check(r.returncode == 0, "spectrum run")
    header = (d / "spec.csv").read_text().splitlines()[0]
    check(header == "alpha,q,b,lyapunov,residual_p,residual_dq,n_used,L_used", "spectrum header")
    sp = rows(d / "spec.csv")
    bs = [float(x["b"]) for x in sp]
    check(len(sp) == 5 and all(b1 < b2 for b1, b2 in zip(bs, bs[1:])), "5 rows, b monotone")
    check(b"\r" not in (d / "spec.csv").read_bytes(), "LF line endings")
    st = rows(d / "spec.csv.status.csv")
    check(len(st) == 5 and all(x["status"] == "ok" for x in st), "status sidecar")
    man = json.loads((d / "spec.csv.manifest.json").read_text())
    check(man["flags"]["alpha_grid"] == "1:64:5:log" and man["version"] == "0.1.0", "manifest sidecar")
    first = (d / "spec.csv").read_bytes()
    run("spectrum", "--example", "--alpha-grid", "1:64:5:log", "--out", "spec.csv", cwd=d)
    check((d / "spec.csv").read_bytes() == first, "rerun -> identical bytes")

    r = run("dirichlet", "--b", 0.5, cwd=d)
    check(r.returncode == 2, "dirichlet b=0.5 -> exit 2")
    r = run("dirichlet", "--b", 0.75, "--q-grid", "1e-6:1e-1:6:log", "--out", "dir.csv", cwd=d)
    dr = rows(d / "dir.csv")
    check(r.returncode == 0 and list(dr[0].keys()) == ["q", "K", "principal", "ratio"], "dirichlet schema")
    last = min(dr, key=lambda x: float(x["q"]))
    check(abs(float(last["ratio"]) - 1) < 0.05, f"dirichlet b=0.75 ratio at q=1e-6 {last['ratio']}")
    r = run("dirichlet", "--b", 0.99, "--q-grid", "1e-6:1e-6:1:log", cwd=d)
    check(r.returncode == 0 and "slow convergence" in r.stderr, "b=0.99 flagged")

    r = run("gauss", "dim", "--n", "1..3", "--out", "gd.csv", cwd=d)
    gd = rows(d / "gd.csv")
    check(r.returncode == 0 and list(gd[0].keys()) == ["n", "dim", "hensley_two_term", "abs_err"], "gauss dim schema")
    check(float(gd[0]["dim"]) == 0.0 and abs(float(gd[1]["dim"]) - 0.5313) < 1e-3, "E(1)=0, E(2)~0.5313")
    check(run("gauss", "dim", "--n", "0", cwd=d).returncode == 2, "gauss dim --n 0 -> exit 2")
    r = run("gauss", "rate", cwd=d)
    base = float(r.stdout.splitlines()[0].split("=")[1])
    check(r.returncode == 0 and base <= 0.6, f"gauss rate base {base}")
    r = run("gauss", "spectrum", "--alpha-grid", "2:3:2:lin", cwd=d)
    check(r.returncode == 0 and len(r.stdout.splitlines()) == 3, "gauss spectrum")

    # Fixed point of h1 inside its isometry arc: solve conj(b) z^2 + (conj(a) - a) z - b = 0.
    h = cfg["hyperbolic"][0]["h"]
    a, b = complex(*h[0][0]), complex(*h[0][1])
    disc = cmath.sqrt((a.conjugate() - a) ** 2 + 4 * b.conjugate() * b)
    cands = [(-(a.conjugate() - a) + sgn * disc) / (2 * b.conjugate()) for sgn in (1, -1)]
    # Repelling fixed point: |h'| = 1/|conj(b) z + conj(a)|^2 > 1.
    z = next(c for c in cands if abs(b.conjugate() * c + a.conjugate()) < 1)
    theta = cmath.phase(z) % (2 * math.pi)
    r = run("encode", "--example", "--theta", repr(theta), "--depth", 5, cwd=d)
    word = r.stdout.splitlines()[0].split()[1:]
    a1 = r.stdout.splitlines()[1].split()[1:]
    check(r.returncode == 0 and word == ["Hyp(h1)"] * 5 and a1 == ["0"] * 5, "encode h1 fixed point")
    r = run("encode", "--example", "--theta", 0, "--depth", 3, cwd=d)
    check(r.returncode == 4 and "ParabolicTail" in r.stderr, "encode cusp -> exit 4")

    alphas = [16 * 32 ** (i / 9) for i in range(10)]
    synthetic_csv(d / "syn.csv", 0.7, 0.55, alphas)
    r = run("rate", "--spectrum-csv", "syn.csv", "--s", 0.7, "--out", "syn.json", cwd=d)
    rep = json.loads((d / "syn.json").read_text())
    check(r.returncode == 0 and abs(rep["fitted_exponent"] - 0.55) < 1e-3, "synthetic rate recovery")
    check((d / "syn.json.csv").read_text().splitlines()[0].startswith("alpha,q,b,s_minus_b"), "rate CSV")
    synthetic_csv(d / "short.csv", 0.7, 0.55, alphas[:4])
    r = run("rate", "--spectrum-csv", "short.csv", "--s", 0.7, "--out", "short.json", cwd=d)
    check(r.returncode == 5 and (d / "short.json").exists(), "short grid -> exit 5 with report")

    r = run("rate", "--example", "--out", "rate.json", cwd=d)
    rep = json.loads((d / "rate.json").read_text())
    check(r.returncode == 0 and rep["relative_error"] <= 0.2, f"builtin rate rel err {rep['relative_error']:.3f}")
    check(all(k in rep for k in ("Z", "B", "C", "two_sided", "critical_exponent")), "rate report fields")

if failures:
    print(f"{len(failures)} CLI checks failed")
    sys.exit(1)
print("all CLI checks passed")
