"""Acceptance criteria at their stated horizons, tolerances and time budgets.

Each criterion prints one ``PASS``/``FAIL`` line; under pytest the lines are
also collected into the terminal summary.  Run standalone with
``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from ideal_dyn import harness
from ideal_dyn.analysis import classify, cluster_value, estimate_c_parameter, extract_limit_subsequence, return_set
from ideal_dyn.density import estimate_all
from ideal_dyn.dynsys import make_system
from ideal_dyn.ideals import DEFAULT_THRESHOLD, exh_norm, make_submeasure, membership_verdict
from ideal_dyn.intset import build, gap_profile

NU = make_submeasure("nu")
REPORT: list[str] = []


def record(n: int, ok: bool, elapsed: float, budget: float | None, detail: str) -> bool:
    timed = budget is None or elapsed < budget
    limit = "" if budget is None else f" (budget {budget:.0f}s)"
    line = f"criterion {n:>2}: {'PASS' if ok and timed else 'FAIL'}  {elapsed:6.2f}s{limit}  {detail}"
    REPORT.append(line)
    print(line)
    return ok and timed


def chain_family(N: int):
    ps = [0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    specs = [f"random:{p},{seed}" for seed in range(50) for p in ps]
    specs += [f"ap:{k},{h}" for k in range(1, 41) for h in (0, k // 2, k - 1)][:300]
    specs += ["blocks:pow4", "squares", "all", "empty"]
    rng = np.random.default_rng(1)
    while len(specs) < 1000:
        a = int(rng.integers(0, N))
        b = int(rng.integers(a, N))
        specs.append(f"intervals:{a}-{b}")
    return specs[:1000]


def criterion_1():
    N = 1 << 20
    t = time.perf_counter()
    worst = 0.0
    bad = []
    for spec in chain_family(N):
        d = estimate_all(build(spec, N))
        ld, ds, bd = (d[k].value for k in ("upper_logarithmic", "upper_asymptotic", "upper_banach"))
        worst = max(worst, ld - ds, ds - bd)
        if ld > ds + 1e-9 or ds > bd + 1e-9:
            bad.append(spec)
    return record(1, not bad, time.perf_counter() - t, 30,
                  f"1000 sets, {len(bad)} chain violations, worst excess {worst:.3g}")


def criterion_2():
    t = time.perf_counter()
    s = build("blocks:pow4", 1 << 21)
    d = estimate_all(s)
    ds, bd, bdl = d["upper_asymptotic"].value, d["upper_banach"].value, d["lower_banach"].value
    syn = gap_profile(s).is_syndetic_at_horizon or gap_profile(~s).is_syndetic_at_horizon
    ok = abs(ds - 2 / 3) <= 0.01 and bd >= 0.999 and bdl <= 1e-3 and not syn
    return record(2, ok, time.perf_counter() - t, 5,
                  f"d*={ds:.5f} bd*={bd:.5f} bd_*={bdl:.2g} syndetic(set or complement)={syn}")


def criterion_3():
    N = 1 << 20
    t = time.perf_counter()
    specs = [f"ap:{k},{h}" for k in range(1, 17) for h in (0, k - 1)]
    specs += ["squares", "blocks:pow4"]
    specs += [f"random:{p},{seed}" for p in (0.02, 0.05, 0.1, 0.25, 0.5, 0.9) for seed in range(3)]
    disagree = []
    for spec in specs:
        s = build(spec, N)
        null = estimate_all(s)["upper_asymptotic"].value < DEFAULT_THRESHOLD
        status = membership_verdict(NU, "exh", s).status
        if status != ("member" if null else "positive"):
            disagree.append(f"{spec}:{status}")
    return record(3, not disagree, time.perf_counter() - t, None,
                  f"{len(specs)} labeled sets, disagreements {disagree or 0}")


def criterion_4():
    t = time.perf_counter()
    sys_ = make_system("rotation:golden")
    targets = sys_.grid_targets(10)
    dens, statuses, us = [], [], []
    for eta in targets:
        rep = cluster_value(sys_, 0, eta, 0.05, 9, NU, 10**6)
        dens.append(estimate_all(rep.return_sets[0])["upper_asymptotic"].value)
        statuses.append(rep.cluster_status)
        us.append(rep.u_value)
    ok = all(abs(d - 0.1) <= 0.02 for d in dens) and all(s == "positive" for s in statuses) \
        and all(u <= 0.01 for u in us)
    return record(4, ok, time.perf_counter() - t, 60,
                  f"d* in [{min(dens):.4f}, {max(dens):.4f}], clusters {statuses.count('positive')}/10, "
                  f"max u {max(us):.4g}")


def criterion_5():
    t = time.perf_counter()
    sys_ = make_system("doubling")
    r = 1 / 64
    x = sys_.parse_point("champernowne")
    dens = [return_set(sys_, x, eta, r, 10**6).densities["upper_asymptotic"].value for eta in sys_.grid_targets(32)]
    rep = classify(sys_, x, NU, 32, r, 10**6)
    status = rep.verdicts["universal"][0]
    ok = all(abs(d - 2 * r) <= 0.01 for d in dens) and status == "positive"
    return record(5, ok, time.perf_counter() - t, 60,
                  f"d* in [{min(dens):.4f}, {max(dens):.4f}] vs {2 * r:.4f}, universal {status}")


def criterion_6():
    t = time.perf_counter()
    insts = []
    for system in ("doubling", "rotation:golden"):
        for k in (2, 3):
            insts += harness.ansari_instances(system, k, 100, 1 << 15, 6)
    res = harness.check_ansari_instances(insts)
    ok = res.violations == 0 and res.status == "pass" and res.instances == 400
    return record(6, ok, time.perf_counter() - t, 30, f"{res.instances} instances, {res.violations} mismatches")


def criterion_7():
    t = time.perf_counter()
    insts = harness.null_orbit_instances("cantor_shift:32", 100, 1 << 16, 7)
    insts += harness.null_orbit_instances("wshift:8,2", 100, 1 << 16, 7)
    res = harness.check_null_orbit_transfer(insts)
    inc = json.loads(res.evidence)["inconclusive"]
    periodic = sum(1 for i in insts if i.get("period"))
    ok = res.violations == 0 and inc == 0
    return record(7, ok, time.perf_counter() - t, 30,
                  f"{res.instances} configurations ({periodic} periodic), {res.violations} violations, "
                  f"{inc} inconclusive")


def criterion_8():
    t = time.perf_counter()
    N = 1 << 22
    sys_ = make_system("cantor_shift:32")
    rep = estimate_c_parameter(sys_, "zeros", NU, ["zeroblock"], 1.0, 11, N)
    norms = [row[0] for row in rep.norms]
    cl = cluster_value(sys_, "zeroblock", "zeros", 1.0, 11, NU, N)
    A = extract_limit_subsequence(cl)
    a_norm = exh_norm(NU, A)
    ok = min(norms) >= 0.5 and rep.value >= 0.5 and a_norm >= 0.5 - 1e-3
    return record(8, ok, time.perf_counter() - t, 120,
                  f"min_k norm {min(norms):.5f}, c-parameter {rep.value:.5f}, extracted norm {a_norm:.5f}")


def criterion_9():
    t = time.perf_counter()
    rep = return_set("doubling", "champernowne", "1/3", 0.05, 10**6)
    mg, bd = rep.gaps.max_gap, rep.densities["upper_banach"].value
    rot = harness.check_gap_properties([{"part": "a", "system": "rotation:golden", "x": 0, "k": 10,
                                         "horizon": 10**6}])
    rot_ev = json.loads(rot.evidence)
    ok = mg is not None and mg >= 10 and bd >= 0.05 and rot.status == "pass"
    return record(9, ok, time.perf_counter() - t, 60,
                  f"doubling max gap {mg}, bd* {bd:.4f}; rotation min-gap check {rot.status} {rot_ev}")


def criterion_10():
    t = time.perf_counter()
    insts = [{"part": "oracle", "delta": 0.2, "horizon": 1 << 10, "seed": 10, "planted": 20}]
    insts += [{"part": "d", "delta": 0.2, "horizon": 1 << 20, "seed": 1000 + i} for i in range(100)]
    res = harness.check_gap_properties(insts)
    ev = json.loads(res.evidence)
    ok = res.violations == 0 and ev["ok"] == 101 and ev.get("max_diff_gap", 99) <= 10
    return record(10, ok, time.perf_counter() - t, 30,
                  f"{ev['ok']} ok of {res.instances}, max gap {ev.get('max_diff_gap')}, "
                  f"oracle-calibrated {ev.get('calibrated')}")


def criterion_11():
    t = time.perf_counter()
    outs = []
    with tempfile.TemporaryDirectory() as tmp:
        for run in ("a", "b"):
            d = Path(tmp) / run
            proc = subprocess.run([sys.executable, "-m", "ideal_dyn.cli", "verify", "--suite", "all", "--seed", "42",
                                   "--out", str(d)], capture_output=True, text=True)
            outs.append(((d / "checks.csv").read_bytes() if (d / "checks.csv").exists() else b"", proc.returncode))
    same = outs[0][0] == outs[1][0] and outs[0][0] != b""
    return record(11, same, time.perf_counter() - t, None,
                  f"checks.csv identical={same}, exit codes {outs[0][1]},{outs[1][1]}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance(crit):
    assert crit()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
