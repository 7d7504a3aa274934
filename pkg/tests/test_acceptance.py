"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with pytest (lines are printed even under capture) or directly:
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import filecmp
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from tournament_partition import paley, random_tournament, transitive
from tournament_partition import oracles
from tournament_partition.cli import main as cli_main
from tournament_partition.errors import SearchExhausted, StageFailure
from tournament_partition.cycles import cycle_factor
from tournament_partition.partitioner import PipelineParams, partition_robust
from tournament_partition.verify import _mask, _strong, audit_cycle_plan, check_partition


def _budget_formulas(n, k, t, m, c):
    # written out again here rather than imported, so the check is independent
    logm = np.log2(m)
    return {
        "Claim3": (k + 1) ** 2 * (2 * k * t * c + 4 * k * k * t),
        "Claim4_1": 54 * k**4 * t**2 * logm,
        "Claim4": 67 * k**4 * t**2 * logm + n / (2 * m),
        "Claim5": n / m,
    }


def criterion_1():
    r = oracles.connectivity_suite(n_max=5, k_max=3, random_count=500, random_n=(6, 7), seed=1)
    ok = not r["failures"] and r["seconds"] < 60
    return ok, f"{r['checked']} checks, {len(r['failures'])} disagreements, {r['seconds']:.1f}s"


def criterion_2():
    r = oracles.domination_suite(count=1000, n_max=200, c_max=10, seed=2)
    ok = not r["failures"] and r["seconds"] < 120
    return ok, f"{r['checked']} sets, {len(r['failures'])} violations, {r['seconds']:.1f}s"


def criterion_3():
    r = oracles.reach_suite(count=200, l_max=6, k_max=3, seed=3)
    return not r["failures"], f"{r['checked']} fixtures, {len(r['failures'])} violations, {r['seconds']:.1f}s"


def criterion_4():
    r = oracles.camion_suite(n_exhaustive=6, random_count=500, n_max=100, seed=4)
    ok = not r["failures"] and r["seconds"] < 300
    return ok, f"{r['checked']} tournaments, {len(r['failures'])} failures, {r['seconds']:.1f}s"


def criterion_5():
    r = oracles.song_suite(count=100, n_range=(8, 10), seed=5)
    return not r["failures"], (f"{r['tournaments']} tournaments, {r['checked']} splits, "
                               f"paley(7) exceptional for L=1..7, {len(r['failures'])} failures")


def _pipeline_cases():
    rng = np.random.default_rng(2024)
    cases = []
    for k in (1, 2):
        for r in range(20):
            n = int(rng.integers(300, 1501))
            cases.append((k, f"random:{n}:{r}", lambda n=n, r=r: random_tournament(n, r)))
        for q in ((499, 1019) if k == 1 else (503, 1499)):
            cases.append((k, f"paley:{q}", lambda q=q: paley(q)))
        for size, levels in ((60, 6), (80, 5), (100, 4)):
            cases.append((k, f"layered:{size}:{levels}",
                          lambda s=size, lv=levels, k=k: oracles.layered_tournament(s, lv, k)))
        # a known failing input, so the failure-witness clause is exercised
        cases.append((k, "transitive:300", lambda: transitive(300)))
    return cases


_RUNS: list[dict] | None = None


def _pipeline_runs() -> list[dict]:
    global _RUNS
    if _RUNS is None:
        _RUNS = []
        for k, name, make in _pipeline_cases():
            T = make()
            row = {"k": k, "input": name, "n": T.n}
            try:
                cert = partition_robust(T, PipelineParams(k, 2, 2, spare_paths=3))
                rep = check_partition(T, cert, samples=64, seed=0)
                row.update(outcome="certificate", audit=rep.passed, cert=cert)
            except StageFailure as exc:
                row.update(outcome="failure", stage=exc.stage, witness=exc.witness)
            _RUNS.append(row)
    return _RUNS


def criterion_6():
    runs = _pipeline_runs()
    good = [r for r in runs if r["outcome"] == "certificate"]
    bad = [r for r in runs if r["outcome"] == "failure"]
    audited = all(r["audit"] for r in good)
    named = all(r["stage"] and r["witness"] for r in bad)
    rate = {k: sum(r["outcome"] == "certificate" for r in runs if r["k"] == k) for k in (1, 2)}
    per_k = {k: sum(r["k"] == k for r in runs) for k in (1, 2)}
    stages = sorted({r["stage"] for r in bad})
    return (len(runs) >= 50 and audited and named,
            f"{len(runs)} runs, success k=1 {rate[1]}/{per_k[1]}, k=2 {rate[2]}/{per_k[2]}, "
            f"all certificates pass check_partition: {audited}, failures at {stages} with witnesses: {named}")


def criterion_7():
    breaches = []
    checked = 0
    for r in _pipeline_runs():
        if r["outcome"] != "certificate":
            continue
        cert = r["cert"]
        bounds = _budget_formulas(r["n"], cert.k, cert.t, cert.m, cert.c)
        for e in cert.budgets:
            checked += 1
            if e["coloured"] > bounds[e["stage"]]:
                breaches.append((r["input"], e))
        total = sum(len(c) for c in cert.classes)
        checked += 1
        if total * cert.m > r["n"]:
            breaches.append((r["input"], "overall"))
    return not breaches, f"{checked} budget entries checked, {len(breaches)} breaches"


def criterion_8():
    rng = np.random.default_rng(8)
    runs = ok = 0
    problems, failures = [], {}
    for r in range(24):
        n = int(rng.integers(400, 1001))
        if r % 2:
            L1 = int(rng.integers(3, n // 8))  # short cycle, exercises the helper split
        else:
            L1 = int(rng.integers(3, n - 2))
        lengths = [L1, n - L1]
        T = random_tournament(n, r)
        runs += 1
        try:
            plan = cycle_factor(T, lengths)
        except (StageFailure, SearchExhausted) as exc:
            key = getattr(exc, "stage", type(exc).__name__)
            failures[key] = failures.get(key, 0) + 1
            continue
        ok += 1
        if not audit_cycle_plan(T, plan.cycles, lengths).passed:
            problems.append((n, lengths, "audit"))
        if not _strong(T, _mask(plan.merged)):
            problems.append((n, lengths, "merge"))
    return (runs >= 20 and not problems,
            f"{ok}/{runs} runs returned a plan, {len(problems)} audit problems, failures {failures}")


def criterion_9():
    commands = [
        ["gen", "random", "400", "9"],
        ["partition", "random:600:3", "--k", "2", "--samples", "16"],
        ["cycles", "random:500:1", "--lengths", "460,40"],
        ["oracle", "reach", "count=40", "seed=3"],
        ["oracle", "domination", "count=40", "--jobs", "2"],
    ]
    diffs = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        src = tmp / "g.txt"
        cli_main(["gen", "paley", "43", "--out", str(src)])
        cert = tmp / "cert.json"
        cli_main(["partition", str(src), "--samples", "4", "--out", str(cert)])
        commands.append(["verify", str(src), str(cert), "--samples", "8"])
        for ci, cmd in enumerate(commands):
            outs = []
            for rep in range(3):
                out = tmp / f"c{ci}_{rep}.out"
                cli_main(cmd + ["--out", str(out)])
                outs.append(out)
            if not all(filecmp.cmp(outs[0], o, shallow=False) for o in outs[1:]):
                diffs.append(cmd[0])
    return not diffs, f"{len(commands)} commands x 3 runs, differing: {diffs or 'none'}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(i: int, ok: bool, detail: str, seconds: float) -> str:
    return f"criterion {i}: {'PASS' if ok else 'FAIL'} ({detail}; {seconds:.1f}s)"


@pytest.mark.parametrize("i", range(1, 10))
def test_criterion(i, capsys):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + _line(i, ok, detail, time.perf_counter() - t0))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        t0 = time.perf_counter()
        ok, detail = fn()
        print(_line(i, ok, detail, time.perf_counter() - t0), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
