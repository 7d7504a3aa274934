"""Command-line interface: ``tournament-partition <command> ...``.

Exit codes: 0 success, 1 bad input or refused run, 2 audit failure,
3 search or enumeration budget exceeded, 4 pipeline stage failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import core
from .errors import (
    BadLengths,
    BadSpec,
    ConnectivityGateError,
    ExceptionalTournament,
    SearchExhausted,
    StageFailure,
    TooLarge,
    TournamentError,
)

log = logging.getLogger("tournament_partition")

EXIT_OK, EXIT_INPUT, EXIT_AUDIT, EXIT_BUDGET, EXIT_STAGE = 0, 1, 2, 3, 4


def _dump(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def generate(spec: list[str]) -> core.Tournament:
    """Tournament from ``random N SEED``, ``paley Q`` or ``transitive N``."""
    try:
        kind, *args = spec
        nums = [int(a) for a in args]
    except ValueError:
        raise BadSpec(f"malformed generator spec {' '.join(spec)!r}") from None
    if kind == "random" and len(nums) == 2 and nums[0] >= 1:
        return core.random_tournament(nums[0], nums[1])
    if kind == "paley" and len(nums) == 1:
        try:
            return core.paley(nums[0])
        except core.BadModulus as exc:
            raise BadSpec(str(exc)) from None
    if kind == "transitive" and len(nums) == 1 and nums[0] >= 1:
        return core.transitive(nums[0])
    raise BadSpec(f"unknown generator spec {' '.join(spec)!r}")


def _load(source: str) -> core.Tournament:
    """A tournament file path, or a generator spec like ``random:500:3``."""
    if ":" in source and not os.path.exists(source):
        return generate(source.split(":"))
    return core.read_tournament(source)


def cmd_gen(args) -> int:
    T = generate(args.spec)
    text = core.to_text(T)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_partition(args) -> int:
    from .partitioner import PipelineParams, partition_robust, partition_threshold
    from .verify import check_partition

    T = _load(args.input)
    params = PipelineParams(
        k=args.k, t=args.t, m=args.m, mode=args.mode, spare_paths=args.spare_paths,
        R_samples=args.samples, path_node_budget=args.budget, seed=args.seed,
        economical=not args.literal, assume_connectivity=args.assume_connectivity,
    )
    if args.mode == "strict" and not args.assume_connectivity:
        bound = partition_threshold(args.k, args.t, args.m)
        print(f"refusing strict run: the hypothesis needs strong {bound:.4g}-connectivity "
              f"(10^7 k^6 t^2 m log(ktm)), impossible to verify for n={T.n}; "
              f"pass --assume-connectivity to proceed on trust", file=sys.stderr)
        return EXIT_INPUT
    try:
        cert = partition_robust(T, params)
    except StageFailure as exc:
        print(f"stage failure in {exc.stage}: {exc.reason}", file=sys.stderr)
        _dump({"status": "stage-failure", "failure": exc.to_dict(), "params": params.to_dict()}, args.out)
        return EXIT_STAGE
    report = check_partition(T, cert, samples=args.samples, seed=args.seed)
    _dump({"status": "ok" if report.passed else "audit-failure",
           "certificate": cert.to_dict(), "audit": report.to_dict()}, args.out)
    if not report.passed:
        print(f"audit failure: {report.failures()[0].to_dict()}", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


def _parse_lengths(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise BadLengths(f"malformed length list {text!r}") from None


def cmd_cycles(args) -> int:
    from .cycles import CycleParams, cycle_factor
    from .verify import audit_cycle_plan

    T = _load(args.input)
    lengths = _parse_lengths(args.lengths)
    if args.mode == "strict" and not args.assume_connectivity:
        from .cycles import cycle_threshold
        print(f"refusing strict run: the hypothesis needs strong "
              f"{cycle_threshold(len(lengths)):.4g}-connectivity (10^10 t^4 log t); "
              f"pass --assume-connectivity to proceed on trust", file=sys.stderr)
        return EXIT_INPUT
    params = CycleParams(mode=args.mode, spare_paths=args.spare_paths, seed=args.seed,
                         assume_connectivity=args.assume_connectivity, search_budget=args.budget)
    try:
        plan = cycle_factor(T, lengths, params)
    except StageFailure as exc:
        print(f"stage failure in {exc.stage}: {exc.reason}", file=sys.stderr)
        _dump({"status": "stage-failure", "failure": exc.to_dict()}, args.out)
        return EXIT_STAGE
    report = audit_cycle_plan(T, plan.cycles, lengths)
    _dump({"status": "ok" if report.passed else "audit-failure",
           "plan": plan.to_dict(), "audit": report.to_dict()}, args.out)
    return EXIT_OK if report.passed else EXIT_AUDIT


def cmd_verify(args) -> int:
    from .partitioner import certificate_from_dict
    from .verify import audit_cycle_plan, check_partition

    T = _load(args.input)
    with open(args.certificate) as fh:
        doc = json.load(fh)
    if "certificate" in doc:
        cert = certificate_from_dict(T, doc["certificate"])
        report = check_partition(T, cert, samples=args.samples, seed=args.seed)
    elif "plan" in doc:
        plan = doc["plan"]
        report = audit_cycle_plan(T, plan["cycles"], plan["lengths"])
    else:
        print("file holds neither a certificate nor a cycle plan", file=sys.stderr)
        return EXIT_INPUT
    _dump(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_AUDIT


def _parse_bounds(tokens: list[str]) -> dict[str, int]:
    """``n<=6 k<=3 count=100 seed=2`` style bounds."""
    out = {}
    for tok in tokens:
        for sep in ("<=", "="):
            if sep in tok:
                key, val = tok.split(sep, 1)
                try:
                    out[key.strip()] = int(val)
                except ValueError:
                    raise BadSpec(f"bad bound {tok!r}") from None
                break
        else:
            raise BadSpec(f"bad bound {tok!r}")
    return out


_BOUND_LIMITS = {"connectivity": {"n": 6, "k": 4}, "camion": {"n": 7}, "reach": {"l": 8, "k": 4}}


def _suite_kwargs(suite: str, b: dict[str, int]) -> dict:
    for key, cap in _BOUND_LIMITS.get(suite, {}).items():
        if b.get(key, 0) > cap:
            raise TooLarge(f"{suite} suite with {key}<={b[key]} exceeds the enumeration budget ({cap})")
    seed = b.get("seed", 0)
    if suite == "connectivity":
        return {"n_max": b.get("n", 5), "k_max": b.get("k", 3), "random_count": b.get("count", 500), "seed": seed}
    if suite == "domination":
        return {"count": b.get("count", 1000), "n_max": b.get("n", 200), "c_max": b.get("c", 10), "seed": seed}
    if suite == "reach":
        return {"count": b.get("count", 200), "l_max": b.get("l", 6), "k_max": b.get("k", 3), "seed": seed}
    if suite == "camion":
        return {"n_exhaustive": b.get("n", 6), "random_count": b.get("count", 500), "seed": seed}
    if suite == "song":
        return {"count": b.get("count", 100), "seed": seed}
    raise BadSpec(f"unknown oracle suite {suite!r}")


def _run_suite(job):
    from .oracles import SUITES
    suite, kwargs = job
    return SUITES[suite](**kwargs)


def cmd_oracle(args) -> int:
    bounds = _parse_bounds(args.bounds)
    kwargs = _suite_kwargs(args.suite, bounds)
    jobs = max(1, args.jobs)
    if jobs > 1 and "seed" in kwargs:
        # worker w runs the suite with seed + w; exhaustive parts only once
        from concurrent.futures import ProcessPoolExecutor
        batches = []
        for w in range(jobs):
            kw = dict(kwargs, seed=kwargs["seed"] + w)
            if w and args.suite in ("connectivity", "camion"):
                kw["n_max" if args.suite == "connectivity" else "n_exhaustive"] = 0
            batches.append((args.suite, kw))
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_run_suite, batches))
        summary = {"suite": args.suite, "checked": sum(p["checked"] for p in parts),
                   "failures": [f for p in parts for f in p["failures"]], "workers": jobs}
    else:
        summary = _run_suite((args.suite, kwargs))
    summary.pop("seconds", None)
    summary["bounds"] = kwargs
    summary["passed"] = not summary["failures"]
    _dump(summary, args.out)
    return EXIT_OK if summary["passed"] else EXIT_AUDIT


def cmd_bench(args) -> int:
    from .errors import StageFailure as SF
    from .partitioner import PipelineParams, partition_robust
    from .verify import check_partition

    rows = []
    for n in args.sizes:
        for seed in range(args.runs):
            T = core.random_tournament(n, seed)
            t0 = time.perf_counter()
            try:
                cert = partition_robust(T, PipelineParams(k=args.k, t=args.t, m=args.m, spare_paths=args.spare_paths))
                t1 = time.perf_counter()
                ok = check_partition(T, cert, samples=args.samples, seed=seed).passed
                rows.append({"n": n, "seed": seed, "result": "ok" if ok else "audit-failure",
                             "pipeline_s": round(t1 - t0, 4), "audit_s": round(time.perf_counter() - t1, 4),
                             "coloured": sum(len(c) for c in cert.classes)})
            except SF as exc:
                rows.append({"n": n, "seed": seed, "result": f"failure:{exc.stage}",
                             "pipeline_s": round(time.perf_counter() - t0, 4)})
    _dump({"bench": rows}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tournament-partition",
                                description="Partition tournaments into robustly connected classes.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated tournament")
    g.add_argument("spec", nargs="+", help="random N SEED | paley Q | transitive N")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    def common(sp, budget_default):
        sp.add_argument("input", help="tournament file, or generator spec such as random:500:3")
        sp.add_argument("--t", type=int, default=2)
        sp.add_argument("--mode", choices=("strict", "practical"), default="practical")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--spare-paths", type=int, default=3)
        sp.add_argument("--budget", type=int, default=budget_default, help="search node budget")
        sp.add_argument("--assume-connectivity", action="store_true")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--out")

    s = sub.add_parser("partition", help="run the partition pipeline and audit it")
    common(s, 20_000)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--literal", action="store_true", help="colour exactly k fresh neighbours every time")
    s.set_defaults(func=cmd_partition)

    c = sub.add_parser("cycles", help="find disjoint cycles of prescribed lengths")
    common(c, 200_000)
    c.add_argument("--lengths", required=True, help="comma-separated, e.g. 300,300")
    c.set_defaults(func=cmd_cycles)

    v = sub.add_parser("verify", help="re-audit a certificate or cycle-plan file")
    v.add_argument("input")
    v.add_argument("certificate")
    v.add_argument("--samples", type=int, default=64)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="run an oracle suite")
    o.add_argument("suite", choices=("connectivity", "domination", "reach", "camion", "song"))
    o.add_argument("bounds", nargs="*", help="e.g. n<=6 k<=3 count=200 seed=1")
    o.add_argument("--jobs", type=int, default=1)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="time the pipeline on random tournaments")
    b.add_argument("--sizes", type=int, nargs="+", default=[300, 600, 1000])
    b.add_argument("--runs", type=int, default=3)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--t", type=int, default=2)
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--spare-paths", type=int, default=3)
    b.add_argument("--samples", type=int, default=16)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("TF_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TooLarge, SearchExhausted) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ExceptionalTournament as exc:
        print(f"pipeline failure: {exc} ({getattr(exc, 'position', 'two_cycles')})", file=sys.stderr)
        return EXIT_STAGE
    except ConnectivityGateError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BadSpec, BadLengths, ValueError, OSError, TournamentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
