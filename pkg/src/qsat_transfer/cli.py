"""Command-line entry point.

Exit codes: 0 success, 2 solver best-effort failure, 3 Reject or UNSAT, 4 input error.
Machine output goes to --out or standard output; summaries go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import families as fam
from .blowup import decouple
from .filtration import InvalidFiltration, NoValidR, TransferFiltration, greedy_filtration, validate
from .hypergraph import HallCertificate, Hypergraph, PreconditionViolated, find_sdr, structural_predicates
from .instance import QsatInstance, residual, sample_generic, state_from_dict, state_to_dict
from .oracle import TooLarge, exact_satisfiable, ground_energy, null_space_check
from .solver_bounded import (
    InvalidDegreeProfile,
    Reject,
    algorithm_a,
    figure_pseudo_line_spec,
    gen_pseudo_line_instance,
    random_pseudo_line_spec,
)
from .solver_param import solve

EXIT_OK, EXIT_BEST_EFFORT, EXIT_UNSAT, EXIT_INPUT = 0, 2, 3, 4
BENCH_COLUMNS = ["family", "t", "n", "m", "b", "radius", "solver_ms", "oracle_ms", "residual"]
FAMILIES = ["chain", "cycle", "semicycle", "torus", "modified-torus", "fir-tree", "crash",
            "fano", "icycle", "no-sdr", "helly", "pseudo-line", "pseudo-line-figure"]


class InputError(Exception):
    pass


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(payload, out: str | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load_instance(path: str) -> tuple[QsatInstance, TransferFiltration | None]:
    d = _load_json(path)
    try:
        I = QsatInstance.from_dict(d)
        F = TransferFiltration.from_dict(I.G, d["filtration"]) if d.get("filtration") else None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid instance: {exc}") from exc
    return I, F


def _instance_payload(I: QsatInstance, F: TransferFiltration | None, name: str, labels=()) -> dict:
    d = I.to_dict()
    d["family"] = name
    d["filtration"] = F.to_dict() if F else None
    if labels:
        d["labels"] = [str(x) for x in labels]
    return d


def _t_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _family(name: str, t, k, dims):
    return fam.by_name(name, t=t, k=k, dims=dims)


def cmd_gen(args) -> int:
    if args.family == "pseudo-line-figure":
        I = gen_pseudo_line_instance(figure_pseudo_line_spec(), args.seed)
        payload = _instance_payload(I, None, args.family)
    elif args.family == "pseudo-line":
        spec = random_pseudo_line_spec(args.discs, args.crosses, args.seed)
        I = gen_pseudo_line_instance(spec, args.seed)
        payload = _instance_payload(I, None, args.family)
        payload["pseudo_line_spec"] = {"discs": spec.discs, "crosses": spec.crosses, "edges": spec.edges}
    else:
        dims = [int(x) for x in args.dims.split(",")] if args.dims else None
        f = _family(args.family, int(args.t) if args.t else None, args.k, dims)
        if isinstance(f, Hypergraph):
            I = sample_generic(f, args.seed)
            try:
                F = greedy_filtration(f)
            except (InvalidFiltration, NoValidR, PreconditionViolated):
                F = None
            payload = _instance_payload(I, F, args.family)
        else:
            I = sample_generic(f.G, args.seed)
            payload = _instance_payload(I, f.F, f.name, f.labels)
    _emit(payload, args.out)
    _say(f"generated {payload['family']}: n={I.G.n} m={I.G.m}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    I, _ = _load_instance(args.instance)
    s = structural_predicates(I.G)
    sdr = find_sdr(I.G)
    out = {
        "n": I.G.n,
        "m": I.G.m,
        "linear": s.linear,
        "k_intersecting": s.k_intersecting,
        "intersecting_family": s.intersecting_family,
        "helly": s.helly,
        "blocks": [list(b) for b in s.blocks],
        "t_stacked": [list(g) for g in s.t_stacked],
    }
    if isinstance(sdr, HallCertificate):
        out["sdr"] = None
        out["hall_certificate"] = {"edges": list(sdr.edge_subset), "union_size": sdr.union_size}
    else:
        out["sdr"] = {str(k): v for k, v in sorted(sdr.assignment.items())}
    _emit(out, args.out)
    _say(f"analyzed n={I.G.n} m={I.G.m}: sdr={'yes' if out['sdr'] else 'no'}")
    return EXIT_OK


def _filtration_for(I: QsatInstance, F: TransferFiltration | None) -> TransferFiltration:
    if F is not None:
        return F
    try:
        return greedy_filtration(I.G)
    except (InvalidFiltration, NoValidR, PreconditionViolated) as exc:
        raise InputError(f"no transfer filtration available: {exc}") from exc


def cmd_filtrate(args) -> int:
    I, F = _load_instance(args.instance)
    F = _filtration_for(I, F)
    problems = validate(I.G, F)
    out = F.to_dict()
    out.update({"b": F.b, "radius": F.radius, "r": list(F.r_map), "violations": problems})
    _emit(out, args.out)
    _say(f"filtration b={F.b} radius={F.radius}, {len(problems)} violations")
    return EXIT_OK if not problems else EXIT_INPUT


def cmd_decouple(args) -> int:
    I, F = _load_instance(args.instance)
    B = decouple(I.G, _filtration_for(I, F))
    _emit(B.to_dict(), args.out)
    _say(f"decoupled: {B.gtilde.n} vertices, {len(B.duplicate_pairs)} qualifiers")
    return EXIT_OK


def cmd_solve(args) -> int:
    I, F = _load_instance(args.instance)
    # solver randomness follows --seed; hand-made constraints are never resampled
    I = QsatInstance(I.G, I.constraints, args.seed if I.seed is not None else None)
    if args.solver == "param":
        rep = solve(I.G, _filtration_for(I, F), I, tol=args.tol, max_seeds=args.max_seeds)
        _emit(rep.to_dict(), args.out)
        _say(f"solve param: ok={rep.ok} residual={rep.residual:.3e} fallback={rep.fallback_used}")
        return EXIT_OK if rep.ok else EXIT_BEST_EFFORT
    t0 = time.perf_counter()
    try:
        state = algorithm_a(I)
    except Reject as exc:
        _emit({"ok": False, "reject": str(exc)}, args.out)
        _say(f"solve bounded: Reject ({exc})")
        return EXIT_UNSAT
    except PreconditionViolated as exc:
        raise InputError(str(exc)) from exc
    res = residual(I, state)
    out = {"ok": True, "residual": res, "timings_ms": {"total": 1e3 * (time.perf_counter() - t0)}}
    out["state"] = state_to_dict(state)
    _emit(out, args.out)
    _say(f"solve bounded: residual={res:.3e}")
    return EXIT_OK if res <= args.tol else EXIT_BEST_EFFORT


def cmd_oracle(args) -> int:
    I, _ = _load_instance(args.instance)
    try:
        if args.action == "satisfiable":
            e0 = ground_energy(I)
            sat = exact_satisfiable(I)
            _emit({"satisfiable": sat, "ground_energy": e0}, args.out)
            _say(f"oracle: {'SAT' if sat else 'UNSAT'} (ground energy {e0:.3e})")
            return EXIT_OK if sat else EXIT_UNSAT
        if not args.state:
            raise InputError("oracle check needs --state")
        d = _load_json(args.state)
        try:
            state = state_from_dict(d["state"] if "state" in d else d)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.state}: invalid state: {exc}") from exc
        val = null_space_check(I, state)
        _emit({"null_space_norm": val}, args.out)
        _say(f"oracle check: |H psi| = {val:.3e}")
        return EXIT_OK
    except TooLarge as exc:
        raise InputError(str(exc)) from exc


def bench_rows(family: str, ts, k: int, seeds: int, seed: int, oracle_cap: int = 12):
    for t in ts:
        f = _family(family, t, k, None)
        for s in range(seed, seed + seeds):
            I = sample_generic(f.G, s)
            t0 = time.perf_counter()
            rep = solve(f.G, f.F, I)
            solver_ms = 1e3 * (time.perf_counter() - t0)
            oracle_ms = ""
            if f.G.n <= oracle_cap:
                t0 = time.perf_counter()
                exact_satisfiable(I)
                oracle_ms = f"{1e3 * (time.perf_counter() - t0):.3f}"
            yield {
                "family": family, "t": t, "n": f.G.n, "m": f.G.m, "b": f.b, "radius": f.radius,
                "solver_ms": f"{solver_ms:.3f}", "oracle_ms": oracle_ms, "residual": f"{rep.residual:.3e}",
            }


def cmd_bench(args) -> int:
    rows = list(bench_rows(args.family, _t_range(args.t), args.k, args.seeds, args.seed))
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(sink, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            sink.close()
    _say(f"bench: {len(rows)} rows")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsat-transfer", description="Quantum k-SAT solver suite", allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("--instance", required=True)
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--t")
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--dims", help="comma-separated torus sizes")
    g.add_argument("--discs", type=int, default=6)
    g.add_argument("--crosses", type=int, default=6)
    common(g, instance=False)
    g.set_defaults(func=cmd_gen)

    for name, fn in (("analyze", cmd_analyze), ("filtrate", cmd_filtrate), ("decouple", cmd_decouple)):
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)

    s = sub.add_parser("solve")
    s.add_argument("solver", choices=["param", "bounded"])
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-seeds", type=int, default=1)
    common(s)
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle")
    o.add_argument("action", choices=["check", "satisfiable"])
    o.add_argument("--state")
    common(o)
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench")
    b.add_argument("family", choices=["chain", "cycle", "semicycle", "modified-torus", "fir-tree", "crash"])
    b.add_argument("--t", required=True, help="single value or range lo..hi")
    b.add_argument("--k", type=int, default=3)
    b.add_argument("--seeds", type=int, default=5)
    common(b, instance=False)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT
    except (InvalidDegreeProfile, ValueError) as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
