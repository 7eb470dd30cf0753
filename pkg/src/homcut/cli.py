"""``homcut`` command line.

Exit codes: 0 yes/success, 1 no/mismatch, 2 error, 3 soft failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from homcut.caps import get_caps
from homcut.errors import HomcutError, RetryLimit
from homcut.fields import FAST_PRIME, read_field_matrix
from homcut.graphs import format_graph, read_graph, read_matrix, write_graph
from homcut.oracle import GenSpec, default_corpus_path, generate, generate_corpus, hom_exists_bruteforce, load_corpus
from homcut.ordering import cutwidth_exact, cutwidth_heuristic, read_ordering
from homcut.repsets import BACKENDS, ReductionConfig, TupleSet, oracle_minimal_representative, reduce_with_stats, represents

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_SOFT = 0, 1, 2, 3


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out and out != "-":
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _split(text: str | None) -> list[str]:
    return [x.strip() for x in (text or "").split(",") if x.strip()]


# ------------------------------------------------------------------ verbs


def cmd_solve(args) -> int:
    from homcut.solver import solve

    caps = get_caps()
    g = read_graph(args.graph)
    h = read_graph(args.target)
    order = read_ordering(args.ordering, g.n) if args.ordering else None
    cfg = ReductionConfig(args.backend, prime=args.field_prime, cadence=args.cadence, caps=caps)
    report = solve(g, h, order, cfg, _split(args.preprocess), caps, seed=args.seed)
    data = report.to_json()
    if args.json:
        _emit(data, args.json)
    if args.json != "-":
        print(f"answer: {'yes' if report.answer else 'no'}  width: {report.width}  "
              f"backend: {report.backend}  time: {report.time_ms:.1f} ms")
        for note in report.notes:
            print(f"note: {note}")
    return EXIT_YES if report.answer else EXIT_NO


def cmd_params(args) -> int:
    from homcut.graphs import kron_power
    from homcut.params import (
        best_support_matrix,
        cover_zeros,
        him_exact,
        mim_exact,
        mimsup_bracket,
        param_matrix,
    )

    caps = get_caps()
    h = read_graph(args.target)
    a = param_matrix(h)
    wanted = _split(args.compute) or ["mim", "him", "cov", "mimsup", "support"]
    unknown = set(wanted) - {"mim", "him", "cov", "mimsup", "support", "all"}
    if unknown:
        raise ValueError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    if "all" in wanted:
        wanted = ["mim", "him", "cov", "mimsup", "support"]
    out: dict = {"vertices": h.n, "edges": h.m, "bipartite": h.is_bipartite,
                 "matrix_shape": [a.rows, a.cols], "notes": []}

    def guarded(name, fn):
        try:
            out[name] = fn()
        except HomcutError as exc:
            out[name] = None
            out["notes"].append(f"{name}: {exc}")

    if "mim" in wanted:
        def mim():
            res = {}
            for k in range(1, args.power + 1):
                try:
                    v, w = mim_exact(kron_power(a, k, caps), caps)
                    res[str(k)] = {"value": v, "witness": w.to_json()}
                except HomcutError as exc:
                    res[str(k)] = None
                    out["notes"].append(f"mim power {k}: {exc}")
            return res
        guarded("mim", mim)
    if "him" in wanted:
        def him():
            v, w = him_exact(a, caps)
            return {"value": v, "witness": w.to_json()}
        guarded("him", him)
    if "cov" in wanted:
        guarded("cov", lambda: cover_zeros(a, caps=caps).to_json())
    if "support" in wanted:
        def support():
            b, source, r = best_support_matrix(a, args.field_prime, caps)
            return {"rank": r, "source": source, "field": args.field_prime}
        guarded("support", support)
    if "mimsup" in wanted:
        guarded("mimsup", lambda: mimsup_bracket(a, args.power, caps=caps).to_json())
    if args.json:
        _emit(out, args.json)
    if args.json != "-":
        for key in ("mim", "him", "cov", "support", "mimsup"):
            if key not in out or out[key] is None:
                continue
            val = out[key]
            if key == "mim":
                print("mim: " + ", ".join(f"k={k}: {v['value']}" for k, v in val.items() if v))
            elif key == "him":
                print(f"him: {val['value']}")
            elif key == "cov":
                print(f"cov: r = {val['r']} ({len(val['bicliques'])} bicliques, "
                      f"{'exact' if val['exact'] else 'greedy'})")
            elif key == "support":
                print(f"support-rank upper bound: {val['rank']} ({val['source']})")
            else:
                print(f"mimsup in [{val['lower']:g}, {val['upper']:g}]")
        for note in out["notes"]:
            print(f"note: {note}")
    return EXIT_YES


def _read_tuples(path, k: int, h: int) -> TupleSet:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(tuple(int(x) - 1 for x in line.split()))
    return TupleSet(k, h, tuple(rows))


def cmd_repsets(args) -> int:
    caps = get_caps()
    a = read_matrix(args.matrix)
    if a.rows != a.cols:
        raise ValueError("compatibility matrix must be square")
    s = TupleSet.all(args.k, a.rows) if args.tuples == "all" else _read_tuples(args.tuples, args.k, a.rows)
    support = read_field_matrix(args.support) if args.support else None
    cfg = ReductionConfig(args.backend, prime=args.field_prime, support=support,
                          skip_within_bound=False, caps=caps)
    out_set, stats = reduce_with_stats(a, s, cfg)
    data = {"backend": args.backend, "k": args.k, "size_before": len(s), "size_after": len(out_set),
            "bound": stats.bound, "output": out_set.to_json()}
    if stats.note:
        data["note"] = stats.note
    ok = True
    if args.oracle_compare:
        best = oracle_minimal_representative(a, s, caps)
        ok = represents(a, out_set, s, caps)
        data["represents"] = ok
        data["oracle_size"] = len(best)
    if args.json:
        _emit(data, args.json)
    if args.json != "-":
        print(f"{args.backend}: {len(s)} -> {len(out_set)} tuples" +
              (f" (bound {stats.bound})" if stats.bound is not None else ""))
        if args.oracle_compare:
            print(f"coverage preserved: {ok}; oracle minimum: {data['oracle_size']}")
    return EXIT_YES if ok else EXIT_NO


def cmd_core(args) -> int:
    from homcut.preprocess import core_of

    g = read_graph(args.graph)
    c = core_of(g)
    if args.out:
        write_graph(c, args.out)
    else:
        sys.stdout.write(format_graph(c))
    return EXIT_YES


def cmd_factorize(args) -> int:
    from homcut.preprocess import prime_factorize

    g = read_graph(args.graph)
    factors = prime_factorize(g)
    data = {"factors": [{"vertices": f.n, "edges": [[u + 1, v + 1] for u, v in f.edges()]} for f in factors]}
    if args.json:
        _emit(data, args.json)
    if args.json != "-":
        print(f"{len(factors)} prime factor(s): " + " x ".join(f"[{f.n} vertices, {f.m} edges]" for f in factors))
    return EXIT_YES


def cmd_cutwidth(args) -> int:
    g = read_graph(args.graph)
    caps = get_caps()
    if args.heuristic or g.n > caps.cutwidth_exact_vertices:
        order, width = cutwidth_heuristic(g, args.seed, args.iterations)
        method = "heuristic"
    else:
        order, width = cutwidth_exact(g, caps)
        method = "exact"
    data = {"width": width, "method": method, "order": [v + 1 for v in order]}
    if args.json:
        _emit(data, args.json)
    if args.json != "-":
        print(f"width {width} ({method}): " + " ".join(str(v + 1) for v in order))
    return EXIT_YES


def cmd_gen(args) -> int:
    if args.corpus is not None:
        data = {"instances": generate_corpus(args.corpus, args.seed)}
        _emit(data, args.out or "-")
        return EXIT_YES
    if not args.model or args.n is None:
        raise ValueError("gen needs --model and --n (or --corpus)")
    g = generate(GenSpec(args.model, args.n, args.p, args.seed, args.cols))
    if args.out:
        write_graph(g, args.out)
    else:
        sys.stdout.write(format_graph(g))
    return EXIT_YES


def cmd_experiment(args) -> int:
    from homcut.params import balanced_power_witness, him_exact, separation_instance

    if args.separation is not None:
        if args.separation < 2:
            raise _Usage("--separation needs h >= 2")
        try:
            inst = separation_instance(args.separation, args.seed, args.retries)
        except RetryLimit as exc:
            data = {"status": "retry-limit", "attempts": exc.attempts, "best": exc.best.to_json()}
            _emit(data, args.json or "-")
            return EXIT_SOFT
        data = {"status": "ok", **inst.to_json()}
        _emit(data, args.json or "-")
        return EXIT_YES if inst.witness_valid else EXIT_NO
    if args.balanced_witness:
        if not args.matrix:
            raise _Usage("--balanced-witness needs --matrix")
        a = read_matrix(args.matrix)
        _, w = him_exact(a)
        res = balanced_power_witness(a, w, args.s, full=args.full, seed=args.seed)
        data = {"status": "ok", "him": len(w), "s": args.s, "power": res.power,
                "witness_size": len(res.witness), "checked_pairs": res.checked_pairs,
                "valid": res.valid, "witness": res.witness.to_json()}
        _emit(data, args.json or "-")
        return EXIT_YES if res.valid else EXIT_NO
    raise _Usage("choose --separation or --balanced-witness")


def _verify_one(job):
    idx, gspec, hspec, backends, preprocess = job
    from homcut.solver import solve

    g, h = generate(gspec), generate(hspec)
    expected = hom_exists_bruteforce(g, h)
    got = {}
    for b in backends:
        got[b] = solve(g, h, cfg=ReductionConfig(b), preprocess=preprocess).answer
    return idx, expected, got


def cmd_verify(args) -> int:
    path = args.corpus or default_corpus_path()
    corpus = load_corpus(path)
    backends = _split(args.backends) or ["noop", "him", "rowbasis"]
    for b in backends:
        if b not in BACKENDS:
            raise ValueError(f"unknown backend {b!r}")
    if not corpus:
        print("warning: corpus is empty; nothing to verify", file=sys.stderr)
        if args.json:
            _emit({"instances": 0, "backends": backends, "mismatches": [], "ok": True}, args.json)
        return EXIT_YES
    pre = tuple(_split(args.preprocess))
    jobs = [(i, g, h, backends, pre) for i, (g, h) in enumerate(corpus)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_verify_one, jobs, chunksize=8))
    else:
        results = [_verify_one(j) for j in jobs]
    mismatches = [
        {"index": i, "backend": b, "expected": exp, "got": ans}
        for i, exp, got in results
        for b, ans in got.items()
        if ans != exp
    ]
    data = {"instances": len(corpus), "backends": backends, "mismatches": mismatches, "ok": not mismatches}
    if args.json:
        _emit(data, args.json)
    if args.json != "-":
        print(f"{len(corpus)} instances x {len(backends)} backends: {len(mismatches)} mismatch(es)")
        if mismatches:
            print(f"{'index':>6} {'backend':<9} {'oracle':<6} {'solver':<6}")
            for m in mismatches:
                print(f"{m['index']:>6} {m['backend']:<9} {str(m['expected']):<6} {str(m['got']):<6}")
    return EXIT_YES if not mismatches else EXIT_NO


# ------------------------------------------------------------------ parser


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homcut", description="Graph homomorphism by cut-based dynamic programming.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("solve", help="decide whether G maps to H")
    s.add_argument("--graph", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--ordering")
    s.add_argument("--backend", choices=BACKENDS, default="rowbasis")
    s.add_argument("--field-prime", type=int, default=FAST_PRIME)
    s.add_argument("--preprocess", default="", help="comma list of: core, factor")
    s.add_argument("--cadence", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("params", help="matrix parameters of a target graph")
    s.add_argument("--target", required=True)
    s.add_argument("--compute", default="all", help="comma list of: mim, him, cov, mimsup, support")
    s.add_argument("--power", type=int, default=2)
    s.add_argument("--field-prime", type=int, default=(1 << 61) - 1)
    s.add_argument("--json")
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("repsets", help="run one representative-set reduction")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--tuples", default="all")
    s.add_argument("--backend", choices=BACKENDS, default="rowbasis")
    s.add_argument("--field-prime", type=int, default=(1 << 61) - 1)
    s.add_argument("--support", help="field-matrix file with the support of the matrix")
    s.add_argument("--oracle-compare", action="store_true")
    s.add_argument("--json")
    s.set_defaults(func=cmd_repsets)

    s = sub.add_parser("core", help="core of a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_core)

    s = sub.add_parser("factorize", help="prime factors under the direct product")
    s.add_argument("--graph", required=True)
    s.add_argument("--json")
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("cutwidth", help="cutwidth ordering")
    s.add_argument("--graph", required=True)
    s.add_argument("--heuristic", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--iterations", type=int, default=4000)
    s.add_argument("--json")
    s.set_defaults(func=cmd_cutwidth)

    s = sub.add_parser("gen", help="generate a graph or a corpus manifest")
    s.add_argument("--model", choices=("gnp", "cycle", "clique", "grid", "random-target"))
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--cols", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--corpus", type=int, help="emit a manifest with this many random pairs")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("experiment", help="witness constructions")
    s.add_argument("--separation", type=int, metavar="H")
    s.add_argument("--retries", type=int, default=32)
    s.add_argument("--balanced-witness", action="store_true")
    s.add_argument("--matrix")
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--full", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("verify", help="compare every backend against the brute-force oracle")
    s.add_argument("--corpus")
    s.add_argument("--backends", default="noop,him,rowbasis")
    s.add_argument("--preprocess", default="")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except (HomcutError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR
