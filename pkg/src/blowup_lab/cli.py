"""Command-line front end: seed-stamped, manifest-backed experiments.

Exit codes are a stable contract for CI: 0 success/pass, 2 usage error,
3 resource budget exceeded, 4 falsified invariant.  Every command writes
a manifest holding the argv needed to re-run it; exact outputs re-run
byte-for-byte, sampled ones value-for-value at the same seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__, bounds, counting, rng
from .constructions import (
    behrend_set,
    k112_extremal_graph,
    read_apfree,
    read_certificate,
    rs_graph,
    verify_rs_certificate,
    write_apfree,
    write_certificate,
)
from .errors import (
    BlowupLabError,
    DomainError,
    GraphFormatError,
    MalformedInputError,
    PreconditionError,
    ResourceBudgetError,
)
from .graph import (
    Graph,
    blowup,
    complete_multipartite,
    random_graph,
    read_graph,
    tensor_power,
    write_graph,
)
from .report import render_scan_figure, scan_report_json_dict, write_scan_csv


def _parse_shape(raw: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(v) for v in raw.split(","))
    except ValueError:
        raise DomainError(f"--shape expects integers 'a,b,c', got {raw!r}") from None
    if len(parts) != 3 or any(a < 1 for a in parts):
        raise DomainError(f"--shape expects three positive integers, got {raw!r}")
    return parts


def _parse_sizes(raw: str) -> list[int]:
    try:
        sizes = [int(v) for v in raw.split(",")]
    except ValueError:
        raise DomainError(f"--sizes expects integers 'a,b,...', got {raw!r}") from None
    return sizes


def _write_manifest(
    path: str | Path,
    command: str,
    params: dict,
    seed: int | None,
    inputs: list[str],
    outputs: list[str],
    argv: list[str],
    started: float,
) -> None:
    payload = {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "rng": rng.ALGORITHM,
        "inputs": inputs,
        "outputs": outputs,
        "argv": argv,
        "duration_s": time.perf_counter() - started,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


# -- gen -------------------------------------------------------------------------


def _cmd_gen(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.perf_counter()
    out = Path(args.out)
    outputs = [str(out)]
    inputs: list[str] = []
    seed = getattr(args, "seed", None)
    params: dict = {"kind": args.kind}

    if args.kind == "random":
        params.update(n=args.n, p=args.p, seed=args.seed)
        write_graph(random_graph(args.n, args.p, args.seed), out)
    elif args.kind == "blowup":
        if (args.q is None) == (args.sizes is None):
            raise DomainError("gen blowup needs exactly one of --q or --sizes")
        base = read_graph(args.infile)
        inputs.append(args.infile)
        sizes = [args.q] * base.n if args.q is not None else _parse_sizes(args.sizes)
        params.update(infile=args.infile, q=args.q, sizes=args.sizes)
        g, part = blowup(base, sizes)
        write_graph(g, out)
        part_path = str(out) + ".partition.json"
        Path(part_path).write_text(
            json.dumps({"classes": [list(c) for c in part.classes]}, indent=2) + "\n",
            encoding="utf-8",
        )
        outputs.append(part_path)
    elif args.kind == "tensor":
        base = read_graph(args.infile)
        inputs.append(args.infile)
        params.update(infile=args.infile, k=args.k, vertex_budget=args.vertex_budget)
        write_graph(tensor_power(base, args.k, vertex_budget=args.vertex_budget), out)
    elif args.kind == "multipartite":
        sizes = _parse_sizes(args.sizes)
        params.update(sizes=sizes)
        write_graph(complete_multipartite(sizes), out)
    elif args.kind == "behrend":
        params.update(n=args.n)
        write_apfree(behrend_set(args.n), out)
    elif args.kind == "rs":
        params.update(m=args.m, set=args.set)
        if args.set:
            apset = read_apfree(args.set)
            inputs.append(args.set)
            set_file = args.set
        else:
            apset = behrend_set(args.m)
            set_file = str(out) + ".set.txt"
            write_apfree(apset, set_file)
            outputs.append(set_file)
        g, cert = rs_graph(args.m, apset)
        write_graph(g, out)
        cert_path = str(out) + ".cert.json"
        # the certificate stores the set file relative to its own directory
        rel = os.path.relpath(set_file, start=out.parent or ".")
        write_certificate(cert, cert_path, set_file=rel)
        outputs.append(cert_path)
    elif args.kind == "k112-extremal":
        params.update(m=args.m, q=args.q)
        g, part, cert = k112_extremal_graph(args.m, args.q)
        write_graph(g, out)
        part_path = str(out) + ".partition.json"
        Path(part_path).write_text(
            json.dumps({"classes": [list(c) for c in part.classes]}, indent=2) + "\n",
            encoding="utf-8",
        )
        cert_path = str(out) + ".cert.json"
        set_path = str(out) + ".set.txt"
        write_apfree(cert.set, set_path)
        write_certificate(cert, cert_path, set_file=Path(set_path).name)
        outputs.extend([part_path, cert_path, set_path])
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown gen kind {args.kind!r}")

    manifest = args.manifest or str(out) + ".manifest.json"
    _write_manifest(manifest, f"gen {args.kind}", params, seed, inputs, outputs, argv, started)
    return 0


# -- count -----------------------------------------------------------------------


def _cmd_count(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.perf_counter()
    shape = _parse_shape(args.shape)
    g = read_graph(args.infile)
    a, b, _ = sorted(shape)
    cost = g.n ** (a + b)
    mode = args.mode
    if mode == "auto":
        mode = "exact" if cost <= args.budget else "sample"
    if mode == "exact":
        try:
            result = counting.blowup_hom_count(shape, g, budget=args.budget, workers=args.workers)
        except ResourceBudgetError as exc:
            exc.suggestion = (
                f"blowup-lab count --shape {args.shape} --in {args.infile} "
                f"--mode sample --samples {args.samples} --seed {args.seed}"
            )
            raise
        payload = result.to_json_dict()
        payload["mode"] = "exact"
    else:
        est = counting.sample_hom_density(shape, g, args.samples, args.seed)
        payload = est.to_json_dict()
        payload["mode"] = "sample"
    _emit(payload)
    manifest = args.manifest or "count.manifest.json"
    _write_manifest(
        manifest,
        "count",
        {
            "shape": list(shape),
            "infile": args.infile,
            "mode": args.mode,
            "samples": args.samples,
            "budget": args.budget,
            "workers": args.workers,
        },
        args.seed,
        [args.infile],
        [],
        argv,
        started,
    )
    return 0


# -- verify ----------------------------------------------------------------------


def _verify_payload(check: str, ok: bool, details: dict) -> int:
    payload = {"check": check, "pass": ok}
    payload.update(details)
    _emit(payload)
    return 0 if ok else 4


def _host_from_args(args: argparse.Namespace) -> Graph:
    if getattr(args, "infile", None):
        return read_graph(args.infile)
    if args.n is None or args.p is None or args.seed is None:
        raise DomainError("need either --in FILE or all of --n/--p/--seed")
    return random_graph(args.n, args.p, args.seed)


def _cmd_verify(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.perf_counter()
    check = args.check
    inputs: list[str] = []
    params: dict = {"check": check}

    if check == "rs":
        if args.infile and args.cert:
            g = read_graph(args.infile)
            cert = read_certificate(args.cert)
            inputs.extend([args.infile, args.cert])
            params.update(infile=args.infile, cert=args.cert)
        elif args.m is not None:
            g, cert = rs_graph(args.m, behrend_set(args.m))
            params.update(m=args.m)
        else:
            raise DomainError("verify rs needs --m or both --in and --cert")
        verdict = verify_rs_certificate(g, cert)
        code = _verify_payload(
            "rs",
            verdict.ok,
            {
                "triangles_found": verdict.triangle_count,
                "triangles_expected": verdict.expected_triangles,
                "edges": verdict.edge_count,
                "edges_expected": verdict.expected_edges,
                "failures": list(verdict.failures),
            },
        )
    elif check == "tensor":
        g = _host_from_args(args)
        params.update(n=args.n, p=args.p, k=args.k, infile=args.infile)
        gk = tensor_power(g, args.k)
        failures = []
        for name, counter in (("k3", counting.triangle_hom_count), ("k112", counting.k112_hom_count)):
            base = counter(g).density
            lifted = counter(gk).density
            if lifted != base**args.k:
                failures.append(
                    {"pattern": name, "base_density": str(base), "power_density": str(lifted)}
                )
        code = _verify_payload("tensor", not failures, {"k": args.k, "failures": failures})
    elif check == "blowup-identity":
        g = _host_from_args(args)
        params.update(n=args.n, p=args.p, q=args.q, shape=args.shape, infile=args.infile)
        shape = _parse_shape(args.shape)
        big, _ = blowup(g, [args.q] * g.n)
        lhs = counting.blowup_hom_count(shape, big).count
        rhs = args.q ** sum(shape) * counting.blowup_hom_count(shape, g).count
        code = _verify_payload(
            "blowup-identity",
            lhs == rhs,
            {"q": args.q, "shape": list(shape), "blown_count": str(lhs), "scaled_count": str(rhs)},
        )
    elif check == "cs":
        g = read_graph(args.infile)
        inputs.append(args.infile)
        params.update(infile=args.infile)
        rep = bounds.cauchy_schwarz_check(g)
        code = _verify_payload(
            "cs",
            rep.holds,
            {"lhs": str(rep.lhs), "rhs": str(rep.rhs), "vacuous": rep.vacuous},
        )
    elif check == "prop13-lower":
        g = _host_from_args(args)
        params.update(n=args.n, p=args.p, shape=args.shape, infile=args.infile)
        shape = _parse_shape(args.shape)
        a, b, c = shape
        gamma = counting.triangle_hom_count(g).density
        d = counting.blowup_hom_count(shape, g).density
        ok = d >= gamma ** (a * b * c)
        code = _verify_payload(
            "prop13-lower",
            ok,
            {
                "shape": list(shape),
                "gamma": str(gamma),
                "density": str(d),
                "lower_bound": str(gamma ** (a * b * c)),
            },
        )
    else:  # pragma: no cover
        raise DomainError(f"unknown check {check!r}")

    manifest = args.manifest or "verify.manifest.json"
    _write_manifest(
        manifest, f"verify {check}", params, getattr(args, "seed", None), inputs, [], argv, started
    )
    return code


# -- scan ------------------------------------------------------------------------


def _cmd_scan(args: argparse.Namespace, argv: list[str]) -> int:
    started = time.perf_counter()
    g = read_graph(args.infile)
    report = bounds.scan_t(
        g,
        delta=args.delta,
        t_max=args.t_max,
        budget=args.budget,
        seed=args.seed,
        samples=args.samples,
    )
    outputs = []
    csv_path = Path(args.csv)
    write_scan_csv(report, csv_path)
    outputs.append(str(csv_path))
    figure_path = None
    if not args.no_figure:
        figure_path = args.figure or str(csv_path.with_suffix(".png"))
        render_scan_figure(report, figure_path)
        outputs.append(figure_path)
    summary = scan_report_json_dict(report)
    summary.pop("rows")
    summary["csv"] = str(csv_path)
    summary["figure"] = figure_path
    _emit(summary)
    manifest = args.manifest or str(csv_path) + ".manifest.json"
    _write_manifest(
        manifest,
        "scan",
        {
            "infile": args.infile,
            "delta": args.delta,
            "t_max": args.t_max,
            "budget": args.budget,
            "samples": args.samples,
            "csv": str(csv_path),
            "figure": figure_path,
        },
        args.seed,
        [args.infile],
        outputs,
        argv,
        started,
    )
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blowup-lab",
        description="Generators, homomorphism counters, and bound experiments "
        "for triangle blowups.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    gen = sub.add_parser("gen", help="generate graphs, sets, and certificates")
    gen_sub = gen.add_subparsers(dest="kind")

    g_random = gen_sub.add_parser("random", help="G(n, p) with a fixed seed")
    g_random.add_argument("--n", type=int, required=True)
    g_random.add_argument("--p", type=float, required=True)
    g_random.add_argument("--seed", type=int, required=True)

    g_blowup = gen_sub.add_parser("blowup", help="blow up a graph file")
    g_blowup.add_argument("--in", dest="infile", required=True)
    g_blowup.add_argument("--q", type=int, help="uniform class size")
    g_blowup.add_argument("--sizes", help="comma-separated class sizes")

    g_tensor = gen_sub.add_parser("tensor", help="tensor power of a graph file")
    g_tensor.add_argument("--in", dest="infile", required=True)
    g_tensor.add_argument("--k", type=int, required=True)
    g_tensor.add_argument("--vertex-budget", type=int, default=10**6)

    g_multi = gen_sub.add_parser("multipartite", help="complete multipartite graph")
    g_multi.add_argument("--sizes", required=True)

    g_behrend = gen_sub.add_parser("behrend", help="progression-free subset of [1, n]")
    g_behrend.add_argument("--n", type=int, required=True)

    g_rs = gen_sub.add_parser("rs", help="triangle-packed 3-partite graph")
    g_rs.add_argument("--m", type=int, required=True)
    g_rs.add_argument("--set", help="existing #apfree file (default: behrend set)")

    g_k112 = gen_sub.add_parser("k112-extremal", help="q-blowup of the triangle packing")
    g_k112.add_argument("--m", type=int, required=True)
    g_k112.add_argument("--q", type=int, required=True)

    for sp in (g_random, g_blowup, g_tensor, g_multi, g_behrend, g_rs, g_k112):
        sp.add_argument("--out", required=True)
        sp.add_argument("--manifest")
        sp.set_defaults(func=_cmd_gen)

    count = sub.add_parser("count", help="exact or sampled blowup density of a graph file")
    count.add_argument("--shape", required=True, help="a,b,c")
    count.add_argument("--in", dest="infile", required=True)
    count.add_argument("--mode", choices=("auto", "exact", "sample"), default="auto")
    count.add_argument("--samples", type=int, default=10**6)
    count.add_argument("--seed", type=int, default=0)
    count.add_argument("--budget", type=int, default=counting.DEFAULT_TUPLE_BUDGET)
    count.add_argument("--workers", type=int, default=1)
    count.add_argument("--manifest")
    count.set_defaults(func=_cmd_count)

    verify = sub.add_parser("verify", help="run an invariant check; exit 4 if falsified")
    verify_sub = verify.add_subparsers(dest="check")

    v_rs = verify_sub.add_parser("rs", help="triangle packing certificate")
    v_rs.add_argument("--m", type=int)
    v_rs.add_argument("--in", dest="infile")
    v_rs.add_argument("--cert")

    v_tensor = verify_sub.add_parser("tensor", help="density of tensor power is the k-th power")
    v_tensor.add_argument("--in", dest="infile")
    v_tensor.add_argument("--n", type=int)
    v_tensor.add_argument("--p", type=float)
    v_tensor.add_argument("--seed", type=int)
    v_tensor.add_argument("--k", type=int, required=True)

    v_blow = verify_sub.add_parser("blowup-identity", help="hom count scales by q^|V(B)|")
    v_blow.add_argument("--in", dest="infile")
    v_blow.add_argument("--n", type=int)
    v_blow.add_argument("--p", type=float)
    v_blow.add_argument("--seed", type=int)
    v_blow.add_argument("--q", type=int, required=True)
    v_blow.add_argument("--shape", default="2,2,2")

    v_cs = verify_sub.add_parser("cs", help="codegree-square inequality")
    v_cs.add_argument("--in", dest="infile", required=True)

    v_prop = verify_sub.add_parser("prop13-lower", help="density >= gamma^(abc)")
    v_prop.add_argument("--in", dest="infile")
    v_prop.add_argument("--n", type=int)
    v_prop.add_argument("--p", type=float)
    v_prop.add_argument("--seed", type=int)
    v_prop.add_argument("--shape", default="2,2,2")

    for sp in (v_rs, v_tensor, v_blow, v_cs, v_prop):
        sp.add_argument("--manifest")
        sp.set_defaults(func=_cmd_verify)

    scan = sub.add_parser("scan", help="density scan over balanced blowups")
    scan.add_argument("--in", dest="infile", required=True)
    scan.add_argument("--delta", type=float, required=True)
    scan.add_argument("--t-max", type=int, required=True)
    scan.add_argument("--budget", type=int, default=counting.DEFAULT_TUPLE_BUDGET)
    scan.add_argument("--samples", type=int, default=10**6)
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--csv", required=True)
    scan.add_argument("--figure", help="figure path (default: csv path with .png)")
    scan.add_argument("--no-figure", action="store_true", help="emit data only")
    scan.add_argument("--manifest")
    scan.set_defaults(func=_cmd_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors and --help
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.func(args, argv)
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        if exc.suggestion:
            print(f"try: {exc.suggestion}", file=sys.stderr)
        return 3
    except (DomainError, PreconditionError, MalformedInputError, GraphFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BlowupLabError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


def cli_entry() -> None:
    sys.exit(main())
