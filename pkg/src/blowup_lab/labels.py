"""Rebuild generator-produced graphs bit-exactly from their labels.

Labels have the grammar ``kind(key=value;key=value;...)`` with integer,
float, bare-word, ``[1,2,3]`` list, or nested-label values.  Every graph
generator in the package emits such a label, so a label alone regenerates
the graph.
"""

from __future__ import annotations

from . import rng
from .constructions import behrend_set, k112_extremal_graph, rs_graph
from .errors import DomainError
from .graph import (
    Graph,
    blowup,
    complete_graph,
    complete_multipartite,
    random_graph,
    random_tripartite,
    tensor_power,
)


def _split_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return parts


def parse_label(label: str) -> tuple[str, dict[str, str]]:
    open_at = label.find("(")
    if open_at < 0 or not label.endswith(")"):
        raise DomainError(f"unparseable label {label!r}")
    kind = label[:open_at]
    body = label[open_at + 1 : -1]
    args: dict[str, str] = {}
    for part in _split_args(body):
        key, sep, value = part.partition("=")
        if not sep:
            raise DomainError(f"bad label argument {part!r} in {label!r}")
        args[key] = value
    return kind, args


def _int_list(raw: str) -> list[int]:
    if not (raw.startswith("[") and raw.endswith("]")):
        raise DomainError(f"expected a [..] list, got {raw!r}")
    inner = raw[1:-1]
    return [int(v) for v in inner.split(",")] if inner else []


def regenerate(label: str) -> Graph:
    """Rebuild the graph a generator label describes; bit-exact by contract."""
    kind, args = parse_label(label)
    if kind == "complete":
        return complete_graph(int(args["h"]))
    if kind == "random":
        if args.get("rng", rng.ALGORITHM) != rng.ALGORITHM:
            raise DomainError(f"unknown rng id {args.get('rng')!r}")
        return random_graph(int(args["n"]), float(args["p"]), int(args["seed"]))
    if kind == "tripartite":
        if args.get("rng", rng.ALGORITHM) != rng.ALGORITHM:
            raise DomainError(f"unknown rng id {args.get('rng')!r}")
        g, _ = random_tripartite(
            int(args["m"]),
            (float(args["a1"]), float(args["a2"]), float(args["a3"])),
            int(args["seed"]),
        )
        return g
    if kind == "multipartite":
        return complete_multipartite(_int_list(args["sizes"]))
    if kind == "blowup":
        base = regenerate(args["base"])
        sizes = [int(args["q"])] * base.n if "q" in args else _int_list(args["sizes"])
        g, _ = blowup(base, sizes)
        return g
    if kind == "tensor":
        return tensor_power(regenerate(args["base"]), int(args["k"]))
    if kind == "rs":
        m = int(args["m"])
        s = behrend_set(m) if args["set"] == "behrend" else _int_list(args["set"])
        g, _ = rs_graph(m, s)
        return g
    if kind == "k112-extremal":
        g, _, _ = k112_extremal_graph(int(args["m"]), int(args["q"]))
        return g
    raise DomainError(f"unknown generator kind {kind!r} in label {label!r}")
