"""JSON file formats for markets, continuum matchings and technology trees.

Every document carries ``"format_version": 1``.  Rationals are written as
``"p/q"`` strings in lowest terms (integers as plain ``"p"``).
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .continuum import PseudoMatching
from .errors import MalformedInput
from .market import NULL, FirmPreference, Market, WorkerPreference, indicator, members
from .techtree import TechnologyTree

FORMAT_VERSION = 1
NULL_NAME = "null"

PathLike = Union[str, Path]


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedInput(f"rational must be an integer or a 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {value!r}") from exc


def loads(text: str, source: str = "<string>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput(f"{source}: top level must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise MalformedInput(f"{source}: unsupported format_version {version!r}")
    return doc


def _read(path: PathLike) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {p}: {exc}") from exc
    return loads(text, str(p))


def _names(doc: dict, key: str) -> list[str]:
    names = doc.get(key)
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise MalformedInput(f"'{key}' must be a list of names")
    if len(set(names)) != len(names):
        raise MalformedInput(f"duplicate name in '{key}'")
    if NULL_NAME in names:
        raise MalformedInput(f"'{NULL_NAME}' is reserved for the null firm")
    return names


def _lookup(table: dict, name: Any, what: str) -> int:
    if name not in table:
        raise MalformedInput(f"unknown {what} {name!r}")
    return table[name]


def market_from_dict(doc: dict) -> Market:
    workers = _names(doc, "workers")
    firms = _names(doc, "firms")
    widx = {w: i for i, w in enumerate(workers)}
    fidx = {f: i for i, f in enumerate(firms)}
    n = len(workers)
    fprefs_doc = doc.get("firm_prefs", {})
    wprefs_doc = doc.get("worker_prefs", {})
    if not isinstance(fprefs_doc, dict) or not isinstance(wprefs_doc, dict):
        raise MalformedInput("'firm_prefs' and 'worker_prefs' must be objects keyed by name")
    for key in fprefs_doc:
        _lookup(fidx, key, "firm")
    for key in wprefs_doc:
        _lookup(widx, key, "worker")
    firm_prefs = []
    for f in firms:
        sets = fprefs_doc.get(f, [])
        if not isinstance(sets, list):
            raise MalformedInput(f"preference of {f} must be a list of worker lists")
        vecs = []
        for pos, s in enumerate(sets):
            if not isinstance(s, list):
                raise MalformedInput(f"preference of {f}: entry {pos} is not a list")
            if not s:
                if pos != len(sets) - 1:
                    raise MalformedInput(
                        f"preference of {f}: sets ranked below the empty set are not allowed"
                    )
                continue
            idx = [_lookup(widx, w, "worker") for w in s]
            if len(set(idx)) != len(idx):
                raise MalformedInput(f"preference of {f}: repeated worker in {s}")
            vecs.append(indicator(idx, n))
        firm_prefs.append(FirmPreference(tuple(vecs)))
    worker_prefs = []
    for w in workers:
        listed = wprefs_doc.get(w, [])
        if not isinstance(listed, list):
            raise MalformedInput(f"preference of {w} must be a list of firm names")
        worker_prefs.append(WorkerPreference(tuple(_lookup(fidx, f, "firm") for f in listed)))
    return Market(n, len(firms), tuple(firm_prefs), tuple(worker_prefs), tuple(workers), tuple(firms))


def market_to_dict(market: Market) -> dict:
    wn, fn = market.worker_names, market.firm_names
    return {
        "format_version": FORMAT_VERSION,
        "workers": list(wn),
        "firms": list(fn),
        "firm_prefs": {
            fn[f]: [[wn[w] for w in members(s)] for s in market.firm_prefs[f].acceptable]
            for f in market.firms
        },
        "worker_prefs": {
            wn[w]: [fn[f] for f in market.worker_prefs[w].acceptable] for w in market.workers
        },
    }


def load_market(path: PathLike) -> Market:
    return market_from_dict(_read(path))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def save_market(market: Market, path: PathLike) -> None:
    Path(path).write_text(dumps(market_to_dict(market)), encoding="utf-8")


def matching_from_dict(doc: dict, market: Market) -> PseudoMatching:
    """Continuum matching keyed by firm name (``"null"`` for the null firm).

    Each share is either a list in market worker order or an object mapping
    worker names to quantities; omitted firms and workers get zero.
    """
    body = doc.get("matching")
    if not isinstance(body, dict):
        raise MalformedInput("'matching' must be an object keyed by firm name")
    fidx = {f: i for i, f in enumerate(market.firm_names)}
    fidx[NULL_NAME] = NULL
    widx = {w: i for i, w in enumerate(market.worker_names)}
    n = market.n_workers
    shares = {}
    for name, vec in body.items():
        f = _lookup(fidx, name, "firm")
        if isinstance(vec, list):
            if len(vec) != n:
                raise MalformedInput(f"share of {name} must have {n} entries")
            shares[f] = tuple(parse_rational(v) for v in vec)
        elif isinstance(vec, dict):
            row = [Fraction(0)] * n
            for w, v in vec.items():
                row[_lookup(widx, w, "worker")] = parse_rational(v)
            shares[f] = tuple(row)
        else:
            raise MalformedInput(f"share of {name} must be a list or an object")
    return PseudoMatching.from_dict(market, shares)


def matching_to_dict(M: PseudoMatching, market: Market) -> dict:
    body = {market.firm_names[f]: [fmt_rational(v) for v in M.firms[f]] for f in market.firms}
    body[NULL_NAME] = [fmt_rational(v) for v in M.null]
    return {"format_version": FORMAT_VERSION, "matching": body}


def load_matching(path: PathLike, market: Market) -> PseudoMatching:
    return matching_from_dict(_read(path), market)


def tree_from_dict(doc: dict) -> TechnologyTree:
    workers = _names(doc, "workers")
    widx = {w: i for i, w in enumerate(workers)}
    verts = doc.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise MalformedInput("'vertices' must be a nonempty list")
    names, sets = [], []
    for v in verts:
        if not isinstance(v, dict) or not isinstance(v.get("name"), str):
            raise MalformedInput("each vertex needs a 'name' and a 'workers' list")
        ws = v.get("workers", [])
        if not isinstance(ws, list):
            raise MalformedInput(f"workers of vertex {v['name']} must be a list")
        names.append(v["name"])
        sets.append(indicator([_lookup(widx, w, "worker") for w in ws], len(workers)))
    if len(set(names)) != len(names):
        raise MalformedInput("duplicate vertex name")
    vidx = {v: i for i, v in enumerate(names)}
    edges = []
    for e in doc.get("edges", []):
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedInput("each edge must be a [from, to] pair")
        edges.append((_lookup(vidx, e[0], "vertex"), _lookup(vidx, e[1], "vertex")))
    return TechnologyTree(len(workers), tuple(sets), tuple(edges), tuple(names))


def tree_to_dict(tree: TechnologyTree, worker_names: tuple = ()) -> dict:
    wn = list(worker_names) or [f"w{i + 1}" for i in range(tree.n_workers)]
    return {
        "format_version": FORMAT_VERSION,
        "workers": wn,
        "vertices": [
            {"name": tree.vertex_names[v], "workers": [wn[w] for w in members(tree.vertices[v])]}
            for v in range(len(tree.vertices))
        ],
        "edges": [[tree.vertex_names[a], tree.vertex_names[b]] for a, b in tree.edges],
    }


def load_tree(path: PathLike) -> TechnologyTree:
    return tree_from_dict(_read(path))
