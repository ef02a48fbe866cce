"""Command-line interface.

Exit codes: 0 success, 1 negative verdict, 2 operational error (bad input,
budget exceeded, search exhausted).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .continuum import PseudoMatching
from .demand import (
    DEFAULT_SUBMATRIX_BUDGET,
    DemandType,
    Verdict,
    firm_demand_types,
    is_totally_unimodular,
    is_unimodular,
    market_demand_type,
)
from .errors import InternalError, MalformedInput, PreconditionError, TumatchError
from .market import DEFAULT_ENUMERATION_BUDGET, NULL, DiscreteMatching, Market, enumerate_stable_matchings, members
from .rounding import EXHAUSTED, NON_INTEGRAL, NOT_TU, STABLE, SolveResult, solve
from .search import SearchConfig, verify_stable_continuum
from .techtree import (
    TechnologyTree,
    all_specialists,
    complete_graph_edges,
    is_unit_demand_over_tree,
    network_matrices,
    non_specialists,
    tree_edge_matrix,
    certify_specialist_market,
)

OK, NEGATIVE, OPERATIONAL = 0, 1, 2


def fmt_vec(v: Sequence) -> str:
    return "(" + ",".join(io.fmt_rational(x) for x in v) + ")"


def fmt_set(vectors) -> str:
    return "{" + ",".join(fmt_vec(v) for v in vectors) + "}"


def table(header: Sequence[str], rows: Sequence[Sequence]) -> list[str]:
    cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return ["  " + "  ".join(c.rjust(widths[i]) if i else c.ljust(widths[i]) for i, c in enumerate(r)).rstrip()
            for r in cells]


def matching_text(market: Market, mu: DiscreteMatching) -> str:
    parts = []
    for f in list(market.firms) + [NULL]:
        names = [market.worker_names[w] for w in members(mu.employees(f))]
        parts.append(f"{market.firm_name(f)}={{{','.join(names)}}}")
    return ", ".join(parts)


def matching_json(market: Market, mu: DiscreteMatching) -> dict:
    return {market.worker_names[w]: market.firm_name(f) for w, f in enumerate(mu.assignment)}


def continuum_table(market: Market, M: PseudoMatching) -> list[str]:
    rows = [[market.firm_name(f)] + [io.fmt_rational(v) for v in M.share(f)] for f in list(market.firms) + [NULL]]
    return table(["firm"] + list(market.worker_names), rows)


def witness_text(market: Market, dt: DemandType, verdict: Verdict) -> str:
    w = verdict.witness
    vecs = list(dt)
    rows = ",".join(market.worker_names[r] for r in w.rows)
    cols = ",".join(fmt_vec(vecs[c]) for c in w.cols)
    return f"witness: rows {{{rows}}} columns {{{cols}}} det {w.det}"


def witness_json(market: Market, dt: DemandType, verdict: Verdict) -> Optional[dict]:
    if verdict.witness is None:
        return None
    vecs = list(dt)
    w = verdict.witness
    return {
        "rows": [market.worker_names[r] for r in w.rows],
        "columns": [list(vecs[c]) for c in w.cols],
        "det": w.det,
    }


class Output:
    """Collects text lines or a JSON document and prints once at the end."""

    def __init__(self, as_json: bool) -> None:
        self.as_json = as_json
        self.lines: list[str] = []
        self.doc: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self) -> None:
        if self.as_json:
            sys.stdout.write(json.dumps(self.doc, indent=2) + "\n")
        else:
            sys.stdout.write("\n".join(self.lines) + "\n")


def cmd_demand_type(args: argparse.Namespace, out: Output) -> int:
    market = io.load_market(args.market)
    per_firm = firm_demand_types(market)
    dt = market_demand_type(market)
    for f, d in enumerate(per_firm):
        out.line(f"D[{market.firm_names[f]}] = {fmt_set(d)}")
    out.line(f"D = {fmt_set(dt)}")
    out.doc = {
        "firms": {market.firm_names[f]: [list(v) for v in d] for f, d in enumerate(per_firm)},
        "demand_type": [list(v) for v in dt],
    }
    return OK


def cmd_check_tu(args: argparse.Namespace, out: Output) -> int:
    market = io.load_market(args.market)
    dt = market_demand_type(market)
    budget = args.budget or DEFAULT_SUBMATRIX_BUDGET
    verdict = is_totally_unimodular(dt.matrix(), budget=budget)
    uni = is_unimodular(dt.matrix(), budget=budget)
    out.line(f"D = {fmt_set(dt)}")
    out.line(f"totally unimodular: {'yes' if verdict else 'no'}")
    if not verdict:
        out.line(witness_text(market, dt, verdict))
    out.line(f"unimodular: {'yes' if uni else 'no'}")
    out.doc = {
        "demand_type": [list(v) for v in dt],
        "totally_unimodular": bool(verdict),
        "witness": witness_json(market, dt, verdict),
        "unimodular": bool(uni),
    }
    return OK if verdict else NEGATIVE


def _config(args: argparse.Namespace, user: Optional[PseudoMatching]) -> SearchConfig:
    kwargs = {"seed": args.seed}
    if args.budget:
        kwargs["oracle_budget"] = args.budget
    if user is not None:
        kwargs["user_matching"] = user
        kwargs["sources"] = ("user",)
    return SearchConfig(**kwargs)


def _solve_text(market: Market, result: SolveResult, out: Output) -> None:
    dt = result.demand_type
    out.line(f"D = {fmt_set(dt)}")
    out.line(f"totally unimodular: {'yes' if result.tu else 'no'}")
    if not result.tu:
        out.line(witness_text(market, dt, result.tu))
    if result.seed is not None:
        out.line("seed (stable continuum matching):")
        out.lines.extend(continuum_table(market, result.seed))
    if result.system is not None:
        sys_ = result.system
        labels = [m.label(market) for m in sys_.meta]
        row_names = list(market.firm_names) + list(market.worker_names)
        out.line(f"B ({len(sys_.b)}x{sys_.k}):")
        out.lines.extend(table(["row"] + labels, [[row_names[i]] + sys_.b[i] for i in range(len(sys_.b))]))
        out.line(f"z_hat = {fmt_vec(sys_.z_hat)}")
    if result.vertex is not None:
        out.line(f"z = {fmt_vec(result.vertex.z)}")
    messages = {
        STABLE: "stable matching found",
        NOT_TU: "demand type not totally unimodular",
        EXHAUSTED: "search exhausted before a stable continuum matching was verified",
        NON_INTEGRAL: "vertex is not integral",
    }
    out.line(f"verdict: {messages[result.status]}")
    if result.matching is not None:
        out.line("matching:")
        out.lines.extend(table(["worker", "firm"],
                               [[market.worker_names[w], market.firm_name(f)]
                                for w, f in enumerate(result.matching.assignment)]))
        out.line(matching_text(market, result.matching))
    if result.oracle is not None:
        out.line(f"oracle: {len(result.oracle)} stable matching(s), solution among them")


def _solve_json(market: Market, result: SolveResult) -> dict:
    doc: dict = {
        "status": result.status,
        "demand_type": [list(v) for v in result.demand_type],
        "totally_unimodular": bool(result.tu),
        "witness": witness_json(market, result.demand_type, result.tu),
    }
    if result.seed is not None:
        doc["seed"] = io.matching_to_dict(result.seed, market)["matching"]
    if result.system is not None:
        doc["columns"] = [m.label(market) for m in result.system.meta]
        doc["B"] = result.system.b
        doc["z_hat"] = [io.fmt_rational(v) for v in result.system.z_hat]
    if result.vertex is not None:
        doc["z"] = [io.fmt_rational(v) for v in result.vertex.z]
    if result.matching is not None:
        doc["matching"] = matching_json(market, result.matching)
    if result.oracle is not None:
        doc["oracle"] = [matching_json(market, mu) for mu in result.oracle]
    return doc


def cmd_solve(args: argparse.Namespace, out: Output) -> int:
    market = io.load_market(args.market)
    user = None
    if args.from_matching:
        user = io.load_matching(args.from_matching, market)
        if not verify_stable_continuum(market, user):
            raise PreconditionError(f"{args.from_matching}: not a stable continuum matching")
    result = solve(
        market,
        _config(args, user),
        force=args.force,
        oracle_check=args.oracle_check,
        tu_budget=args.budget or DEFAULT_SUBMATRIX_BUDGET,
    )
    _solve_text(market, result, out)
    out.doc = _solve_json(market, result)
    if args.report:
        from .report import write_solve_report

        write_solve_report(result, market, Path(args.report))
    if result.status == EXHAUSTED:
        return OPERATIONAL
    return OK if result.ok else NEGATIVE


def cmd_oracle(args: argparse.Namespace, out: Output) -> int:
    market = io.load_market(args.market)
    found = enumerate_stable_matchings(market, args.budget or DEFAULT_ENUMERATION_BUDGET)
    if not found:
        out.line("stable matchings: none")
    else:
        out.line(f"stable matchings: {len(found)}")
        for i, mu in enumerate(found, 1):
            out.line(f"  #{i}: {matching_text(market, mu)}")
    out.doc = {"stable_matchings": [matching_json(market, mu) for mu in found]}
    return OK if found else NEGATIVE


def _tree_columns(tree: TechnologyTree) -> list[str]:
    return [tree.vertex_names[a] + tree.vertex_names[b] for a, b in complete_graph_edges(tree)]


def cmd_tree(args: argparse.Namespace, out: Output) -> int:
    doc = io._read(args.tree)
    tree = io.tree_from_dict(doc)
    worker_names = list(doc["workers"])
    cols = _tree_columns(tree)
    out.line("workers:")
    specialists = {}
    for w in range(tree.n_workers):
        edges = [tree.edge_name(e) for e in tree.engagements(w)]
        ok = len(edges) == 1
        specialists[worker_names[w]] = {"specialist": ok, "edges": edges}
        what = "specialist" if ok else "not a specialist"
        out.line(f"  {worker_names[w]}: {what} (upgrades: {', '.join(edges) or 'none'})")
    h = tree_edge_matrix(tree)
    out.line("H (rows: tree edges, columns: complete-graph edges):")
    out.lines.extend(table(["edge"] + cols, [[tree.edge_name(e)] + h[e] for e in range(len(h))]))
    out.doc = {"specialists": specialists, "columns": cols, "H": h}
    code = OK
    mats = None
    if not all_specialists(tree):
        bad = ", ".join(worker_names[w] for w in non_specialists(tree))
        out.line(f"not a specialist: {bad}")
        code = NEGATIVE
    else:
        mats = network_matrices(tree)
        out.line("H' (rows: workers):")
        out.lines.extend(table(["worker"] + cols, [[worker_names[w]] + mats.h_workers[w] for w in range(tree.n_workers)]))
        out.doc["H_workers"] = mats.h_workers
    if args.market and mats is not None:
        market = io.load_market(args.market)
        if list(market.worker_names) != worker_names:
            raise MalformedInput("market and tree declare different workers")
        if not is_unit_demand_over_tree(market, tree):
            out.line("certificate: market is not unit-demand over this tree")
            out.doc["certificate"] = None
            code = NEGATIVE
        else:
            cert = certify_specialist_market(market, tree)
            out.line("certificate (each demand vector is a signed column of H'):")
            cdoc = {}
            for f, matches in enumerate(cert.matches):
                terms = [f"{'-' if c.sign < 0 else '+'}H'[{c.column + 1}]" for c in sorted(matches, key=lambda c: c.column)]
                name = market.firm_names[f]
                out.line(f"  D[{name}] = {{{', '.join(terms)}}}")
                cdoc[name] = [{"vector": list(c.vector), "column": c.column + 1, "sign": c.sign} for c in matches]
            out.line("demand type totally unimodular: yes")
            out.doc["certificate"] = cdoc
    if args.report:
        from .report import write_tree_report

        write_tree_report(tree, worker_names, Path(args.report), mats, h)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=None, metavar="N",
                        help="cap on enumerated matchings or determinants")

    parser = argparse.ArgumentParser(prog="tumatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demand-type", parents=[common], help="print per-firm and market demand types")
    p.add_argument("market")
    p.set_defaults(func=cmd_demand_type)

    p = sub.add_parser("check-tu", parents=[common], help="test the demand type for total unimodularity")
    p.add_argument("market")
    p.set_defaults(func=cmd_check_tu)

    p = sub.add_parser("solve", parents=[common], help="find a stable matching through an integral vertex")
    p.add_argument("market")
    p.add_argument("--seed", type=int, default=0, help="seed for the continuum search")
    p.add_argument("--force", action="store_true", help="run the pipeline even when the TU test fails")
    p.add_argument("--oracle-check", action="store_true", help="cross-check against brute force")
    p.add_argument("--from-matching", metavar="FILE", help="seed with this stable continuum matching")
    p.add_argument("--report", metavar="DIR", help="write CSV tables and PNG figures here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", parents=[common], help="enumerate all stable matchings")
    p.add_argument("market")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("tree", parents=[common], help="specialists, network matrices and certificate")
    p.add_argument("tree")
    p.add_argument("market", nargs="?")
    p.add_argument("--report", metavar="DIR", help="write CSV tables and PNG figures here")
    p.set_defaults(func=cmd_tree)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is not None and args.budget <= 0:
        parser.error("--budget must be positive")
    if getattr(args, "seed", 0) < 0 or getattr(args, "seed", 0) >= 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    out = Output(args.json)
    try:
        code = args.func(args, out)
    except InternalError:
        raise
    except TumatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return OPERATIONAL
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
