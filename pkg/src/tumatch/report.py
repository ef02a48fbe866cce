"""Report files: CSV tables plus matplotlib figures written side by side."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Sequence

from .continuum import PseudoMatching
from .io import fmt_rational
from .market import NULL, Market
from .rounding import SolveResult
from .techtree import NetworkMatrices, TechnologyTree

# fixed metadata keeps PNG output reproducible
_PNG_META = {"Software": None}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def continuum_rows(market: Market, M: PseudoMatching) -> list[list[str]]:
    rows = []
    for f in list(market.firms) + [NULL]:
        rows.append([market.firm_name(f)] + [fmt_rational(v) for v in M.share(f)])
    return rows


def plot_matchings(market: Market, panels: Sequence[tuple[str, PseudoMatching]], path: Path) -> Path:
    """Side-by-side heatmaps of continuum matchings (rows firms, columns workers)."""
    plt = _pyplot()
    fig, axes = plt.subplots(1, len(panels), figsize=(3.2 * len(panels) + 0.8, 2.8), squeeze=False)
    labels = [market.firm_name(f) for f in list(market.firms) + [NULL]]
    for ax, (title, M) in zip(axes[0], panels):
        data = [[float(v) for v in M.share(f)] for f in list(market.firms) + [NULL]]
        ax.imshow(data, vmin=0, vmax=1, cmap="Blues", aspect="auto")
        for i, f in enumerate(list(market.firms) + [NULL]):
            for w, v in enumerate(M.share(f)):
                ax.text(w, i, fmt_rational(v), ha="center", va="center",
                        color="white" if v > 0.6 else "black", fontsize=9)
        ax.set_xticks(range(market.n_workers))
        ax.set_xticklabels(market.worker_names)
        ax.set_yticks(range(len(labels)))
        ax.set_yticklabels(labels)
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)
    return path


def plot_integer_matrix(matrix: Sequence[Sequence[int]], row_labels: Sequence[str],
                        col_labels: Sequence[str], title: str, path: Path) -> Path:
    plt = _pyplot()
    nr, nc = len(matrix), len(matrix[0]) if matrix else 0
    fig, ax = plt.subplots(figsize=(0.6 * nc + 1.8, 0.45 * nr + 1.2))
    ax.imshow(matrix if nc else [[0]], vmin=-1, vmax=1, cmap="coolwarm", aspect="auto")
    for i in range(nr):
        for j in range(nc):
            ax.text(j, i, str(matrix[i][j]), ha="center", va="center", fontsize=8)
    ax.set_xticks(range(nc))
    ax.set_xticklabels(col_labels, rotation=60, ha="right", fontsize=8)
    ax.set_yticks(range(nr))
    ax.set_yticklabels(row_labels, fontsize=8)
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)
    return path


def plot_tree(tree: TechnologyTree, worker_names: Sequence[str], path: Path) -> Path:
    """Layered drawing of a technology tree, root on top."""
    plt = _pyplot()
    children: dict[int, list[int]] = {v: [] for v in range(len(tree.vertices))}
    for a, b in tree.edges:
        children[a].append(b)
    pos: dict[int, tuple[float, float]] = {}
    next_x = [0.0]

    def place(v: int, depth: int) -> float:
        kids = sorted(children[v])
        if not kids:
            x = next_x[0]
            next_x[0] += 1.0
        else:
            xs = [place(c, depth + 1) for c in kids]
            x = sum(xs) / len(xs)
        pos[v] = (x, -depth)
        return x

    place(tree.root, 0)
    fig, ax = plt.subplots(figsize=(max(3.0, 1.8 * next_x[0]), 1.4 * (1 - min(y for _, y in pos.values())) + 0.6))
    for e, (a, b) in enumerate(tree.edges):
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.annotate("", xy=(x1, y1 + 0.15), xytext=(x0, y0 - 0.15),
                    arrowprops={"arrowstyle": "->", "lw": 1.2})
        gained = [worker_names[w] for w, x in enumerate(tree.edge_workers(e)) if x]
        ax.text((x0 + x1) / 2, (y0 + y1) / 2, "+" + ",".join(gained), fontsize=8, color="tab:red")
    for v, (x, y) in pos.items():
        ws = [worker_names[w] for w, x_ in enumerate(tree.vertices[v]) if x_]
        ax.text(x, y, f"{tree.vertex_names[v]}: {{{','.join(ws)}}}", ha="center", va="center",
                bbox={"boxstyle": "round", "fc": "white"}, fontsize=9)
    ax.set_xlim(-0.8, max(next_x[0] - 0.2, 0.8))
    ax.set_ylim(min(y for _, y in pos.values()) - 0.5, 0.5)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)
    return path


def write_solve_report(result: SolveResult, market: Market, out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    header = ["firm"] + list(market.worker_names)
    panels = []
    if result.seed is not None:
        written.append(write_csv(out / "seed.csv", header, continuum_rows(market, result.seed)))
        panels.append(("stable continuum seed", result.seed))
    if result.system is not None:
        sys_ = result.system
        labels = [m.label(market) for m in sys_.meta]
        row_labels = list(market.firm_names) + list(market.worker_names)
        rows = [[row_labels[i]] + sys_.b[i] for i in range(len(sys_.b))]
        rows.append(["z_hat"] + [fmt_rational(v) for v in sys_.z_hat])
        if result.vertex is not None:
            rows.append(["z"] + [fmt_rational(v) for v in result.vertex.z])
        written.append(write_csv(out / "system.csv", ["row"] + labels, rows))
        if sys_.k:
            written.append(plot_integer_matrix(sys_.b, row_labels, labels, "B", out / "system.png"))
    if result.integral_matching is not None:
        written.append(write_csv(out / "integral.csv", header, continuum_rows(market, result.integral_matching)))
        panels.append(("integral vertex", result.integral_matching))
    if result.matching is not None:
        rows = [[market.worker_names[w], market.firm_name(f)] for w, f in enumerate(result.matching.assignment)]
        written.append(write_csv(out / "matching.csv", ["worker", "firm"], rows))
    if panels:
        written.append(plot_matchings(market, panels, out / "matchings.png"))
    return written


def write_tree_report(tree: TechnologyTree, worker_names: Sequence[str], out: Path,
                      mats: Optional[NetworkMatrices], h: Sequence[Sequence[int]]) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    cols = [tree.vertex_names[a] + tree.vertex_names[b]
            for a, b in (mats.graph_edges if mats else _pairs(tree))]
    edge_labels = [tree.edge_name(e) for e in range(len(tree.edges))]
    written = [write_csv(out / "H.csv", ["edge"] + cols, [[edge_labels[i]] + list(h[i]) for i in range(len(h))])]
    if h:
        written.append(plot_integer_matrix(h, edge_labels, cols, "H", out / "H.png"))
    if mats is not None:
        written.append(write_csv(out / "H_workers.csv", ["worker"] + cols,
                                 [[worker_names[w]] + mats.h_workers[w] for w in range(tree.n_workers)]))
    written.append(plot_tree(tree, worker_names, out / "tree.png"))
    return written


def _pairs(tree: TechnologyTree):
    from .techtree import complete_graph_edges

    return complete_graph_edges(tree)
