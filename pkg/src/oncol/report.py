"""Report rendering: key/value text, delimited tables, and figures.

The verification and cross-check commands can write their reports to a
directory: a ``report.txt`` with the line-oriented key/value output, a
tab-separated table of per-depth (or per-graph) statistics, and a PNG
figure rendering the same numbers.  The compile command can render the
constructed instance as a figure grouped by vertex role.
"""

from __future__ import annotations

import os

_ROLE_COLUMNS = ["a", "b", "x", "h", "t", "m", "c"]


def _agg():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_report_text(lines, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_dominance_table(report, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("depth\tbranches\n")
        for depth in sorted(report.branch_counts):
            fh.write(f"{depth}\t{report.branch_counts[depth]}\n")


def render_dominance_figure(report, path: str) -> None:
    plt = _agg()
    depths = sorted(report.branch_counts)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(depths, [report.branch_counts[d] for d in depths], color="#4477aa")
    ax.set_xlabel("half-move depth")
    ax.set_ylabel("branches explored")
    side = "drawer script vs all painters" if report.side == "drawer" else \
        "painter script vs all drawers"
    ax.set_title(
        f"{side}: {report.verdict} ({report.lines} lines, {report.elapsed:.1f}s)"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def write_cross_check_table(report, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("vertices\tedges\tk\tsolve\tnaive\tchi\tchi_online\n")
        for r in report.rows:
            edges = ",".join(f"{u}-{v}" for u, v in r.edges)
            fh.write(
                f"{r.vertices}\t{edges}\t{r.k}\t{r.solve_winner}\t{r.naive_winner}"
                f"\t{r.chi}\t{r.chi_online}\n"
            )


def render_cross_check_figure(report, path: str) -> None:
    plt = _agg()
    pairs = {}
    for r in report.rows:
        pairs[(r.vertices, r.edges)] = (r.chi, r.chi_online)
    counts = {}
    for chi, chi_o in pairs.values():
        counts[(chi, chi_o)] = counts.get((chi, chi_o), 0) + 1
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [c for c, _ in counts]
    ys = [o for _, o in counts]
    sizes = [40 * counts[k] for k in counts]
    ax.scatter(xs, ys, s=sizes, color="#cc6677", alpha=0.8)
    for (chi, chi_o), n in counts.items():
        ax.annotate(str(n), (chi, chi_o), ha="center", va="center", fontsize=8)
    lim = max(max(xs, default=1), max(ys, default=1)) + 1
    ax.plot([0, lim], [0, lim], ls=":", c="gray", lw=1)
    ax.set_xlabel("off-line chromatic number")
    ax.set_ylabel("on-line chromatic number")
    ax.set_title("graphs per (chi, chi-online) cell")
    ax.set_xticks(range(1, lim))
    ax.set_yticks(range(1, lim))
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_instance_figure(inst, path: str) -> None:
    """The compiled host graph laid out by role columns, colored by pre-color."""
    plt = _agg()
    columns = {kind: [] for kind in _ROLE_COLUMNS}
    for v, role in enumerate(inst.roles):
        columns[role.kind].append(v)
    pos = {}
    for ci, kind in enumerate(_ROLE_COLUMNS):
        members = columns[kind]
        for i, v in enumerate(members):
            y = (i - (len(members) - 1) / 2) * (1.0 if kind != "b" else 0.45)
            pos[v] = (2.2 * ci, y)
    pres = inst.initial.presented
    precolor = {}
    for i in range(1, inst.k - 2):
        precolor[inst.a(i)] = i + 3
    for i in range(1, 10 * inst.n + 3 * inst.t + 1):
        precolor[inst.b(i)] = 3
    precolor[inst.c] = 1
    precolor[inst.m] = 1
    cmap = ["#dddddd", "#44aa99", "#cc6677", "#ddcc77", "#88ccee", "#aa4499",
            "#882255", "#117733", "#999933", "#332288", "#661100", "#6699cc"]
    fig, ax = plt.subplots(figsize=(11, 7))
    for u, v in inst.host.edges:
        (x1, y1), (x2, y2) = pos[u], pos[v]
        ax.plot([x1, x2], [y1, y2], lw=0.2, c="#777777", alpha=0.25, zorder=1)
    xs = [pos[v][0] for v in range(inst.host.vertex_count)]
    ys = [pos[v][1] for v in range(inst.host.vertex_count)]
    colors = [
        cmap[precolor.get(v, 0) % len(cmap)] for v in range(inst.host.vertex_count)
    ]
    ax.scatter(xs, ys, c=colors, s=60, zorder=2, edgecolors="black", linewidths=0.4)
    for ci, kind in enumerate(_ROLE_COLUMNS):
        ax.text(
            2.2 * ci,
            max(ys) + 1.2,
            kind.upper(),
            ha="center",
            fontsize=12,
            fontweight="bold",
        )
    ax.set_axis_off()
    ax.set_title(
        f"compiled instance: n={inst.n}, t={inst.t}, k={inst.k},"
        f" |V|={inst.host.vertex_count} (pre-colored: A, B, m, c)"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def emit_dominance_report(report, out_dir: str) -> list:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    text = os.path.join(out_dir, "report.txt")
    write_report_text(report.to_lines(), text)
    paths.append(text)
    table = os.path.join(out_dir, "branches.tsv")
    write_dominance_table(report, table)
    paths.append(table)
    figure = os.path.join(out_dir, "branches.png")
    render_dominance_figure(report, figure)
    paths.append(figure)
    return paths


def emit_cross_check_report(report, out_dir: str) -> list:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    text = os.path.join(out_dir, "report.txt")
    write_report_text(report.to_lines(), text)
    paths.append(text)
    table = os.path.join(out_dir, "results.tsv")
    write_cross_check_table(report, table)
    paths.append(table)
    figure = os.path.join(out_dir, "chromatic.png")
    render_cross_check_figure(report, figure)
    paths.append(figure)
    return paths
