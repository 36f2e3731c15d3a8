"""Undirected simple graphs, induced-embedding search, and canonical forms.

Vertices are dense integer ids 0..n-1.  Everything here is an immutable
value: graphs and colored states can be shared freely across searches and
all operations are pure functions.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

CanonicalKey = bytes

PENDING_LABEL = -1  # refinement label of the one uncolored vertex


class EmbeddingBudgetExceeded(RuntimeError):
    """An embedding search ran past its node budget (distinct from 'no embedding')."""

    def __init__(self, budget: int):
        super().__init__(f"embedding search exceeded node budget of {budget}")
        self.budget = budget


class GraphFormatError(ValueError):
    pass


def _normalize_edges(edges: Iterable) -> frozenset:
    out = set()
    for e in edges:
        u, v = e
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        out.add((u, v) if u < v else (v, u))
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < v < self.vertex_count):
                raise ValueError(f"edge ({u},{v}) out of range or unnormalized")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable) -> "Graph":
        return cls(vertex_count, _normalize_edges(edges))

    @functools.cached_property
    def adjacency(self) -> tuple:
        """Bitmask adjacency rows; bit w of adjacency[v] set iff v~w."""
        adj = [0] * self.vertex_count
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @functools.cached_property
    def _key_bytes(self) -> bytes:
        return (str(self.vertex_count) + ";" + str(sorted(self.edges))).encode()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        m = self.adjacency[v]
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def add_vertex(self, neighborhood: Iterable[int]) -> "Graph":
        """New graph with one extra vertex adjacent to `neighborhood`."""
        p = self.vertex_count
        nb = set(neighborhood)
        if any(not 0 <= u < p for u in nb):
            raise ValueError("neighborhood mentions unknown vertices")
        return Graph(p + 1, self.edges | frozenset((u, p) for u in nb))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image under the permutation v -> perm[v]."""
        return Graph.from_edges(
            self.vertex_count, ((perm[u], perm[v]) for u, v in self.edges)
        )

    def induced(self, vertices: Sequence[int]) -> "Graph":
        idx = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            ((idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx),
        )


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


@dataclass(frozen=True)
class ColoredState:
    """A presented graph with a proper partial coloring.

    ``colors[v]`` is a positive color id, or 0 exactly when ``v`` is the
    pending (presented but not yet colored) vertex.  At most one vertex may
    be pending.
    """

    graph: Graph
    colors: tuple
    pending: Optional[int] = None

    def __post_init__(self):
        n = self.graph.vertex_count
        if len(self.colors) != n:
            raise ValueError("colors must cover every vertex")
        uncolored = [v for v in range(n) if self.colors[v] == 0]
        if self.pending is None:
            if uncolored:
                raise ValueError(f"vertices {uncolored} lack colors but none is pending")
        else:
            if uncolored != [self.pending]:
                raise ValueError("exactly the pending vertex must be uncolored")
        for u, v in self.graph.edges:
            if self.colors[u] and self.colors[u] == self.colors[v]:
                raise ValueError(f"adjacent vertices {u},{v} share color {self.colors[u]}")

    @classmethod
    def from_mapping(
        cls, graph: Graph, colors: Mapping[int, int], pending: Optional[int] = None
    ) -> "ColoredState":
        vec = [0] * graph.vertex_count
        for v, c in colors.items():
            if c <= 0:
                raise ValueError("color ids are positive")
            vec[v] = c
        return cls(graph, tuple(vec), pending)

    @classmethod
    def empty(cls) -> "ColoredState":
        return cls(empty_graph(0), ())

    @property
    def color_map(self) -> dict:
        return {v: c for v, c in enumerate(self.colors) if c}

    def color_of(self, v: int) -> Optional[int]:
        return self.colors[v] or None

    def relabel(self, perm: Sequence[int]) -> "ColoredState":
        n = self.graph.vertex_count
        vec = [0] * n
        for v in range(n):
            vec[perm[v]] = self.colors[v]
        pend = None if self.pending is None else perm[self.pending]
        return ColoredState(self.graph.relabel(perm), tuple(vec), pend)

    def recolor(self, bijection: Mapping[int, int]) -> "ColoredState":
        vec = tuple(bijection[c] if c else 0 for c in self.colors)
        return ColoredState(self.graph, vec, self.pending)


# ---------------------------------------------------------------------------
# graph text format: "p <n> <m>" then "e <u> <v>" lines, '#' comments
# ---------------------------------------------------------------------------


def format_graph(g: Graph) -> str:
    lines = [f"p {g.vertex_count} {len(g.edges)}"]
    lines.extend(f"e {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = None
    m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate p line")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'p <n> <m>'")
            n, m = int(parts[1]), int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before p line")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'e <u> <v>'")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing p line")
    g = Graph.from_edges(n, edges)
    if m is not None and len(g.edges) != m:
        raise GraphFormatError(f"p line declares {m} edges, found {len(g.edges)}")
    return g


# ---------------------------------------------------------------------------
# induced embedding search
# ---------------------------------------------------------------------------


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _twin_classes(g: Graph, skip: set, labels: Optional[Sequence]) -> list:
    """Maximal groups of interchangeable vertices (false or true twins).

    Two vertices are interchangeable when swapping them is an automorphism
    that also preserves the caller-supplied labels.  Pinned vertices are
    never grouped.
    """
    adj = g.adjacency
    lab = labels if labels is not None else [0] * g.vertex_count
    false_groups: dict = {}
    true_groups: dict = {}
    for v in range(g.vertex_count):
        if v in skip:
            continue
        false_groups.setdefault((lab[v], adj[v]), []).append(v)
        true_groups.setdefault((lab[v], adj[v] | (1 << v)), []).append(v)
    classes = []
    grouped: set = set()
    for group in false_groups.values():
        if len(group) > 1:
            classes.append(group)
            grouped.update(group)
    for group in true_groups.values():
        members = [v for v in group if v not in grouped]
        if len(members) > 1:
            classes.append(members)
            grouped.update(members)
    return classes


def induced_embeddings(
    pattern: Graph,
    host: Graph,
    pins: Optional[Mapping[int, int]] = None,
    limit: Optional[int] = None,
    *,
    order_twins: bool = False,
    twin_labels: Optional[Sequence] = None,
    node_budget: Optional[int] = None,
) -> list:
    """All injective maps g with (v,w) in E(pattern) iff (g(v),g(w)) in E(host).

    ``pins`` fixes images of some pattern vertices.  With ``order_twins``,
    interchangeable pattern vertices (twins with equal ``twin_labels``) are
    forced into ascending host order; this preserves existence/emptiness but
    returns one representative per twin orbit, so leave it off when the full
    enumeration matters.

    Backtracking runs most-constrained-vertex-first with degree and
    adjacency pruning.  Raises :class:`EmbeddingBudgetExceeded` if
    ``node_budget`` search nodes are expanded.
    """
    out = []
    for emb in iter_induced_embeddings(
        pattern,
        host,
        pins,
        order_twins=order_twins,
        twin_labels=twin_labels,
        node_budget=node_budget,
    ):
        out.append(emb)
        if limit is not None and len(out) >= limit:
            break
    return out


def iter_induced_embeddings(
    pattern: Graph,
    host: Graph,
    pins: Optional[Mapping[int, int]] = None,
    *,
    order_twins: bool = False,
    twin_labels: Optional[Sequence] = None,
    node_budget: Optional[int] = None,
):
    """Generator form of :func:`induced_embeddings` (same search, streamed).

    Useful when the full enumeration is too large to materialize but each
    embedding only feeds an incremental projection.
    """
    np_ = pattern.vertex_count
    nh = host.vertex_count
    if np_ == 0:
        yield {}
        return
    if np_ > nh:
        return
    padj = pattern.adjacency
    hadj = host.adjacency
    slack = nh - np_
    full = (1 << nh) - 1

    cand = []
    for v in range(np_):
        dv = padj[v].bit_count()
        m = 0
        for w in range(nh):
            dw = hadj[w].bit_count()
            if dv <= dw <= dv + slack:
                m |= 1 << w
        cand.append(m)

    pins = dict(pins or {})
    pinned_hosts = list(pins.values())
    if len(set(pinned_hosts)) != len(pinned_hosts):
        raise ValueError("pins must be injective")
    for v, w in pins.items():
        if not (0 <= v < np_ and 0 <= w < nh):
            raise ValueError(f"pin {v}->{w} out of range")
        cand[v] &= 1 << w
    for v1, w1 in pins.items():
        for v2, w2 in pins.items():
            if v1 < v2 and pattern.has_edge(v1, v2) != host.has_edge(w1, w2):
                return

    # propagate pin adjacency into the other candidate sets
    for v, w in pins.items():
        for u in range(np_):
            if u == v:
                continue
            if pattern.has_edge(u, v):
                cand[u] &= hadj[w]
            else:
                cand[u] &= full & ~hadj[w] & ~(1 << w)

    twin_of: dict = {}
    if order_twins:
        for cls in _twin_classes(pattern, set(pins), twin_labels):
            for i, v in enumerate(cls):
                twin_of[v] = (id(cls), cls, i)

    assigned: dict = dict(pins)
    used = 0
    for w in pins.values():
        used |= 1 << w
    nodes = 0

    def choose() -> int:
        best_v, best_n = -1, nh + 1
        for v in range(np_):
            if v in assigned:
                continue
            cnt = (cand[v] & ~used).bit_count()
            if cnt < best_n:
                best_v, best_n = v, cnt
                if cnt == 0:
                    break
        return best_v

    def starved() -> bool:
        # Hall-style pigeonhole: joint candidates of same-mask groups (and
        # their popcount-ascending unions) must cover the group sizes.
        # Without this, proving emptiness over a class of interchangeable
        # vertices walks every ascending prefix before giving up.
        groups: dict = {}
        for u in range(np_):
            if u not in assigned:
                m = cand[u] & ~used
                if not m:
                    return True
                groups[m] = groups.get(m, 0) + 1
        union = 0
        total = 0
        for m in sorted(groups, key=int.bit_count):
            union |= m
            total += groups[m]
            if union.bit_count() < total:
                return True
        return False

    def extend():
        nonlocal used, nodes
        if len(assigned) == np_:
            yield dict(assigned)
            return
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise EmbeddingBudgetExceeded(node_budget)
        v = choose()
        avail = cand[v] & ~used
        need_below = need_above = 0
        if v in twin_of:
            # images within a twin class ascend; clip to the window between
            # the nearest assigned classmates and count the unassigned ones
            # sharing that window (they need distinct images beside w)
            _, cls, i = twin_of[v]
            lo, hi = -1, nh
            for j in range(i - 1, -1, -1):
                u = cls[j]
                if u in assigned:
                    lo = assigned[u]
                    break
                need_below += 1
            for j in range(i + 1, len(cls)):
                u = cls[j]
                if u in assigned:
                    hi = assigned[u]
                    break
                need_above += 1
            if lo >= 0:
                avail &= full << (lo + 1)
            if hi < nh:
                avail &= (1 << hi) - 1
        saved = []
        for w in _bits(avail):
            if need_below or need_above:
                # unassigned classmates must fit strictly below/above w
                if (avail & ((1 << w) - 1)).bit_count() < need_below:
                    continue
                if (avail >> (w + 1)).bit_count() < need_above:
                    break
            assigned[v] = w
            used |= 1 << w
            saved.clear()
            feasible = True
            hw = hadj[w]
            for u in range(np_):
                if u in assigned or u == v:
                    continue
                old = cand[u]
                new = old & hw if padj[v] >> u & 1 else old & ~hw & ~(1 << w) & full
                if new != old:
                    saved.append((u, old))
                    cand[u] = new
                    if not new & ~used:
                        feasible = False
            if feasible and not starved():
                yield from extend()
            for u, old in saved:
                cand[u] = old
            del assigned[v]
            used &= ~(1 << w)

    if not starved():
        yield from extend()


@functools.lru_cache(maxsize=1 << 16)
def _embeds_cached(pattern: Graph, host: Graph) -> bool:
    return bool(
        induced_embeddings(pattern, host, limit=1, order_twins=True)
    )


def embeds(pattern: Graph, host: Graph) -> bool:
    """True iff the pattern admits at least one induced embedding into the host."""
    return _embeds_cached(pattern, host)


# ---------------------------------------------------------------------------
# canonical forms of colored states
# ---------------------------------------------------------------------------


def _mask_of(cell) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _refine(cells: list, adj: tuple, splitters: Optional[list] = None) -> list:
    """Refine an ordered partition to equitability (1-WL on cells).

    Worklist refinement: every fragment produced by a split becomes a
    splitter.  When the input is already equitable except for freshly split
    cells, pass just those fragments as ``splitters`` to refine
    incrementally.  Cell order stays deterministic and isomorphism-invariant
    (fragments replace their parent ordered by neighbor count).
    """
    cells = list(cells)
    active = [c for c in cells if len(c) > 1]
    queue = deque(
        _mask_of(c) for c in (cells if splitters is None else splitters)
    )
    while queue and active:
        splitter = queue.popleft()
        still_active = []
        for cell in active:
            groups: dict = {}
            for v in cell:
                groups.setdefault((adj[v] & splitter).bit_count(), []).append(v)
            if len(groups) == 1:
                still_active.append(cell)
                continue
            frags = [groups[count] for count in sorted(groups)]
            pos = cells.index(cell)
            cells[pos : pos + 1] = frags
            queue.extend(_mask_of(f) for f in frags)
            still_active.extend(f for f in frags if len(f) > 1)
        active = still_active
    return cells


def _encode(order: list, labels: tuple, colors: tuple, pending, adj, permutable: bool):
    n = len(order)
    lab_row = tuple(labels[v] for v in order)
    if permutable:
        seen: dict = {}
        pat = []
        for i, v in enumerate(order):
            if v == pending:
                pat.append(-1)
            else:
                c = colors[v]
                if c in seen:
                    pat.append(seen[c] + 1)
                else:
                    seen[c] = i
                    pat.append(0)
        color_row = tuple(pat)
    else:
        color_row = tuple(-1 if v == pending else colors[v] for v in order)
    bits = 0
    k = 0
    for i in range(n):
        ai = adj[order[i]]
        for j in range(i + 1, n):
            if ai >> order[j] & 1:
                bits |= 1 << k
            k += 1
    return (n, lab_row, color_row, bits)


def canonical_graph_key(g: Graph) -> CanonicalKey:
    """Canonical byte key of a bare graph (isomorphism-invariant)."""
    n = g.vertex_count
    if n == 0:
        return b"empty"
    return _canonical_search(g, tuple([0] * n), tuple([0] * n), None, False)


@functools.lru_cache(maxsize=1 << 16)
def canonical_key(state: ColoredState, mode: str = "fixed") -> CanonicalKey:
    """Canonical byte key of a colored state.

    ``fixed`` mode: invariant under vertex relabeling.  ``permutable`` mode:
    additionally invariant under any bijective renaming of the color ids
    (the pending marker never participates).  Distinct non-isomorphic states
    get distinct keys.
    """
    if mode not in ("fixed", "permutable"):
        raise ValueError(f"unknown mode {mode!r}")
    g = state.graph
    n = g.vertex_count
    if n == 0:
        return b"empty"
    adj = g.adjacency
    colors = state.colors
    pending = state.pending
    permutable = mode == "permutable"

    if permutable:
        by_color: dict = {}
        for v in range(n):
            if v != pending:
                by_color.setdefault(colors[v], []).append(v)
        sig = {
            c: (len(vs), tuple(sorted(adj[v].bit_count() for v in vs)))
            for c, vs in by_color.items()
        }
        ranks = {s: r for r, s in enumerate(sorted(set(sig.values())))}
        labels = tuple(
            PENDING_LABEL if v == pending else ranks[sig[colors[v]]] for v in range(n)
        )
    else:
        labels = tuple(
            PENDING_LABEL if v == pending else colors[v] for v in range(n)
        )
    return _canonical_search(g, labels, colors, pending, permutable)


def _canonical_search(
    g: Graph, labels: tuple, colors: tuple, pending, permutable: bool
) -> CanonicalKey:
    n = g.vertex_count
    adj = g.adjacency
    initial: dict = {}
    for v in range(n):
        initial.setdefault(labels[v], []).append(v)
    cells = [initial[lab] for lab in sorted(initial)]

    best = None

    def search(cells, splitters):
        nonlocal best
        cells = _refine(cells, adj, splitters)
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                target = idx
                break
        if target is None:
            order = [cell[0] for cell in cells]
            enc = _encode(order, labels, colors, pending, adj, permutable)
            if best is None or enc < best:
                best = enc
            return
        cell = cells[target]
        # interchangeable candidates (equal label+color twins) branch once
        seen_false: set = set()
        seen_true: set = set()
        for v in cell:
            fk = (labels[v], colors[v], adj[v])
            tk = (labels[v], colors[v], adj[v] | (1 << v))
            if fk in seen_false or tk in seen_true:
                continue
            seen_false.add(fk)
            seen_true.add(tk)
            rest = [u for u in cell if u != v]
            search(
                cells[:target] + [[v], rest] + cells[target + 1 :],
                [[v], rest],
            )

    search(cells, None)
    return repr(best).encode()
