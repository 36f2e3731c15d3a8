"""The drawer-painter game: states, legal moves, move application, terminals.

The drawer presents one vertex per move, declaring its adjacency to the
already presented vertices; the presented graph must stay an induced
subgraph of the agreed host graph.  The painter answers with a color from
1..k distinct from the colors of the new vertex's neighbors.  The painter
wins by coloring the entire host; the drawer wins the moment the pending
vertex has no legal color.

Whose turn it is derives from the presented state: a pending vertex means
the painter moves, otherwise the drawer does (or the game is over).
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Optional

from .graphs import (
    ColoredState,
    EmbeddingBudgetExceeded,
    Graph,
    canonical_key,
    embeds,
    iter_induced_embeddings,
    parse_graph,
    format_graph,
)

SUBSET_ENUMERATION_MAX = 20  # hard guard for the 2^presented fallback
_AUTO_CROSSOVER = 12  # below this, subset enumeration beats embedding projection


class IllegalPresentationError(ValueError):
    pass


class IllegalColorError(ValueError):
    def __init__(self, color: int, legal: list):
        super().__init__(f"color {color} is not legal here (legal: {legal})")
        self.color = color
        self.legal = legal


class GameStatus(enum.Enum):
    DRAWER_TO_MOVE = "ongoing-drawer-to-move"
    PAINTER_TO_MOVE = "ongoing-painter-to-move"
    PAINTER_WON = "painter-won"
    DRAWER_WON = "drawer-won"


@dataclass(frozen=True)
class GameConfig:
    """The agreed host graph and color budget."""

    host: Graph
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("color budget k must be at least 1")


@dataclass(frozen=True)
class GameState:
    """A game position: configuration plus the presented colored graph.

    The presented graph is abstract (its ids say nothing about host ids);
    legality means it admits an induced embedding into the host.
    """

    config: GameConfig
    presented: ColoredState

    def __post_init__(self):
        if self.presented.graph.vertex_count > self.config.host.vertex_count:
            raise ValueError("presented graph larger than host")
        for c in self.presented.colors:
            if c > self.config.k:
                raise ValueError(f"color {c} exceeds budget k={self.config.k}")

    @classmethod
    def initial(cls, config: GameConfig, presented: Optional[ColoredState] = None):
        return cls(config, presented if presented is not None else ColoredState.empty())

    def validate_embedding(self) -> None:
        """Check the (usually by-construction) invariant that presented embeds in host."""
        if not embeds(self.presented.graph, self.config.host):
            raise IllegalPresentationError("presented graph is not induced in the host")


def status(state: GameState) -> GameStatus:
    pres = state.presented
    if pres.pending is None:
        if pres.graph.vertex_count == state.config.host.vertex_count:
            return GameStatus.PAINTER_WON
        return GameStatus.DRAWER_TO_MOVE
    if painter_moves(state):
        return GameStatus.PAINTER_TO_MOVE
    return GameStatus.DRAWER_WON


def painter_moves(state: GameState) -> list:
    """Colors in 1..k absent from the pending vertex's colored neighbors."""
    pres = state.presented
    if pres.pending is None:
        raise IllegalPresentationError("no pending vertex: it is not the painter's turn")
    blocked = {
        pres.colors[u] for u in pres.graph.neighbors(pres.pending) if pres.colors[u]
    }
    return [c for c in range(1, state.config.k + 1) if c not in blocked]


def apply_color(state: GameState, color: int) -> GameState:
    legal = painter_moves(state)
    if color not in legal:
        raise IllegalColorError(color, legal)
    pres = state.presented
    vec = list(pres.colors)
    vec[pres.pending] = color
    return GameState(state.config, ColoredState(pres.graph, tuple(vec), None))


def present_vertex(
    state: GameState, neighborhood: Iterable[int], validate: bool = True
) -> GameState:
    """Drawer move: extend the presented graph by one pending vertex."""
    pres = state.presented
    if pres.pending is not None:
        raise IllegalPresentationError("pending vertex uncolored: not the drawer's turn")
    if pres.graph.vertex_count >= state.config.host.vertex_count:
        raise IllegalPresentationError("all host vertices already presented")
    new_graph = pres.graph.add_vertex(neighborhood)
    if validate and not embeds(new_graph, state.config.host):
        raise IllegalPresentationError(
            f"extension with neighborhood {sorted(set(neighborhood))} is not induced in the host"
        )
    return GameState(
        state.config,
        ColoredState(new_graph, pres.colors + (0,), new_graph.vertex_count - 1),
    )


def _dedup_by_key(states: list) -> list:
    by_key = {}
    for st in states:
        key = canonical_key(st.presented, "fixed")
        if key not in by_key:
            by_key[key] = st
    return [by_key[k] for k in sorted(by_key)]


def _moves_by_subsets(state: GameState) -> list:
    pres = state.presented
    p = pres.graph.vertex_count
    if p > SUBSET_ENUMERATION_MAX:
        raise IllegalPresentationError(
            f"subset enumeration guarded at {SUBSET_ENUMERATION_MAX} presented vertices"
        )
    out = []
    for mask in range(1 << p):
        nb = [u for u in range(p) if mask >> u & 1]
        new_graph = pres.graph.add_vertex(nb)
        if embeds(new_graph, state.config.host):
            out.append(
                GameState(
                    state.config, ColoredState(new_graph, pres.colors + (0,), p)
                )
            )
    return out


@functools.lru_cache(maxsize=1 << 14)
def _presented_neighborhoods(
    pres: ColoredState, host: Graph, node_budget: Optional[int]
) -> frozenset:
    """Candidate extension neighborhoods, projected from a streamed
    enumeration of the presented graph's embeddings into the host.

    Presented vertices with identical (color, neighborhood) signatures are
    interchangeable, so their relative host order is fixed during the
    enumeration; completeness of the move set is up to colored-state
    isomorphism, which the caller's canonical dedup restores.  Projecting
    inside the stream keeps memory at the (small) number of distinct
    neighborhoods even when the embedding count is astronomical.
    """
    labels = tuple(
        -1 if v == pres.pending else pres.colors[v]
        for v in range(pres.graph.vertex_count)
    )
    hadj = host.adjacency
    neighborhoods = set()
    try:
        for emb in iter_induced_embeddings(
            pres.graph,
            host,
            order_twins=True,
            twin_labels=labels,
            node_budget=node_budget,
        ):
            image = 0
            for w in emb.values():
                image |= 1 << w
            for w in range(host.vertex_count):
                if image >> w & 1:
                    continue
                neighborhoods.add(
                    frozenset(q for q, hv in emb.items() if hadj[hv] >> w & 1)
                )
    except EmbeddingBudgetExceeded:
        return None  # cached, so a hopeless state is only searched once
    return frozenset(neighborhoods)


def _moves_by_embeddings(state: GameState, node_budget: Optional[int]) -> list:
    pres = state.presented
    p = pres.graph.vertex_count
    neighborhoods = _presented_neighborhoods(pres, state.config.host, node_budget)
    if neighborhoods is None:
        raise EmbeddingBudgetExceeded(node_budget)
    out = []
    for nb in neighborhoods:
        new_graph = pres.graph.add_vertex(nb)
        out.append(
            GameState(state.config, ColoredState(new_graph, pres.colors + (0,), p))
        )
    return out


def drawer_moves(
    state: GameState, method: str = "auto", node_budget: Optional[int] = None
) -> list:
    """All legal one-vertex extensions, deduplicated up to isomorphism.

    No two returned states share a fixed-colors canonical key, and every
    legal extension is isomorphic to some returned state.  Returned states
    are sorted by canonical key for determinism.  ``node_budget`` bounds
    the embedding enumeration (EmbeddingBudgetExceeded propagates);
    completed enumerations are exact either way.
    """
    pres = state.presented
    if pres.pending is not None:
        raise IllegalPresentationError("pending vertex uncolored: not the drawer's turn")
    if pres.graph.vertex_count >= state.config.host.vertex_count:
        raise IllegalPresentationError("all host vertices already presented")
    if method == "auto":
        method = (
            "subsets" if pres.graph.vertex_count <= _AUTO_CROSSOVER else "embeddings"
        )
    if method == "subsets":
        moves = _moves_by_subsets(state)
    elif method == "embeddings":
        moves = _moves_by_embeddings(state, node_budget)
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    deduped = _dedup_by_key(moves)
    assert deduped, "drawer always has at least one legal extension"
    return deduped


# ---------------------------------------------------------------------------
# state text format: graph block, then "c <vertex> <color>" lines and an
# optional "pending <vertex>" line
# ---------------------------------------------------------------------------


def format_state(state: ColoredState) -> str:
    out = [format_graph(state.graph).rstrip("\n")]
    for v in range(state.graph.vertex_count):
        if state.colors[v]:
            out.append(f"c {v} {state.colors[v]}")
    if state.pending is not None:
        out.append(f"pending {state.pending}")
    return "\n".join(out) + "\n"


def _parse_state_parts(text: str):
    graph_lines = []
    colors = {}
    pending = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in ("p", "e"):
            graph_lines.append(line)
        elif parts[0] == "c":
            colors[int(parts[1])] = int(parts[2])
        elif parts[0] == "pending":
            pending = int(parts[1])
        else:
            raise ValueError(f"unknown record {parts[0]!r} in state text")
    return parse_graph("\n".join(graph_lines)), colors, pending


def parse_state(text: str) -> ColoredState:
    graph, colors, pending = _parse_state_parts(text)
    return ColoredState.from_mapping(graph, colors, pending)


def load_game(text: str, k: int) -> GameState:
    """Read a host graph with an optional pre-coloring over host vertex ids.

    The host may be partially colored; the colored vertices (plus an
    optional pending one) become the presented part, re-indexed to a dense
    abstract state (the painter never learns host ids anyway).
    """
    host, host_colors, host_pending = _parse_state_parts(text)
    chosen = [v for v in range(host.vertex_count) if host_colors.get(v)]
    if host_pending is not None:
        chosen.append(host_pending)
    sub = host.induced(chosen)
    colors = {i: host_colors[v] for i, v in enumerate(chosen) if host_colors.get(v)}
    pending = None
    if host_pending is not None:
        pending = chosen.index(host_pending)
    presented = ColoredState.from_mapping(sub, colors, pending)
    game = GameState(GameConfig(host, k), presented)
    game.validate_embedding()
    return game
