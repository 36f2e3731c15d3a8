"""Exact game solvers and on-line chromatic numbers.

``solve`` runs a memoized post-order search of the game tree: at a drawer
node the drawer wins iff some extension leads to a drawer win, at a painter
node the painter wins iff some legal color leads to a painter win.  The
memo keys on the permutable-colors canonical form of the presented state:
legality and the winning condition depend only on the color-equality
pattern, never on color identity, so bijectively recoloring a whole state
(pre-coloring included) yields a strategically identical game.

``solve_naive`` is the deliberately dumb reference: no memo, no isomorphism
dedup, drawer moves enumerated as raw neighborhood subsets filtered by
embeddability.  It exists to cross-check ``solve`` on small hosts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .graphs import ColoredState, Graph, canonical_key, embeds
from .engine import (
    GameConfig,
    GameState,
    GameStatus,
    apply_color,
    drawer_moves,
    painter_moves,
    status,
)

NAIVE_MAX_VERTICES = 7
DEFAULT_NODE_BUDGET = 50_000_000
DEFAULT_MEMO_LIMIT = 2_000_000

PAINTER = "painter"
DRAWER = "drawer"

Move = Union[GameState, int]  # drawer successor state, or painter color


class ResourceLimitError(RuntimeError):
    def __init__(self, budget: int, kind: str = "node"):
        super().__init__(f"solver exceeded its {kind} budget of {budget}")
        self.budget = budget
        self.kind = kind


class SizeGuardError(ValueError):
    pass


@dataclass
class SolveResult:
    winner: str
    principal_move: Optional[Move]
    nodes: int
    memo_hits: int


@dataclass
class Solver:
    """Memoized exact solver bound to one game configuration.

    The memo is per-instance; concurrent solves on distinct Solver objects
    are independent, and a shared instance only ever inserts a key once.
    """

    config: GameConfig
    node_budget: int = DEFAULT_NODE_BUDGET
    memo_limit: int = DEFAULT_MEMO_LIMIT
    _memo: dict = field(default_factory=dict, repr=False)
    nodes: int = 0
    memo_hits: int = 0

    def painter_wins(self, state: GameState) -> bool:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise ResourceLimitError(self.node_budget)
        st = status(state)
        if st is GameStatus.PAINTER_WON:
            return True
        if st is GameStatus.DRAWER_WON:
            return False
        key = canonical_key(state.presented, "permutable")
        cached = self._memo.get(key)
        if cached is not None:
            self.memo_hits += 1
            return cached
        if st is GameStatus.DRAWER_TO_MOVE:
            result = all(self.painter_wins(ch) for ch in drawer_moves(state))
        else:
            result = any(
                self.painter_wins(apply_color(state, c)) for c in painter_moves(state)
            )
        if len(self._memo) < self.memo_limit and key not in self._memo:
            self._memo[key] = result
        return result

    def solve(self, state: GameState) -> SolveResult:
        n0, h0 = self.nodes, self.memo_hits
        painter = self.painter_wins(state)
        winner = PAINTER if painter else DRAWER
        move = self._principal_move(state, winner)
        return SolveResult(winner, move, self.nodes - n0, self.memo_hits - h0)

    def _principal_move(self, state: GameState, winner: str) -> Optional[Move]:
        st = status(state)
        if st in (GameStatus.PAINTER_WON, GameStatus.DRAWER_WON):
            return None
        if st is GameStatus.DRAWER_TO_MOVE:
            if winner != DRAWER:
                return None
            # drawer_moves is sorted by canonical key: first win is the tie-break
            for ch in drawer_moves(state):
                if not self.painter_wins(ch):
                    return ch
        else:
            if winner != PAINTER:
                return None
            for c in painter_moves(state):
                if self.painter_wins(apply_color(state, c)):
                    return c
        return None


def solve(state: GameState, node_budget: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    return Solver(state.config, node_budget=node_budget).solve(state)


def _naive_extensions(state: GameState) -> list:
    pres = state.presented
    p = pres.graph.vertex_count
    out = []
    for mask in range(1 << p):
        nb = [u for u in range(p) if mask >> u & 1]
        new_graph = pres.graph.add_vertex(nb)
        if embeds(new_graph, state.config.host):
            out.append(
                GameState(state.config, ColoredState(new_graph, pres.colors + (0,), p))
            )
    return out


def solve_naive(state: GameState) -> SolveResult:
    """Reference solver: raw subset enumeration, no memo, no dedup."""
    host_n = state.config.host.vertex_count
    if host_n > NAIVE_MAX_VERTICES:
        raise SizeGuardError(
            f"naive solver guarded at {NAIVE_MAX_VERTICES} host vertices (got {host_n})"
        )
    nodes = 0

    def painter_wins(st: GameState) -> bool:
        nonlocal nodes
        nodes += 1
        s = status(st)
        if s is GameStatus.PAINTER_WON:
            return True
        if s is GameStatus.DRAWER_WON:
            return False
        if s is GameStatus.DRAWER_TO_MOVE:
            return all(painter_wins(ch) for ch in _naive_extensions(st))
        return any(painter_wins(apply_color(st, c)) for c in painter_moves(st))

    painter = painter_wins(state)
    winner = PAINTER if painter else DRAWER
    move: Optional[Move] = None
    s = status(state)
    if s is GameStatus.DRAWER_TO_MOVE and winner == DRAWER:
        move = next(ch for ch in _naive_extensions(state) if not painter_wins(ch))
    elif s is GameStatus.PAINTER_TO_MOVE and winner == PAINTER:
        move = next(
            c for c in painter_moves(state) if painter_wins(apply_color(state, c))
        )
    return SolveResult(winner, move, nodes, 0)


def greedy_clique_lower_bound(g: Graph) -> int:
    """Size of a greedily grown clique; a cheap lower bound on chi."""
    if g.vertex_count == 0:
        return 0
    order = sorted(range(g.vertex_count), key=g.degree, reverse=True)
    best = 1
    for v in order:
        clique = [v]
        for u in order:
            if u != v and all(g.has_edge(u, w) for w in clique):
                clique.append(u)
        best = max(best, len(clique))
    return best


def chromatic_number(g: Graph) -> int:
    """Off-line chromatic number by brute-force backtracking."""
    n = g.vertex_count
    if n == 0:
        return 0
    adj = g.adjacency

    def colorable(k: int) -> bool:
        colors = [0] * n

        def go(v: int) -> bool:
            if v == n:
                return True
            used = {colors[u] for u in range(v) if adj[v] >> u & 1}
            seen_fresh = False
            for c in range(1, k + 1):
                if c in used:
                    continue
                if c > max(colors[:v], default=0) + 1:
                    break  # all fresh colors are symmetric
                if c > max(colors[:v], default=0):
                    if seen_fresh:
                        break
                    seen_fresh = True
                colors[v] = c
                if go(v + 1):
                    return True
            colors[v] = 0
            return False

        return go(0)

    k = greedy_clique_lower_bound(g)
    while not colorable(k):
        k += 1
    return k


def online_chromatic_number(
    host: Graph, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """Least k such that the painter wins on the host from the empty state.

    Ascends k from a greedy clique lower bound; monotonicity in k (a painter
    win stays a win with an extra color) makes the first win the answer.
    """
    if host.vertex_count == 0:
        raise ValueError("host must be non-empty")
    k = max(1, greedy_clique_lower_bound(host))
    while True:
        result = solve(GameState.initial(GameConfig(host, k)), node_budget=node_budget)
        if result.winner == PAINTER:
            return k
        k += 1
        assert k <= host.vertex_count, "painter must win once k reaches |V|"


def best_move(state: GameState, for_role: str) -> Move:
    """A winning move when one exists, else the move that resists longest.

    The tie-break mirrors solve(): lowest canonical successor key for the
    drawer, lowest color id for the painter.  The losing-side heuristic
    maximizes the number of half-moves the opponent needs under optimal
    play to force the win.
    """
    st = status(state)
    if for_role == DRAWER and st is not GameStatus.DRAWER_TO_MOVE:
        raise ValueError("not the drawer's turn")
    if for_role == PAINTER and st is not GameStatus.PAINTER_TO_MOVE:
        raise ValueError("not the painter's turn")
    solver = Solver(state.config)

    if for_role == DRAWER:
        children = [(ch, ch) for ch in drawer_moves(state)]
        wins = lambda ch: not solver.painter_wins(ch)
    else:
        children = [(c, apply_color(state, c)) for c in painter_moves(state)]
        wins = lambda ch: solver.painter_wins(ch)

    for move, ch in children:
        if wins(ch):
            return move

    # losing: maximize the opponent's forced distance to the win
    depth_memo: dict = {}

    def distance(st_: GameState) -> int:
        s = status(st_)
        if s in (GameStatus.PAINTER_WON, GameStatus.DRAWER_WON):
            return 0
        key = canonical_key(st_.presented, "permutable")
        if key in depth_memo:
            return depth_memo[key]
        if s is GameStatus.DRAWER_TO_MOVE:
            kids = drawer_moves(st_)
            winner_here = DRAWER
            kid_states = kids
        else:
            kid_states = [apply_color(st_, c) for c in painter_moves(st_)]
            winner_here = PAINTER
        overall = PAINTER if solver.painter_wins(st_) else DRAWER
        if overall == winner_here:
            d = 1 + min(
                distance(ch)
                for ch in kid_states
                if (solver.painter_wins(ch)) == (overall == PAINTER)
            )
        else:
            d = 1 + max(distance(ch) for ch in kid_states)
        depth_memo[key] = d
        return d

    best = max(children, key=lambda pair: distance(pair[1]))
    return best[0]
