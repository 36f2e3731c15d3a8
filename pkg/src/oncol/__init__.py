"""Exact workbench for the drawer-painter on-line graph coloring game.

A library plus CLI and HTTP service for:

* solving game states exactly (who wins from a pre-colored position),
* computing on-line chromatic numbers of small graphs,
* compiling quantified 3DNF formulas into hard pre-colored game states,
* verifying the scripted adversary strategies by one-sided exhaustion,
* playing either side interactively against the engine.
"""

from .graphs import (
    CanonicalKey,
    ColoredState,
    EmbeddingBudgetExceeded,
    Graph,
    canonical_key,
    embeds,
    induced_embeddings,
    parse_graph,
    format_graph,
)
from .engine import (
    GameConfig,
    GameState,
    GameStatus,
    IllegalColorError,
    IllegalPresentationError,
    apply_color,
    drawer_moves,
    painter_moves,
    present_vertex,
    status,
)
from .search import (
    ResourceLimitError,
    SolveResult,
    Solver,
    best_move,
    chromatic_number,
    online_chromatic_number,
    solve,
    solve_naive,
)
from . import qbf
from .reduction import (
    ReductionInstance,
    Role,
    build,
    classify_by_b_degree,
    expected_counts,
    verify_embedding_rigidity,
)
from .strategies import DrawerScript, PainterScript, NoLegalColor, ScriptInconsistency
from .harness import (
    BudgetExhausted,
    DominanceReport,
    PreconditionError,
    cross_check_solvers,
    verify_drawer_dominates,
    verify_painter_dominates,
    verify_painter_with_fallback,
)

__version__ = "0.1.0"
