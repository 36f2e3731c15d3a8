"""HTTP play service: sessions where a human plays either side vs the engine.

The wire format is JSON mirroring the game-engine text format fields:
vertices, edges, colors, pending, status, and the legal moves for the side
to move.  All game legality decisions happen here (the browser client only
renders); the engine opponent's replies are validated against the engine's
own move lists before they are applied.
"""

from __future__ import annotations

import random
import threading
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .engine import (
    GameConfig,
    GameState,
    GameStatus,
    IllegalColorError,
    IllegalPresentationError,
    apply_color,
    drawer_moves,
    painter_moves,
    parse_graph,
    present_vertex,
    status,
)
from .graphs import EmbeddingBudgetExceeded
from .qbf import normalize, parse as parse_formula
from .reduction import ReductionInstance, build, classify_by_b_degree
from .search import best_move
from .strategies import DrawerScript, NoLegalColor, PainterScript

SOLVER_MAX_HOST_VERTICES = 12  # beyond this, exact hints are refused
SESSION_CAP = 64
# bound on the move-enumeration search when listing a drawer's options;
# past it the payload simply omits the list (moves stay validated one by one)
ENUMERATION_BUDGET = 300_000

PAINTER = "painter"
DRAWER = "drawer"


class CreateSessionRequest(BaseModel):
    graph: Optional[str] = None  # graph text format
    formula: Optional[str] = None  # compile a game instance from this formula
    k: Optional[int] = None  # required with graph; derived for formulas
    human_role: str = PAINTER
    opponent: str = "solver"  # solver | script | random
    seed: Optional[int] = None


class MoveRequest(BaseModel):
    color: Optional[int] = None  # painter move
    neighborhood: Optional[list] = None  # drawer move


@dataclass
class Session:
    """One game in progress.  ``engine_script`` drives a scripted opponent;
    ``hint_script`` shadows the human side on compiled instances and is
    dropped the first time the human deviates from it (hints then 409)."""

    id: str
    state: GameState
    human_role: str
    opponent: str
    rng: random.Random
    inst: Optional[ReductionInstance] = None
    engine_script: object = None
    hint_script: object = None
    move_log: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    def __init__(self, cap: int = SESSION_CAP):
        self.cap = cap
        self._sessions: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def put(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
            self._sessions.move_to_end(session.id)
            while len(self._sessions) > self.cap:
                self._sessions.popitem(last=False)

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail="unknown session")
            self._sessions.move_to_end(session_id)
            return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            del self._sessions[session_id]


def _engine_role(session: Session) -> str:
    return DRAWER if session.human_role == PAINTER else PAINTER


def _role_to_move(state: GameState) -> Optional[str]:
    st = status(state)
    if st is GameStatus.DRAWER_TO_MOVE:
        return DRAWER
    if st is GameStatus.PAINTER_TO_MOVE:
        return PAINTER
    return None


def _legal_moves_payload(state: GameState) -> Optional[dict]:
    st = status(state)
    if st is GameStatus.PAINTER_TO_MOVE:
        return {"colors": painter_moves(state)}
    if st is GameStatus.DRAWER_TO_MOVE:
        try:
            moves = drawer_moves(state, node_budget=ENUMERATION_BUDGET)
        except EmbeddingBudgetExceeded:
            return {"neighborhoods": None}  # too symmetric to list; still playable
        return {
            "neighborhoods": [
                sorted(m.presented.graph.neighbors(m.presented.pending))
                for m in moves
            ]
        }
    return None


def _vertex_badges(session: Session) -> Optional[list]:
    """Role annotations for compiled instances: exact for the pre-colored
    block, identification-table classes for everything presented later."""
    inst = session.inst
    if inst is None:
        return None
    pres = session.state.presented
    badges = []
    base = inst.gprime.vertex_count
    b_pids = [
        v for v in range(min(base, pres.graph.vertex_count)) if pres.colors[v] == 3
    ]
    for v in range(pres.graph.vertex_count):
        if v < base:
            if v == inst.gp_c:
                badges.append("c")
            elif v == inst.gp_m:
                badges.append("m")
            elif pres.colors[v] == 3:
                badges.append("B")
            else:
                badges.append("A")
        else:
            j = sum(1 for u in pres.graph.neighbors(v) if u in b_pids)
            cls = classify_by_b_degree(j, inst.n, inst.t)
            badges.append(
                {
                    "odd-pair": f"X{cls.index}?",
                    "x-even": f"x{cls.index}",
                    "xbar-even": f"~x{cls.index}",
                    "h-gadget": f"H{cls.index}",
                    "term": f"T{cls.index}",
                }[cls.kind]
            )
    return badges


def session_payload(session: Session) -> dict:
    state = session.state
    pres = state.presented
    return {
        "id": session.id,
        "k": state.config.k,
        "host_vertex_count": state.config.host.vertex_count,
        "human_role": session.human_role,
        "opponent": session.opponent,
        "state": {
            "vertices": pres.graph.vertex_count,
            "edges": sorted(list(e) for e in pres.graph.edges),
            "colors": {str(v): c for v, c in pres.color_map.items()},
            "pending": pres.pending,
            "status": status(state).value,
        },
        "to_move": _role_to_move(state),
        "legal_moves": _legal_moves_payload(state),
        "move_log": list(session.move_log),
        "badges": _vertex_badges(session),
    }


def _engine_move(session: Session) -> None:
    """Compute and apply one engine reply; only called on the engine's turn."""
    state = session.state
    role = _role_to_move(state)
    assert role == _engine_role(session)
    if role == DRAWER:
        if session.opponent == "script" and session.engine_script is not None:
            nb, session.engine_script = session.engine_script.drawer_next(state)
            move_state = present_vertex(state, nb, validate=True)
        elif session.opponent == "random":
            move_state = session.rng.choice(drawer_moves(state))
        else:
            move_state = best_move(state, DRAWER)
        # the engine must never emit an illegal move
        move_state.validate_embedding()
        nb = sorted(
            move_state.presented.graph.neighbors(move_state.presented.pending)
        )
        session.move_log.append({"role": DRAWER, "neighborhood": nb, "by": "engine"})
        session.state = move_state
    else:
        if session.opponent == "script" and session.engine_script is not None:
            try:
                color, session.engine_script = session.engine_script.painter_next(
                    state
                )
            except NoLegalColor:
                color = painter_moves(state)[0]
        elif session.opponent == "random":
            color = session.rng.choice(painter_moves(state))
        else:
            color = best_move(state, PAINTER)
        assert color in painter_moves(state)
        pid = state.presented.pending
        session.move_log.append({"role": PAINTER, "color": color, "by": "engine"})
        session.state = apply_color(state, color)
        _observe_painter_color(session, pid, color)


def _observe_painter_color(session: Session, pid: int, color: int) -> None:
    """Keep drawer-side script state in sync after any painter move."""
    for attr in ("engine_script", "hint_script"):
        script = getattr(session, attr)
        if isinstance(script, DrawerScript):
            try:
                setattr(session, attr, script.drawer_observe(pid, color))
            except Exception:
                setattr(session, attr, None)


def _advance_hint_script(session: Session, state: GameState, kind: str, move) -> None:
    """Advance the human-side shadow script; drop it when the human deviates."""
    script = session.hint_script
    if script is None:
        return
    try:
        if kind == "color":
            want, advanced = script.painter_next(state)
            session.hint_script = advanced if want == move else None
        else:
            want, advanced = script.drawer_next(state)
            session.hint_script = (
                advanced if frozenset(want) == frozenset(move) else None
            )
    except Exception:
        session.hint_script = None


def _advance_engine(session: Session) -> None:
    while _role_to_move(session.state) == _engine_role(session):
        _engine_move(session)


def _nearest_neighborhoods(state: GameState, wanted: set) -> Optional[list]:
    """Legal drawer neighborhoods ranked nearest-first (same size preferred)."""
    try:
        moves = drawer_moves(state, node_budget=ENUMERATION_BUDGET)
    except EmbeddingBudgetExceeded:
        return None
    options = [
        frozenset(m.presented.graph.neighbors(m.presented.pending))
        for m in moves
    ]
    options.sort(
        key=lambda nb: (
            len(nb) != len(wanted),
            len(nb ^ wanted),
            sorted(nb),
        )
    )
    return [sorted(nb) for nb in options]


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="on-line coloring game service")
    app.state.store = store if store is not None else SessionStore()

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        if (req.graph is None) == (req.formula is None):
            raise HTTPException(422, "provide exactly one of graph or formula")
        if req.human_role not in (PAINTER, DRAWER):
            raise HTTPException(422, f"unknown role {req.human_role!r}")
        if req.opponent not in ("solver", "script", "random"):
            raise HTTPException(422, f"unknown opponent {req.opponent!r}")
        inst = None
        if req.formula is not None:
            try:
                formula, _ = normalize(parse_formula(req.formula))
                inst = build(formula)
            except ValueError as e:
                raise HTTPException(422, f"bad formula: {e}")
            state = inst.initial
        else:
            if req.k is None:
                raise HTTPException(422, "k is required with a graph")
            try:
                host = parse_graph(req.graph)
                state = GameState.initial(GameConfig(host, req.k))
            except ValueError as e:
                raise HTTPException(422, f"bad graph: {e}")
        if req.opponent == "solver":
            if state.config.host.vertex_count > SOLVER_MAX_HOST_VERTICES:
                raise HTTPException(
                    413,
                    f"host too large for the exact solver"
                    f" (limit {SOLVER_MAX_HOST_VERTICES} vertices);"
                    " use opponent=script or random",
                )
        if req.opponent == "script" and inst is None:
            raise HTTPException(422, "scripted opponents need a formula session")
        session = Session(
            id=uuid.uuid4().hex[:12],
            state=state,
            human_role=req.human_role,
            opponent=req.opponent,
            rng=random.Random(req.seed),
            inst=inst,
        )
        if inst is not None:
            if req.opponent == "script":
                session.engine_script = (
                    DrawerScript.start(inst, universal_fallback=True)
                    if req.human_role == PAINTER
                    else PainterScript.start(inst)
                )
            session.hint_script = (
                PainterScript.start(inst)
                if req.human_role == PAINTER
                else DrawerScript.start(inst, universal_fallback=True)
            )
        with session.lock:
            _advance_engine(session)
        app.state.store.put(session)
        return session_payload(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_payload(app.state.store.get(session_id))

    @app.post("/sessions/{session_id}/moves")
    def make_move(session_id: str, req: MoveRequest):
        session = app.state.store.get(session_id)
        with session.lock:
            state = session.state
            if _role_to_move(state) != session.human_role:
                raise HTTPException(409, "not your turn")
            if session.human_role == PAINTER:
                if req.color is None:
                    raise HTTPException(422, "painter moves need a color")
                try:
                    session.state = apply_color(state, req.color)
                except IllegalColorError as e:
                    raise HTTPException(
                        409,
                        {
                            "error": f"color {req.color} is not legal",
                            "legal_moves": {"colors": e.legal},
                        },
                    )
                _advance_hint_script(session, state, "color", req.color)
                pid = state.presented.pending
                session.move_log.append(
                    {"role": PAINTER, "color": req.color, "by": "human"}
                )
                _observe_painter_color(session, pid, req.color)
            else:
                if req.neighborhood is None:
                    raise HTTPException(422, "drawer moves need a neighborhood")
                wanted = set(req.neighborhood)
                try:
                    session.state = present_vertex(state, wanted, validate=True)
                except (IllegalPresentationError, ValueError):
                    raise HTTPException(
                        409,
                        {
                            "error": "that neighborhood is not an induced extension",
                            "legal_moves": {
                                "neighborhoods": _nearest_neighborhoods(state, wanted)
                            },
                        },
                    )
                _advance_hint_script(session, state, "neighborhood", wanted)
                session.move_log.append(
                    {
                        "role": DRAWER,
                        "neighborhood": sorted(wanted),
                        "by": "human",
                    }
                )
            _advance_engine(session)
        return session_payload(session)

    @app.get("/sessions/{session_id}/hint")
    def hint(session_id: str):
        session = app.state.store.get(session_id)
        state = session.state
        if _role_to_move(state) != session.human_role:
            raise HTTPException(409, "no hint: not your turn")
        if session.inst is not None:
            # scripted strategies are the hint source on compiled instances
            if session.hint_script is None:
                raise HTTPException(
                    409, "no hint: play diverged from the scripted strategy"
                )
            try:
                if session.human_role == PAINTER:
                    color, _ = session.hint_script.painter_next(state)
                    return {"move": {"color": color}, "source": "script"}
                nb, _ = session.hint_script.drawer_next(state)
                return {"move": {"neighborhood": sorted(nb)}, "source": "script"}
            except NoLegalColor:
                raise HTTPException(409, "the scripted strategy has no color here")
        if state.config.host.vertex_count > SOLVER_MAX_HOST_VERTICES:
            raise HTTPException(413, "host too large for solver hints")
        mv = best_move(state, session.human_role)
        if session.human_role == PAINTER:
            return {"move": {"color": mv}, "source": "solver"}
        return {
            "move": {
                "neighborhood": sorted(
                    mv.presented.graph.neighbors(mv.presented.pending)
                )
            },
            "source": "solver",
        }

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        app.state.store.delete(session_id)

    return app
