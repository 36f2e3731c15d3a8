"""Command-line entry points.

Exit codes: 0 on success, 1 on a refutation or other negative verdict,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .graphs import parse_graph
from .engine import (
    GameStatus,
    apply_color,
    drawer_moves,
    format_state,
    load_game,
    painter_moves,
    present_vertex,
    status,
)
from .qbf import evaluate, normalize, parse as parse_formula
from .reduction import build, format_roles, verify_embedding_rigidity
from .search import best_move, online_chromatic_number, solve
from .strategies import format_transcript
from .harness import (
    BudgetExhausted,
    PreconditionError,
    cross_check_solvers,
    verify_drawer_dominates,
    verify_painter_with_fallback,
)

USAGE_ERROR = 2


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _load_formula(path: str):
    formula, _ = normalize(parse_formula(_read(path)))
    return formula


def cmd_chromatic(args) -> int:
    host = parse_graph(_read(args.graph))
    value = online_chromatic_number(host)
    print(value)
    return 0


def cmd_solve(args) -> int:
    game = load_game(_read(args.state), k=args.k)
    result = solve(game)
    print(result.winner)
    if result.principal_move is not None:
        if isinstance(result.principal_move, int):
            print(f"principal-color {result.principal_move}")
        else:
            pending = result.principal_move.presented.pending
            nb = sorted(result.principal_move.presented.graph.neighbors(pending))
            print(f"principal-presentation {' '.join(map(str, nb))}")
    if args.stats:
        print(f"nodes {result.nodes}")
        print(f"memo-hits {result.memo_hits}")
    return 0


def cmd_qbf_eval(args) -> int:
    formula = _load_formula(args.formula)
    print("true" if evaluate(formula) else "false")
    return 0


def cmd_reduce(args) -> int:
    inst = build(_load_formula(args.formula))
    os.makedirs(args.out, exist_ok=True)
    graph_path = os.path.join(args.out, "host.graph")
    with open(graph_path, "w") as fh:
        fh.write(
            f"# compiled from {os.path.basename(args.formula)}:"
            f" n={inst.n} t={inst.t} k={inst.k}\n"
        )
        from .graphs import format_graph

        fh.write(format_graph(inst.host))
    state_path = os.path.join(args.out, "start.game")
    with open(state_path, "w") as fh:
        fh.write(f"# pre-colored start state over host ids; play with -k {inst.k}\n")
        from .graphs import format_graph

        fh.write(format_graph(inst.host))
        for i in range(1, inst.k - 2):
            fh.write(f"c {inst.a(i)} {i + 3}\n")
        for i in range(1, 10 * inst.n + 3 * inst.t + 1):
            fh.write(f"c {inst.b(i)} 3\n")
        fh.write(f"c {inst.c} 1\n")
        fh.write(f"c {inst.m} 1\n")
    roles_path = os.path.join(args.out, "roles.txt")
    with open(roles_path, "w") as fh:
        fh.write(format_roles(inst))
    written = [graph_path, state_path, roles_path]
    if args.figure:
        from .report import render_instance_figure

        figure_path = os.path.join(args.out, "instance.png")
        render_instance_figure(inst, figure_path)
        written.append(figure_path)
    print(f"k {inst.k}")
    print(f"host-vertices {inst.host.vertex_count}")
    print(f"precolored-vertices {inst.gprime.vertex_count}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_verify_rigidity(args) -> int:
    inst = build(_load_formula(args.formula))
    report = verify_embedding_rigidity(inst)
    print(report.summary())
    return 0 if report.ok else 1


def cmd_verify_drawer(args) -> int:
    inst = build(_load_formula(args.formula))
    try:
        report = verify_drawer_dominates(inst)
    except PreconditionError as e:
        print(f"precondition: {e}", file=sys.stderr)
        return 1
    for line in report.to_lines():
        print(line)
    _emit_verify_artifacts(report, args)
    return 0 if report.verdict == "dominated" else 1


def cmd_verify_painter(args) -> int:
    inst = build(_load_formula(args.formula))
    try:
        fb = verify_painter_with_fallback(inst, budget=args.budget)
    except PreconditionError as e:
        print(f"precondition: {e}", file=sys.stderr)
        return 1
    for line in fb.to_lines():
        print(line)
    main_report = fb.rungs[0]
    _emit_verify_artifacts(main_report, args)
    return 0 if fb.verdict.startswith("dominated") else 1


def _emit_verify_artifacts(report, args) -> None:
    if getattr(args, "transcript", None) and report.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(format_transcript(report.transcript))
        print(f"wrote {args.transcript}")
    if getattr(args, "report_dir", None):
        from .report import emit_dominance_report

        for path in emit_dominance_report(report, args.report_dir):
            print(f"wrote {path}")


def cmd_cross_check(args) -> int:
    report = cross_check_solvers(args.max_n, args.max_k)
    for line in report.to_lines():
        print(line)
    if args.report_dir:
        from .report import emit_cross_check_report

        for path in emit_cross_check_report(report, args.report_dir):
            print(f"wrote {path}")
    return 0 if report.agree and report.bounds_ok and report.monotone_ok else 1


def cmd_play(args) -> int:
    inst = None
    if args.target.endswith(".qbf") or args.formula:
        inst = build(_load_formula(args.target))
        game = inst.initial
    else:
        game = load_game(_read(args.target), k=args.k if args.k else 3)
    return _play_loop(game, inst, args)


def _play_loop(game, inst, args) -> int:
    import random as _random

    from .strategies import DrawerScript, PainterScript

    rng = _random.Random(args.seed)
    human = args.as_role
    engine_script = None
    if args.vs == "script":
        if inst is None:
            print("scripted opponents need a formula target", file=sys.stderr)
            return USAGE_ERROR
        engine_script = (
            DrawerScript.start(inst, universal_fallback=True)
            if human == "painter"
            else PainterScript.start(inst)
        )
    state = game
    while True:
        st = status(state)
        if st in (GameStatus.PAINTER_WON, GameStatus.DRAWER_WON):
            print(f"game over: {st.value}")
            return 0
        human_turn = (st is GameStatus.PAINTER_TO_MOVE) == (human == "painter")
        if not human_turn:
            state, engine_script = _engine_reply(state, st, args.vs, engine_script, rng)
            continue
        print()
        print(format_state(state.presented).rstrip())
        if st is GameStatus.PAINTER_TO_MOVE:
            legal = painter_moves(state)
            raw = input(f"color for pending vertex {state.presented.pending} {legal}: ")
            try:
                state = apply_color(state, int(raw))
            except ValueError as e:
                print(f"illegal: {e}")
        else:
            raw = input("neighborhood for the new vertex (space-separated ids): ")
            try:
                nb = {int(tok) for tok in raw.split()}
                state = present_vertex(state, nb, validate=True)
            except ValueError as e:
                print(f"illegal: {e}")


def _engine_reply(state, st, vs, engine_script, rng):
    from .strategies import NoLegalColor

    if st is GameStatus.DRAWER_TO_MOVE:
        if vs == "script" and engine_script is not None:
            nb, engine_script = engine_script.drawer_next(state)
            new = present_vertex(state, nb, validate=True)
        elif vs == "random":
            new = rng.choice(drawer_moves(state))
        else:
            new = best_move(state, "drawer")
        nb = sorted(new.presented.graph.neighbors(new.presented.pending))
        print(f"engine presents a vertex adjacent to {nb}")
        return new, engine_script
    if vs == "script" and engine_script is not None:
        try:
            color, engine_script = engine_script.painter_next(state)
        except NoLegalColor:
            color = painter_moves(state)[0]
    elif vs == "random":
        color = rng.choice(painter_moves(state))
    else:
        color = best_move(state, "painter")
    print(f"engine colors vertex {state.presented.pending} with {color}")
    new = apply_color(state, color)
    if engine_script is not None and hasattr(engine_script, "drawer_observe"):
        engine_script = engine_script.drawer_observe(
            state.presented.pending, color
        )
    return new, engine_script


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = int(os.environ.get("ONCOL_PORT", args.port))
    uvicorn.run(create_app(), host=args.host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="oncol",
        description="exact workbench for the drawer-painter coloring game",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("chromatic", help="on-line chromatic number of a graph file")
    s.add_argument("graph")
    s.set_defaults(func=cmd_chromatic)

    s = sub.add_parser("solve", help="who wins a (possibly pre-colored) game state")
    s.add_argument("state", help="graph file with optional c/pending lines")
    s.add_argument("-k", type=int, required=True, help="color budget")
    s.add_argument("--stats", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("qbf-eval", help="evaluate a quantified 3DNF formula")
    s.add_argument("formula")
    s.set_defaults(func=cmd_qbf_eval)

    s = sub.add_parser("reduce", help="compile a formula into a game instance")
    s.add_argument("formula")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--figure", action="store_true", help="render the instance as PNG")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify-rigidity", help="pinned-emptiness embedding checks")
    s.add_argument("formula")
    s.set_defaults(func=cmd_verify_rigidity)

    s = sub.add_parser(
        "verify-drawer", help="scripted drawer beats every painter (false formula)"
    )
    s.add_argument("formula")
    s.add_argument("--transcript", help="write a refutation transcript here")
    s.add_argument("--report-dir", help="write report.txt, TSV, and figures here")
    s.set_defaults(func=cmd_verify_drawer)

    s = sub.add_parser(
        "verify-painter", help="scripted painter beats every drawer (true formula)"
    )
    s.add_argument("formula")
    s.add_argument("--budget", type=int, default=10**8, help="half-move budget")
    s.add_argument("--transcript", help="write a refutation transcript here")
    s.add_argument("--report-dir", help="write report.txt, TSV, and figures here")
    s.set_defaults(func=cmd_verify_painter)

    s = sub.add_parser("cross-check", help="solve vs naive solver on small graphs")
    s.add_argument("--max-n", type=int, default=4)
    s.add_argument("--max-k", type=int, default=4)
    s.add_argument("--report-dir", help="write report.txt, TSV, and figures here")
    s.set_defaults(func=cmd_cross_check)

    s = sub.add_parser("play", help="interactive play against the engine")
    s.add_argument("target", help="graph/state file, or a .qbf formula")
    s.add_argument("--as", dest="as_role", choices=("painter", "drawer"),
                   default="painter")
    s.add_argument("--vs", choices=("solver", "script", "random"), default="solver")
    s.add_argument("-k", type=int, help="color budget for graph targets")
    s.add_argument("--seed", type=int, help="seed for the random opponent")
    s.add_argument("--formula", action="store_true",
                   help="treat the target as a formula regardless of suffix")
    s.set_defaults(func=cmd_play)

    s = sub.add_parser("serve", help="run the HTTP play service")
    s.add_argument("--port", type=int, default=8000)
    s.add_argument("--host", default="127.0.0.1")
    s.set_defaults(func=cmd_serve)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
