import itertools
import random

import pytest

from oncol.engine import (
    GameConfig,
    GameState,
    GameStatus,
    IllegalColorError,
    IllegalPresentationError,
    apply_color,
    drawer_moves,
    format_state,
    load_game,
    painter_moves,
    parse_state,
    present_vertex,
    status,
)
from oncol.graphs import (
    ColoredState,
    canonical_key,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    Graph,
)


def empty_state(host, k):
    return GameState.initial(GameConfig(host, k))


def colored_one(host, k, color=1):
    st = drawer_moves(empty_state(host, k))[0]
    return apply_color(st, color)


class TestStatusAndMoves:
    def test_empty_host_is_already_won(self):
        assert status(empty_state(empty_graph(0), 1)) is GameStatus.PAINTER_WON

    def test_empty_presented_drawer_to_move(self):
        assert status(empty_state(path_graph(4), 3)) is GameStatus.DRAWER_TO_MOVE

    def test_all_colored_painter_won(self):
        st = empty_state(path_graph(2), 2)
        for color in (1, 2):
            st = apply_color(drawer_moves(st)[0], color)
        assert status(st) is GameStatus.PAINTER_WON

    def test_pending_with_no_color_drawer_won(self):
        st = colored_one(path_graph(2), 1)
        st = drawer_moves(st)[0]  # adjacent vertex, k=1
        assert painter_moves(st) == []
        assert status(st) is GameStatus.DRAWER_WON

    def test_painter_moves_examples(self):
        # pending adjacent to colors {1,2} with k=3 leaves [3]
        g = path_graph(3)  # 1 - 0 ... wait: edges 0-1, 1-2; use explicit star
        g = Graph.from_edges(3, [(0, 2), (1, 2)])
        pres = ColoredState.from_mapping(g, {0: 1, 1: 2}, pending=2)
        st = GameState(GameConfig(g, 3), pres)
        assert painter_moves(st) == [3]

    def test_painter_moves_isolated(self):
        st = drawer_moves(empty_state(path_graph(4), 2))[0]
        assert painter_moves(st) == [1, 2]

    def test_painter_moves_requires_pending(self):
        with pytest.raises(IllegalPresentationError):
            painter_moves(empty_state(path_graph(2), 2))

    def test_apply_illegal_color(self):
        st = colored_one(path_graph(2), 2, color=1)
        st = drawer_moves(st)[0]
        with pytest.raises(IllegalColorError) as e:
            apply_color(st, 1)
        assert e.value.legal == [2]

    def test_drawer_moves_turn_guard(self):
        st = drawer_moves(empty_state(path_graph(2), 2))[0]
        with pytest.raises(IllegalPresentationError):
            drawer_moves(st)

    def test_present_vertex_rejects_non_induced(self):
        st = colored_one(path_graph(2), 2)
        with pytest.raises(IllegalPresentationError):
            present_vertex(st, [])  # two isolated vertices don't fit K2


class TestDrawerMoveEnumeration:
    def test_empty_p4_single_move(self):
        assert len(drawer_moves(empty_state(path_graph(4), 3))) == 1

    def test_one_colored_p4_two_moves(self):
        st = colored_one(path_graph(4), 3)
        moves = drawer_moves(st)
        assert len(moves) == 2
        degrees = sorted(
            len(list(m.presented.graph.neighbors(m.presented.pending))) for m in moves
        )
        assert degrees == [0, 1]

    def test_one_colored_k2_single_move(self):
        st = colored_one(path_graph(2), 2)
        moves = drawer_moves(st)
        assert len(moves) == 1
        assert list(moves[0].presented.graph.neighbors(1)) == [0]

    def test_moves_are_deduplicated(self):
        for st in (empty_state(cycle_graph(5), 3), colored_one(cycle_graph(5), 3)):
            moves = drawer_moves(st)
            keys = [canonical_key(m.presented, "fixed") for m in moves]
            assert len(keys) == len(set(keys))

    def test_subset_and_embedding_paths_agree(self):
        rng = random.Random(5)
        frontier = [empty_state(h, 3) for h in (path_graph(5), cycle_graph(5))]
        seen = 0
        while frontier and seen < 60:
            st = frontier.pop()
            if status(st) is GameStatus.PAINTER_TO_MOVE:
                frontier.extend(apply_color(st, c) for c in painter_moves(st))
                continue
            if status(st) is not GameStatus.DRAWER_TO_MOVE:
                continue
            seen += 1
            a = {
                canonical_key(m.presented, "fixed")
                for m in drawer_moves(st, method="subsets")
            }
            b = {
                canonical_key(m.presented, "fixed")
                for m in drawer_moves(st, method="embeddings")
            }
            assert a == b
            moves = drawer_moves(st)
            frontier.extend(rng.sample(moves, min(2, len(moves))))

    def test_completeness_over_all_reachable_states_small_hosts(self):
        # every host up to 4 vertices, every reachable drawer-turn state
        # (deduplicated): both enumeration paths equal the raw-subset oracle
        from oncol.graphs import embeds
        from oncol.harness import nonisomorphic_graphs

        for host in nonisomorphic_graphs(3) + nonisomorphic_graphs(4):
            seen = set()
            frontier = [empty_state(host, 3)]
            while frontier:
                st = frontier.pop()
                s = status(st)
                if s is GameStatus.PAINTER_TO_MOVE:
                    frontier.extend(apply_color(st, c) for c in painter_moves(st))
                    continue
                if s is not GameStatus.DRAWER_TO_MOVE:
                    continue
                key = canonical_key(st.presented, "fixed")
                if key in seen:
                    continue
                seen.add(key)
                oracle = set()
                p = st.presented.graph.vertex_count
                for mask in range(1 << p):
                    nb = [u for u in range(p) if mask >> u & 1]
                    g2 = st.presented.graph.add_vertex(nb)
                    if embeds(g2, host):
                        oracle.add(
                            canonical_key(
                                ColoredState(g2, st.presented.colors + (0,), p),
                                "fixed",
                            )
                        )
                for method in ("subsets", "embeddings"):
                    got = {
                        canonical_key(m.presented, "fixed")
                        for m in drawer_moves(st, method=method)
                    }
                    assert got == oracle
                frontier.extend(drawer_moves(st))

    def test_completeness_against_raw_subsets(self):
        # dedup classes cover every raw legal extension, for small hosts
        from oncol.graphs import embeds

        for host in (path_graph(4), cycle_graph(4), complete_graph(4)):
            st = colored_one(host, 3)
            moves = drawer_moves(st)
            keys = {canonical_key(m.presented, "fixed") for m in moves}
            p = st.presented.graph.vertex_count
            for mask in range(1 << p):
                nb = [u for u in range(p) if mask >> u & 1]
                g2 = st.presented.graph.add_vertex(nb)
                if embeds(g2, host):
                    cand = ColoredState(g2, st.presented.colors + (0,), p)
                    assert canonical_key(cand, "fixed") in keys


class TestGameLengthProperty:
    def test_play_terminates_within_two_v(self):
        rng = random.Random(13)
        for host in (path_graph(4), cycle_graph(5), complete_graph(3)):
            for k in (1, 2, 3):
                st = empty_state(host, k)
                half_moves = 0
                drawer_turns = painter_turns = 0
                while True:
                    s = status(st)
                    if s is GameStatus.PAINTER_WON or s is GameStatus.DRAWER_WON:
                        break
                    if s is GameStatus.DRAWER_TO_MOVE:
                        st = rng.choice(drawer_moves(st))
                        drawer_turns += 1
                    else:
                        st = apply_color(st, rng.choice(painter_moves(st)))
                        painter_turns += 1
                    half_moves += 1
                    assert half_moves <= 2 * host.vertex_count
                if status(st) is GameStatus.PAINTER_WON:
                    assert painter_turns == host.vertex_count
                    assert drawer_turns == host.vertex_count


class TestColorPermutationEquivariance:
    def test_painter_moves_map_through_bijection(self):
        rng = random.Random(21)
        host = cycle_graph(5)
        for _ in range(50):
            st = empty_state(host, 4)
            for _ in range(rng.randint(1, 4)):
                if status(st) is GameStatus.DRAWER_TO_MOVE:
                    st = rng.choice(drawer_moves(st))
                else:
                    st = apply_color(st, rng.choice(painter_moves(st)))
            if status(st) is not GameStatus.PAINTER_TO_MOVE:
                continue
            perm = list(range(1, 5))
            rng.shuffle(perm)
            bij = dict(zip(range(1, 5), perm))
            recolored = GameState(st.config, st.presented.recolor(bij))
            assert sorted(bij[c] for c in painter_moves(st)) == sorted(
                painter_moves(recolored)
            )

    def test_drawer_moves_isomorphic_after_recoloring(self):
        rng = random.Random(22)
        host = path_graph(5)
        st = empty_state(host, 3)
        st = apply_color(drawer_moves(st)[0], 1)
        st = apply_color(drawer_moves(st)[1], 2)
        bij = {1: 3, 2: 1, 3: 2}
        recolored = GameState(st.config, st.presented.recolor(bij))
        a = sorted(
            canonical_key(m.presented, "permutable") for m in drawer_moves(st)
        )
        b = sorted(
            canonical_key(m.presented, "permutable") for m in drawer_moves(recolored)
        )
        assert a == b


class TestStateSerialization:
    def test_roundtrip(self):
        pres = ColoredState.from_mapping(
            path_graph(4), {0: 2, 1: 1, 3: 2}, pending=2
        )
        text = format_state(pres)
        assert parse_state(text) == pres
        assert format_state(parse_state(text)) == text

    def test_load_game_reindexes(self):
        text = "p 4 3\ne 0 1\ne 1 2\ne 2 3\nc 1 2\nc 3 1\n"
        game = load_game(text, k=3)
        assert game.config.host == path_graph(4)
        assert game.presented.graph.vertex_count == 2
        assert sorted(game.presented.color_map.values()) == [1, 2]
        # vertices 1 and 3 of P4 are non-adjacent
        assert game.presented.graph.edges == frozenset()

    def test_load_game_rejects_non_induced(self):
        # claim two adjacent colored vertices exist in an empty host graph
        text = "p 2 0\nc 0 1\nc 1 1\n"
        game = load_game(text, k=2)  # two isolated same-colored: fine
        assert game.presented.graph.edges == frozenset()

    def test_load_game_with_pending_vertex(self):
        text = "p 4 3\ne 0 1\ne 1 2\ne 2 3\nc 0 1\npending 1\n"
        game = load_game(text, k=3)
        pres = game.presented
        assert pres.graph.vertex_count == 2
        assert pres.pending == 1
        assert pres.colors[0] == 1
        assert pres.graph.has_edge(0, 1)
        assert status(game) is GameStatus.PAINTER_TO_MOVE
        assert painter_moves(game) == [2, 3]
