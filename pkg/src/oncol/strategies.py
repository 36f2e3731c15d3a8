"""Executable adversary scripts for compiled game instances.

``DrawerScript`` drives the drawer when the compiled formula is false: it
presents the literal-pair and gadget vertices in rounds, keeping symmetric
vertices indistinguishable and committing their identities lazily (pair
identities after the painter colors them, gadget path positions after the
first two gadget colors, with an endpoint/interior swap that parks any
true/false color on the positions the upcoming literal pair must see), and
finally presents the term clique, which the painter cannot finish.

``PainterScript`` drives the painter when the formula is true: a three
phase machine.  Phase 1 follows the identification table (count color-3
neighbors), spending reserved palettes on gadget and term vertices and
playing the existential strategy on even literal pairs; a drawer deviation
from normal play banks a spare gadget color (phase 2), and a good term
request banks color false (phase 3); either bank suffices to finish.

Scripts are immutable; every operation returns an updated copy, so search
harnesses can branch cheaply.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

from .engine import GameState, painter_moves
from .qbf import falsifying_move, winning_move
from .reduction import ReductionInstance, classify_by_b_degree


class ScriptInconsistency(RuntimeError):
    """The script's own bookkeeping broke (a bug, not a game outcome)."""


class NoLegalColor(RuntimeError):
    """The painter script has no legal color: a strategy-refutation event."""

    def __init__(self, pending: int, wanted, legal):
        super().__init__(
            f"painter script wanted {wanted!r} for pending vertex {pending},"
            f" legal colors {legal}"
        )
        self.pending = pending
        self.wanted = wanted
        self.legal = legal


TRUE_COLOR = 1
FALSE_COLOR = 2
BLOCKED_COLOR = 3  # every presentable vertex has a color-3 neighbor


def gadget_palette(n: int) -> range:
    """The 3n/2 colors reserved for gadget vertices (ids 4 .. 3+3n/2)."""
    return range(4, 4 + 3 * n // 2)


def term_palette(n: int, t: int, k: int) -> range:
    """The t-1 colors reserved for term vertices (everything after the gadget block)."""
    return range(4 + 3 * n // 2, k + 1)


# ---------------------------------------------------------------------------
# the drawer's script (formula false)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DrawerScript:
    """Stateful move selector for the scripted drawer.

    ``intended`` is the drawer's private embedding of the presented graph
    into the host; identities of symmetric vertices are provisional until
    an observation commits them.  ``skip_swap`` sabotages the script by
    omitting the gadget position swap (for refutation-sensitivity tests);
    ``universal_fallback`` lets the script keep playing on true formulas
    (it picks True when no falsifying value exists), for smoke adversaries.
    """

    inst: ReductionInstance
    stage: tuple = ()
    intended: tuple = ()
    assignment: tuple = ()
    round_pids: tuple = ()  # pids presented in the current round, in order
    round_colors: tuple = ()  # their observed colors, in presentation order
    log: tuple = ()
    skip_swap: bool = False
    universal_fallback: bool = False

    @classmethod
    def start(cls, inst: ReductionInstance, **flags) -> "DrawerScript":
        intended = [0] * inst.gprime.vertex_count
        for i in range(1, inst.k - 2):
            intended[inst.gp_a(i)] = inst.a(i)
        for i in range(1, 10 * inst.n + 3 * inst.t + 1):
            intended[inst.gp_b(i)] = inst.b(i)
        intended[inst.gp_m] = inst.m
        intended[inst.gp_c] = inst.c
        return cls(inst=inst, stage=("odd", 1, 0), intended=tuple(intended), **flags)

    def digest(self) -> tuple:
        return (self.stage, self.assignment, self.intended, self.skip_swap)

    @property
    def done(self) -> bool:
        return self.stage == ("done",)

    # -- helpers -----------------------------------------------------------

    def _next_stage(self) -> tuple:
        kind = self.stage[0]
        if kind == "odd":
            _, i, step = self.stage
            return ("odd", i, 1) if step == 0 else ("h", i, 0)
        if kind == "h":
            _, i, step = self.stage
            return ("h", i, step + 1) if step < 3 else ("even", i, 0)
        if kind == "even":
            _, i, step = self.stage
            if step == 0:
                return ("even", i, 1)
            if i < self.inst.n // 2:
                return ("odd", i + 1, 0)
            return ("t", 1) if self.inst.t >= 1 else ("done",)
        if kind == "t":
            j = self.stage[1]
            return ("t", j + 1) if j < self.inst.t else ("done",)
        raise ScriptInconsistency(f"no stage after {self.stage}")

    def _intended_host_vertex(self) -> int:
        inst = self.inst
        kind = self.stage[0]
        if kind == "odd":
            _, i, step = self.stage
            return inst.x(2 * i - 1, bar=step == 1)
        if kind == "h":
            _, i, step = self.stage
            committed_13 = False
            if step >= 2:
                # position of the second gadget vertex was committed at its
                # observation; read it back from `intended`
                second = self.round_pids[3]
                committed_13 = self.intended[second] == inst.h(i, 3)
            position = {0: 1, 1: 4, 2: 2, 3: 3 if not committed_13 else 4}[step]
            return inst.h(i, position)
        if kind == "even":
            _, i, step = self.stage
            return inst.x(2 * i, bar=step == 1)
        if kind == "t":
            return inst.term_vertex(self.stage[1])
        raise ScriptInconsistency(f"script exhausted (stage {self.stage})")

    def _check_embedding(self, graph) -> None:
        host_adj = self.inst.host.adjacency
        adj = graph.adjacency
        img = self.intended
        for p in range(graph.vertex_count):
            for q in range(p + 1, graph.vertex_count):
                if bool(adj[p] >> q & 1) != bool(host_adj[img[p]] >> img[q] & 1):
                    raise ScriptInconsistency(
                        f"ledger does not embed: pids {p},{q} map to"
                        f" {self.inst.roles[img[p]].tag},{self.inst.roles[img[q]].tag}"
                    )

    # -- the two script operations ------------------------------------------

    def drawer_next(self, state: GameState):
        """The neighborhood to present now, plus the updated script."""
        if state.presented.pending is not None:
            raise ScriptInconsistency("drawer_next called on a painter-to-move state")
        if self.done:
            raise ScriptInconsistency("script already presented every vertex")
        p = state.presented.graph.vertex_count
        if p != len(self.intended):
            raise ScriptInconsistency(
                f"state has {p} presented vertices, ledger has {len(self.intended)}"
            )
        host_adj = self.inst.host.adjacency
        hv = self._intended_host_vertex()
        nb = frozenset(q for q in range(p) if host_adj[hv] >> self.intended[q] & 1)
        new = replace(
            self,
            intended=self.intended + (hv,),
            round_pids=self.round_pids + (p,)
            if self.stage[0] in ("odd", "h", "even")
            else self.round_pids,
        )
        new._check_embedding(state.presented.graph.add_vertex(nb))
        return nb, new

    def drawer_observe(self, colored_vertex: int, color: int) -> "DrawerScript":
        """Narrow the ledger after the painter colors the vertex just presented."""
        if colored_vertex != len(self.intended) - 1:
            raise ScriptInconsistency(
                f"observed vertex {colored_vertex}, expected {len(self.intended) - 1}"
            )
        inst = self.inst
        script = replace(self, round_colors=self.round_colors + (color,))
        kind = self.stage[0]

        if kind == "odd" and self.stage[2] == 1:
            i = self.stage[1]
            pid_a, pid_b = script.round_pids[0], script.round_pids[1]
            ca, cb = script.round_colors[0], script.round_colors[1]
            if {ca, cb} != {TRUE_COLOR, FALSE_COLOR}:
                raise ScriptInconsistency(
                    f"literal pair {2 * i - 1} colored {ca},{cb}; expected true/false"
                )
            value = falsifying_move(inst.formula, script.assignment, 2 * i - 1)
            if value is None:
                if not script.universal_fallback:
                    raise ScriptInconsistency(
                        f"no falsifying value for x{2 * i - 1}: formula is not"
                        " false along this line"
                    )
                value = True
            true_pid = pid_a if ca == TRUE_COLOR else pid_b
            false_pid = pid_b if true_pid == pid_a else pid_a
            x_pid = true_pid if value else false_pid
            bar_pid = false_pid if value else true_pid
            intended = list(script.intended)
            intended[x_pid] = inst.x(2 * i - 1)
            intended[bar_pid] = inst.x(2 * i - 1, bar=True)
            script = replace(
                script,
                intended=tuple(intended),
                assignment=script.assignment + (value,),
                log=script.log
                + (f"# commit x{2 * i - 1}={str(value).lower()} -> pid {x_pid}",),
            )

        elif kind == "h" and self.stage[2] == 1:
            i = self.stage[1]
            first, second = script.round_pids[2], script.round_pids[3]
            c1, c2 = script.round_colors[2], script.round_colors[3]
            if c1 != c2:
                intended = list(script.intended)
                intended[second] = inst.h(i, 3)
                script = replace(
                    script,
                    intended=tuple(intended),
                    log=script.log + (f"# commit gadget {i} pair as positions 1,3",),
                )
            else:
                script = replace(
                    script,
                    log=script.log + (f"# commit gadget {i} pair as positions 1,4",),
                )

        elif kind == "h" and self.stage[2] == 3:
            script = script._maybe_swap(self.stage[1])

        elif kind == "even" and self.stage[2] == 1:
            i = self.stage[1]
            x_pid = script.round_pids[6]
            value = script.round_colors[6] == TRUE_COLOR
            script = replace(
                script,
                assignment=script.assignment + (value,),
                log=script.log + (f"# observe x{2 * i}={str(value).lower()}",),
            )
            if self.stage == ("even", i, 1):
                script = replace(script, round_pids=(), round_colors=())

        return replace(script, stage=self._next_stage())

    def _maybe_swap(self, i: int) -> "DrawerScript":
        """Park any true/false gadget color on a position the literal pair sees.

        The path reversal (1<->4, 2<->3) is an automorphism of the gadget
        and of every presented attachment, because the only asymmetric
        attachments (to even literal pairs) are not presented yet.
        """
        inst = self.inst
        pids = self.round_pids[2:6]
        pos_of = {
            pid: next(j for j in range(1, 5) if self.intended[pid] == inst.h(i, j))
            for pid in pids
        }
        color_of = dict(zip(pids, self.round_colors[2:6]))
        tf_positions = {
            pos_of[pid]
            for pid in pids
            if color_of[pid] in (TRUE_COLOR, FALSE_COLOR)
        }
        if not tf_positions or tf_positions & {2, 4}:
            return self
        if self.skip_swap:
            return replace(
                self, log=self.log + (f"# sabotage: swap skipped in gadget {i}",)
            )
        reversal = {1: 4, 2: 3, 3: 2, 4: 1}
        intended = list(self.intended)
        for pid in pids:
            intended[pid] = inst.h(i, reversal[pos_of[pid]])
        assert {reversal[p] for p in tf_positions} & {2, 4}
        return replace(
            self,
            intended=tuple(intended),
            log=self.log + (f"# commit swap endpoints/interior of gadget {i}",),
        )


# ---------------------------------------------------------------------------
# the painter's view of an abstract presented state
# ---------------------------------------------------------------------------


class _View:
    """Everything the painter can derive from the presented colored state.

    The pre-colored block is recognized structurally, never by vertex id:
    the color-3 vertices are the identification block, the color-1 vertex
    adjacent to all of them is the anchor whose neighborhood is the whole
    pre-colored clique+block, and the color-1 vertex adjacent to none of
    them is the other anchor.  Everything else was presented by the drawer
    and classifies by its count of color-3 neighbors.
    """

    def __init__(self, inst: ReductionInstance, state: GameState):
        self.inst = inst
        pres = state.presented
        self.pres = pres
        self.adj = pres.graph.adjacency
        self.colors = pres.colors
        n, t = inst.n, inst.t
        count = pres.graph.vertex_count
        self.b_mask = 0
        for v in range(count):
            if pres.colors[v] == BLOCKED_COLOR:
                self.b_mask |= 1 << v
        c_pid = m_pid = None
        for v in range(count):
            if pres.colors[v] == 1:
                covered = self.adj[v] & self.b_mask
                if covered == self.b_mask:
                    c_pid = v
                elif covered == 0:
                    m_pid = v
        if c_pid is None or m_pid is None:
            raise ScriptInconsistency("anchors of the pre-colored block not found")
        self.c_pid = c_pid
        self.m_pid = m_pid
        block = self.adj[c_pid] | (1 << c_pid) | (1 << m_pid)
        self.cls = {}
        self.odd_pairs: dict = {}
        self.x_even: dict = {}
        self.xbar_even: dict = {}
        self.gadgets: dict = {}
        self.term_pids: dict = {}
        for q in range(count):
            if block >> q & 1:
                continue
            c = classify_by_b_degree((self.adj[q] & self.b_mask).bit_count(), n, t)
            self.cls[q] = c
            if c.kind == "odd-pair":
                self.odd_pairs.setdefault(c.index, []).append(q)
            elif c.kind == "x-even":
                self.x_even[c.index] = q
            elif c.kind == "xbar-even":
                self.xbar_even[c.index] = q
            elif c.kind == "h-gadget":
                self.gadgets.setdefault(c.index, []).append(q)
            else:
                self.term_pids[c.index] = q

    def blocked_colors(self, pid: int) -> set:
        return {
            self.colors[u]
            for u in self.pres.graph.neighbors(pid)
            if self.colors[u]
        }

    def adjacent(self, p: int, q: int) -> bool:
        return bool(self.adj[p] >> q & 1)

    # -- identification of odd literal pairs --------------------------------

    def odd_identifications(self, i: int) -> list:
        """Consistent role maps for the presented members of odd pair i.

        Each map sends member pid -> 'x' | 'xbar', consistent with every
        observed adjacency: gadget vertices touch only the positive literal
        vertex, and a term vertex touches exactly its literal vertices.
        """
        members = self.odd_pairs.get(i, [])
        if not members:
            return [{}]
        options = {q: {"x", "xbar"} for q in members}
        gadget = (i + 1) // 2
        for g_pid in self.gadgets.get(gadget, []):
            for q in members:
                options[q] &= {"x"} if self.adjacent(q, g_pid) else {"xbar"}
        for term_idx, t_pid in self.term_pids.items():
            term = self.inst.formula.terms[term_idx - 1]
            pols = {pos for var, pos in term if var == i}
            if pols == {True, False} or not pols:
                continue  # adjacency to this term vertex cannot separate
            literal_role = "x" if True in pols else "xbar"
            other = "xbar" if literal_role == "x" else "x"
            for q in members:
                options[q] &= (
                    {literal_role} if self.adjacent(q, t_pid) else {other}
                )
        out = []
        for combo in itertools.product(*(sorted(options[q]) for q in members)):
            if len(members) == 2 and combo[0] == combo[1]:
                continue
            if any(not options[q] for q in members):
                break
            out.append(dict(zip(members, combo)))
        if not out:
            raise ScriptInconsistency(
                f"no consistent identification for literal pair {i}"
            )
        return out

    def identified_odd(self, i: int) -> Optional[dict]:
        ids = self.odd_identifications(i)
        return ids[0] if len(ids) == 1 else None

    # -- interpreted truth values -------------------------------------------

    def odd_truth(self, i: int) -> bool:
        """p' for an odd variable: color of the positive literal vertex if it
        can be read off, True by default while the pair is unpresented."""
        members = [q for q in self.odd_pairs.get(i, []) if self.colors[q]]
        if not members:
            return True
        ids = self.identified_odd(i)
        if ids is None:
            raise ScriptInconsistency(
                f"literal pair {i} colored but unidentifiable; p' undefined"
            )
        for q in members:
            if ids[q] == "x":
                return self.colors[q] == TRUE_COLOR
            if ids[q] == "xbar":
                return self.colors[q] == FALSE_COLOR
        raise ScriptInconsistency(f"no colored member for pair {i}")

    # -- gadget position reasoning -------------------------------------------

    def _even_evidence_pids(self, gadget: int) -> list:
        out = []
        for idx, pid in itertools.chain(
            self.x_even.items(), self.xbar_even.items()
        ):
            if idx // 2 >= gadget:
                out.append(pid)
        return out

    def gadget_position_maps(self, j: int) -> list:
        """Injective position assignments consistent with what is presented."""
        pids = self.gadgets.get(j, [])
        if not pids:
            return [{}]
        evidence = self._even_evidence_pids(j)
        path = {(1, 2), (2, 3), (3, 4)}
        out = []
        for perm in itertools.permutations(range(1, 5), len(pids)):
            ok = True
            for (a, pa), (b, pb) in itertools.combinations(zip(pids, perm), 2):
                edge = (pa, pb) if pa < pb else (pb, pa)
                if self.adjacent(a, b) != (edge in path):
                    ok = False
                    break
            if ok:
                for pid, pos in zip(pids, perm):
                    for e_pid in evidence:
                        if self.adjacent(pid, e_pid) != (pos in (2, 4)):
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                out.append(dict(zip(pids, perm)))
        if not out:
            raise ScriptInconsistency(f"no consistent position map for gadget {j}")
        return out

    def endpoint_complete(self, j: int, optimistic: bool) -> bool:
        maps = self.gadget_position_maps(j)
        covered = [set(m.values()) >= {1, 4} for m in maps]
        return any(covered) if optimistic else all(covered)

    def in_24_partition(self, pid: int, gadget: int) -> Optional[bool]:
        """Partition of a gadget vertex, read from even literal adjacency."""
        for e_pid in self._even_evidence_pids(gadget):
            return self.adjacent(pid, e_pid)
        return None


# ---------------------------------------------------------------------------
# the painter's script (formula true)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PainterScript:
    """Phase-machine move selector for the scripted painter.

    Phase transitions are monotone (1 -> 2 on a deviation from normal play,
    1 -> 3 on a good term request, never back).  ``good_mode`` and
    ``normal_mode`` choose how identification ambiguity is resolved when
    judging requests ('pessimistic' = the property must hold under every
    consistent identification, 'optimistic' = under some).
    ``disable_phase3`` sabotages the script for refutation-sensitivity
    tests: good requests are treated like ordinary term requests.
    """

    inst: ReductionInstance
    phase: int = 1
    p_even: tuple = ()  # cached existential choices, ((variable, value), ...)
    deviant_gadget: Optional[int] = None
    good_term: Optional[int] = None
    good_mode: str = "pessimistic"
    normal_mode: str = "optimistic"
    disable_phase3: bool = False

    @classmethod
    def start(cls, inst: ReductionInstance, **flags) -> "PainterScript":
        return cls(inst=inst, **flags)

    def digest(self) -> tuple:
        return (self.phase, self.p_even, self.deviant_gadget, self.good_term)

    # -- p' ------------------------------------------------------------------

    def _p_value(self, view: _View, i: int, cache: dict) -> bool:
        if i % 2 == 1:
            return view.odd_truth(i)
        if i in cache:
            return cache[i]
        prefix = tuple(self._p_value(view, j, cache) for j in range(1, i))
        value = winning_move(self.inst.formula, prefix, i)
        cache[i] = value
        return value

    # -- request judgments ----------------------------------------------------

    def is_good_request(self, state: GameState, pending: int) -> bool:
        """A term request whose literal vertices are all still true-able.

        For each literal of the term: its vertex must not be colored false
        and the complementary literal's vertex must not be colored true
        (vertices not yet presented satisfy both vacuously).
        """
        view = _View(self.inst, state)
        cls = view.cls[pending]
        if cls.kind != "term":
            raise ScriptInconsistency(f"pending vertex {pending} is not a term vertex")
        term = self.inst.formula.terms[cls.index - 1]
        variables = sorted({var for var, _pos in term})
        per_var_ids = []
        for var in variables:
            if var % 2 == 1:
                per_var_ids.append(view.odd_identifications(var))
            else:
                fixed = {}
                if var in view.x_even:
                    fixed[view.x_even[var]] = "x"
                if var in view.xbar_even:
                    fixed[view.xbar_even[var]] = "xbar"
                per_var_ids.append([fixed])
        verdicts = []
        for combo in itertools.product(*per_var_ids):
            ids: dict = {}
            for var, m in zip(variables, combo):
                for pid, role in m.items():
                    ids[(var, role)] = pid
            good = True
            for var, pos in set(term):
                lit_pid = ids.get((var, "x" if pos else "xbar"))
                comp_pid = ids.get((var, "xbar" if pos else "x"))
                if lit_pid is not None and view.colors[lit_pid] == FALSE_COLOR:
                    good = False
                if comp_pid is not None and view.colors[comp_pid] == TRUE_COLOR:
                    good = False
            verdicts.append(good)
        return any(verdicts) if self.good_mode == "optimistic" else all(verdicts)

    def is_normal_play(self, state: GameState, pending: int) -> bool:
        """Before this even literal request, every earlier gadget must have
        both of its path endpoints already requested."""
        view = _View(self.inst, state)
        cls = view.cls[pending]
        if cls.kind not in ("x-even", "xbar-even"):
            raise ScriptInconsistency(
                f"pending vertex {pending} is not an even literal vertex"
            )
        optimistic = self.normal_mode == "optimistic"
        return all(
            view.endpoint_complete(j, optimistic)
            for j in range(1, cls.index // 2 + 1)
        )

    # -- coloring --------------------------------------------------------------

    def painter_next(self, state: GameState):
        """The color for the pending vertex, plus the updated script."""
        pending = state.presented.pending
        if pending is None:
            raise ScriptInconsistency("painter_next called with no pending vertex")
        view = _View(self.inst, state)
        legal = painter_moves(state)
        cls = view.cls[pending]
        script = self

        if self.phase == 1:
            color, script = self._phase1(view, state, pending, cls)
        elif self.phase == 2:
            color = self._phase2(view, pending, cls)
        else:
            color = self._phase3(view, pending, cls)

        if color not in legal:
            raise NoLegalColor(pending, color, legal)
        return color, script

    def _greedy(self, view: _View, pending: int, palette, wanted=None):
        blocked = view.blocked_colors(pending)
        for c in palette:
            if c not in blocked:
                return c
        raise NoLegalColor(
            pending,
            wanted if wanted is not None else f"greedy over {list(palette)}",
            sorted(set(range(1, self.inst.k + 1)) - blocked),
        )

    def _phase1(self, view: _View, state: GameState, pending: int, cls):
        inst = self.inst
        if cls.kind == "h-gadget":
            return self._greedy(view, pending, gadget_palette(inst.n)), self

        if cls.kind in ("x-even", "xbar-even"):
            i = cls.index
            if self.is_normal_play(state, pending):
                cache = dict(self.p_even)
                value = self._p_value(view, i, cache)
                script = replace(self, p_even=tuple(sorted(cache.items())))
                if cls.kind == "xbar-even":
                    value = not value
                return (TRUE_COLOR if value else FALSE_COLOR), script
            deviant = next(
                j
                for j in range(1, i // 2 + 1)
                if not view.endpoint_complete(j, self.normal_mode == "optimistic")
            )
            color = self._greedy(view, pending, (TRUE_COLOR, FALSE_COLOR))
            return color, replace(self, phase=2, deviant_gadget=deviant)

        if cls.kind == "odd-pair":
            i = cls.index
            if not view.gadgets.get((i + 1) // 2):
                return self._greedy(view, pending, (TRUE_COLOR, FALSE_COLOR)), self
            ids = view.identified_odd(i)
            if ids is None or pending not in ids:
                raise ScriptInconsistency(
                    f"gadget {(i + 1) // 2} visible but literal pair {i} unidentified"
                )
            partner = next((q for q in view.odd_pairs[i] if q != pending), None)
            if ids[pending] == "x":
                value = (
                    view.colors[partner] == FALSE_COLOR if partner is not None else True
                )
                return (TRUE_COLOR if value else FALSE_COLOR), self
            value = (
                view.colors[partner] == TRUE_COLOR if partner is not None else True
            )
            return (FALSE_COLOR if value else TRUE_COLOR), self

        # term request
        if self.is_good_request(state, pending) and not self.disable_phase3:
            return FALSE_COLOR, replace(self, phase=3, good_term=cls.index)
        return (
            self._greedy(view, pending, term_palette(inst.n, inst.t, inst.k)),
            self,
        )

    def _phase2(self, view: _View, pending: int, cls):
        inst = self.inst
        if cls.kind == "h-gadget":
            if cls.index == self.deviant_gadget:
                # one color per path partition: reuse this partition's color,
                # otherwise pick a fresh one disjoint from the other side's
                in24 = view.in_24_partition(pending, cls.index)
                if in24 is None:
                    raise ScriptInconsistency(
                        f"no partition evidence for deviant gadget {cls.index}"
                    )
                same, other = set(), set()
                for q in view.gadgets.get(cls.index, []):
                    if q == pending or not view.colors[q]:
                        continue
                    side = view.in_24_partition(q, cls.index)
                    (same if side == in24 else other).add(view.colors[q])
                blocked = view.blocked_colors(pending)
                for c in sorted(same):
                    if c not in blocked:
                        return c
                palette = [c for c in gadget_palette(inst.n) if c not in other]
                return self._greedy(view, pending, palette)
            return self._greedy(view, pending, gadget_palette(inst.n))
        if cls.kind in ("x-even", "xbar-even", "odd-pair"):
            return self._greedy(view, pending, (TRUE_COLOR, FALSE_COLOR))
        # term request: reserved term colors first, then the banked gadget color
        palette = list(term_palette(inst.n, inst.t, inst.k)) + list(
            gadget_palette(inst.n)
        )
        return self._greedy(view, pending, palette)

    def _phase3(self, view: _View, pending: int, cls):
        inst = self.inst
        if cls.kind == "h-gadget":
            return self._greedy(view, pending, gadget_palette(inst.n))
        if cls.kind == "term":
            return self._greedy(view, pending, term_palette(inst.n, inst.t, inst.k))
        good_pid = view.term_pids[self.good_term]
        term = inst.formula.terms[self.good_term - 1]
        term_vars = {var for var, _pos in term}
        if view.adjacent(pending, good_pid):
            return TRUE_COLOR
        if cls.index in term_vars:
            return FALSE_COLOR
        return self._greedy(view, pending, (TRUE_COLOR, FALSE_COLOR))


# ---------------------------------------------------------------------------
# transcripts: one line per half-move, plus drawer commit annotations
# ---------------------------------------------------------------------------


def format_transcript(entries) -> str:
    lines = []
    for entry in entries:
        if entry[0] == "D":
            lines.append("D " + " ".join(str(v) for v in sorted(entry[1])))
        elif entry[0] == "P":
            lines.append(f"P {entry[1]}")
        else:
            lines.append(str(entry[1]))
    return "\n".join(lines) + "\n"


def parse_transcript(text: str):
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            entries.append(("#", line))
        elif line.startswith("D"):
            entries.append(("D", frozenset(int(v) for v in line.split()[1:])))
        elif line.startswith("P"):
            entries.append(("P", int(line.split()[1])))
        else:
            raise ValueError(f"bad transcript line: {raw!r}")
    return entries
