"""Compile a normalized quantified 3DNF formula into a hard game state.

The compiled host graph contains, for a formula with n variables and t
terms:

* ``A`` - a pre-colored clique of k-3 vertices that pins colors 4..k,
* ``B`` - a pre-colored independent set of 10n+3t vertices, all color 3,
  whose nested attachment prefixes let the painter identify every later
  vertex by counting its color-3 neighbors,
* ``X`` - a vertex per literal (x_i and its negation, joined by an edge),
  squeezed down to colors {1, 2} by edges to all of A and some of B,
* ``H`` - one 4-path gadget per variable pair, gadgets completely joined
  to each other, which burn one reserved color block,
* ``T`` - a clique with one vertex per term, attached to its literals,
* ``m`` and ``c`` - two pre-colored anchor vertices; ``c`` rigidifies the
  pre-coloring's embedding, ``m`` blocks color 1 from the term clique.

The color budget is k = t + 3n/2 + 2, and the pre-colored part is
A + B + c + m with the coloring a_i -> i+3, b_i -> 3, c -> 1, m -> 1.

Vertex ids are assigned in role order A, B, X, H, T, m, c (the layout is
fixed and documented so tests can address roles deterministically, but the
role map is the API other modules should consume).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .graphs import ColoredState, Graph, induced_embeddings
from .engine import GameConfig, GameState
from .qbf import Formula


class BuildError(ValueError):
    pass


class ClassificationRangeError(ValueError):
    pass


class RigidityError(RuntimeError):
    """A rigidity check refuted: the construction itself is broken."""


@dataclass(frozen=True)
class Role:
    """What a host vertex is: one of a/b/x/h/t/m/c with its indices."""

    kind: str
    index: int = 0
    bar: bool = False  # for kind 'x': negated literal vertex
    position: int = 0  # for kind 'h': position 1..4 on the gadget path

    @property
    def tag(self) -> str:
        if self.kind == "a" or self.kind == "b" or self.kind == "t":
            return f"{self.kind}{self.index}"
        if self.kind == "x":
            return f"xbar{self.index}" if self.bar else f"x{self.index}"
        if self.kind == "h":
            return f"h{self.index}.{self.position}"
        return self.kind  # m, c

    @staticmethod
    def from_tag(tag: str) -> "Role":
        if tag in ("m", "c"):
            return Role(tag)
        if tag.startswith("xbar"):
            return Role("x", int(tag[4:]), bar=True)
        if tag.startswith("h"):
            i, j = tag[1:].split(".")
            return Role("h", int(i), position=int(j))
        return Role(tag[0], int(tag[1:]))


@dataclass(frozen=True)
class Classification:
    """Outcome of the count-the-B-neighbors identification table."""

    kind: str  # xbar-even | odd-pair | x-even | h-gadget | term
    index: int

    def describe(self) -> str:
        return {
            "xbar-even": f"negated literal vertex of x{self.index} (even index)",
            "odd-pair": f"x{self.index} or its negation (odd index)",
            "x-even": f"literal vertex x{self.index} (even index)",
            "h-gadget": f"some vertex of gadget {self.index}",
            "term": f"term vertex t{self.index}",
        }[self.kind]


def classify_by_b_degree(j: int, n: int, t: Optional[int] = None) -> Classification:
    """Identify a presented vertex from its count of color-3 neighbors.

    The attachment prefixes are nested so that the count j determines the
    role class and index exactly.  ``t`` is only needed to validate the
    upper range bound (j <= 2n + t).
    """
    if j < 1:
        raise ClassificationRangeError(f"B-degree must be at least 1 (got {j})")
    if t is not None and j > 2 * n + t:
        raise ClassificationRangeError(f"B-degree {j} exceeds 2n+t = {2 * n + t}")
    if j <= 3 * n // 2:
        if j % 3 == 0:
            return Classification("xbar-even", 2 * j // 3)
        if j % 3 == 1:
            return Classification("odd-pair", (2 * j + 1) // 3)
        return Classification("x-even", (2 * j + 2) // 3)
    if j <= 2 * n:
        return Classification("h-gadget", j - 3 * n // 2)
    return Classification("term", j - 2 * n)


@dataclass(frozen=True)
class Counts:
    k: int
    a: int
    b: int
    h: int
    t: int
    x: int
    total: int
    precolored: int


def expected_counts(n: int, t: int) -> Counts:
    """Closed-form sizes of the construction for an (n, t) formula."""
    if n < 2 or n % 2 != 0:
        raise BuildError(f"variable count must be even and at least 2 (got {n})")
    if t < 1:
        raise BuildError(f"term count must be at least 1 (got {t})")
    k = t + 3 * n // 2 + 2
    return Counts(
        k=k,
        a=k - 3,
        b=10 * n + 3 * t,
        h=2 * n,
        t=t,
        x=2 * n,
        total=5 * t + 31 * n // 2 + 1,
        precolored=4 * t + 23 * n // 2 + 1,
    )


@dataclass(frozen=True)
class ReductionInstance:
    """The compiled game state plus the role map naming every host vertex."""

    config: GameConfig
    initial: GameState
    roles: tuple  # Role per host vertex id
    formula: Formula
    n: int
    t: int

    @property
    def k(self) -> int:
        return self.config.k

    @property
    def host(self) -> Graph:
        return self.config.host

    # -- deterministic layout lookups -------------------------------------
    def a(self, i: int) -> int:
        return i - 1

    def b(self, i: int) -> int:
        return (self.k - 3) + i - 1

    def x(self, i: int, bar: bool = False) -> int:
        return (self.k - 3) + (10 * self.n + 3 * self.t) + 2 * (i - 1) + (1 if bar else 0)

    def h(self, i: int, j: int) -> int:
        return self.x(self.n, True) + 1 + 4 * (i - 1) + (j - 1)

    def term_vertex(self, j: int) -> int:
        return self.h(self.n // 2, 4) + 1 + (j - 1)

    @property
    def m(self) -> int:
        return self.term_vertex(self.t) + 1

    @property
    def c(self) -> int:
        return self.m + 1

    # -- pre-colored part layout (same role order: A, B, m, c) ------------
    def gp_a(self, i: int) -> int:
        return i - 1

    def gp_b(self, i: int) -> int:
        return (self.k - 3) + i - 1

    @property
    def gp_m(self) -> int:
        return (self.k - 3) + (10 * self.n + 3 * self.t)

    @property
    def gp_c(self) -> int:
        return self.gp_m + 1

    @property
    def gprime(self) -> Graph:
        return self.initial.presented.graph

    def b_degree(self, v: int) -> int:
        return sum(
            1 for u in self.host.neighbors(v) if self.roles[u].kind == "b"
        )


def build(formula: Formula) -> ReductionInstance:
    """Compile a normalized formula into (host, k, pre-colored state, roles)."""
    n, t = formula.n, formula.t
    counts = expected_counts(n, t)  # validates n, t
    k = counts.k

    roles: list = [None] * counts.total
    inst_proto = _Layout(k, n, t)
    for i in range(1, k - 2):
        roles[inst_proto.a(i)] = Role("a", i)
    for i in range(1, 10 * n + 3 * t + 1):
        roles[inst_proto.b(i)] = Role("b", i)
    for i in range(1, n + 1):
        roles[inst_proto.x(i)] = Role("x", i)
        roles[inst_proto.x(i, True)] = Role("x", i, bar=True)
    for i in range(1, n // 2 + 1):
        for j in range(1, 5):
            roles[inst_proto.h(i, j)] = Role("h", i, position=j)
    for j in range(1, t + 1):
        roles[inst_proto.term_vertex(j)] = Role("t", j)
    roles[inst_proto.m] = Role("m")
    roles[inst_proto.c] = Role("c")
    assert all(r is not None for r in roles)

    edges = set()
    L = inst_proto

    def add(u, v):
        edges.add((u, v) if u < v else (v, u))

    # cliques and gadget paths
    for i in range(1, k - 2):
        for j in range(i + 1, k - 2):
            add(L.a(i), L.a(j))
    for i in range(1, n // 2 + 1):
        add(L.h(i, 1), L.h(i, 2))
        add(L.h(i, 2), L.h(i, 3))
        add(L.h(i, 3), L.h(i, 4))
    for i in range(1, n // 2 + 1):
        for l in range(i + 1, n // 2 + 1):
            for j1 in range(1, 5):
                for j2 in range(1, 5):
                    add(L.h(i, j1), L.h(l, j2))
    for i in range(1, t + 1):
        for j in range(i + 1, t + 1):
            add(L.term_vertex(i), L.term_vertex(j))
    for i in range(1, n + 1):
        add(L.x(i), L.x(i, True))

    # connecting the literal vertices to their terms (simple graph: a
    # literal repeated inside a term contributes one edge)
    for j, term in enumerate(formula.terms, start=1):
        for var, pos in set(term):
            add(L.x(var, not pos), L.term_vertex(j))

    # connecting gadgets to literal vertices and terms
    for i in range(1, n // 2 + 1):
        for j in range(1, 5):
            add(L.h(i, j), L.x(2 * i - 1))
        for j in (2, 4):
            for l in range(i, n // 2 + 1):
                add(L.h(i, j), L.x(2 * l))
                add(L.h(i, j), L.x(2 * l, True))
    for i in range(1, n // 2 + 1):
        for j in range(1, 5):
            for jt in range(1, t + 1):
                add(L.h(i, j), L.term_vertex(jt))

    # the anchors: c sees all of A and B, m blocks color 1 from the terms
    for i in range(1, k - 2):
        add(L.c, L.a(i))
    for i in range(1, 10 * n + 3 * t + 1):
        add(L.c, L.b(i))
    for i in range(1, n + 1):
        for j in range(1, k - 2):
            add(L.x(i), L.a(j))
            add(L.x(i, True), L.a(j))
    for j in range(1, t + 1):
        add(L.m, L.term_vertex(j))

    # identification prefixes into B
    for i in range(1, n // 2 + 1):
        for j in range(1, 3 * i - 2 + 1):
            add(L.b(j), L.x(2 * i - 1))
            add(L.b(j), L.x(2 * i - 1, True))
        for j in range(1, 3 * i - 1 + 1):
            add(L.b(j), L.x(2 * i))
        for j in range(1, 3 * i + 1):
            add(L.b(j), L.x(2 * i, True))
    for l in range(1, n // 2 + 1):
        for i in range(1, l + 3 * n // 2 + 1):
            for j in range(1, 5):
                add(L.b(i), L.h(l, j))
    for j in range(1, t + 1):
        for i in range(1, j + 2 * n + 1):
            add(L.b(i), L.term_vertex(j))

    host = Graph.from_edges(counts.total, edges)

    # pre-colored part: the A-clique, B, c, m, with c joined to A and B
    gp_edges = set()
    gp_m = (k - 3) + (10 * n + 3 * t)
    gp_c = gp_m + 1
    for i in range(k - 3):
        for j in range(i + 1, k - 3):
            gp_edges.add((i, j))
        gp_edges.add((i, gp_c))
    for i in range(10 * n + 3 * t):
        gp_edges.add((k - 3 + i, gp_c))
    gprime = Graph.from_edges(counts.precolored, gp_edges)

    coloring = {}
    for i in range(1, k - 2):
        coloring[i - 1] = i + 3
    for i in range(10 * n + 3 * t):
        coloring[k - 3 + i] = 3
    coloring[gp_m] = 1
    coloring[gp_c] = 1

    config = GameConfig(host, k)
    initial = GameState(config, ColoredState.from_mapping(gprime, coloring))

    inst = ReductionInstance(
        config=config,
        initial=initial,
        roles=tuple(roles),
        formula=formula,
        n=n,
        t=t,
    )
    _check_instance(inst, counts)
    return inst


class _Layout:
    """Standalone id arithmetic used while the instance is being built."""

    def __init__(self, k, n, t):
        self.k, self.n, self.t = k, n, t

    a = ReductionInstance.a
    b = ReductionInstance.b
    x = ReductionInstance.x
    h = ReductionInstance.h
    term_vertex = ReductionInstance.term_vertex
    m = ReductionInstance.m
    c = ReductionInstance.c


def _check_instance(inst: ReductionInstance, counts: Counts) -> None:
    """Build-time sanity: sizes, coloring, and classification totality."""
    assert inst.k == counts.k
    assert inst.host.vertex_count == counts.total
    assert inst.gprime.vertex_count == counts.precolored
    pres = inst.initial.presented
    for i in range(1, inst.k - 2):
        assert pres.colors[inst.gp_a(i)] == i + 3
    # every presentable vertex (X, H, T) must classify by B-degree
    for v in range(inst.host.vertex_count):
        if inst.roles[v].kind in ("x", "h", "t"):
            j = inst.b_degree(v)
            classify_by_b_degree(j, inst.n, inst.t)


# ---------------------------------------------------------------------------
# Embedding rigidity: the pre-colored part goes into the host essentially
# one way (anchor to anchor, clique into clique, independent set into B)
# ---------------------------------------------------------------------------


@dataclass
class RigidityCheck:
    name: str
    pins: dict
    expect_empty: bool
    found: bool


@dataclass
class RigidityReport:
    ok: bool
    checks: list = field(default_factory=list)
    searches: int = 0
    elapsed: float = 0.0

    def summary(self) -> str:
        verdict = "ok" if self.ok else "REFUTED"
        return (
            f"rigidity {verdict}: {self.searches} pinned searches,"
            f" {len(self.checks)} checks, {self.elapsed:.2f}s"
        )


def verify_embedding_rigidity(
    inst: ReductionInstance, node_budget: int = 5_000_000
) -> RigidityReport:
    """Prove by pinned-emptiness searches that the pre-coloring is rigid.

    Checks (each by exhaustive backtracking with the pin forced):

    * the anchor c' maps to c and nowhere else,
    * with c' pinned to c, no a' vertex can leave A, no b' vertex can
      leave B, and m' maps only to m,
    * an unpinned search finds at least one embedding (the pre-colored
      part really is induced in the host).

    Because the a' vertices are mutually interchangeable in the pattern
    (and likewise the b' vertices), pinning one representative per class
    covers the whole class.  Budget exhaustion raises
    :class:`EmbeddingBudgetExceeded`; a failed check raises
    :class:`RigidityError` - the construction, not the search, is wrong.
    """
    t0 = time.time()
    gp = inst.gprime
    host = inst.host
    report = RigidityReport(ok=True)

    def run(name: str, pins: dict, expect_empty: bool):
        found = bool(
            induced_embeddings(
                gp,
                host,
                pins=pins,
                limit=1,
                order_twins=True,
                node_budget=node_budget,
            )
        )
        report.searches += 1
        report.checks.append(RigidityCheck(name, dict(pins), expect_empty, found))
        if found == expect_empty:
            report.ok = False
            raise RigidityError(
                f"rigidity check {name!r} failed: pins {pins},"
                f" expected {'no' if expect_empty else 'an'} embedding"
            )

    run("unpinned-existence", {}, expect_empty=False)
    a_set = {inst.a(i) for i in range(1, inst.k - 2)}
    b_set = {inst.b(i) for i in range(1, 10 * inst.n + 3 * inst.t + 1)}
    for w in range(host.vertex_count):
        if w != inst.c:
            run(f"c'->{inst.roles[w].tag}", {inst.gp_c: w}, expect_empty=True)
    for w in range(host.vertex_count):
        if w != inst.c and w not in a_set:
            run(
                f"a'1->{inst.roles[w].tag}",
                {inst.gp_c: inst.c, inst.gp_a(1): w},
                expect_empty=True,
            )
    for w in range(host.vertex_count):
        if w != inst.c and w not in b_set:
            run(
                f"b'1->{inst.roles[w].tag}",
                {inst.gp_c: inst.c, inst.gp_b(1): w},
                expect_empty=True,
            )
    for w in range(host.vertex_count):
        if w not in (inst.c, inst.m):
            run(
                f"m'->{inst.roles[w].tag}",
                {inst.gp_c: inst.c, inst.gp_m: w},
                expect_empty=True,
            )
    report.elapsed = time.time() - t0
    return report


# ---------------------------------------------------------------------------
# roles sidecar: "role <vertex> <tag>" lines
# ---------------------------------------------------------------------------


def format_roles(inst: ReductionInstance) -> str:
    lines = [f"role {v} {role.tag}" for v, role in enumerate(inst.roles)]
    return "\n".join(lines) + "\n"


def parse_roles(text: str) -> dict:
    roles = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "role" or len(parts) != 3:
            raise ValueError(f"bad roles line: {raw!r}")
        roles[int(parts[1])] = Role.from_tag(parts[2])
    return roles
