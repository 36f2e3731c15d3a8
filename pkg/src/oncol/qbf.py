"""Quantified 3DNF formulas: parsing, normalization, brute-force evaluation.

The canonical shape is an alternating prefix starting with a universal
quantifier, an even variable count, and a matrix that is a disjunction of
terms of exactly three literals (repetition inside a term is allowed; a
term naming both a variable and its negation is legal and simply
unsatisfiable).  Any prefix can be normalized into this shape by inserting
dummy variables that never occur in the matrix.

Text format::

    # comments run to end of line
    forall 1 exists 2 forall 3 exists 4 :
    (1 2 -4) (-1 2 3) (-1 -2 3)

A literal is a signed variable index (negative means negated).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Tuple

FORALL = "forall"
EXISTS = "exists"

EVALUATE_MAX_VARIABLES = 24

Literal = Tuple[int, bool]  # (variable index 1..n, positive?)
Assignment = Tuple[bool, ...]  # truth values for the prefix x_1..x_i


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class TermArityError(ValueError):
    pass


class EvaluationSizeError(ValueError):
    pass


@dataclass(frozen=True)
class PrefixedFormula:
    """Parse result: an explicit quantifier for each of x_1..x_n, plus terms."""

    prefix: tuple  # of FORALL/EXISTS strings, position i quantifies x_{i+1}
    terms: tuple  # of 3-tuples of Literal

    @property
    def n(self) -> int:
        return len(self.prefix)

    def is_normal(self) -> bool:
        n = len(self.prefix)
        if n % 2 != 0:
            return False
        return all(
            q == (FORALL if i % 2 == 0 else EXISTS) for i, q in enumerate(self.prefix)
        )


@dataclass(frozen=True)
class Formula:
    """Normalized formula: implicit alternating prefix, forall first, n even."""

    n: int
    terms: tuple

    def __post_init__(self):
        if self.n % 2 != 0:
            raise ValueError("normalized formulas have an even variable count")
        for term in self.terms:
            if len(term) != 3:
                raise TermArityError(f"term {term} does not have exactly 3 literals")
            for var, _pos in term:
                if not 1 <= var <= self.n:
                    raise ValueError(f"literal variable {var} out of range 1..{self.n}")

    @property
    def t(self) -> int:
        return len(self.terms)

    def prefixed(self) -> PrefixedFormula:
        prefix = tuple(FORALL if i % 2 == 0 else EXISTS for i in range(self.n))
        return PrefixedFormula(prefix, self.terms)


# ---------------------------------------------------------------------------
# parsing and printing
# ---------------------------------------------------------------------------


def _tokenize(text: str):
    lineno = 1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "():":
                yield ch, lineno, i + 1
                i += 1
                continue
            j = i
            while j < len(line) and not line[j].isspace() and line[j] not in "():":
                j += 1
            yield line[i:j], lineno, i + 1
            i = j
    yield None, lineno, 1


def parse(text: str) -> PrefixedFormula:
    """Parse the external format; quantifier prefix is validated as x_1..x_n in order."""
    tokens = list(_tokenize(text))
    pos = 0

    def peek():
        return tokens[pos][0]

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    prefix = []
    while peek() in (FORALL, EXISTS):
        q, line, col = take()
        tok, line2, col2 = take()
        try:
            var = int(tok) if tok is not None else None
        except ValueError:
            var = None
        if var is None:
            raise FormulaSyntaxError(f"expected variable index after {q!r}", line2, col2)
        if var != len(prefix) + 1:
            raise FormulaSyntaxError(
                f"quantifier prefix must bind x1..xn in order (got {var},"
                f" expected {len(prefix) + 1})",
                line2,
                col2,
            )
        prefix.append(q)
    tok, line, col = take()
    if tok != ":":
        raise FormulaSyntaxError("expected ':' after quantifier prefix", line, col)
    n = len(prefix)
    terms = []
    while peek() == "(":
        take()
        lits = []
        while True:
            tok, line, col = take()
            if tok == ")":
                break
            if tok is None:
                raise FormulaSyntaxError("unterminated term", line, col)
            try:
                lit = int(tok)
            except ValueError:
                raise FormulaSyntaxError(f"expected literal, got {tok!r}", line, col)
            if lit == 0:
                raise FormulaSyntaxError("literal 0 is not meaningful", line, col)
            if abs(lit) > n:
                raise FormulaSyntaxError(
                    f"literal {lit} references an unquantified variable", line, col
                )
            lits.append((abs(lit), lit > 0))
        if len(lits) != 3:
            raise TermArityError(
                f"term ending at line {line} has {len(lits)} literals, expected 3"
            )
        terms.append(tuple(lits))
    tok, line, col = take()
    if tok is not None:
        raise FormulaSyntaxError(f"unexpected token {tok!r}", line, col)
    return PrefixedFormula(tuple(prefix), tuple(terms))


def format_formula(f) -> str:
    pf = f.prefixed() if isinstance(f, Formula) else f
    head = " ".join(f"{q} {i + 1}" for i, q in enumerate(pf.prefix))
    body = " ".join(
        "(" + " ".join(str(var if pos else -var) for var, pos in term) + ")"
        for term in pf.terms
    )
    return f"{head} : {body}".strip() + "\n"


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def normalize(pf: PrefixedFormula):
    """Rewrite to the canonical shape (forall first, alternating, n even).

    Dummy variables are inserted wherever the original prefix runs against
    the alternation; they never occur in the terms, so truth is preserved.
    Returns the normalized formula and the old-index -> new-index map.
    """
    mapping = {}
    out_prefix = []
    for i, q in enumerate(pf.prefix):
        expected = FORALL if len(out_prefix) % 2 == 0 else EXISTS
        if q != expected:
            out_prefix.append(expected)  # dummy
        mapping[i + 1] = len(out_prefix) + 1
        out_prefix.append(q)
    if len(out_prefix) % 2 != 0:
        out_prefix.append(EXISTS)  # dummy to make n even
    terms = tuple(
        tuple((mapping[var], pos) for var, pos in term) for term in pf.terms
    )
    return Formula(len(out_prefix), terms), mapping


# ---------------------------------------------------------------------------
# evaluation and the existential winning-move oracle
# ---------------------------------------------------------------------------


def _matrix_status(f: Formula, assignment: Assignment) -> Optional[bool]:
    """True if some term is already satisfied, False if every term is dead,
    None when the partial assignment leaves the matrix undecided."""
    i = len(assignment)
    any_open = False
    for term in f.terms:
        satisfied = True
        alive = True
        for var, pos in term:
            if var <= i:
                if assignment[var - 1] != pos:
                    alive = False
                    break
            else:
                satisfied = False
        if alive and satisfied:
            return True
        if alive:
            any_open = True
    if not any_open:
        return False
    return None


@functools.lru_cache(maxsize=1 << 20)
def subgame_value(f: Formula, assignment: Assignment) -> bool:
    """Game value of the quantifier suffix after `assignment` (optimal play)."""
    decided = _matrix_status(f, assignment)
    if decided is not None:
        return decided
    if len(assignment) == f.n:
        return False  # no term satisfied
    if len(assignment) % 2 == 0:  # next variable is universally quantified
        return subgame_value(f, assignment + (True,)) and subgame_value(
            f, assignment + (False,)
        )
    return subgame_value(f, assignment + (True,)) or subgame_value(
        f, assignment + (False,)
    )


def evaluate(f: Formula) -> bool:
    """Truth of the normalized formula by recursive expansion."""
    if f.n > EVALUATE_MAX_VARIABLES:
        raise EvaluationSizeError(
            f"evaluation guarded at {EVALUATE_MAX_VARIABLES} variables (got {f.n})"
        )
    return subgame_value(f, ())


def winning_move(f: Formula, assignment: Assignment, i: int) -> bool:
    """The existential player's value for x_i (i even), given x_1..x_{i-1}.

    Returns a value that preserves a win whenever one is preservable; ties
    break toward True.
    """
    if i % 2 != 0:
        raise ValueError(f"x_{i} is universally quantified; no existential move here")
    if len(assignment) != i - 1:
        raise ValueError(
            f"assignment must cover exactly x_1..x_{i - 1} (got {len(assignment)} values)"
        )
    if subgame_value(f, assignment + (True,)):
        return True
    if subgame_value(f, assignment + (False,)):
        return False
    return True


def falsifying_move(f: Formula, assignment: Assignment, i: int) -> Optional[bool]:
    """The universal player's value for x_i (i odd) that keeps the suffix false.

    Returns None when no falsifying value exists (every choice leaves the
    existential player a win); ties break toward True.
    """
    if i % 2 != 1:
        raise ValueError(f"x_{i} is existentially quantified; no universal move here")
    if len(assignment) != i - 1:
        raise ValueError(
            f"assignment must cover exactly x_1..x_{i - 1} (got {len(assignment)} values)"
        )
    for value in (True, False):
        if not subgame_value(f, assignment + (value,)):
            return value
    return None
