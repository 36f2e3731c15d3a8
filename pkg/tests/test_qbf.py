import itertools
import random

import pytest

from oncol.qbf import (
    EXISTS,
    FORALL,
    EvaluationSizeError,
    Formula,
    FormulaSyntaxError,
    TermArityError,
    evaluate,
    falsifying_move,
    format_formula,
    normalize,
    parse,
    subgame_value,
    winning_move,
)

PAPER_EXAMPLE = "forall 1 exists 2 forall 3 exists 4 : (1 2 -4) (-1 2 3) (-1 -2 3)"


def brute_force_truth(f: Formula) -> bool:
    """Independent oracle: enumerate the existential player's strategies as
    explicit functions of the preceding assignment."""
    n = f.n
    evens = [i for i in range(1, n + 1) if i % 2 == 0]
    odds = [i for i in range(1, n + 1) if i % 2 == 1]

    def matrix(assign):
        return any(all(assign[v - 1] == pos for v, pos in term) for term in f.terms)

    tables = [
        list(itertools.product((False, True), repeat=1 << (i - 1))) for i in evens
    ]
    for strat in itertools.product(*tables):
        if all(
            matrix(_play(n, evens, strat, odd_vals))
            for odd_vals in itertools.product((False, True), repeat=len(odds))
        ):
            return True
    return False


def _play(n, evens, strat, odd_vals):
    assign = []
    oi = 0
    for i in range(1, n + 1):
        if i % 2 == 1:
            assign.append(odd_vals[oi])
            oi += 1
        else:
            idx = sum(1 << j for j, v in enumerate(assign) if v)
            assign.append(strat[evens.index(i)][idx])
    return assign


def random_formula(rng, n, t):
    terms = tuple(
        tuple((rng.randint(1, n), rng.random() < 0.5) for _ in range(3))
        for _ in range(t)
    )
    return Formula(n, terms)


class TestParse:
    def test_minimal_true(self):
        pf = parse("forall 1 exists 2 : (2 2 2)")
        assert pf.n == 2 and pf.terms == (((2, True), (2, True), (2, True)),)

    def test_minimal_false(self):
        pf = parse("forall 1 exists 2 : (1 1 1)")
        assert pf.terms == (((1, True), (1, True), (1, True)),)

    def test_worked_example(self):
        pf = parse(PAPER_EXAMPLE)
        assert pf.n == 4 and len(pf.terms) == 3
        assert pf.terms[0] == ((1, True), (2, True), (4, False))

    def test_comments_and_whitespace(self):
        pf = parse("# header\nforall 1\n  exists 2 :\n(1 -2 1)  # trailing\n")
        assert pf.n == 2

    def test_syntax_error_has_position(self):
        with pytest.raises(FormulaSyntaxError) as e:
            parse("forall 1 exists zwei : (1 1 1)")
        assert e.value.line == 1

    def test_out_of_order_prefix_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse("forall 2 exists 1 : (1 1 1)")

    def test_arity_error(self):
        with pytest.raises(TermArityError):
            parse("forall 1 exists 2 : (1 2)")

    def test_unknown_variable(self):
        with pytest.raises(FormulaSyntaxError):
            parse("forall 1 exists 2 : (1 2 3)")

    def test_parse_print_identity(self):
        rng = random.Random(9)
        for _ in range(50):
            n = rng.randint(1, 6)
            prefix = tuple(rng.choice((FORALL, EXISTS)) for _ in range(n))
            from oncol.qbf import PrefixedFormula

            pf = PrefixedFormula(
                prefix,
                tuple(
                    tuple((rng.randint(1, n), rng.random() < 0.5) for _ in range(3))
                    for _ in range(rng.randint(0, 4))
                ),
            )
            assert parse(format_formula(pf)) == pf


class TestNormalize:
    def test_already_normal_is_identity(self):
        pf = parse(PAPER_EXAMPLE)
        f, mapping = normalize(pf)
        assert f.n == 4 and mapping == {1: 1, 2: 2, 3: 3, 4: 4}
        assert f.terms == pf.terms

    def test_exists_first_gets_dummy_forall(self):
        f, mapping = normalize(parse("exists 1 : (1 1 1)"))
        assert f.n == 2 and mapping == {1: 2}
        assert evaluate(f) is True  # exists x: x

    def test_forall_forall_gets_dummy_exists(self):
        f, mapping = normalize(parse("forall 1 forall 2 : (1 2 2)"))
        assert f.n == 4 and mapping == {1: 1, 2: 3}
        assert evaluate(f) is False

    def test_odd_length_padded(self):
        f, _ = normalize(parse("forall 1 : (1 1 1)"))
        assert f.n == 2

    def test_preserves_truth_on_random_formulas(self):
        rng = random.Random(31)
        for _ in range(100):
            n = rng.randint(1, 5)
            prefix = tuple(rng.choice((FORALL, EXISTS)) for _ in range(n))
            from oncol.qbf import PrefixedFormula

            terms = tuple(
                tuple((rng.randint(1, n), rng.random() < 0.5) for _ in range(3))
                for _ in range(rng.randint(1, 4))
            )
            pf = PrefixedFormula(prefix, terms)
            f, mapping = normalize(pf)
            # reference: literal expansion over the ORIGINAL prefix
            def truth(prefix, terms, assign=()):
                i = len(assign)
                if i == len(prefix):
                    return any(
                        all(assign[v - 1] == pos for v, pos in term) for term in terms
                    )
                both = (truth(prefix, terms, assign + (val,)) for val in (True, False))
                return all(both) if prefix[i] == FORALL else any(both)

            assert evaluate(f) == truth(prefix, terms)


class TestEvaluate:
    def test_examples(self):
        assert evaluate(normalize(parse("forall 1 exists 2 : (2 2 2)"))[0]) is True
        assert evaluate(normalize(parse("forall 1 exists 2 : (1 1 1)"))[0]) is False
        assert evaluate(normalize(parse(PAPER_EXAMPLE))[0]) is False

    def test_against_strategy_enumeration_oracle(self):
        rng = random.Random(77)
        for _ in range(60):
            f = random_formula(rng, rng.choice((2, 4)), rng.randint(1, 4))
            assert evaluate(f) == brute_force_truth(f)

    def test_empty_matrix_is_false(self):
        assert evaluate(Formula(2, ())) is False

    def test_size_guard(self):
        with pytest.raises(EvaluationSizeError):
            evaluate(Formula(26, ()))

    def test_contradictory_term_is_unsatisfiable(self):
        f = Formula(2, (((1, True), (1, False), (2, True)),))
        assert evaluate(f) is False


class TestWinningMove:
    def test_examples(self):
        f = normalize(parse("forall 1 exists 2 : (2 2 2)"))[0]
        assert winning_move(f, (False,), 2) is True
        g = normalize(parse("forall 1 exists 2 : (1 2 2)"))[0]
        assert winning_move(g, (True,), 2) is True
        h = normalize(parse("forall 1 exists 2 : (1 2 2) (-1 -2 -2)"))[0]
        assert winning_move(h, (False,), 2) is False

    def test_odd_index_rejected(self):
        f = normalize(parse("forall 1 exists 2 : (2 2 2)"))[0]
        with pytest.raises(ValueError):
            winning_move(f, (), 1)

    def test_falsifying_move(self):
        f = normalize(parse("forall 1 exists 2 : (1 1 1)"))[0]
        assert falsifying_move(f, (), 1) is False
        g = normalize(parse("forall 1 exists 2 : (2 2 2)"))[0]
        assert falsifying_move(g, (), 1) is None

    def test_game_evaluation_duality(self):
        # following winning_move at the even positions wins exactly when the
        # formula is true, for every play of the odd positions
        rng = random.Random(123)
        for _ in range(60):
            n = rng.choice((2, 4, 6))
            f = random_formula(rng, n, rng.randint(1, 5))

            def follow(assign):
                if len(assign) == n:
                    return any(
                        all(assign[v - 1] == pos for v, pos in term)
                        for term in f.terms
                    )
                i = len(assign) + 1
                if i % 2 == 1:
                    return all(follow(assign + (v,)) for v in (True, False))
                return follow(assign + (winning_move(f, assign, i),))

            assert follow(()) == evaluate(f)
